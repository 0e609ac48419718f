"""Exception hierarchy shared by every module of the package."""


class AWCalcError(ValueError):
    """Base class for all domain errors raised by awcalc."""


class RegularityError(AWCalcError):
    """A recurrence coefficient C_n vanished, so the functional is not regular."""


class OrderExceeded(AWCalcError):
    """A moment functional was asked for a pairing beyond its stored order."""


class SingularSet(AWCalcError):
    """A would-be simple set has a vanishing diagonal coefficient."""


class RestrictionViolated(AWCalcError):
    """An Askey-Wilson parameter restriction factor vanishes."""


class ZeroParameter(AWCalcError):
    pass


class DegeneratePsiError(AWCalcError):
    """sigma_4 = 1, so the first-order coefficient psi loses its degree."""


class AdmissibilityError(AWCalcError):
    """Some d_k = a*gamma_k + d*alpha_k vanishes for a Pearson pair."""


class DegenerateR3(AWCalcError):
    pass


class CaseError(AWCalcError):
    """Corollary inputs fit none of the cases I, II-a, II-b."""


class DegenerateError(AWCalcError):
    pass


class ConvergenceError(AWCalcError):
    pass


class MismatchError(AWCalcError):
    """A reconstruction residual exceeded its tolerance."""


class FamilySpecError(AWCalcError):
    """A family-spec document is malformed; ``field`` names the offending key."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field
