"""Structure relation pi_2 D_q P_n = a_n S_q P_{n+1} + b_n S_q P_n + c_n S_q P_{n-1}.

Contains the closed-form leading coefficients, an exact decision procedure
for whether a given OPS satisfies such a relation, the two consistency
conditions on (a, b, c), the derived second-order pair, and the construction
of the degree-one (a = 0) families.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .algebra import Number, QParam, XPoly, to_scalar
from .awfamily import PearsonPair, pearson_rec
from .errors import CaseError, DegenerateError, DegenerateR3
from .linalg import nullspace, rank, rref
from .opseq import MonicOPS, RecurrencePair, generate_ops
from .qops import dq, sq


def structure_coeffs(a: Number, b: Number, rec: RecurrencePair, n: int, qp: QParam) -> tuple:
    """(a_n, b_n) forced by matching the x^(n+1) and x^n coefficients."""
    a, b = to_scalar(a), to_scalar(b)
    g, an = qp.gamma, qp.alpha_n
    a_n = a * g(n) / an(n + 1)
    partial = sum((rec.b(j) for j in range(n)), Fraction(0))
    b_n = (g(n) * (a * an(n) * rec.b(n) + b * an(n + 1)) + a * qp.alpha * partial) / (an(n) * an(n + 1))
    return a_n, b_n


@dataclass
class StructureFit:
    verdict: str
    abc: Optional[tuple] = None
    solutions: list = field(default_factory=list)
    a: list = field(default_factory=list)
    b: list = field(default_factory=list)
    c: list = field(default_factory=list)
    residuals: list = field(default_factory=list)
    witness: Optional[int] = None
    c_nonzero: Optional[bool] = None

    @property
    def exact(self) -> bool:
        return self.verdict == "EXACT"


def _block_columns(N: int) -> list:
    """Column index of (n, name) in the stacked unknown vector."""
    cols = ["a", "b", "c"]
    for n in range(N + 1):
        cols += [(n, "a"), (n, "b")]
        if n >= 1:
            cols.append((n, "c"))
    return cols


def _block_rows(ops: MonicOPS, qp: QParam, n: int, index: dict, ncols: int) -> list:
    DP = dq(ops[n], qp)
    terms = [
        ("a", XPoly.monomial(2) * DP),
        ("b", XPoly.monomial(1) * DP),
        ("c", DP),
        ((n, "a"), -sq(ops[n + 1], qp)),
        ((n, "b"), -sq(ops[n], qp)),
    ]
    if n >= 1:
        terms.append(((n, "c"), -sq(ops[n - 1], qp)))
    rows = []
    for k in range(n + 2):
        row = [Fraction(0)] * ncols
        for key, poly in terms:
            row[index[key]] += poly.coeff(k)
        rows.append(row)
    return rows


def fit_structure(ops: MonicOPS, N: int, qp: QParam) -> StructureFit:
    """Decide exactly whether (a, b, c) and streams exist for n = 0..N.

    The stacked coefficient-matching system is homogeneous in (a, b, c) and
    the per-n coefficients; its solution space is reduced to echelon form
    over (a, b, c).  The reported ``abc`` is the lowest-degree member with
    its first nonzero entry equal to 1; ``solutions`` spans the whole space.
    """
    if N < 3:
        raise ValueError("fit_structure needs N >= 3")
    if ops.N < N + 1:
        raise IndexError(f"need P_0 .. P_{N + 1}, have up to P_{ops.N}")
    cols = _block_columns(N)
    index = {k: i for i, k in enumerate(cols)}
    ncols = len(cols)

    rows: list = []
    for n in range(N + 1):
        rows += _block_rows(ops, qp, n, index, ncols)
        used = 3 + sum(2 + (m >= 1) for m in range(n + 1))
        if used - rank([r[:used] for r in rows], used) == 0:
            return StructureFit("NO_SOLUTION", witness=n)

    basis = nullspace(rows, ncols)
    for v in basis:
        assert any(v[:3]), "per-n coefficients are determined by (a, b, c)"
    echelon, pivots = rref(basis, ncols)
    assert all(p < 3 for p in pivots)
    primary = echelon[-1]
    solutions = [tuple(v[:3]) for v in echelon]

    a_s = [primary[index[(n, "a")]] for n in range(N + 1)]
    b_s = [primary[index[(n, "b")]] for n in range(N + 1)]
    c_s = [None] + [primary[index[(n, "c")]] for n in range(1, N + 1)]
    pa, pb, pc = primary[:3]
    pi2 = XPoly([pc, pb, pa])
    residuals = []
    for n in range(N + 1):
        r = pi2 * dq(ops[n], qp) - sq(ops[n + 1], qp).scale(a_s[n]) - sq(ops[n], qp).scale(b_s[n])
        if n >= 1:
            r = r - sq(ops[n - 1], qp).scale(c_s[n])
        residuals.append(r)
    assert all(r.is_zero() for r in residuals)
    return StructureFit(
        "EXACT",
        abc=tuple(primary[:3]),
        solutions=solutions,
        a=a_s,
        b=b_s,
        c=c_s,
        residuals=residuals,
        c_nonzero=all(c != 0 for c in c_s[1:]),
    )


def check_conditions(
    a: Number,
    b: Number,
    c: Number,
    rec: RecurrencePair,
    streams: dict,
    qp: QParam,
) -> tuple:
    """Left-hand sides of the two conditions on (a, b, c); zero means satisfied.

    ``streams`` holds b_2, c_2 and c_3 of the structure relation.
    """
    a, b = to_scalar(a), to_scalar(b)
    al2 = qp.alpha**2
    al = qp.alpha
    B0, B1, B2 = rec.b(0), rec.b(1), rec.b(2)
    C1, C2, C3 = rec.c(1), rec.c(2), rec.c(3)
    b2, c2, c3 = (to_scalar(streams[k]) for k in ("b2", "c2", "c3"))
    r2 = c2 + 2 * a * C2
    r3 = c3 + 2 * a * C3
    res32 = (4 * al2 - 1) * a * C2 * C3 + (r3 / 2) * (
        (B0 + B1) ** 2 + 4 * al2 * (C1 - B0 * B1 + al2 - 1) - 2 * (2 * al2 - 1) * C2
    )
    res33 = a * C2 * C3 * (b2 + 2 * a * B2 + b / al) - r3 * (
        a * (B2 + B1) * C2 + (b / al) * C2 - (r2 / 2) * (B1 - B0)
    )
    return res32, res33


@dataclass(frozen=True)
class DerivedPearson:
    fa: Fraction
    fb: Fraction
    fc: Fraction
    B0: Fraction
    qp: QParam

    @property
    def phi(self) -> XPoly:
        return XPoly([self.fc, self.fb, self.fa])

    @property
    def psi(self) -> XPoly:
        return XPoly([-self.B0, 1])

    def lam(self, n: int) -> Fraction:
        g = self.qp.gamma
        return g(n) * (self.fa * g(n - 1) + self.qp.alpha_n(n - 1))

    def regular_upto(self, N: int) -> bool:
        return all(self.fa * self.qp.gamma(n) + self.qp.alpha_n(n) != 0 for n in range(N + 1))

    def pair(self) -> PearsonPair:
        return PearsonPair(self.phi, self.psi, self.qp)


def derived_phi_psi(a: Number, rec: RecurrencePair, c3: Number, qp: QParam) -> DerivedPearson:
    """phi = fa z^2 + fb z + fc and psi = z - B_0 of the second-order equation."""
    a, c3 = to_scalar(a), to_scalar(c3)
    al = qp.alpha
    B0, B1 = rec.b(0), rec.b(1)
    C1, C3 = rec.c(1), rec.c(3)
    r3 = c3 + 2 * a * C3
    if r3 == 0:
        raise DegenerateR3("r_3 = c_3 + 2 a C_3 vanishes")
    w = 1 - 2 * a * C3 / r3
    fa = -(a * C3 + (al**2 - 1) * r3) / (al * r3)
    fb = -(w * (B0 + B1) - 2 * al**2 * B0) / (2 * al)
    fc = -(w * (C1 - B0 * B1) + C1 + B0**2) / (2 * al)
    return DerivedPearson(fa, fb, fc, B0, qp)


def second_order_apply(phi: XPoly, psi: XPoly, p: XPoly, qp: QParam) -> XPoly:
    """phi D_q^2 p + psi S_q D_q p."""
    Dp = dq(p, qp)
    return phi * dq(Dp, qp) + psi * sq(Dp, qp)


@dataclass
class CorollaryFamily:
    case: str
    k: Optional[int]
    B0: Fraction
    B1: Fraction
    C1: Fraction
    C2: Fraction
    B2: Fraction
    r: Fraction
    pair: PearsonPair
    rec: RecurrencePair
    qp: QParam
    N: int

    def ops(self) -> MonicOPS:
        return generate_ops(self.rec, self.N + 1)

    def b(self, n: int) -> Fraction:
        return self.qp.gamma(n) / self.qp.alpha_n(n)

    def c(self, n: int) -> Fraction:
        qp = self.qp
        partial = sum((self.rec.b(j) for j in range(n)), Fraction(0))
        return -self.r * qp.gamma(n) / qp.alpha_n(n - 1) + partial / (qp.alpha_n(n) * qp.alpha_n(n - 1))

    @property
    def pi2(self) -> XPoly:
        return XPoly([-self.r, 1])

    def streams(self) -> dict:
        return {"b2": self.b(2), "c2": self.c(2), "c3": self.c(3)}

    def derived(self) -> DerivedPearson:
        return derived_phi_psi(0, self.rec, self.c(3), self.qp)

    def relation_residual(self, n: int) -> XPoly:
        """(z - r) D_q P_n - b_n S_q P_n - c_n S_q P_{n-1}."""
        P = self.ops()
        qp = self.qp
        res = self.pi2 * dq(P[n], qp) - sq(P[n], qp).scale(self.b(n))
        if n >= 1:
            res = res - sq(P[n - 1], qp).scale(self.c(n))
        return res


def classify_case(B0: Fraction, B1: Fraction, qp: QParam) -> str:
    al2 = qp.alpha**2
    if B1 == -B0:
        return "I"
    if B1 == (1 - 4 * al2) * B0:
        return "II-a"
    return "II-b"


def corollary_family(
    B0: Number,
    B1: Number,
    qp: QParam,
    k: Optional[int] = None,
    N: int = 8,
    C1: Optional[Number] = None,
) -> CorollaryFamily:
    """Build the degree-one family determined by (B_0, B_1) (and C_1 in case II-a).

    C_1 comes from the relation tying B_0, B_1, C_1 together; the recurrence
    up to n = N + 1 comes from the Pearson pair
    phi = -((alpha^2-1)/alpha) z^2 - (B_1 - (2alpha^2-1)B_0) z/(2alpha)
          + ((B_1 - B_0) B_0 - 2 C_1)/(2alpha),  psi = z - B_0.
    """
    B0, B1 = to_scalar(B0), to_scalar(B1)
    al = qp.alpha
    al2 = al * al
    case = classify_case(B0, B1, qp)
    if case == "I":
        if B0 == 0:
            raise CaseError("case I needs B_0 != 0 (B_1 = -B_0 = B_0 is excluded)")
        C1v = al2 - B0**2
    elif B1 == B0:
        raise DegenerateError("B_1 = B_0 makes the condition on r unsolvable")
    elif case == "II-a":
        if k not in (1, -1):
            raise CaseError("case II-a needs k = +1 or -1")
        if B0 != k * al:
            raise CaseError(f"case II-a forces B_0 = k*alpha = {k * al}, got {B0}")
        if C1 is None:
            raise CaseError("case II-a leaves C_1 free; pass C1")
        C1v = to_scalar(C1)
    else:
        den = B1 + (4 * al2 - 1) * B0
        if den == 0:
            raise DegenerateError("B_1 + (4alpha^2 - 1) B_0 vanishes")
        C1v = (al2 - B0**2) * (B0 - (4 * al2 - 3) * B1) / den
    if C1 is not None and case != "II-a" and to_scalar(C1) != C1v:
        raise CaseError(f"C_1 = {C1} contradicts the value {C1v} forced by B_0, B_1")
    if C1v == 0:
        raise DegenerateError("C_1 = 0: the family is not regular")

    phi = XPoly(
        [
            ((B1 - B0) * B0 - 2 * C1v) / (2 * al),
            -(B1 - (2 * al2 - 1) * B0) / (2 * al),
            -(al2 - 1) / al,
        ]
    )
    psi = XPoly([-B0, 1])
    pair = PearsonPair(phi, psi, qp)
    rec = pearson_rec(pair, N + 2)

    C2 = ((B0 + B1) ** 2 - 4 * al2 * (B0 * B1 + 1 - al2 - C1v)) / (4 * al2 - 2)
    B2 = -B0 + 2 * B1 / (4 * al2 - 3)
    got = {"B0": rec.b(0), "B1": rec.b(1), "C1": rec.c(1), "C2": rec.c(2), "B2": rec.b(2)}
    want = {"B0": B0, "B1": B1, "C1": C1v, "C2": C2, "B2": B2}
    bad = [name for name in want if got[name] != want[name]]
    if bad:
        raise DegenerateError(f"Pearson recurrence disagrees with the closed forms for {bad}")
    r = ((B1**2 - B0**2) / (2 * (2 * al2 - 1)) - C2) / (al * (B1 - B0))
    return CorollaryFamily(case, k if case == "II-a" else None, B0, B1, C1v, C2, B2, r, pair, rec, qp, N)
