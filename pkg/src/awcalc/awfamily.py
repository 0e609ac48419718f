"""Askey-Wilson recurrence data, Ismail's second-order coefficients, and
the Pearson-pair route to the recurrence.

The coefficient formulas are written against plain field arithmetic so the
same code runs on Fractions (exact path) and on mpmath numbers (the float
path used after root recovery).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .algebra import Number, QParam, XPoly, to_scalar
from .errors import (
    AdmissibilityError,
    DegeneratePsiError,
    OrderExceeded,
    RestrictionViolated,
    ZeroParameter,
)
from .opseq import MomentFunctional, RecurrencePair


def elementary_symmetric(values: Sequence) -> tuple:
    """(e_1, ..., e_k) of the given values."""
    e = [1] + [0] * len(values)
    for v in values:
        for j in range(len(values), 0, -1):
            e[j] = e[j] + e[j - 1] * v
    return tuple(e[1:])


@dataclass(frozen=True)
class AWParams:
    a: tuple
    qp: QParam

    def __init__(self, a: Sequence[Number], qp: QParam):
        if len(a) != 4:
            raise ValueError("Askey-Wilson families take exactly four parameters")
        object.__setattr__(self, "a", tuple(to_scalar(x) for x in a))
        object.__setattr__(self, "qp", qp)

    @property
    def sigma(self) -> tuple:
        return elementary_symmetric(self.a)

    def restriction_factors(self, n: int) -> dict:
        return _restriction_factors(self.a, self.qp.q, n)

    def check_restrictions(self, n: int) -> None:
        for name, value in self.restriction_factors(n).items():
            if value == 0:
                raise RestrictionViolated(f"restriction factor {name} vanishes at n = {n}")


def _restriction_factors(a: Sequence, q, n: int) -> dict:
    a1, a2, a3, a4 = a
    qn = q**n
    return {
        "1-a1a2a3a4q^n": 1 - a1 * a2 * a3 * a4 * qn,
        "1-a1a2q^n": 1 - a1 * a2 * qn,
        "1-a1a3q^n": 1 - a1 * a3 * qn,
        "1-a1a4q^n": 1 - a1 * a4 * qn,
        "1-a2a3q^n": 1 - a2 * a3 * qn,
        "1-a2a4q^n": 1 - a2 * a4 * qn,
        "1-a3a4q^n": 1 - a3 * a4 * qn,
    }


def aw_coefficients(a: Sequence, q, n: int) -> tuple:
    """Monic Askey-Wilson (B_n, C_{n+1}) over any field containing a_i and q.

    The polynomials are monic in x = cos(theta); the B_n term therefore
    carries the factor 1/2 of the 2x p_n recurrence.
    """
    a1, a2, a3, a4 = a
    if a1 == 0:
        raise ZeroParameter("a1 = 0: the generic formula divides by a1")
    abcd = a1 * a2 * a3 * a4

    def p(k):
        return q**k

    def den(k):
        v = 1 - abcd * p(k)
        if v == 0:
            raise RestrictionViolated(f"denominator factor 1-a1a2a3a4q^{k} vanishes at n = {n}")
        return v

    pairs = (1 - a1 * a2 * p(n)) * (1 - a1 * a3 * p(n)) * (1 - a1 * a4 * p(n))
    others = (1 - a2 * a3 * p(n)) * (1 - a2 * a4 * p(n)) * (1 - a3 * a4 * p(n))
    if n == 0:
        # (1 - abcd q^(n-1)) cancels against (1 - abcd q^(2n-1)); the C_0 term is absent
        A_n = pairs / (a1 * den(0))
        C_n = 0
        C_next = (1 - q) * pairs * others / (4 * den(0) ** 2 * den(1))
    else:
        A_n = pairs * (1 - abcd * p(n - 1)) / (a1 * den(2 * n - 1) * den(2 * n))
        C_n = (
            a1 * (1 - p(n)) * (1 - a2 * a3 * p(n - 1)) * (1 - a2 * a4 * p(n - 1)) * (1 - a3 * a4 * p(n - 1))
        ) / (den(2 * n - 1) * den(2 * n - 2))
        C_next = (
            (1 - p(n + 1)) * (1 - abcd * p(n - 1)) * pairs * others
        ) / (4 * den(2 * n - 1) * den(2 * n) ** 2 * den(2 * n + 1))
    B = (a1 + 1 / a1 - A_n - C_n) / 2
    return B, C_next


def aw_recurrence(p: AWParams, n: int) -> tuple:
    """Exact (B_n, C_{n+1}) of the monic Askey-Wilson polynomials."""
    if p.a[0] == 0:
        raise ZeroParameter("a1 = 0: the generic formula divides by a1")
    p.check_restrictions(n)
    return aw_coefficients(p.a, p.qp.q, n)


def aw_rec(p: AWParams, N: int) -> RecurrencePair:
    """RecurrencePair with B_0..B_{N-1} and C_1..C_N."""
    B, C = [], []
    for n in range(N):
        b, c = aw_recurrence(p, n)
        B.append(b)
        C.append(c)
    return RecurrencePair(B, C)


def ismail_pair(sigma: Sequence, q, sqrt_q) -> tuple:
    """Coefficient lists (phi, psi) of the second-order equation, any field."""
    s1, s2, s3, s4 = sigma
    phi = [
        -(-1 + s2 - s4) / sqrt_q,
        (s1 + s3) / sqrt_q,
        -2 * (1 + s4) / sqrt_q,
    ]
    psi = [2 * (s1 - s3) / (1 - q), 4 * (s4 - 1) / (1 - q)]
    return phi, psi


def ismail_lambda(sigma4, q, n: int):
    return 4 * q * (1 - q**-n) * (1 - sigma4 * q ** (n - 1)) / (1 - q) ** 2


def ismail_coeffs(p: AWParams) -> tuple:
    """(phi, psi, lambda) for which phi D_q^2 Y + psi S_q D_q Y = lambda_n Y."""
    sigma = p.sigma
    if sigma[3] == 1:
        raise DegeneratePsiError("sigma_4 = 1: psi drops to degree 0")
    q = p.qp.q
    phi, psi = ismail_pair(sigma, q, p.qp.t)
    s4 = sigma[3]

    def lam(n: int) -> Fraction:
        return ismail_lambda(s4, q, n)

    return XPoly(phi), XPoly(psi), lam


@dataclass(frozen=True)
class PearsonPair:
    """phi = a z^2 + b z + c and psi = d z + e with d != 0."""

    phi: XPoly
    psi: XPoly
    qp: QParam = field(compare=True)

    def __post_init__(self):
        if self.phi.degree > 2:
            raise ValueError("phi must have degree at most two")
        if self.psi.degree != 1:
            raise ValueError("psi must have degree exactly one")

    @property
    def abcde(self) -> tuple:
        return (
            self.phi.coeff(2),
            self.phi.coeff(1),
            self.phi.coeff(0),
            self.psi.coeff(1),
            self.psi.coeff(0),
        )

    def d(self, n: int) -> Fraction:
        a, _, _, d, _ = self.abcde
        return a * self.qp.gamma(n) + d * self.qp.alpha_n(n)

    def e(self, n: int) -> Fraction:
        _, b, _, _, e = self.abcde
        return b * self.qp.gamma(n) + e * self.qp.alpha_n(n)

    def scaled(self, s: Number) -> "PearsonPair":
        return PearsonPair(self.phi.scale(s), self.psi.scale(s), self.qp)

    def normalized(self) -> "PearsonPair":
        """Rescale so that psi is monic."""
        return self.scaled(1 / self.psi.lead)

    def check_admissible(self, N: int) -> None:
        for k in range(-1, 2 * N + 2):
            if self.d(k) == 0:
                raise AdmissibilityError(f"d_{k} = a*gamma_{k} + d*alpha_{k} vanishes")


def _nonzero_d(pp: PearsonPair, k: int) -> Fraction:
    v = pp.d(k)
    if v == 0:
        raise AdmissibilityError(f"d_{k} = a*gamma_{k} + d*alpha_{k} vanishes")
    return v


def pearson_recurrence(pp: PearsonPair, n: int) -> tuple:
    """(B_n, C_{n+1}) of the monic OPS whose functional satisfies
    D_q(phi u) = S_q(psi u)."""
    qp = pp.qp
    a, b, c, d, e = pp.abcde
    al = qp.alpha
    g = qp.gamma
    an = qp.alpha_n

    if n == 0:
        B = -g(1) * pp.e(0) / _nonzero_d(pp, 0)
    else:
        B = g(n) * pp.e(n - 1) / _nonzero_d(pp, 2 * n - 2) - g(n + 1) * pp.e(n) / _nonzero_d(pp, 2 * n)

    z = -pp.e(n) / _nonzero_d(pp, 2 * n)
    phi_n = (
        (d * (al**2 - 1) * g(2 * n) + a * an(2 * n)) * (z * z - Fraction(1, 2))
        + (b * an(n) + e * (al**2 - 1) * g(n)) * z
        + c
        + a / 2
    )
    C = -g(n + 1) * pp.d(n - 1) / (_nonzero_d(pp, 2 * n - 1) * _nonzero_d(pp, 2 * n + 1)) * phi_n
    return B, C


def pearson_rec(pp: PearsonPair, N: int) -> RecurrencePair:
    """RecurrencePair with B_0..B_{N-1} and C_1..C_N from the Pearson pair."""
    B, C = [], []
    for n in range(N):
        b, c = pearson_recurrence(pp, n)
        B.append(b)
        C.append(c)
    return RecurrencePair(B, C)


@dataclass
class PearsonReport:
    residuals: list
    verdict: str

    @property
    def passed(self) -> bool:
        return self.verdict == "PASS"


def pearson_residuals(phi: XPoly, psi: XPoly, u: MomentFunctional, qp: QParam, N: int) -> list:
    """<D_q(phi u) - S_q(psi u), x^n> for n = 0..N."""
    from .qops import dq, sq

    out = []
    for n in range(N + 1):
        xn = XPoly.monomial(n)
        out.append(-u.pair(phi * dq(xn, qp)) - u.pair(psi * sq(xn, qp)))
    return out


def pearson_check(pp: PearsonPair, u: MomentFunctional, N: int) -> PearsonReport:
    needed = max(pp.phi.degree + N - 1, pp.psi.degree + N)
    if needed > u.order:
        raise OrderExceeded(f"pearson check to n = {N} needs moment order {needed}, have {u.order}")
    res = pearson_residuals(pp.phi, pp.psi, u, pp.qp, N)
    return PearsonReport(res, "PASS" if all(r == 0 for r in res) else "FAIL")
