"""Monic orthogonal polynomial sequences, moment functionals and dual bases.

A functional u is stored as a truncated moment vector (mu_0, ..., mu_M) with
mu_n = <u, x^n>.  Every transformation tracks the order it can guarantee and
refuses pairings beyond it instead of padding with zeros.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .algebra import Number, QParam, XPoly, to_scalar
from .errors import OrderExceeded, RegularityError, SingularSet
from .qops import dq, sq

X = XPoly.monomial(1)


class RecurrencePair:
    """Coefficients of P_{n+1} = (x - B_n) P_n - C_n P_{n-1}.

    ``B`` lists B_0, B_1, ... and ``C`` lists C_1, C_2, ...
    """

    def __init__(self, B: Sequence[Number], C: Sequence[Number]):
        self.B = tuple(to_scalar(b) for b in B)
        self.C = tuple(to_scalar(c) for c in C)
        for n, c in enumerate(self.C, start=1):
            if c == 0:
                raise RegularityError(f"C_{n} = 0: the functional is not regular")

    @property
    def horizon(self) -> int:
        """Largest n for which P_n (and the moment mu_n) can be built."""
        return min(len(self.B), len(self.C) + 1)

    def b(self, n: int) -> Fraction:
        try:
            return self.B[n]
        except IndexError:
            raise IndexError(f"B_{n} is beyond the materialized horizon") from None

    def c(self, n: int) -> Fraction:
        if n < 1:
            raise IndexError("C_n is defined for n >= 1")
        try:
            return self.C[n - 1]
        except IndexError:
            raise IndexError(f"C_{n} is beyond the materialized horizon") from None

    def truncate(self, n: int) -> "RecurrencePair":
        return RecurrencePair(self.B[:n], self.C[: max(n - 1, 0)])

    def __eq__(self, other):
        return isinstance(other, RecurrencePair) and (self.B, self.C) == (other.B, other.C)

    def __repr__(self):
        return f"RecurrencePair(B={[str(b) for b in self.B]}, C={[str(c) for c in self.C]})"


@dataclass(frozen=True)
class MonicOPS:
    polys: tuple
    rec: RecurrencePair

    def __getitem__(self, n: int) -> XPoly:
        if n < 0:
            return XPoly()
        return self.polys[n]

    def __len__(self):
        return len(self.polys)

    @property
    def N(self) -> int:
        return len(self.polys) - 1


def generate_ops(rec: RecurrencePair, N: int) -> MonicOPS:
    """P_0 .. P_N from the three-term recurrence."""
    if N > rec.horizon:
        raise IndexError(f"recurrence materialized only up to P_{rec.horizon}, asked for P_{N}")
    polys = [XPoly.constant(1)]
    prev = XPoly()
    for n in range(N):
        cur = polys[-1]
        nxt = (X - rec.b(n)) * cur
        if n >= 1:
            nxt = nxt - prev.scale(rec.c(n))
        prev = cur
        polys.append(nxt)
    partial = Fraction(0)
    for n, p in enumerate(polys):
        assert p.degree == n and p.lead == 1
        if n >= 1:
            assert p.coeff(n - 1) == -partial, f"second coefficient of P_{n}"
        if n < N:
            partial += rec.b(n)
    return MonicOPS(tuple(polys), rec)


class MomentFunctional:
    """Truncated functional u given by mu_n = <u, x^n> for n <= order."""

    __slots__ = ("mu",)

    def __init__(self, mu: Sequence[Number]):
        self.mu = tuple(to_scalar(m) for m in mu)

    @property
    def order(self) -> int:
        return len(self.mu) - 1

    def pair(self, p: XPoly) -> Fraction:
        if p.degree > self.order:
            raise OrderExceeded(f"pairing needs moment {p.degree}, functional has order {self.order}")
        return sum((c * m for c, m in zip(p.coeffs, self.mu)), Fraction(0))

    def _image(self, fn, order: int, sign: int = 1) -> "MomentFunctional":
        if order > self.order:
            raise OrderExceeded(f"requested order {order} exceeds available {self.order}")
        return MomentFunctional(sign * self.pair(fn(XPoly.monomial(n))) for n in range(order + 1))

    def dq(self, qp: QParam, order: Optional[int] = None) -> "MomentFunctional":
        """<D_q u, f> = -<u, D_q f>."""
        order = self.order if order is None else order
        if order > self.order + 1:
            raise OrderExceeded(f"D_q u is available only to order {self.order + 1}")
        return MomentFunctional(-self.pair(dq(XPoly.monomial(n), qp)) for n in range(order + 1))

    def sq(self, qp: QParam, order: Optional[int] = None) -> "MomentFunctional":
        """<S_q u, f> = <u, S_q f>."""
        order = self.order if order is None else order
        return self._image(lambda m: sq(m, qp), order)

    def mul(self, phi: XPoly, order: Optional[int] = None) -> "MomentFunctional":
        """<phi u, f> = <u, phi f>."""
        avail = self.order - max(phi.degree, 0)
        order = avail if order is None else order
        if order > avail:
            raise OrderExceeded(f"phi u is available only to order {avail}")
        return MomentFunctional(self.pair(phi * XPoly.monomial(n)) for n in range(order + 1))

    def truncate(self, order: int) -> "MomentFunctional":
        if order > self.order:
            raise OrderExceeded(f"cannot truncate order {self.order} to {order}")
        return MomentFunctional(self.mu[: order + 1])

    def __add__(self, other: "MomentFunctional"):
        n = min(len(self.mu), len(other.mu))
        return MomentFunctional(a + b for a, b in zip(self.mu[:n], other.mu[:n]))

    def __neg__(self):
        return MomentFunctional(-m for m in self.mu)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, s):
        s = to_scalar(s)
        return MomentFunctional(s * m for m in self.mu)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return all(m == 0 for m in self.mu)

    def __eq__(self, other):
        return isinstance(other, MomentFunctional) and self.mu == other.mu

    def __repr__(self):
        return f"MomentFunctional({[str(m) for m in self.mu]})"


def moments(rec: RecurrencePair, M: int) -> MomentFunctional:
    """Moments mu_0 .. mu_M of the functional orthogonalizing ``rec``, mu_0 = 1.

    x^n is expanded in the P_k basis using x P_k = P_{k+1} + B_k P_k + C_k P_{k-1};
    mu_n is the P_0 coefficient.
    """
    if M > rec.horizon:
        raise IndexError(f"recurrence materialized only up to n = {rec.horizon}, asked for moment {M}")
    mu = [Fraction(1)]
    vec = [Fraction(1)]  # x^0 = P_0
    for n in range(M):
        nxt = [Fraction(0)] * (len(vec) + 1)
        for k, v in enumerate(vec):
            if not v:
                continue
            nxt[k + 1] += v
            nxt[k] += v * rec.b(k)
            if k >= 1:
                nxt[k - 1] += v * rec.c(k)
        vec = nxt
        mu.append(vec[0])
    return MomentFunctional(mu)


def pair(u: MomentFunctional, p: XPoly) -> Fraction:
    return u.pair(p)


def transform_functional(
    u: MomentFunctional,
    kind: str,
    qp: Optional[QParam] = None,
    phi: Optional[XPoly] = None,
) -> MomentFunctional:
    """Apply one of ``"Dq"``, ``"Sq"`` or ``"mul"`` (with ``phi``) to u."""
    if kind == "Dq":
        return u.dq(qp)
    if kind == "Sq":
        return u.sq(qp)
    if kind == "mul":
        if phi is None:
            raise ValueError("left multiplication needs phi")
        return u.mul(phi)
    raise ValueError(f"unknown transform {kind!r}")


class SimpleSet:
    """Sequence Q_0 .. Q_N with deg Q_n = n, plus its dual basis."""

    def __init__(self, polys: Sequence[XPoly]):
        self.polys = tuple(polys)
        for n, p in enumerate(self.polys):
            if p.degree != n:
                raise SingularSet(f"Q_{n} has degree {p.degree}, expected {n}")
        self._inverse = None

    @property
    def N(self) -> int:
        return len(self.polys) - 1

    @property
    def matrix(self) -> list:
        """Lower-triangular rows: matrix[n][k] = coefficient of x^k in Q_n."""
        return [[p.coeff(k) for k in range(self.N + 1)] for p in self.polys]

    def inverse(self) -> list:
        """inv[m][j] with x^m = sum_j inv[m][j] Q_j."""
        if self._inverse is None:
            L = self.matrix
            size = len(L)
            inv = [[Fraction(0)] * size for _ in range(size)]
            for m in range(size):
                if L[m][m] == 0:
                    raise SingularSet(f"diagonal entry {m} vanishes")
                inv[m][m] = 1 / L[m][m]
                for j in range(m - 1, -1, -1):
                    s = sum((L[m][k] * inv[k][j] for k in range(j, m)), Fraction(0))
                    inv[m][j] = -s / L[m][m]
            self._inverse = inv
        return self._inverse

    def dual_moment(self, n: int, m: int) -> Fraction:
        """<a_n, x^m>."""
        if m > self.N:
            raise OrderExceeded(f"<a_{n}, x^{m}> needs Q up to degree {m}")
        return self.inverse()[m][n]

    def dual_functional(self, n: int) -> MomentFunctional:
        return MomentFunctional(self.dual_moment(n, m) for m in range(self.N + 1))


def dual_pairing(
    S: SimpleSet,
    u_data: Optional[MomentFunctional],
    n: int,
    f: XPoly,
) -> Fraction:
    """<a_n, f> for the dual basis of S.

    Without ``u_data`` the value comes from triangular inversion of the
    coefficient matrix.  With ``u_data`` (S must then be orthogonal for it)
    it is <u, Q_n f> / <u, Q_n^2>.
    """
    if n > S.N:
        raise IndexError(f"a_{n} is beyond the simple set of size {S.N + 1}")
    if u_data is not None:
        Qn = S.polys[n]
        return u_data.pair(Qn * f) / u_data.pair(Qn * Qn)
    if f.degree > S.N:
        raise OrderExceeded(f"deg f = {f.degree} exceeds the simple set size")
    return sum((c * S.dual_moment(n, m) for m, c in enumerate(f.coeffs)), Fraction(0))
