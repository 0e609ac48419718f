"""Exact scalars, the lattice parameter, and polynomials in x and in z = q^s.

Every polynomial in ``x`` has a twin image under ``x = (z + 1/z)/2``: a
Laurent polynomial in ``z`` that is invariant under ``z -> 1/z``.  The
divided-difference and averaging operators act by rescaling ``z``, so the
twin representation is where they are computed.
"""

from __future__ import annotations

from fractions import Fraction
from functools import cached_property, lru_cache
from math import comb
from typing import Iterable, Sequence, Union

Scalar = Fraction
Number = Union[int, Fraction, str]


def to_scalar(value: Number) -> Fraction:
    """Parse ints, Fractions and "num/den" strings into a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise TypeError(f"cannot convert {type(value).__name__} to an exact scalar")


def format_scalar(value: Fraction) -> str:
    return str(value)


class QParam:
    """Lattice parameter stored through t = q^(1/2), with 0 < t < 1."""

    def __init__(self, t: Number):
        t = to_scalar(t)
        if not 0 < t < 1:
            raise ValueError(f"t = {t} must satisfy 0 < t < 1")
        self.t = t

    @classmethod
    def from_q(cls, q: Number) -> "QParam":
        """Build from q when q is the square of a rational."""
        q = to_scalar(q)
        num, den = _exact_sqrt(q.numerator), _exact_sqrt(q.denominator)
        if num is None or den is None:
            raise ValueError(f"q = {q} is not the square of a rational")
        return cls(Fraction(num, den))

    @cached_property
    def q(self) -> Fraction:
        return self.t * self.t

    @cached_property
    def alpha(self) -> Fraction:
        return (self.t + 1 / self.t) / 2

    def gamma(self, n: int) -> Fraction:
        """gamma_n = (q^(n/2) - q^(-n/2)) / (q^(1/2) - q^(-1/2)); gamma_{-1} = -1."""
        return _gamma(self.t, n)

    def alpha_n(self, n: int) -> Fraction:
        """alpha_n = (q^(n/2) + q^(-n/2)) / 2; alpha_{-1} = alpha."""
        return _alpha_n(self.t, n)

    def gamma_factorial(self, n: int) -> Fraction:
        out = Fraction(1)
        for k in range(1, n + 1):
            out *= self.gamma(k)
        return out

    def __eq__(self, other):
        return isinstance(other, QParam) and self.t == other.t

    def __hash__(self):
        return hash(("QParam", self.t))

    def __repr__(self):
        return f"QParam(t={self.t})"


def _exact_sqrt(n: int):
    from math import isqrt

    r = isqrt(n)
    return r if r * r == n else None


@lru_cache(maxsize=4096)
def _gamma(t: Fraction, n: int) -> Fraction:
    if n < -1:
        raise ValueError("gamma_n is defined for n >= -1")
    return (t**n - t**-n) / (t - 1 / t)


@lru_cache(maxsize=4096)
def _alpha_n(t: Fraction, n: int) -> Fraction:
    if n < -1:
        raise ValueError("alpha_n is defined for n >= -1")
    return (t**n + t**-n) / 2


def _trim(coeffs: Iterable) -> tuple:
    out = [to_scalar(c) for c in coeffs]
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


class XPoly:
    """Polynomial in x with exact coefficients, lowest degree first.

    The zero polynomial has no coefficients and degree -1.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Number] = ()):
        object.__setattr__(self, "coeffs", _trim(coeffs))

    def __setattr__(self, name, value):
        raise AttributeError("XPoly is immutable")

    def __reduce__(self):
        return (XPoly, (self.coeffs,))

    @classmethod
    def monomial(cls, n: int, c: Number = 1) -> "XPoly":
        return cls([0] * n + [c])

    @classmethod
    def constant(cls, c: Number) -> "XPoly":
        return cls([c])

    @classmethod
    def from_json(cls, data: Sequence[str]) -> "XPoly":
        return cls(Fraction(s) for s in data)

    def to_json(self) -> list:
        return [format_scalar(c) for c in self.coeffs]

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def coeff(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = XPoly.constant(other)
        return isinstance(other, XPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        other = _as_xpoly(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return XPoly(x + (b[i] if i < len(b) else 0) for i, x in enumerate(a))

    __radd__ = __add__

    def __neg__(self):
        return XPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        other = _as_xpoly(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, XPoly):
            return NotImplemented
        if not self.coeffs or not other.coeffs:
            return XPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            if x:
                for j, y in enumerate(other.coeffs):
                    out[i + j] += x * y
        return XPoly(out)

    __rmul__ = __mul__

    def scale(self, s: Number) -> "XPoly":
        s = to_scalar(s)
        return XPoly(s * c for c in self.coeffs)

    def __pow__(self, n: int):
        out = XPoly.constant(1)
        for _ in range(n):
            out = out * self
        return out

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def monic(self) -> "XPoly":
        if not self.coeffs:
            raise ZeroDivisionError("zero polynomial has no leading coefficient")
        return self.scale(1 / self.lead)

    def __repr__(self):
        return f"XPoly({[format_scalar(c) for c in self.coeffs]})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            if mono and c == 1:
                terms.append(f"+{mono}")
            elif mono and c == -1:
                terms.append(f"-{mono}")
            else:
                s = format_scalar(c)
                sign = "" if s.startswith("-") else "+"
                terms.append(f"{sign}{s}{'*' + mono if mono else ''}")
        return "".join(terms).lstrip("+")


def _as_xpoly(other):
    if isinstance(other, XPoly):
        return other
    if isinstance(other, (int, Fraction)):
        return XPoly.constant(other)
    return NotImplemented


def poly_arith(f: XPoly, g, op: str) -> XPoly:
    """Dispatch helper: op in {"add", "sub", "mul", "scale"}; for scale, g is a scalar."""
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    if op == "scale":
        return f.scale(g)
    raise ValueError(f"unknown op {op!r}")


class SymLaurent:
    """Laurent polynomial invariant under z -> 1/z.

    ``coeffs[0]`` multiplies z^0 and ``coeffs[k]`` (k >= 1) multiplies
    z^k + z^-k.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Number] = ()):
        object.__setattr__(self, "coeffs", _trim(coeffs))

    def __setattr__(self, name, value):
        raise AttributeError("SymLaurent is immutable")

    def __reduce__(self):
        return (SymLaurent, (self.coeffs,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __eq__(self, other):
        return isinstance(other, SymLaurent) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(("sym", self.coeffs))

    def full(self) -> list:
        """Coefficients of z^-d .. z^d."""
        d = self.degree
        if d < 0:
            return []
        return [self.coeffs[abs(k)] for k in range(-d, d + 1)]

    @classmethod
    def from_full(cls, full: Sequence[Fraction]) -> "SymLaurent":
        if not full:
            return cls()
        d, r = divmod(len(full) - 1, 2)
        assert r == 0
        for k in range(1, d + 1):
            if full[d + k] != full[d - k]:
                raise ValueError("Laurent polynomial is not symmetric under z -> 1/z")
        return cls(full[d:])

    def __add__(self, other: "SymLaurent"):
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return SymLaurent(x + (b[i] if i < len(b) else 0) for i, x in enumerate(a))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return SymLaurent(other * c for c in self.coeffs)
        fa, fb = self.full(), other.full()
        if not fa or not fb:
            return SymLaurent()
        out = [Fraction(0)] * (len(fa) + len(fb) - 1)
        for i, x in enumerate(fa):
            if x:
                for j, y in enumerate(fb):
                    out[i + j] += x * y
        return SymLaurent.from_full(out)

    def __call__(self, z):
        if z == 0:
            raise ZeroDivisionError("SymLaurent evaluated at z = 0")
        zi = 1 / z
        acc = 0
        zk, zik = 1, 1
        for k, c in enumerate(self.coeffs):
            if k == 0:
                acc += c
            else:
                zk *= z
                zik *= zi
                acc += c * (zk + zik)
        return acc

    def __repr__(self):
        return f"SymLaurent({[format_scalar(c) for c in self.coeffs]})"


@lru_cache(maxsize=None)
def _power_image(n: int) -> tuple:
    # x^n = 2^-n * sum_j C(n, j) z^(n - 2j)
    scale = Fraction(1, 2**n)
    out = [Fraction(0)] * (n + 1)
    for j in range(n + 1):
        k = abs(n - 2 * j)
        if k == 0:
            out[0] += comb(n, j) * scale
        elif n - 2 * j > 0:
            out[k] += comb(n, j) * scale
    return tuple(out)


@lru_cache(maxsize=None)
def _chebyshev_t(k: int) -> tuple:
    # z^k + z^-k = 2 T_k(x)
    if k == 0:
        return (Fraction(1),)
    if k == 1:
        return (Fraction(0), Fraction(1))
    prev, cur = XPoly(_chebyshev_t(k - 2)), XPoly(_chebyshev_t(k - 1))
    nxt = XPoly.monomial(1, 2) * cur - prev
    return nxt.coeffs


def x_to_laurent(p: XPoly) -> SymLaurent:
    """Image of p under the substitution x = (z + 1/z)/2."""
    out = [Fraction(0)] * (p.degree + 1)
    for n, c in enumerate(p.coeffs):
        if c:
            for k, v in enumerate(_power_image(n)):
                out[k] += c * v
    return SymLaurent(out)


def laurent_to_x(L: SymLaurent) -> XPoly:
    """Inverse of :func:`x_to_laurent` via z^k + z^-k = 2 T_k(x)."""
    out = XPoly()
    for k, c in enumerate(L.coeffs):
        if not c:
            continue
        if k == 0:
            out = out + XPoly.constant(c)
        else:
            out = out + XPoly(_chebyshev_t(k)).scale(2 * c)
    return out


def eval_at_lattice(p: XPoly, w: Number) -> Fraction:
    """Evaluate p at x = (w + 1/w)/2."""
    w = to_scalar(w)
    if w == 0:
        raise ValueError("lattice point w must be nonzero")
    return p((w + 1 / w) / 2)
