"""Askey-Wilson divided-difference operator D_q and averaging operator S_q.

Both act on the symmetric Laurent image of a polynomial: with z = q^s and
t = q^(1/2), the lattice shifts s -> s +/- 1/2 become z -> t^(+/-1) z, so

    D_q p = [p(tz) - p(z/t)] / [(t - 1/t)(z - 1/z)/2]
    S_q p = [p(tz) + p(z/t)] / 2

where p(z) is read through x = (z + 1/z)/2.  The numerator of D_q is
antisymmetric in z -> 1/z, hence always divisible by z - 1/z.
"""

from __future__ import annotations

from fractions import Fraction

from .algebra import QParam, SymLaurent, XPoly, laurent_to_x, x_to_laurent


def _shifted(L: SymLaurent, t: Fraction, sign: int) -> list:
    """Coefficients c_k (t^k + sign * t^-k) of p(tz) + sign * p(z/t), k = 0..d."""
    out = []
    tk = Fraction(1)
    ti = 1 / t
    tik = Fraction(1)
    for k, c in enumerate(L.coeffs):
        if k:
            tk *= t
            tik *= ti
        out.append(c * (tk + sign * tik))
    return out


def _divide_antisymmetric(a: list) -> list:
    """Divide sum_k a_k (z^k - z^-k) by (z - 1/z).

    Returns the quotient as symmetric coefficients.  Uses synthetic division
    of z^d * N(z) by z^2 - 1 and asserts a zero remainder.
    """
    d = len(a) - 1
    if d < 1:
        assert all(c == 0 for c in a), "constant antisymmetric part must vanish"
        return []
    # dense ordinary polynomial n(z) = z^d * N(z), highest power first
    num = [Fraction(0)] * (2 * d + 1)
    for k in range(1, d + 1):
        num[d - k] += a[k]       # z^k  -> z^(d+k), index from top = d - k
        num[d + k] -= a[k]       # z^-k -> z^(d-k), index from top = d + k
    # long division by z^2 - 1
    quot = []
    rem = num[:]
    for i in range(2 * d - 1):
        c = rem[i]
        quot.append(c)
        rem[i + 2] += c
        rem[i] = Fraction(0)
    if rem[-1] != 0 or rem[-2] != 0:
        raise AssertionError("Laurent division left a nonzero remainder")
    # N / (z - 1/z) = z * n(z) / (z^2 - 1) * z^-d ; quot has degree 2d - 2
    # so the quotient spans z^(1-d) .. z^(d-1), symmetric
    full = list(reversed(quot))  # lowest power first: z^0 .. z^(2d-2) of quot
    return SymLaurent.from_full(full).coeffs


def dq(p: XPoly, qp: QParam) -> XPoly:
    """Askey-Wilson divided difference of p."""
    if p.degree < 1:
        return XPoly()
    t = qp.t
    L = x_to_laurent(p)
    anti = _shifted(L, t, -1)
    quotient = _divide_antisymmetric(anti)
    scale = 2 / (t - 1 / t)
    return laurent_to_x(SymLaurent(quotient)).scale(scale)


def sq(p: XPoly, qp: QParam) -> XPoly:
    """Average of p over the two half-step lattice shifts."""
    if p.degree < 1:
        return p
    L = x_to_laurent(p)
    sym = _shifted(L, qp.t, +1)
    return laurent_to_x(SymLaurent(c / 2 for c in sym))


def dq_power(p: XPoly, qp: QParam, k: int) -> XPoly:
    for _ in range(k):
        p = dq(p, qp)
    return p


def lattice_constants(qp: QParam, n: int) -> tuple:
    """(gamma_n, alpha_n) for n >= -1."""
    if n < -1:
        raise ValueError("n must be >= -1")
    return qp.gamma(n), qp.alpha_n(n)


def u1(qp: QParam) -> XPoly:
    """U_1(z) = (alpha^2 - 1) z."""
    return XPoly([0, qp.alpha**2 - 1])


def u2(qp: QParam) -> XPoly:
    """U_2(z) = (alpha^2 - 1)(z^2 - 1)."""
    c = qp.alpha**2 - 1
    return XPoly([-c, 0, c])


def divided_difference_at(p: XPoly, qp: QParam, w) -> Fraction:
    """Raw difference quotient of p at the lattice point z = w.

    Evaluates p at x(s +/- 1/2) = (t^(+/-1) w + t^(-/+1) / w) / 2 directly,
    without going through the Laurent image.
    """
    t = Fraction(qp.t)
    w = Fraction(w)
    xp = (t * w + 1 / (t * w)) / 2
    xm = (w / t + t / w) / 2
    return (p(xp) - p(xm)) / (xp - xm)
