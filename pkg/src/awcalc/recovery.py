"""Askey-Wilson parameters of a degree-one family from the quartic
Z^4 - R Z^3 + T Z^2 - S Z - 1/q = 0.

This is the only inexact part of the package.  Roots are found by Aberth
iteration in mpmath at a caller-chosen binary precision and validated
through the Vieta identities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import mpmath

from .algebra import QParam, to_scalar
from .awfamily import aw_coefficients, elementary_symmetric, ismail_lambda, ismail_pair
from .errors import CaseError, ConvergenceError, DegenerateError, MismatchError
from .structrel import CorollaryFamily

DEFAULT_BITS = 256
DEFAULT_RECON_TOL = mpmath.mpf("1e-20")
GUARD_BITS = 32


def _mp(x):
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpmathify(x)


def digits_for(bits: int) -> int:
    return int(math.floor(bits * math.log10(2)))


def format_mp(x, bits: int) -> str:
    return mpmath.nstr(x, digits_for(bits), strip_zeros=False)


def quartic_coeffs(case: str, family: CorollaryFamily) -> tuple:
    """Exact (R, T, S) for the given case tag ("I", "II-a" or "II-b")."""
    if case != family.case:
        raise CaseError(f"case {case} requested for a case {family.case} family")
    qp = family.qp
    q, al2 = qp.q, qp.alpha**2
    B0, B1 = family.B0, family.B1
    if q == 1:
        raise DegenerateError("q - 1 vanishes")
    if case == "I":
        R = 2 * (q + 1) * B0 / (q - 1)
        T = 4 * (3 * al2 - 1) / (q - 1)
        S = 2 * (1 + 1 / q) * B0 / (q - 1)
    elif case == "II-a":
        k = family.k
        q32 = qp.t**3
        R = k * (q + 1) * (2 * q**2 + q + 1) / (q32 * (q - 1))
        T = 4 * (2 * family.C1 + 4 * al2**2 + al2 - 1) / (q - 1)
        S = k * (q + 1) * (q**2 + q + 2) / (q32 * (q - 1))
    elif case == "II-b":
        bracket = B1 + (4 * al2 - 1) * B0
        if bracket == 0:
            raise DegenerateError("B_1 + (4alpha^2 - 1) B_0 vanishes")
        R = 2 * (q * B0 - B1) / (q - 1)
        T = (
            1
            - 1 / q
            + 8 * (B0**2 - al2) * ((4 * al2 - 3) * B1 - B0) / (bracket * (q - 1))
            - 4 * (B1 - B0) * B0 / (q - 1)
        )
        S = 2 * (B0 / q - B1) / (q - 1)
    else:
        raise CaseError(f"unknown case {case!r}")
    return R, T, S


@dataclass
class QuarticProblem:
    R: object
    T: object
    S: object
    q: Fraction
    bits: int
    roots: list = field(default_factory=list)
    vieta_residuals: list = field(default_factory=list)
    sweeps: int = 0

    @property
    def tolerance(self):
        return mpmath.mpf(2) ** (-(self.bits // 2))

    @property
    def vieta_ok(self) -> bool:
        return all(r <= self.tolerance for r in self.vieta_residuals)


def _aberth(coeffs: list, max_sweeps: int, eps) -> tuple:
    """Roots of the monic polynomial with ``coeffs`` (highest degree first)."""
    n = len(coeffs) - 1
    dcoeffs = [c * (n - i) for i, c in enumerate(coeffs[:-1])]
    radius = 1 + max(abs(c) for c in coeffs[1:])
    # start off the real axis and off any symmetry line
    z = [radius * mpmath.expj(2 * mpmath.pi * k / n + mpmath.mpf("0.4")) for k in range(n)]
    for sweep in range(1, max_sweeps + 1):
        biggest = mpmath.mpf(0)
        for i in range(n):
            p = mpmath.polyval(coeffs, z[i])
            if p == 0:
                continue
            ratio = p / mpmath.polyval(dcoeffs, z[i])
            s = mpmath.fsum(1 / (z[i] - z[j]) for j in range(n) if j != i)
            step = ratio / (1 - ratio * s)
            z[i] -= step
            biggest = max(biggest, abs(step) / max(1, abs(z[i])))
        if biggest <= eps:
            return z, sweep
    raise ConvergenceError(f"Aberth iteration did not converge in {max_sweeps} sweeps")


def _canonical(roots: list, bits: int) -> list:
    tol = mpmath.mpf(2) ** (-(bits // 2))
    clean = []
    for r in roots:
        r = mpmath.mpc(r)
        scale = max(1, abs(r))
        re = r.real if abs(r.real) > tol * scale else mpmath.mpf(0)
        im = r.imag if abs(r.imag) > tol * scale else mpmath.mpf(0)
        clean.append(mpmath.mpc(re, im))
    quantum = mpmath.mpf(2) ** (bits // 2)
    return sorted(clean, key=lambda r: (int(mpmath.nint(r.real * quantum)), int(mpmath.nint(r.imag * quantum))))


def vieta_residuals(roots: list, R, T, S, q) -> list:
    e = elementary_symmetric(roots)
    targets = [_mp(R), _mp(T), _mp(S), -1 / _mp(q)]
    return [abs(ek - tk) / max(1, abs(tk)) for ek, tk in zip(e, targets)]


def solve_quartic(R, T, S, qp: QParam, precision_bits: int = DEFAULT_BITS, max_sweeps: int = 200) -> QuarticProblem:
    """Roots of Z^4 - R Z^3 + T Z^2 - S Z - 1/q, canonically ordered."""
    if precision_bits < 64:
        raise ValueError("precision_bits must be at least 64")
    q = qp.q
    with mpmath.workprec(precision_bits + GUARD_BITS):
        coeffs = [mpmath.mpf(1), -_mp(R), _mp(T), -_mp(S), -1 / _mp(q)]
        eps = mpmath.mpf(2) ** (-(precision_bits + GUARD_BITS // 2))
        roots, sweeps = _aberth(coeffs, max_sweeps, eps)
        roots = _canonical(roots, precision_bits)
        res = vieta_residuals(roots, R, T, S, q)
    return QuarticProblem(R, T, S, q, precision_bits, roots, res, sweeps)


@dataclass
class RecoveryReport:
    case: str
    R: Fraction
    T: Fraction
    S: Fraction
    problem: QuarticProblem
    reconstruction: dict
    cross_checks: dict
    tolerance: object
    verdict: str = "PASS"

    def to_json(self) -> dict:
        bits = self.problem.bits
        with mpmath.workprec(bits + GUARD_BITS):
            return {
                "case": self.case,
                "R": str(self.R),
                "T": str(self.T),
                "S": str(self.S),
                "precision_bits": bits,
                "roots": [{"re": format_mp(r.real, bits), "im": format_mp(r.imag, bits)} for r in self.problem.roots],
                "vieta_residuals": [mpmath.nstr(v, 6) for v in self.problem.vieta_residuals],
                "reconstruction_residuals": {k: mpmath.nstr(v, 6) for k, v in self.reconstruction.items()},
                "cross_checks": {k: mpmath.nstr(v, 6) for k, v in self.cross_checks.items()},
                "verdict": self.verdict,
            }


def _reconstruct(family: CorollaryFamily, e: tuple) -> dict:
    """Residuals of the displayed reconstruction identities."""
    q = _mp(family.qp.q)
    al2 = _mp(family.qp.alpha) ** 2
    e1, e2, e3, _ = e
    out = {}
    if family.case == "I":
        B0 = _mp(family.B0)
        out["B0_via_e1"] = abs((q - 1) / (2 * (q + 1)) * e1 - B0)
        out["B0_via_e3"] = abs((q - 1) / (2 * (1 + 1 / q)) * e3 - B0)
    elif family.case == "II-a":
        C1 = _mp(family.C1)
        out["C1_via_e2"] = abs((q - 1) / 8 * (e2 - 4 * (4 * al2**2 + al2 - 1) / (q - 1)) - C1)
    else:
        # invert R = 2(qB0 - B1)/(q-1), S = 2(B0/q - B1)/(q-1) with R = e1, S = e3
        B0 = q * (e1 - e3) / (2 * (q + 1))
        B1 = q * B0 - e1 * (q - 1) / 2
        out["B0_via_e1_e3"] = abs(B0 - _mp(family.B0))
        out["B1_via_e1_e3"] = abs(B1 - _mp(family.B1))
    return out


def ismail_crosscheck(family: CorollaryFamily, roots: list, N: int = 8) -> dict:
    """Compare Ismail's (phi, psi, lambda_n) at the recovered parameters with
    the derived pair of the family.

    Both pairs describe the same second-order equation, so Ismail's pair is
    s times the derived one for a single scale s and lambda_n scales alike.
    """
    qp = family.qp
    q, t = _mp(qp.q), _mp(qp.t)
    sigma = elementary_symmetric(roots)
    phi_i, psi_i = ismail_pair(sigma, q, t)
    der = family.derived()
    scale = psi_i[1]
    phi_d = [_mp(der.phi.coeff(k)) for k in range(3)]
    psi_d = [_mp(der.psi.coeff(k)) for k in range(2)]
    ratios = [ismail_lambda(sigma[3], q, n) / _mp(der.lam(n)) for n in range(1, N + 1)]
    lam_spread = max(abs(r - ratios[0]) for r in ratios) / abs(ratios[0])
    pair_res = max(
        [abs(a - scale * b) for a, b in zip(phi_i, phi_d)] + [abs(a - scale * b) for a, b in zip(psi_i, psi_d)]
    ) / abs(scale)
    return {
        "lambda_ratio": ratios[0],
        "lambda_ratio_spread": lam_spread,
        "pair_scale_residual": pair_res,
        "lambda_ratios": ratios,
    }


def aw_crosscheck(family: CorollaryFamily, roots: list, N: int = 8) -> object:
    """Largest relative gap between the Askey-Wilson (B_n, C_{n+1}) at the
    recovered parameters and the family's own recurrence, n < N."""
    a = sorted(roots, key=abs, reverse=True)
    q = _mp(family.qp.q)
    worst = mpmath.mpf(0)
    for n in range(N):
        B, C = aw_coefficients(a, q, n)
        wB, wC = _mp(family.rec.b(n)), _mp(family.rec.c(n + 1))
        worst = max(worst, abs(B - wB) / max(1, abs(wB)), abs(C - wC) / max(1, abs(wC)))
    return worst


def recover_params(
    family: CorollaryFamily,
    precision_bits: int = DEFAULT_BITS,
    tolerance=None,
    max_sweeps: int = 200,
    strict: bool = True,
) -> RecoveryReport:
    """Solve the case's quartic and check that its roots give back the family.

    With ``strict`` a residual above ``tolerance`` raises MismatchError;
    otherwise the report carries verdict FAIL.
    """
    tol = DEFAULT_RECON_TOL if tolerance is None else mpmath.mpf(tolerance)
    R, T, S = quartic_coeffs(family.case, family)
    prob = solve_quartic(R, T, S, family.qp, precision_bits, max_sweeps)
    with mpmath.workprec(precision_bits + GUARD_BITS):
        e = elementary_symmetric(prob.roots)
        recon = _reconstruct(family, e)
        ism = ismail_crosscheck(family, prob.roots, min(family.N, 8))
        cross = {
            "ismail_lambda_ratio_spread": ism["lambda_ratio_spread"],
            "ismail_pair_scale_residual": ism["pair_scale_residual"],
            "aw_recurrence_gap": aw_crosscheck(family, prob.roots, min(family.N, 8)),
        }
        bad = [k for k, v in {**recon, **cross}.items() if v > tol]
    verdict = "PASS" if prob.vieta_ok and not bad else "FAIL"
    report = RecoveryReport(family.case, R, T, S, prob, recon, cross, tol, verdict)
    if strict and bad:
        raise MismatchError(f"reconstruction residual above tolerance: {bad}")
    return report
