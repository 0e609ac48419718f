from fractions import Fraction as F

import mpmath
import pytest

from awcalc.algebra import QParam, XPoly
from awcalc.awfamily import (
    AWParams,
    PearsonPair,
    aw_coefficients,
    aw_rec,
    aw_recurrence,
    elementary_symmetric,
    ismail_coeffs,
    pearson_check,
    pearson_rec,
    pearson_recurrence,
)
from awcalc.errors import AdmissibilityError, DegeneratePsiError, OrderExceeded, RestrictionViolated, ZeroParameter
from awcalc.opseq import generate_ops, moments
from awcalc.qops import dq, sq

X = XPoly.monomial(1)
HERMITE_PHI = XPoly([F(-3, 8), 0, F(3, 4)])

AW_INSTANCES = [
    ((F(1, 2), 0, 0, 0), F(1, 2)),
    ((F(1, 2), F(1, 3), F(-1, 5), F(2, 7)), F(1, 2)),
    ((F(3, 4), F(1, 2), F(1, 3), F(-2, 3)), F(1, 3)),
    ((F(2, 3), F(-1, 4), F(1, 6), F(1, 2)), F(3, 5)),
]


def test_elementary_symmetric():
    assert elementary_symmetric([1, 2, 3, 4]) == (10, 35, 50, 24)


class TestAWRecurrence:
    def test_single_parameter_family(self, qp):
        p = AWParams((F(1, 2), 0, 0, 0), qp)
        # monic form: B_n = a1 q^n / 2 (see the decisions ledger)
        assert aw_recurrence(p, 0) == (F(1, 4), F(3, 16))
        assert aw_recurrence(p, 1) == (F(1, 16), F(15, 64))
        q = qp.q
        for n in range(8):
            assert aw_recurrence(p, n) == (q**n / 4, (1 - q ** (n + 1)) / 4)

    def test_restriction(self, qp):
        with pytest.raises(RestrictionViolated, match="1-a1a2q"):
            aw_recurrence(AWParams((2, 2, 0, 0), qp), 1)

    def test_zero_parameter(self, qp):
        with pytest.raises(ZeroParameter):
            aw_recurrence(AWParams((0, 1, 0, 0), qp), 0)

    def test_chebyshev_parameters(self, qp):
        # (1, -1, t, -t) cancels a 0/0 at n = 0 and gives Chebyshev T
        rec = aw_rec(AWParams((1, -1, qp.t, -qp.t), qp), 8)
        assert rec.B == (0,) * 8
        assert rec.C == (F(1, 2),) + (F(1, 4),) * 7

    @pytest.mark.parametrize("a,t", AW_INSTANCES)
    def test_ismail_eigen_equation(self, a, t):
        # independent oracle: the monic OPS must solve phi D^2 Y + psi S D Y = lambda_n Y
        qp = QParam(t)
        p = AWParams(a, qp)
        phi, psi, lam = ismail_coeffs(p)
        P = generate_ops(aw_rec(p, 8), 8)
        for n in range(9):
            D = dq(P[n], qp)
            assert phi * dq(D, qp) + psi * sq(D, qp) == P[n].scale(lam(n))


class TestIsmail:
    def test_all_zero(self, qp):
        phi, psi, lam = ismail_coeffs(AWParams((0, 0, 0, 0), qp))
        assert phi == XPoly([2, 0, -4])
        assert psi == XPoly([0, F(-16, 3)])
        assert lam(0) == 0
        assert lam(1) == F(-16, 3)
        assert lam(2) == F(-80, 3)

    def test_degenerate_psi(self, qp):
        with pytest.raises(DegeneratePsiError):
            ismail_coeffs(AWParams((1, 1, 1, 1), qp))

    @pytest.mark.parametrize("a,t", AW_INSTANCES)
    def test_lambda_nonzero(self, a, t):
        _, _, lam = ismail_coeffs(AWParams(a, QParam(t)))
        assert all(lam(n) != 0 for n in range(1, 10))


class TestPearson:
    def test_hermite_pair(self, qp, hermite):
        pp = PearsonPair(HERMITE_PHI, X, qp)
        assert pearson_recurrence(pp, 0) == (0, F(3, 16))
        assert pearson_recurrence(pp, 1) == (0, F(15, 64))
        rec = pearson_rec(pp, 10)
        assert rec.B == (0,) * 10 and rec.C == hermite.C[:10]

    def test_odd_free_pair_has_zero_b0(self, qp):
        pp = PearsonPair(XPoly([F(-1, 3), 0, F(1, 2)]), XPoly([0, 2]), qp)
        assert pearson_recurrence(pp, 0)[0] == 0

    def test_scaling_invariance(self, qp):
        pp = PearsonPair(XPoly([F(1, 3), F(2, 5), F(3, 4)]), XPoly([F(-1, 7), 1]), qp)
        for s in (F(2), F(-3, 7), F(5, 9)):
            assert pearson_rec(pp.scaled(s), 6) == pearson_rec(pp, 6)

    def test_admissibility(self, qp):
        # d_0 = a*gamma_0 + d*alpha_0 = d, so pick a pair with d_2 = a*gamma_2 + d*alpha_2 = 0
        a = -qp.alpha_n(2) / qp.gamma(2)
        pp = PearsonPair(XPoly([1, 0, a]), XPoly([0, 1]), qp)
        with pytest.raises(AdmissibilityError, match="d_2"):
            pearson_rec(pp, 3)

    def test_check_passes_and_scales(self, qp, hermite):
        u = moments(hermite, 14)
        pp = PearsonPair(HERMITE_PHI, X, qp)
        assert pearson_check(pp, u, 10).verdict == "PASS"
        assert pearson_check(pp.scaled(2), u, 10).verdict == "PASS"

    def test_check_fails_with_wrong_psi(self, qp, hermite):
        u = moments(hermite, 14)
        rep = pearson_check(PearsonPair(HERMITE_PHI, XPoly([-1, 1]), qp), u, 10)
        assert rep.verdict == "FAIL"
        assert rep.residuals[0] == 1

    def test_check_order(self, qp, hermite):
        with pytest.raises(OrderExceeded):
            pearson_check(PearsonPair(HERMITE_PHI, X, qp), moments(hermite, 5), 10)

    @pytest.mark.parametrize("a,t", AW_INSTANCES)
    def test_kls_pearson_consistency(self, a, t):
        qp = QParam(t)
        p = AWParams(a, qp)
        phi, psi, _ = ismail_coeffs(p)
        pp = PearsonPair(phi, psi, qp).normalized()
        assert pearson_rec(pp, 11) == aw_rec(p, 11)
        u = moments(aw_rec(p, 12), 12)
        assert pearson_check(pp, u, 10).passed

    def test_degree_validation(self, qp):
        with pytest.raises(ValueError):
            PearsonPair(XPoly.monomial(3), X, qp)
        with pytest.raises(ValueError):
            PearsonPair(X, XPoly.constant(1), qp)


def test_aw_coefficients_is_field_generic():
    a = (F(1, 2), F(1, 3), F(-1, 5), F(2, 7))
    exact = aw_coefficients(a, F(1, 4), 3)
    approx = aw_coefficients([mpmath.mpf(x.numerator) / x.denominator for x in a], mpmath.mpf(1) / 4, 3)
    for e, x in zip(exact, approx):
        assert abs(x - mpmath.mpf(e.numerator) / e.denominator) < mpmath.mpf(10) ** -12
