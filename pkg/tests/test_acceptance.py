"""Acceptance criteria, one test per criterion.

Each test evaluates every clause of its criterion at the stated tolerance,
prints a single PASS/FAIL line (also repeated in the terminal summary) and
fails if any clause fails.
"""

import time
from fractions import Fraction as F

import mpmath

from awcalc.algebra import QParam, XPoly
from awcalc.awfamily import AWParams, PearsonPair, aw_rec, aw_recurrence, ismail_coeffs, pearson_check, pearson_rec
from awcalc.identities import (
    OPERATOR_RULES,
    SplitMix64,
    degree_law,
    derivative_dual_rule,
    dqn_sq_rule,
    draw_pairs,
    f_dq_u_rule,
    lattice_oracle,
    symmetry_rule,
)
from awcalc.opseq import RecurrencePair, generate_ops, moments
from awcalc.recovery import ismail_crosscheck, quartic_coeffs, recover_params, solve_quartic
from awcalc.structrel import check_conditions, corollary_family, fit_structure, second_order_apply

from conftest import ACCEPTANCE_LINES, T_VALUES, q_hermite_rec


class Criterion:
    def __init__(self, number: int, title: str):
        self.number = number
        self.title = title
        self.clauses = []
        self.started = time.perf_counter()

    def check(self, name: str, ok: bool, detail: str = ""):
        self.clauses.append((name, bool(ok), detail))

    def finish(self, budget: float = None):
        elapsed = time.perf_counter() - self.started
        if budget is not None:
            self.check(f"runtime < {budget:g} s", elapsed < budget, f"{elapsed:.2f} s")
        failed = [c for c in self.clauses if not c[1]]
        verdict = "FAIL" if failed else "PASS"
        line = f"criterion {self.number}: {verdict} - {self.title} ({len(self.clauses) - len(failed)}/{len(self.clauses)} clauses)"
        if failed:
            line += "; failing: " + "; ".join(f"{n} [{d}]" if d else n for n, _, d in failed)
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert not failed, line


def test_criterion_1_operator_axioms():
    crit = Criterion(1, "operator product rules and f-Dq-g identity, 100 seeded pairs, three t values")
    pairs = draw_pairs(seed=2024, cases=100, max_degree=8)
    for t in T_VALUES:
        qp = QParam(t)
        for name, rule in OPERATOR_RULES.items():
            bad = [i for i, (f, g) in enumerate(pairs) if not rule(f, g, qp).is_zero()]
            crit.check(f"{name} at t={t}", not bad, f"first failing case {bad[:1]}")
    crit.finish(budget=10)


def test_criterion_2_degree_laws():
    crit = Criterion(2, "leading and forbidden coefficients of D x^n and S x^n, n <= 12")
    for t in T_VALUES:
        qp = QParam(t)
        bad = [n for n in range(13) if any(v != 0 for v in degree_law(n, qp).values())]
        crit.check(f"degree law at t={t}", not bad, f"n = {bad[:1]}")
    crit.finish()


def test_criterion_3_divided_difference_oracle():
    crit = Criterion(3, "symbolic D_q against the raw divided difference, 50 random p")
    rng = SplitMix64(99)
    polys = [rng.poly(8) for _ in range(50)]
    for t in T_VALUES:
        qp = QParam(t)
        for w in (F(3, 10), F(7, 10), F(3, 2)):
            bad = [i for i, p in enumerate(polys) if lattice_oracle(p, qp, w) != 0]
            crit.check(f"t={t}, w={w}", not bad)
    crit.finish()


def test_criterion_4_functional_calculus():
    crit = Criterion(4, "functional identities via moment pairings, q-Hermite-type family, q = 1/4")
    qp = QParam(F(1, 2))
    rec = q_hermite_rec(qp, 24)
    u = moments(rec, 18)
    rng = SplitMix64(4)

    bad = [i for i in range(20) if any(f_dq_u_rule(u, rng.poly(6), qp))]
    crit.check("f D u = D(Sf u) - S(Df u)", not bad)
    for n in (0, 1, 2):
        crit.check(f"alpha D^n S u identity, n={n}", not any(dqn_sq_rule(u, n, qp)))

    phi, psi, _ = ismail_coeffs(AWParams((0, 0, 0, 0), qp))
    pp = PearsonPair(phi, psi, qp).normalized()
    crit.check("Pearson equation holds for the pair", pearson_check(pp, u, 16).passed)
    bad = [i for i in range(20) if symmetry_rule(u, pp.phi, pp.psi, rng.poly(6), rng.poly(6), qp) != 0]
    crit.check("second-order operator is symmetric for u", not bad)

    crit.check("derivative dual basis, k = 1, n <= 6", not any(derivative_dual_rule(generate_ops(rec, 7), qp)))
    crit.finish()


def test_criterion_5_kls_pearson():
    crit = Criterion(5, "Pearson recurrence from Ismail's pair reproduces the Askey-Wilson recurrence")
    instances = [
        ((F(1, 2), 0, 0, 0), F(1, 2)),
        ((F(1, 2), F(1, 3), F(-1, 5), F(2, 7)), F(1, 2)),
        ((F(3, 4), F(1, 2), F(1, 3), F(-2, 3)), F(1, 3)),
        ((F(2, 3), F(-1, 4), F(1, 6), F(1, 2)), F(3, 5)),
    ]
    for a, t in instances:
        qp = QParam(t)
        p = AWParams(a, qp)
        phi, psi, _ = ismail_coeffs(p)
        pp = PearsonPair(phi, psi, qp).normalized()
        crit.check(f"a={tuple(map(str, a))}, t={t}, n <= 10", pearson_rec(pp, 11) == aw_rec(p, 11))

    qp = QParam(F(1, 2))
    q = qp.q
    p = AWParams((F(1, 2), 0, 0, 0), qp)
    got = [aw_recurrence(p, n) for n in range(11)]
    crit.check(
        "(1/2,0,0,0): C_{n+1} = (1 - q^{n+1})/4",
        all(C == (1 - q ** (n + 1)) / 4 for n, (_, C) in enumerate(got)),
    )
    # stated value; the verified monic value is q^n/4 (see the decisions ledger)
    crit.check(
        "(1/2,0,0,0): B_n = q^n/2",
        all(B == q**n / 2 for n, (B, _) in enumerate(got)),
        f"computed B_0 = {got[0][0]}, B_1 = {got[1][0]}",
    )
    crit.finish()


def _end_to_end(crit: Criterion, label: str, fam, qp: QParam):
    r = fam.r
    bad = [n for n in range(1, 9) if not fam.relation_residual(n).is_zero()]
    crit.check(f"{label}: (z-r) D P_n = b_n S P_n + c_n S P_(n-1), n <= 8", not bad, f"first failing n = {bad[:1]}")

    fit = fit_structure(fam.ops(), 8, qp)
    exact = fit.verdict == "EXACT"
    crit.check(f"{label}: fit EXACT", exact, f"{fit.verdict}, witness n = {fit.witness}")
    if exact:
        crit.check(f"{label}: (a,b,c) proportional to (0,1,-r)", fit.abc == (0, 1, -r), str(fit.abc))
        crit.check(f"{label}: b_n = gamma_n/alpha_n", all(fit.b[n] == fam.b(n) for n in range(9)))

    crit.check(f"{label}: conditions vanish", check_conditions(0, 1, -r, fam.rec, fam.streams(), qp) == (0, 0))
    crit.check(f"{label}: Pearson check N = 12", pearson_check(fam.pair, moments(fam.rec, 13), 12).passed)

    der = fam.derived()
    P = fam.ops()
    ok = all(second_order_apply(der.phi, der.psi, P[n], qp) == P[n].scale(der.lam(n)) for n in range(9))
    crit.check(f"{label}: second-order equation, n <= 8", ok and der.regular_upto(8))


def test_criterion_6_corollary_end_to_end():
    crit = Criterion(6, "Corollary families end to end (case I and case II-b)")
    qp = QParam(F(1, 2))
    fam = corollary_family(F(1, 2), F(-1, 2), qp, N=12)
    crit.check("case I: C1 = 21/16, C2 = 25/8, r = 5/2", (fam.C1, fam.C2, fam.r) == (F(21, 16), F(25, 8), F(5, 2)))
    _end_to_end(crit, "case I", fam, qp)
    _end_to_end(crit, "case II-b (1/2, 1/8)", corollary_family(F(1, 2), F(1, 8), qp, N=12), qp)
    crit.finish(budget=30)


def test_criterion_7_negative_control():
    crit = Criterion(7, "perturbing C_2 by +1 flips the fit and breaks the first condition")
    qp = QParam(F(1, 2))
    fam = corollary_family(F(1, 2), F(-1, 2), qp, N=12)
    C = list(fam.rec.C)
    C[1] += 1
    bumped = RecurrencePair(fam.rec.B, C)

    base = fit_structure(fam.ops(), 8, qp).verdict
    pert = fit_structure(generate_ops(bumped, 9), 8, qp).verdict
    crit.check("perturbed fit is NO_SOLUTION", pert == "NO_SOLUTION", pert)
    crit.check("verdict flips (unperturbed fit EXACT)", base == "EXACT" and pert == "NO_SOLUTION", f"unperturbed {base}")
    res32, _ = check_conditions(0, 1, -fam.r, bumped, fam.streams(), qp)
    crit.check("perturbed first condition nonzero", res32 != 0, str(res32))
    crit.finish()


def test_criterion_8_quartic_recovery():
    crit = Criterion(8, "quartic recovery for case I, q = 1/4, 256 bits")
    qp = QParam(F(1, 2))
    fam = corollary_family(F(1, 2), F(-1, 2), qp)
    RTS = quartic_coeffs("I", fam)
    crit.check("(R,T,S) = (-5/3, -59/3, -20/3)", RTS == (F(-5, 3), F(-59, 3), F(-20, 3)), str(RTS))

    rep = recover_params(fam, 256, strict=False)
    bound = mpmath.mpf(2) ** -128
    crit.check("Vieta residuals <= 2^-128", max(rep.problem.vieta_residuals) <= bound)
    tol = mpmath.mpf("1e-20")
    crit.check("B0 via e1 within 1e-20", rep.reconstruction["B0_via_e1"] <= tol)
    crit.check("B0 via e3 within 1e-20", rep.reconstruction["B0_via_e3"] <= tol)

    prob = solve_quartic(0, 0, 0, qp, 256)
    with mpmath.workprec(288):
        s = mpmath.sqrt(2)
        want = [mpmath.mpc(s, 0), mpmath.mpc(-s, 0), mpmath.mpc(0, s), mpmath.mpc(0, -s)]
        ok = all(min(abs(r - w) for r in prob.roots) <= bound for w in want)
    crit.check("(0,0,0) gives {+-sqrt2, +-i sqrt2}", ok and prob.vieta_ok)
    crit.finish(budget=5)


def test_criterion_9_ismail_lambda():
    crit = Criterion(9, "Ismail lambda_n / derived lambda_n constant on the recovered case II-b family")
    qp = QParam(F(1, 2))
    fam = corollary_family(F(1, 2), F(1, 8), qp)
    rep = recover_params(fam, 256, strict=False)
    with mpmath.workprec(288):
        chk = ismail_crosscheck(fam, rep.problem.roots, 8)
        spread = max(abs(r - chk["lambda_ratios"][0]) for r in chk["lambda_ratios"])
        crit.check("ratio constant over n = 1..8 within 1e-20", spread <= mpmath.mpf("1e-20"), mpmath.nstr(spread, 5))
        crit.check("phi and psi scale by the same constant", chk["pair_scale_residual"] <= mpmath.mpf("1e-20"))
    crit.finish()
