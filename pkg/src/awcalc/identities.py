"""Operator and functional identities on the q-quadratic lattice, plus the
seeded generator used by the randomized sweeps.

Every check returns an exact residual (a polynomial, a list of moments or a
scalar); zero means the identity holds.
"""

from __future__ import annotations

from fractions import Fraction

from .algebra import QParam, XPoly, eval_at_lattice
from .opseq import MomentFunctional, MonicOPS, SimpleSet
from .qops import divided_difference_at, dq, sq, u1, u2

MASK64 = (1 << 64) - 1


class SplitMix64:
    """64-bit splitmix generator; small, fast and reproducible across platforms."""

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi] (modulo bias is irrelevant at this range)."""
        return lo + self.next_u64() % (hi - lo + 1)

    def scalar(self) -> Fraction:
        return Fraction(self.randint(-9, 9), self.randint(1, 9))

    def poly(self, max_degree: int) -> XPoly:
        deg = self.randint(0, max_degree)
        return XPoly([self.scalar() for _ in range(deg + 1)])


# operator identities -------------------------------------------------------


def product_rule_dq(f: XPoly, g: XPoly, qp: QParam) -> XPoly:
    """D(fg) - (Df)(Sg) - (Sf)(Dg)."""
    return dq(f * g, qp) - dq(f, qp) * sq(g, qp) - sq(f, qp) * dq(g, qp)


def product_rule_sq(f: XPoly, g: XPoly, qp: QParam) -> XPoly:
    """S(fg) - (Df)(Dg) U_2 - (Sf)(Sg)."""
    return sq(f * g, qp) - dq(f, qp) * dq(g, qp) * u2(qp) - sq(f, qp) * sq(g, qp)


def f_dq_g_rule(f: XPoly, g: XPoly, qp: QParam) -> XPoly:
    """f Dg - D[(Sf - (U_1/alpha) Df) g] + (1/alpha) S(g Df)."""
    inv_al = 1 / qp.alpha
    Df = dq(f, qp)
    inner = (sq(f, qp) - u1(qp).scale(inv_al) * Df) * g
    return f * dq(g, qp) - dq(inner, qp) + sq(g * Df, qp).scale(inv_al)


def degree_law(n: int, qp: QParam) -> dict:
    """Leading and forbidden coefficients of D x^n and S x^n."""
    xn = XPoly.monomial(n)
    D, S = dq(xn, qp), sq(xn, qp)
    out = {
        "dq_lead": D.coeff(n - 1) - qp.gamma(n) if n >= 1 else Fraction(0),
        "dq_gap": D.coeff(n - 2) if n >= 2 else Fraction(0),
        "dq_degree": Fraction(0 if D.degree == n - 1 else 1),
        "sq_lead": S.coeff(n) - qp.alpha_n(n),
        "sq_gap": S.coeff(n - 1) if n >= 1 else Fraction(0),
        "sq_degree": Fraction(0 if S.degree == n else 1),
    }
    return out


def lattice_oracle(p: XPoly, qp: QParam, w) -> Fraction:
    """Symbolic D_q p at the midpoint minus the raw divided difference."""
    return eval_at_lattice(dq(p, qp), w) - divided_difference_at(p, qp, w)


def aux_identities(qp: QParam) -> dict:
    al = qp.alpha
    U1 = u1(qp)
    return {
        "dq_u1": dq(U1, qp) - XPoly.constant(al * al - 1),
        "sq_u1": sq(U1, qp) - U1.scale(al),
    }


# functional identities -----------------------------------------------------


def f_dq_u_rule(u: MomentFunctional, f: XPoly, qp: QParam) -> list:
    """Moments of f D u - D(Sf u) + S(Df u) up to the largest common order."""
    d = max(f.degree, 0)
    lhs = u.dq(qp, u.order + 1).mul(f)
    t1 = u.mul(sq(f, qp))
    t1 = t1.dq(qp, t1.order + 1)
    t2 = u.mul(dq(f, qp))
    t2 = t2.sq(qp)
    order = min(lhs.order, t1.order, t2.order)
    assert order >= u.order - d - 1
    return [a - b + c for a, b, c in zip(lhs.truncate(order).mu, t1.truncate(order).mu, t2.truncate(order).mu)]


def _dq_power(u: MomentFunctional, qp: QParam, n: int) -> MomentFunctional:
    for _ in range(n):
        u = u.dq(qp, u.order + 1)
    return u


def dqn_sq_rule(u: MomentFunctional, n: int, qp: QParam) -> list:
    """alpha D^n S u - alpha_{n+1} S D^n u - gamma_n U_1 D^{n+1} u."""
    lhs = _dq_power(u.sq(qp), qp, n) * qp.alpha
    r1 = _dq_power(u, qp, n).sq(qp) * qp.alpha_n(n + 1)
    r2 = _dq_power(u, qp, n + 1).mul(u1(qp)) * qp.gamma(n)
    order = min(lhs.order, r1.order, r2.order)
    return [a - b - c for a, b, c in zip(lhs.truncate(order).mu, r1.truncate(order).mu, r2.truncate(order).mu)]


def derivative_dual_rule(ops: MonicOPS, qp: QParam) -> list:
    """<a_n^[1], D x^m> - gamma_{n+1} <a_{n+1}, x^m> over n + 1, m <= N.

    a^[1] is the dual basis of P_n^[1] = D P_{n+1} / gamma_{n+1}.
    """
    N = ops.N
    base = SimpleSet(ops.polys)
    shifted = SimpleSet([dq(ops[n + 1], qp).scale(1 / qp.gamma(n + 1)) for n in range(N)])
    out = []
    for n in range(N):
        for m in range(N + 1):
            Dm = dq(XPoly.monomial(m), qp)
            lhs = sum((c * shifted.dual_moment(n, j) for j, c in enumerate(Dm.coeffs)), Fraction(0))
            out.append(lhs - qp.gamma(n + 1) * base.dual_moment(n + 1, m))
    return out


def second_order_operator(phi: XPoly, psi: XPoly, f: XPoly, qp: QParam) -> XPoly:
    Df = dq(f, qp)
    return phi * dq(Df, qp) + psi * sq(Df, qp)


def symmetry_rule(u: MomentFunctional, phi: XPoly, psi: XPoly, f: XPoly, g: XPoly, qp: QParam) -> Fraction:
    """<u, L(f) g> - <u, L(g) f> for L = phi D^2 + psi S D."""
    Lf = second_order_operator(phi, psi, f, qp)
    Lg = second_order_operator(phi, psi, g, qp)
    return u.pair(Lf * g) - u.pair(Lg * f)


# sweep ---------------------------------------------------------------------

OPERATOR_RULES = {
    "product-rule-Dq": product_rule_dq,
    "product-rule-Sq": product_rule_sq,
    "f-Dq-g": f_dq_g_rule,
}

LATTICE_POINTS = (Fraction(3, 10), Fraction(7, 10), Fraction(3, 2))


def draw_pairs(seed: int, cases: int, max_degree: int) -> list:
    rng = SplitMix64(seed)
    return [(rng.poly(max_degree), rng.poly(max_degree)) for _ in range(cases)]


def check_case(args: tuple) -> dict:
    """All operator identities on one (f, g) pair; picklable for worker pools."""
    index, f, g, t = args
    qp = QParam(t)
    out = {"case": index, "failures": []}
    for name, rule in OPERATOR_RULES.items():
        res = rule(f, g, qp)
        if not res.is_zero():
            out["failures"].append({"rule": name, "f": f.to_json(), "g": g.to_json(), "residual": res.to_json()})
    for w in LATTICE_POINTS:
        r = lattice_oracle(f, qp, w)
        if r != 0:
            out["failures"].append({"rule": "lattice-oracle", "f": f.to_json(), "w": str(w), "residual": str(r)})
    return out


def run_suite(
    qp: QParam,
    seed: int,
    cases: int = 100,
    max_degree: int = 8,
    degree_horizon: int = 12,
    jobs: int = 1,
) -> dict:
    """Seeded sweep of the operator identities; returns per-rule verdicts."""
    pairs = draw_pairs(seed, cases, max_degree)
    tasks = [(i, f, g, qp.t) for i, (f, g) in enumerate(pairs)]
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(check_case, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    else:
        results = [check_case(t) for t in tasks]
    results.sort(key=lambda r: r["case"])

    rules = {name: {"verdict": "PASS", "checked": cases} for name in list(OPERATOR_RULES) + ["lattice-oracle"]}
    rules["lattice-oracle"]["checked"] = cases * len(LATTICE_POINTS)
    for r in results:
        for fail in r["failures"]:
            entry = rules[fail["rule"]]
            if entry["verdict"] == "PASS":
                entry["verdict"] = "FAIL"
                entry["first_failure"] = {"case": r["case"], **fail}

    law = {"verdict": "PASS", "checked": degree_horizon + 1}
    for n in range(degree_horizon + 1):
        bad = {k: str(v) for k, v in degree_law(n, qp).items() if v != 0}
        if bad:
            law = {"verdict": "FAIL", "checked": degree_horizon + 1, "first_failure": {"n": n, "residuals": bad}}
            break
    rules["degree-law"] = law

    aux = {k: v for k, v in aux_identities(qp).items() if not v.is_zero()}
    rules["aux-polys"] = {"verdict": "FAIL" if aux else "PASS", "checked": 2}
    if aux:
        rules["aux-polys"]["first_failure"] = {k: v.to_json() for k, v in aux.items()}
    return rules
