"""Acceptance suite: one PASS/FAIL line per criterion, printed even without -s.

Tolerances are exact equality; time limits are wall clock.
"""

import random
import time
from fractions import Fraction

import pytest

from qsigalois import cli
from qsigalois.corepr import Functional, corepresentation_hopf
from qsigalois.hopf import (
    GHq,
    Hq,
    Taft,
    antipode,
    coproduct,
    frakH,
    galois_group_12_1,
    galois_group_12_3,
    hq_antipode_v,
    hq_coproduct_v,
    hq_v_basis,
    verify_bialgebra,
    verify_hopf_axioms,
)
from qsigalois.hull import HullElement, RationalQsiField, hull_generator, universal_hopf, verify_qsi_morphism
from qsigalois.pvt import (
    builtin_R,
    cleft_check,
    cleft_trivialize,
    coaction_equivariance,
    coaction_R,
    constants,
    galois_map_check,
    identity_phi,
    normalize_fundamental_system,
    r_window,
    replay,
    simplicity_reduce,
    taft_torsor,
    taft_two_dim_comodule,
)
from qsigalois.qsimod import default_names, first_example, jordan_example, three_dim_example, scaled_example, solve
from qsigalois.scalars import q_factorial, q_pascal_identity_check, rational_functions, rationals
from qsigalois.seq import CFiniteSeq, TwistedSeries, cfinite_equal, hat_sigma, hat_theta, series_multiply

F = rationals(2)


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail, seconds):
        with capsys.disabled():
            print(f"\ncriterion {number}: {'PASS' if ok else 'FAIL'} ({seconds:.2f} s) {detail}")
    return emit


def test_criterion_01_solution_matrices(report):
    t0 = time.perf_counter()
    sol = solve(jordan_example(F))
    t1 = time.perf_counter() - t0
    got1 = sol.Y.to_string()
    ok1 = sol.exact and got1 == "[[Q, (1/2)*Z*Q, X], [0, Q, 0], [0, 0, 1]]" and t1 < 1
    t0 = time.perf_counter()
    sol = solve(scaled_example(F, 3))
    t2 = time.perf_counter() - t0
    got2 = sol.Y.to_string(default_names(F, {"L": 3}))
    ok2 = sol.exact and got2 == "[[Q*L, X], [0, L]]" and t2 < 1
    report(1, ok1 and ok2, f"first: {got1}; second: {got2}", t1 + t2)
    assert ok1, got1
    assert ok2, f"expected [[Q*L, X], [0, L]], solver gives {got2}"


def test_criterion_02_galois_groups(report):
    t0 = time.perf_counter()
    d1 = corepresentation_hopf(first_example(F), 2)
    rel1 = set(d1.relation_strings())
    qi = F.format(1 / F.q)
    exp1 = {"e*e^-1 = 1", "e^-1*e = 1", f"g*e = ({qi})*e*g"}
    A = d1.hopf.A
    ok1 = set(d1.generators) == {"e", "e^-1", "g"} and rel1 == exp1 and A("e*g") == A("g*e") * F.q
    d2 = corepresentation_hopf(three_dim_example(F), 2)
    rel2 = set(d2.relation_strings())
    exp2 = {"e*e^-1 = 1", "e^-1*e = 1", "f*e = e*f", f"g*e = ({qi})*e*g", "g*f = f*g - g"}
    B = d2.hopf.A
    ok2 = (set(d2.generators) == {"e", "e^-1", "f", "g"} and rel2 == exp2
           and B("e*f") == B("f*e") and B("e*g") == B("g*e") * F.q and B("f*g") - B("g*f") == B("g"))
    dims = all(p == i for _, p, i in d1.graded_dimensions + d2.graded_dimensions)
    through3 = d1.graded_dimensions[-1][0] >= 3 and d2.graded_dimensions[-1][0] >= 3
    dt = time.perf_counter() - t0
    ok = ok1 and ok2 and dims and through3 and dt < 10
    report(2, ok, f"relations {sorted(rel1)} and {sorted(rel2)}; graded dims "
              f"{d1.graded_dimensions} {d2.graded_dimensions}", dt)
    assert ok


def test_criterion_03_hopf_axioms(report):
    t0 = time.perf_counter()
    builtins = [Hq(F), GHq(F), frakH(F), Taft(2), Taft(3), galois_group_12_1(F), galois_group_12_3(F, 3)]
    results = []
    for H in builtins:
        bi = verify_bialgebra(H)
        ax = verify_hopf_axioms(H, 4)
        results.append((H.name, bi.ok and ax.ok, ax.checked))
    dt = time.perf_counter() - t0
    ok = all(r[1] for r in results) and dt < 30
    report(3, ok, "; ".join(f"{n}: {'ok' if g else 'FAIL'} on {c} monomials" for n, g, c in results), dt)
    assert ok


def test_criterion_04_v_basis(report):
    t0 = time.perf_counter()
    H = Hq(F)
    bad = []
    for m in range(-3, 4):
        for n in range(4):
            v = hq_v_basis(H, m, n)
            if coproduct(v, H) != hq_coproduct_v(H, m, n):
                bad.append(("Δ", m, n))
            c, idx = hq_antipode_v(F, m, n)
            if antipode(v, H) != hq_v_basis(H, *idx) * c:
                bad.append(("S", m, n))
    dt = time.perf_counter() - t0
    report(4, not bad, f"28 pairs (m, n), mismatches {bad}", dt)
    assert not bad


def test_criterion_05_torsors(report):
    t0 = time.perf_counter()
    rows = []
    ok = True
    for N in (2, 3):
        for lam in (0, 1, 2):
            CA = taft_torsor(N, lam)
            g = galois_map_check(CA)
            phi = identity_phi(CA)
            cl = cleft_check(CA, phi)
            good = g.ok and g.data["rank"] == N ** 4 and cl.ok
            if lam in (0, 1):
                good &= cleft_trivialize(taft_two_dim_comodule(CA.H), CA, phi, cl).ok
            ok &= good
            rows.append(f"N={N} λ={lam} rank {g.data['rank']}")
    dt = time.perf_counter() - t0
    ok &= dt < 10
    report(5, ok, "; ".join(rows) + "; 2-dim module trivialized by R_0 and R_1", dt)
    assert ok


def test_criterion_06_pv_ring(report):
    t0 = time.perf_counter()
    R = builtin_R(F)
    A = R.A
    Q, tau, one = A("Q"), A("τ"), A.one()
    solves = (R.sigma(Q) == Q * F.q and R.sigma(tau) == tau * F.q and R.theta(Q).is_zero()
              and R.theta(tau) == one and Q * A("Q^-1") == one)
    consts = constants(R, r_window(R, 4, 4))
    const_ok = len(consts) == 1 and consts[0].is_scalar()
    R2, CA = coaction_R(F)
    coact = CA.verify().ok and coaction_equivariance(R2, CA, 3).ok
    gal = galois_map_check(CA, 4)
    ok = solves and const_ok and coact and gal.ok and R.verify().ok
    dt = time.perf_counter() - t0
    report(6, ok, f"Y solves: {solves}; constants {consts}; coaction {coact}; {gal.messages[0]}", dt)
    assert ok


def test_criterion_07_simplicity(report):
    t0 = time.perf_counter()
    R = builtin_R(F)
    rng = random.Random(0)
    failures = 0
    moves = 0
    for _ in range(100):
        x = cli._random_r_element(R, rng, 3)
        cert = simplicity_reduce(R, x)
        moves += len(cert)
        if not (cert.result == R.A.one() and replay(R, cert) == R.A.one()):
            failures += 1
    dt = time.perf_counter() - t0
    ok = failures == 0 and dt < 60
    report(7, ok, f"100 elements, {moves} moves, {failures} failures", dt)
    assert ok


def test_criterion_08_normalization(report):
    t0 = time.perf_counter()
    R = builtin_R(F)
    Q, tau = R.A("Q"), R.A("τ")
    gs = []
    ok = True
    for gamma in (Fraction(1), Fraction(2), Fraction(1, 2)):
        rep = normalize_fundamental_system(R, Q, tau + Q * gamma, 0, 1)
        ok &= rep.ok and rep.g == -gamma and rep.a == Q and rep.b == tau
        gs.append(rep.g)
        for (c11, c12), (c21, c22) in (((2, 1), (3, -1)), ((0, 1), (1, 0))):
            a = Q * c11 + (tau + Q * gamma) * c21
            b = Q * c12 + (tau + Q * gamma) * c22
            mixed = normalize_fundamental_system(R, a, b, c21, c22)
            ok &= mixed.ok and R.theta(mixed.b) == R.A.one() and R.sigma(mixed.a) == mixed.a * F.q
    dt = time.perf_counter() - t0
    report(8, ok, f"g for γ = 1, 2, 1/2: {[str(g) for g in gs]}", dt)
    assert ok


def _random_rational(rng, L):
    def poly(deg):
        return " + ".join(f"({rng.randint(-3, 3)})*t^{i}" for i in range(deg + 1))
    num = poly(rng.randint(0, 2))
    den = poly(rng.randint(0, 2)) + f" + ({rng.choice([1, 2, -1, 3])})"
    a = L(f"({num})/({den})") if not L(den).numer.is_zero else L(num)
    return a


def test_criterion_09_universal_hopf(report):
    t0 = time.perf_counter()
    L = RationalQsiField(F)
    ctx = L.ctx
    rng = random.Random(0)
    funcs = [_random_rational(rng, L) for _ in range(50)]
    bad = 0
    for i, a in enumerate(funcs):
        if not verify_qsi_morphism(L, a, funcs[(i + 1) % 50], 5).ok:
            bad += 1
    iota_t = universal_hopf(L, "t", 5).equal_through(HullElement(ctx, [ctx.t * ctx.Q, 1], 5))
    gens = all(universal_hopf(L, f"1/(t+{c})", 5).equal_through(hull_generator(ctx, c, 5)) for c in (1, 2))
    dt = time.perf_counter() - t0
    ok = bad == 0 and iota_t and gens
    report(9, ok, f"50 functions, {bad} failures; ι(t) = tQ + X: {iota_t}; ι((t+c)^-1) = G_c: {gens}", dt)
    assert ok


def _random_cfinite(rng):
    r = rng.randint(1, 3)
    rec = [Fraction(rng.choice([-3, -2, -1, 1, 2, 3]))] + [Fraction(rng.randint(-3, 3)) for _ in range(r - 1)] + [1]
    return CFiniteSeq(F, rec, [Fraction(rng.randint(-3, 3)) for _ in range(r)])


def _random_series(rng):
    return TwistedSeries([_random_cfinite(rng) for _ in range(rng.randint(1, 4))], 4)


def _random_functional(rng):
    comps = {}
    for n in range(rng.randint(1, 3)):
        comps[n] = CFiniteSeq.geometric(F, rng.choice([1, 2, Fraction(1, 2), -1]), rng.randint(-3, 3))
    return Functional(F, comps)


def test_criterion_10_property_suites(report):
    t0 = time.perf_counter()
    rng = random.Random(0)
    R = builtin_R(F)
    counter = {"qsi": 0, "leibniz": 0, "equality": 0, "convolution": 0, "pascal": 0}
    for _ in range(30):
        x = cli._random_r_element(R, rng, 3)
        y = cli._random_r_element(R, rng, 3)
        if not (R.sigma(x * y) == R.sigma(x) * R.sigma(y)
                and R.theta(x * y) == R.sigma(x) * R.theta(y) + R.theta(x) * y
                and R.theta(R.sigma(x)) == R.sigma(R.theta(x)) * F.q
                and R.theta(R.theta(x)) == R.theta(x, 2) * q_factorial(2, F)):
            counter["qsi"] += 1
        S1, S2 = _random_series(rng), _random_series(rng)
        lhs = hat_theta(1, series_multiply(S1, S2))
        rhs = series_multiply(hat_sigma(S1), hat_theta(1, S2)) + series_multiply(hat_theta(1, S1), S2)
        if not lhs == rhs:
            counter["leibniz"] += 1
        a, b = _random_cfinite(rng), _random_cfinite(rng)
        for u, v in ((a, b), (a, a + b - b)):
            if cfinite_equal(u, v) != (u.values(-25, 25) == v.values(-25, 25)):
                counter["equality"] += 1
        f, g, h = _random_functional(rng), _random_functional(rng), _random_functional(rng)
        if not (f * g) * h == f * (g * h):
            counter["convolution"] += 1
    G = rational_functions()
    counter["pascal"] = sum(not q_pascal_identity_check(m, l, G) for m in range(1, 9) for l in range(1, m + 1))
    dt = time.perf_counter() - t0
    ok = not any(counter.values())
    report(10, ok, f"counterexamples {counter}", dt)
    assert ok
