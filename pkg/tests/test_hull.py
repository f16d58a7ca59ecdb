import json
import os
import random

import pytest
import sympy

from qsigalois.hull import (
    HullContext,
    HullElement,
    RationalQsiField,
    check_witness,
    deformation_compose,
    deformation_witness,
    hull_generator,
    hull_stability_check,
    identity_witness,
    kron_witness,
    load_witness,
    universal_hopf,
    verify_qsi_morphism,
    witness,
)
from qsigalois.scalars import cyclotomic, rational_functions, rationals

t, Qs, qs = sympy.symbols("t Q q")
F = rationals(2)


def random_rational(rng, ctx):
    def poly(deg):
        return sum(rng.randint(-3, 3) * t ** i for i in range(deg + 1))
    num = poly(rng.randint(0, 2)) or sympy.Integer(1)
    den = poly(rng.randint(0, 2))
    # keep the denominator nonzero at t = 0 so that no power of t divides it
    den = den - den.subs(t, 0) + rng.choice([1, 2, -1, 3])
    return ctx.parse(str(num / den))


def _expr(a):
    return a.as_expr()


def _theta_oracle(expr, i, q):
    """θ^(i) through sympy: repeated q-difference quotient divided by [i]_q!."""
    out = expr
    for _ in range(i):
        out = sympy.cancel((out.subs(t, q * t) - out) / ((q - 1) * t))
    fact = sympy.prod([sum(q ** j for j in range(k)) for k in range(1, i + 1)])
    return sympy.cancel(out / fact)


def test_iota_of_t():
    L = RationalQsiField(F)
    it = universal_hopf(L, "t", 5)
    ctx = L.ctx
    assert it.equal_through(HullElement(ctx, [ctx.t * ctx.Q, 1], 5))
    assert repr(it).startswith("Q*t + X")


@pytest.mark.parametrize("c", [1, 2])
def test_iota_of_inverse_linear(c):
    L = RationalQsiField(F)
    ctx = L.ctx
    lhs = universal_hopf(L, f"1/(t+{c})", 5)
    assert lhs.equal_through(hull_generator(ctx, c, 5))
    # oracle: closed form θ^(i)(1/(t+c)) = (-1)^i / Π_{j≤i} (q^j t + c), then t ↦ tQ
    for i in range(6):
        expected = (-1) ** i / sympy.prod([2 ** j * t * Qs + c for j in range(i + 1)])
        assert sympy.cancel(_expr(lhs.coeff(i)) - expected) == 0


def test_iota_against_sympy_oracle():
    L = RationalQsiField(F)
    rng = random.Random(0)
    for _ in range(5):
        a = random_rational(rng, L.ctx)
        ia = universal_hopf(L, a, 4)
        for i in range(5):
            expected = _theta_oracle(_expr(a), i, sympy.Integer(2)).subs(t, t * Qs)
            assert sympy.cancel(_expr(ia.coeff(i)) - expected) == 0


def test_iota_morphism_random():
    L = RationalQsiField(F)
    rng = random.Random(0)
    for _ in range(10):
        a, b = random_rational(rng, L.ctx), random_rational(rng, L.ctx)
        rep = verify_qsi_morphism(L, a, b, 5)
        assert rep.ok, rep.messages


def test_iota_morphism_indeterminate_q():
    L = RationalQsiField(rational_functions())
    assert verify_qsi_morphism(L, "1/(t+1)", "t^2 + q*t", 3, 2).ok


@pytest.mark.parametrize("field", [rationals(2), rational_functions()])
def test_evaluation_is_sigma_of_theta(field):
    # coefficient i of ι(a) at Q = q^n is σ^n θ^(i)(a)
    L = RationalQsiField(field)
    ctx = L.ctx
    a = ctx.parse("1/(t+1) + t")
    ia = universal_hopf(L, a, 3)
    for n in range(-3, 4):
        vals = ia.evaluate(n)
        for i in range(4):
            assert vals[i][0][0] == L.sigma(L.theta(a, i), n)


def test_hull_stability():
    for c in (1, 2, -3):
        rep = hull_stability_check(F, c, 5)
        assert rep.ok, rep.messages
        assert len(rep.data["checks"]) == 13
    assert hull_stability_check(rational_functions(), 1, 3).ok


def test_inverse_and_truncation():
    ctx = HullContext(F)
    x = HullElement(ctx, [ctx.t + 1, ctx.Q, 3], 4)
    inv = x.inverse()
    assert (x * inv).equal_through(HullElement.constant(ctx, 1, 4))
    assert (inv * x).equal_through(HullElement.constant(ctx, 1, 4))
    assert x.truncate(1).prec == 1
    with pytest.raises(ValueError):
        HullContext(cyclotomic(3))


def test_witness_checks():
    assert check_witness(identity_witness(F, 2)).ok
    w = witness(F, [[2, 0], [0, 1]], [[0, 1], [0, 0]])
    rep = check_witness(w)
    assert rep.ok and rep.data["e_minus_1_nilpotent"] is False
    bad = witness(F, [[1, 0], [0, 1]], [[0, 1], [0, 0]])
    assert not check_witness(bad).ok
    assert not deformation_witness(bad).ok


def test_deformations():
    for w in (identity_witness(F, 2),
              witness(F, [[2, 0], [0, 1]], [[0, 1], [0, 0]]),
              witness(F, [[4, 0, 0], [0, 2, 0], [0, 0, 1]], [[0, 1, 0], [0, 0, 1], [0, 0, 0]]),
              witness(F, [[1, 1], [0, 1]], [[0, 0], [0, 0]])):
        rep = deformation_witness(w, 4)
        assert rep.ok, rep.messages
        assert len(rep.data["checks"]) == 8


def test_deformation_indeterminate_q():
    G = rational_functions()
    w = witness(G, [["q", 0], [0, 1]], [[0, 1], [0, 0]])
    assert deformation_witness(w, 3).ok


def test_witness_files(demo_data):
    for name in ("witness_diag.json", "witness_unipotent.json"):
        with open(os.path.join(demo_data, name)) as fh:
            w = load_witness(F, json.load(fh))
        assert check_witness(w).ok
        assert deformation_witness(w, 3).ok


def test_composition_and_kron():
    w = witness(F, [[2, 0], [0, 1]], [[0, 1], [0, 0]])
    one = identity_witness(F, 2)
    c = deformation_compose(w, one)
    assert c.e == w.e and c.f == w.f
    a = kron_witness(w, 2, "left")
    b = kron_witness(identity_witness(F, 2), 2, "right")
    assert check_witness(a).ok
    comp = deformation_compose(a, b)
    assert deformation_witness(comp, 3).ok
    with pytest.raises(ValueError):
        deformation_compose(w, witness(F, [[1, 1], [0, 1]], [[0, 0], [0, 0]]))
