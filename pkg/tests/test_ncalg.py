from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from qsigalois.hopf import GHq, Hq, Taft
from qsigalois.ncalg import (
    NonTerminationError,
    Presentation,
    apply_generator_map,
    check_local_confluence,
    check_morphism,
    multiply,
    normal_form,
    tensor,
)
from qsigalois.pvt import builtin_R
from qsigalois.scalars import rationals
from qsigalois.seq import CFiniteSeq, TwistedSeries, series_multiply


def test_ghq_normal_forms(Q2):
    A = GHq(Q2).A
    assert A("v*u") == A("u*v") * Fraction(1, 2)
    assert A("u*u^-1") == A.one()
    assert A("u^-1*u") == A.one()


def test_hq_tsts(Q2):
    A = Hq(Q2).A
    assert A("t*s*t*s") == A("s^2*t^2") * 8


def test_normal_form_idempotent_and_linear(Q2):
    A = Hq(Q2).A
    x = A("t*s*s^-1*t + 3*t*s")
    assert normal_form(x, A) == x
    raw = {(2, 0): Fraction(1), (0, 2, 0): Fraction(2)}
    y = normal_form(raw, A)
    assert y == A("t*s") + A("s*t*s") * 2


def test_multiply_in_R(Q2):
    R = builtin_R(Q2).A
    # Qτ = q τQ, so τQ = q^-1 Qτ
    assert multiply(R.gen("τ"), R.gen("Q")) == R.gen("Q") * R.gen("τ") * Fraction(1, 2)
    x = R("Q + τ^2")
    assert multiply(x, R.one()) == x


def _hq_matrices(q, size=5):
    s = sympy.diag(*[sympy.Rational(q) ** i for i in range(size)])
    t = sympy.zeros(size)
    for i in range(size - 1):
        t[i, i + 1] = 1
    return {"s": s, "s^-1": s.inv(), "t": t}


def _matrix_of(x, mats, size=5):
    out = sympy.zeros(size)
    for w, c in x.terms.items():
        m = sympy.eye(size)
        for g in w:
            m = m * mats[x.pres.generators[g]]
        out += sympy.Rational(c.numerator, c.denominator) * m
    return out


@given(st.lists(st.sampled_from(["s", "s^-1", "t"]), max_size=7))
def test_normal_form_against_matrix_representation(word):
    # oracle: s = diag(q^i), t = shift satisfy ts = q st; words and their normal forms agree there
    F = rationals(3)
    A = Hq(F).A
    mats = _hq_matrices(3)
    raw = sympy.eye(5)
    for g in word:
        raw = raw * mats[g]
    x = A.element({tuple(A.index[g] for g in word): F.one})
    assert _matrix_of(x, mats) == raw


@given(st.lists(st.sampled_from(["s", "s^-1", "t"]), min_size=0, max_size=3),
       st.lists(st.sampled_from(["s", "s^-1", "t"]), min_size=0, max_size=3),
       st.lists(st.sampled_from(["s", "s^-1", "t"]), min_size=0, max_size=3))
def test_multiply_associative(a, b, c):
    F = rationals(2)
    A = Hq(F).A

    def el(w):
        return A.element({tuple(A.index[g] for g in w): F.one}) + A.scalar(1)
    x, y, z = el(a), el(b), el(c)
    assert multiply(multiply(x, y), z) == multiply(x, multiply(y, z))


def test_hull_square_against_series_product(Q2):
    # (Q + X)^2 with QX = qXQ, compared to the twisted series product
    P = Presentation(Q2, ["Q", "X"], [("XQ", "q^-1*QX")])
    sq = P("Q + X") * P("Q + X")
    Qs = CFiniteSeq.Q(Q2)
    one = CFiniteSeq.constant(Q2, 1)
    S = TwistedSeries([Qs, one], None)
    prod = series_multiply(S, S)
    # Q^a X^b = X^b q^{ab} Q^a
    coeffs = {}
    for w, c in sq.terms.items():
        a, b = w.count(0), w.count(1)
        term = CFiniteSeq.geometric(Q2, Q2.q ** a, c * Q2.q ** (a * b))
        coeffs[b] = coeffs.get(b, CFiniteSeq.zero(Q2)) + term
    for b in range(3):
        assert prod.coeff(b) == coeffs.get(b, CFiniteSeq.zero(Q2))


def test_confluence_reports(Q2):
    assert check_local_confluence(Hq(Q2).A).ok
    assert check_local_confluence(Taft(2).A).ok
    assert check_local_confluence(builtin_R(Q2).A).ok
    broken = Presentation(Q2, ["s", "t"], [("ts", "st"), ("ts", "q*st")], check_order=True)
    rep = check_local_confluence(broken)
    assert not rep.ok and rep.failures


def test_generator_maps(Q2):
    R = builtin_R(Q2)
    A = R.A
    x = A("Q*τ^2 + 3*Q^-1")
    ident = {g: A.gen(g) for g in A.generators}
    assert apply_generator_map(x, ident, A) == x
    point = {"Q": Q2.one, "Q^-1": Q2.one, "τ": Q2.zero}
    assert apply_generator_map(x, point, None) == 3
    assert check_morphism(point, A, None).ok


def test_check_morphism_violation(Q2):
    A = builtin_R(Q2).A
    bad = {"Q": A.gen("Q"), "Q^-1": A.gen("Q^-1"), "τ": A.gen("Q")}
    rep = check_morphism(bad, A, A)
    assert not rep.ok
    # commutative target with both images invertible
    C = Presentation(Q2, ["a", "a^-1", "b", "b^-1"], [("ba", "ab"), ("b^-1a", "ab^-1")],
                     inverses={"a^-1": "a", "b^-1": "b"})
    rep = check_morphism({"Q": C.gen("a"), "Q^-1": C.gen("a^-1"), "τ": C.gen("b")}, A, C)
    assert not rep.ok


def test_rho_on_R_is_morphism(Q2):
    R = builtin_R(Q2).A
    G = GHq(Q2).A
    T = tensor(R, G)
    images = {"Q": T.pure([R.gen("Q"), G.gen("u")]),
              "Q^-1": T.pure([R.gen("Q^-1"), G.gen("u^-1")]),
              "τ": T.pure([R.gen("τ"), G.one()]) + T.pure([R.gen("Q"), G.gen("v")])}
    assert check_morphism(images, R, T).ok


def test_non_termination_diagnostic(Q2):
    P = Presentation(Q2, ["a", "b"], [("ab", "ba"), ("ba", "ab")], check_order=False, step_budget=50)
    with pytest.raises(NonTerminationError) as exc:
        P("a*b")
    assert "a" in str(exc.value)


def test_order_check(Q2):
    with pytest.raises(ValueError):
        Presentation(Q2, ["s", "t"], [("st", "ts")])


def test_json_roundtrip(Q2):
    A = Hq(Q2).A
    B = Presentation.from_json(A.to_json(), Q2)
    assert B.format_terms(B("t*s*t").terms) == A.format_terms(A("t*s*t").terms)
    assert len(A.normal_monomials(3)) == len(B.normal_monomials(3))


def test_tensor_factors_commute(Q2):
    A = Hq(Q2).A
    T = tensor(A, A)
    x = T.pure([A.gen("t"), A.one()])
    y = T.pure([A.one(), A.gen("s")])
    assert x * y == y * x
