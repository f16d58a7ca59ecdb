import json
import os
from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from qsigalois.corepr import (
    Functional,
    coefficient_functionals,
    comodule_structure,
    corepresentation_hopf,
    format_entry,
    invariants_functor,
    pairing_coproduct,
    trivialization_iso,
)
from qsigalois.qsimod import QsiModuleSpec, first_example, three_dim_example
from qsigalois.scalars import cyclotomic, q_factorial, rationals
from qsigalois.seq import CFiniteSeq

F = rationals(2)


@pytest.fixture(scope="module")
def disc_two():
    return corepresentation_hopf(first_example(F), 2)


@pytest.fixture(scope="module")
def disc_three():
    return corepresentation_hopf(three_dim_example(F), 2)


def _brute_convolve(x, y, m, n):
    return sum((x.value(m + j, n - j) * y.value(m, j) for j in range(n + 1)), F.zero)


small = st.integers(-3, 3).map(Fraction)


@st.composite
def functionals(draw):
    comps = {}
    for n in range(draw(st.integers(0, 2)) + 1):
        ratio = draw(st.sampled_from([Fraction(1), Fraction(2), Fraction(1, 2), Fraction(-1)]))
        a = CFiniteSeq.geometric(F, ratio, draw(small))
        if draw(st.booleans()):
            a = a + CFiniteSeq.Z(F).scale(draw(small))
        comps[n] = a
    return Functional(F, comps)


@given(functionals(), functionals())
def test_convolution_matches_pairing_by_values(x, y):
    xy = x * y
    for m in range(-3, 4):
        for n in range(4):
            assert xy.value(m, n) == _brute_convolve(x, y, m, n)


@given(functionals(), functionals(), functionals())
def test_convolution_associative(x, y, z):
    assert (x * y) * z == x * (y * z)


@given(functionals())
def test_antipode_inverse_roundtrip(x):
    assert x.antipode().antipode_inverse() == x
    assert x.antipode_inverse().antipode() == x


def test_coefficient_functionals_against_matrix_powers():
    # oracle: sympy powers of the module matrices
    spec = three_dim_example(F)
    A = sympy.Matrix([[2, 0, 0], [1, 2, 0], [0, 0, 1]])
    B = sympy.Matrix([[0, 0, 0], [0, 0, 0], [1, 0, 0]])
    Y = coefficient_functionals(spec)
    for m in range(-3, 4):
        for n in range(3):
            M = A ** m * B ** n / sympy.Rational(q_factorial(n, F))
            got = Y.evaluate(m, n)
            assert [[sympy.Rational(x.numerator, x.denominator) for x in r] for r in got] == M.tolist()


def test_matrix_coefficients_are_a_corepresentation():
    Y = coefficient_functionals(three_dim_example(F)).entries
    n = len(Y)
    # Σ_k S(c_ik) c_kj = δ_ij ε
    for i in range(n):
        for j in range(n):
            acc = Functional.zero(F)
            for k in range(n):
                acc = acc + Y[i][k].antipode() * Y[k][j]
            assert acc == (Functional.epsilon(F) if i == j else Functional.zero(F))
    # ⟨Δc_ij, v⊗v'⟩ = Σ_k ⟨c_ik, v⟩⟨c_kj, v'⟩
    for m in range(-2, 3):
        for k in range(-2, 3):
            for a in range(2):
                for b in range(2):
                    for i in range(n):
                        for j in range(n):
                            rhs = sum(Y[i][l].value(m, a) * Y[l][j].value(k, b) for l in range(n))
                            assert pairing_coproduct(Y[i][j], m, a, k, b) == rhs


def test_discovery_two_dim(disc_two):
    d = disc_two
    assert set(d.generators) == {"e", "e^-1", "g"}
    assert d.relation_strings() == ["e*e^-1 = 1", "e^-1*e = 1", "g*e = (1/2)*e*g"]
    assert d.complete and d.bialgebra.ok and d.axioms.ok and d.confluent
    assert [t[0] for t in d.graded_dimensions] == [0, 1, 2, 3]
    Y = coefficient_functionals(first_example(F))
    assert [[format_entry(x, d) for x in r] for r in Y.entries] == [["e", "0"], ["g", "1"]]


def test_discovery_three_dim(disc_three):
    d = disc_three
    assert set(d.generators) == {"e", "e^-1", "f", "g"}
    assert sorted(d.relation_strings()) == sorted(
        ["e*e^-1 = 1", "e^-1*e = 1", "f*e = e*f", "g*e = (1/2)*e*g", "g*f = f*g - g"])
    assert all(p == i for _, p, i in d.graded_dimensions)
    assert d.graded_dimensions[-1][0] == 3
    assert d.bialgebra.ok and d.axioms.ok
    # witnesses are the library functionals
    assert d.witnesses["e"] == Functional.e(F)
    assert d.witnesses["f"] == Functional.f(F)
    assert d.witnesses["g"] == Functional.g(F)


def test_discovered_relations_hold_on_functionals(disc_three):
    e, f, g = (disc_three.witnesses[k] for k in "efg")
    assert e * f == f * e
    assert e * g == (g * e).scale(F.q)
    assert f * g - g * f == g
    assert e * disc_three.witnesses["e^-1"] == Functional.epsilon(F)


def test_discovery_json(disc_two):
    data = json.loads(json.dumps(disc_two.to_json()))
    assert data["discovered_relations"] == disc_two.relation_strings()
    assert data["complete_through_degree"] is True
    assert "g" in data["witnesses"]


def test_comodule_and_trivialization():
    for spec in (first_example(F), three_dim_example(F)):
        assert comodule_structure(spec).ok
        rep = trivialization_iso(spec, 2)
        assert rep.ok and rep.checked > 0
        inv = invariants_functor(spec, 2, other=first_example(F))
        assert inv.ok and inv.invariants_dimension == spec.n


def test_trivial_module_discovery():
    d = corepresentation_hopf(QsiModuleSpec.trivial(F), 2)
    assert d.generators == []
    assert d.complete


def test_refusals():
    with pytest.raises(ValueError):
        coefficient_functionals(first_example(cyclotomic(3)))
    F2 = rationals(-1)
    spec = QsiModuleSpec(F2, [[1, 0], [0, -1]], [[0, 1], [1, 0]])
    with pytest.raises(ValueError):
        coefficient_functionals(spec)


def test_demo_file_matches_builder(demo_data):
    with open(os.path.join(demo_data, "three_dim_rep.json")) as fh:
        assert QsiModuleSpec.from_json(json.load(fh), F) == three_dim_example(F)
