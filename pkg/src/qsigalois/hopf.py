"""Hopf algebra structures on presentations and the built-in examples.

A :class:`HopfPresentation` stores the coproduct, counit and antipode on
generators.  Coproduct and counit extend multiplicatively, the antipode
anti-multiplicatively.  The axioms are checked on every normal monomial
up to a degree bound.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .ncalg import (NCElement, Presentation, TensorPresentation, _accumulate,
                    check_morphism, map_raw, tensor)
from .scalars import ScalarField, q_factorial


@dataclass
class HopfReport:
    ok: bool
    checked: int = 0
    failures: list = field(default_factory=list)  # (law, monomial, detail)

    def __bool__(self):
        return self.ok


class HopfPresentation:
    """Presentation plus Δ, ε, S given on generators.

    ``coproduct`` maps generator names to elements of ``self.T2`` (or to
    lists of ``(coeff, left, right)`` with ``left``/``right`` parseable
    in the algebra); ``counit`` to scalars; ``antipode`` to elements.
    """

    def __init__(self, algebra: Presentation, coproduct: dict, counit: dict,
                 antipode: dict, name: str = ""):
        self.A = algebra
        self.F = algebra.F
        self.name = name or algebra.name
        self.T2 = tensor(algebra, algebra)
        self._T3 = None
        n = len(algebra.generators)
        self._delta = [self._as_tensor(self._get(coproduct, g)) for g in range(n)]
        self._eps = [self.F(self._get(counit, g)) for g in range(n)]
        self._S = [self._as_elem(self._get(antipode, g)) for g in range(n)]
        self._delta_cache = {}
        self._S_cache = {}

    def _get(self, table, g):
        nm = self.A.generators[g]
        if nm in table:
            return table[nm]
        if g in table:
            return table[g]
        raise KeyError(f"Hopf data missing for generator {nm}")

    def _as_elem(self, x) -> NCElement:
        if isinstance(x, NCElement):
            return x
        if isinstance(x, (int,)) or not isinstance(x, str):
            return self.A.scalar(x)
        return self.A(x)

    def _as_tensor(self, x) -> NCElement:
        if isinstance(x, NCElement):
            return x
        total = self.T2.zero()
        for c, left, right in x:
            total = total + self.T2.pure([self._as_elem(left), self._as_elem(right)]) * self.F(c)
        return total

    @property
    def T3(self) -> TensorPresentation:
        if self._T3 is None:
            self._T3 = tensor(self.A, self.A, self.A)
        return self._T3

    def __repr__(self):
        return f"<HopfPresentation {self.name}: {self.A.generators}>"

    # structure maps -------------------------------------------------------

    def delta_word(self, w) -> NCElement:
        hit = self._delta_cache.get(w)
        if hit is None:
            if not w:
                hit = self.T2.one()
            else:
                hit = self.delta_word(w[:-1]) * self._delta[w[-1]]
            self._delta_cache[w] = hit
        return hit

    def coproduct(self, x: NCElement) -> NCElement:
        out = self.T2.zero()
        for w, c in x.terms.items():
            out = out + self.delta_word(w) * c
        return out

    def counit(self, x: NCElement):
        return map_raw(x.terms, self._eps, self.F, None)

    def antipode_word(self, w) -> NCElement:
        hit = self._S_cache.get(w)
        if hit is None:
            if not w:
                hit = self.A.one()
            else:
                hit = self._S[w[0]] if len(w) == 1 else self.antipode_word(w[1:]) * self._S[w[0]]
            self._S_cache[w] = hit
        return hit

    def antipode(self, x: NCElement) -> NCElement:
        out = self.A.zero()
        for w, c in x.terms.items():
            out = out + self.antipode_word(w) * c
        return out

    def generator_data(self):
        return {
            g: (self._delta[i], self._eps[i], self._S[i])
            for i, g in enumerate(self.A.generators)
        }

    # serialisation ----------------------------------------------------------

    def to_json(self) -> dict:
        data = self.A.to_json()
        data["name"] = self.name
        cop = {}
        for i, g in enumerate(self.A.generators):
            terms = []
            for w, c in self._delta[i].terms.items():
                left, right = self.T2.split(w)
                terms.append([self.F.format(c), self.A.format_word(left), self.A.format_word(right)])
            cop[g] = terms
        data["coproduct"] = cop
        data["counit"] = {g: self.F.format(self._eps[i]) for i, g in enumerate(self.A.generators)}
        data["antipode"] = {g: repr(self._S[i]) for i, g in enumerate(self.A.generators)}
        return data

    @classmethod
    def from_json(cls, data: dict, F: ScalarField) -> "HopfPresentation":
        A = Presentation.from_json(data, F)
        cop = {g: [(c, l, r) for c, l, r in terms] for g, terms in data["coproduct"].items()}
        return cls(A, cop, data["counit"], data["antipode"], name=data.get("name", ""))


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------


def coproduct(x: NCElement, H: HopfPresentation) -> NCElement:
    return H.coproduct(x)


def antipode(x: NCElement, H: HopfPresentation) -> NCElement:
    return H.antipode(x)


def counit(x: NCElement, H: HopfPresentation):
    return H.counit(x)


def verify_bialgebra(H: HopfPresentation) -> HopfReport:
    """Δ, ε and S respect every defining relation."""
    A = H.A
    fails = []
    rep = check_morphism({i: H._delta[i] for i in range(len(A.generators))}, A, H.T2)
    fails += [("coproduct", rel, img) for rel, img in rep.violations]
    rep = check_morphism({i: H._eps[i] for i in range(len(A.generators))}, A, None)
    fails += [("counit", rel, img) for rel, img in rep.violations]
    for rel in A.relations():
        img = A.zero()
        for w, c in rel.items():
            img = img + H.antipode_word(tuple(w)) * c
        if not img.is_zero():
            fails.append(("antipode", A.format_terms(rel) + " = 0", img))
    return HopfReport(not fails, len(A.relations()), fails)


def _delta_left(H: HopfPresentation, x: NCElement) -> NCElement:
    """(Δ ⊗ id) of an element of the tensor square."""
    T3 = H.T3
    out = {}
    for w, c in x.terms.items():
        a, b = H.T2.split(w)
        for w2, c2 in H.delta_word(a).terms.items():
            a1, a2 = H.T2.split(w2)
            _accumulate(out, T3.join([a1, a2, b]), c * c2)
    return NCElement(T3, out)


def _delta_right(H: HopfPresentation, x: NCElement) -> NCElement:
    T3 = H.T3
    out = {}
    for w, c in x.terms.items():
        a, b = H.T2.split(w)
        for w2, c2 in H.delta_word(b).terms.items():
            b1, b2 = H.T2.split(w2)
            _accumulate(out, T3.join([a, b1, b2]), c * c2)
    return NCElement(T3, out)


def convolve_with_antipode(H: HopfPresentation, x: NCElement, side: str) -> NCElement:
    """m(S ⊗ id)Δ(x) for side='left', m(id ⊗ S)Δ(x) for side='right'."""
    d = H.coproduct(x)
    out = H.A.zero()
    for w, c in d.terms.items():
        a, b = H.T2.split(w)
        if side == "left":
            term = H.antipode_word(a) * H.A.normal_form(b)
        else:
            term = H.A.normal_form(a) * H.antipode_word(b)
        out = out + term * c
    return out


def verify_hopf_axioms(H: HopfPresentation, degree_bound: int = 4) -> HopfReport:
    """Coassociativity, counit and antipode laws on normal monomials."""
    A = H.A
    fails = []
    monos = A.normal_monomials(degree_bound)
    for w in monos:
        x = NCElement(A, {w: H.F.one})
        label = A.format_word(w)
        d = H.coproduct(x)
        if _delta_left(H, d) != _delta_right(H, d):
            fails.append(("coassociativity", label, None))
        left = {}
        right = {}
        for tw, c in d.terms.items():
            a, b = H.T2.split(tw)
            ea = map_raw({a: 1}, H._eps, H.F, None)
            eb = map_raw({b: 1}, H._eps, H.F, None)
            _accumulate(left, b, ea * c)
            _accumulate(right, a, eb * c)
        if A.normal_form(left) != x or A.normal_form(right) != x:
            fails.append(("counit", label, None))
        unit = A.scalar(H.counit(x))
        for side in ("left", "right"):
            if convolve_with_antipode(H, x, side) != unit:
                fails.append((f"antipode ({side})", label, None))
    return HopfReport(not fails, len(monos), fails)


# ---------------------------------------------------------------------------
# built-in Hopf algebras
# ---------------------------------------------------------------------------


def Hq(F: ScalarField) -> HopfPresentation:
    """C<s, s^-1, t> with ts = q st, Δt = s⊗t + t⊗1."""
    A = Presentation(F, ["s", "s^-1", "t"], [("ts", "q*st")], inverses={"s^-1": "s"}, name="H_q")
    return HopfPresentation(
        A,
        {"s": [(1, "s", "s")], "s^-1": [(1, "s^-1", "s^-1")], "t": [(1, "s", "t"), (1, "t", "1")]},
        {"s": 1, "s^-1": 1, "t": 0},
        {"s": "s^-1", "s^-1": "s", "t": "-q*t*s^-1"},
        name="H_q",
    )


def GHq(F: ScalarField) -> HopfPresentation:
    """C<u, u^-1, v>/(uv - q vu), Δv = u⊗v + v⊗1."""
    A = Presentation(F, ["u", "u^-1", "v"], [("vu", "q^-1*uv")], inverses={"u^-1": "u"}, name="GH_q")
    return HopfPresentation(
        A,
        {"u": [(1, "u", "u")], "u^-1": [(1, "u^-1", "u^-1")], "v": [(1, "u", "v"), (1, "v", "1")]},
        {"u": 1, "u^-1": 1, "v": 0},
        {"u": "u^-1", "u^-1": "u", "v": "-u^-1*v"},
        name="GH_q",
    )


def Taft(N: int, F: ScalarField | None = None) -> HopfPresentation:
    """H_q / (s^N - 1, t^N) at a primitive N-th root of unity q."""
    from .scalars import cyclotomic

    F = F or cyclotomic(N)
    if F.root_of_unity_order() != N:
        raise ValueError(f"Taft({N}) needs q to be a primitive {N}-th root of unity")
    A = Presentation(F, ["s", "t"], [("ts", "q*st"), ("s" * N, "1"), ("t" * N, "0")],
                     name=f"Taft({N})")
    sinv = "s^%d" % (N - 1) if N > 2 else "s"
    return HopfPresentation(
        A,
        {"s": [(1, "s", "s")], "t": [(1, "s", "t"), (1, "t", "1")]},
        {"s": 1, "t": 0},
        {"s": sinv, "t": f"-{sinv}*t"},
        name=f"Taft({N})",
    )


def frakH(F: ScalarField) -> HopfPresentation:
    """C[e, e^-1, f] ⊗ C[g] with eg = q ge, fg - gf = g, Δg = 1⊗g + g⊗e."""
    A = Presentation(F, ["e", "e^-1", "f", "g"],
                     [("fe", "ef"), ("ge", "q^-1*eg"), ("gf", "fg - g")],
                     inverses={"e^-1": "e"}, name="h")
    return HopfPresentation(
        A,
        {"e": [(1, "e", "e")], "e^-1": [(1, "e^-1", "e^-1")],
         "f": [(1, "f", "1"), (1, "1", "f")], "g": [(1, "1", "g"), (1, "g", "e")]},
        {"e": 1, "e^-1": 1, "f": 0, "g": 0},
        {"e": "e^-1", "e^-1": "e", "f": "-f", "g": "-g*e^-1"},
        name="h",
    )


def galois_group_12_1(F: ScalarField) -> HopfPresentation:
    """Hopf algebra of the three-dimensional example with a Jordan block.

    Relations ee' = e'e = 1, eg = q ge, ef = fe, fg - gf = g;
    Δf = f⊗1 + 1⊗f, Δg = g⊗1 + e⊗g.
    """
    A = Presentation(F, ["e", "e^-1", "f", "g"],
                     [("fe", "ef"), ("ge", "q^-1*eg"), ("gf", "fg - g")],
                     inverses={"e^-1": "e"}, name="G(jordan)")
    return HopfPresentation(
        A,
        {"e": [(1, "e", "e")], "e^-1": [(1, "e^-1", "e^-1")],
         "f": [(1, "f", "1"), (1, "1", "f")], "g": [(1, "g", "1"), (1, "e", "g")]},
        {"e": 1, "e^-1": 1, "f": 0, "g": 0},
        {"e": "e^-1", "e^-1": "e", "f": "-f", "g": "-e^-1*g"},
        name="G(jordan)",
    )


def galois_group_12_3(F: ScalarField, l) -> HopfPresentation:
    """Hopf algebra of the diagonal-times-l example.

    Relations eg = q ge, hg = l gh, eh = he (needed for Δ to respect
    hg = l gh); e, h grouplike, Δg = g⊗1 + e⊗g.
    """
    l = F(l)
    A = Presentation(F, ["e", "e^-1", "g", "h", "h^-1"],
                     [("ge", "q^-1*eg"), ("he", "eh"), ("hg", {(2, 3): l})],
                     inverses={"e^-1": "e", "h^-1": "h"}, name="G(scaled)")
    return HopfPresentation(
        A,
        {"e": [(1, "e", "e")], "e^-1": [(1, "e^-1", "e^-1")],
         "h": [(1, "h", "h")], "h^-1": [(1, "h^-1", "h^-1")],
         "g": [(1, "g", "1"), (1, "e", "g")]},
        {"e": 1, "e^-1": 1, "h": 1, "h^-1": 1, "g": 0},
        {"e": "e^-1", "e^-1": "e", "h": "h^-1", "h^-1": "h", "g": "-e^-1*g"},
        name="G(scaled)",
    )


BUILTINS = {
    "Hq": Hq,
    "GHq": GHq,
    "frakH": frakH,
    "G12_1": galois_group_12_1,
}


# ---------------------------------------------------------------------------
# the v-basis of H_q
# ---------------------------------------------------------------------------


def _require_generic(F: ScalarField, n: int):
    if n > 0 and F.root_of_unity_order() is not None:
        raise ValueError("the v-basis needs q not a root of unity when n > 0")


def _s_power(A: Presentation, m: int) -> NCElement:
    g = A.gen("s") if m >= 0 else A.gen("s^-1")
    return g ** abs(m)


def hq_v_basis(H: HopfPresentation, m: int, n: int) -> NCElement:
    """v_{m,n} = s^m t^n / [n]_q! in H_q."""
    _require_generic(H.F, n)
    A = H.A
    return _s_power(A, m) * A.gen("t") ** n * (1 / q_factorial(n, H.F))


def hq_coproduct_v(H: HopfPresentation, m: int, n: int) -> NCElement:
    """Σ_{i+j=n} v_{m+j,i} ⊗ v_{m,j}, expanded in the tensor square."""
    _require_generic(H.F, n)
    out = H.T2.zero()
    for i in range(n + 1):
        j = n - i
        out = out + H.T2.pure([hq_v_basis(H, m + j, i), hq_v_basis(H, m, j)])
    return out


def hq_antipode_v(F: ScalarField, m: int, n: int):
    """S(v_{m,n}) = c · v_{-(m+n), n}; returns (c, (-(m+n), n))."""
    _require_generic(F, n)
    c = F.power(n * (n + 1) // 2 - n * (m + n))
    if n % 2:
        c = -c
    return c, (-(m + n), n)
