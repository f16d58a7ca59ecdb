"""Functionals on H_q and the co-representation Hopf algebra of a module.

A :class:`Functional` x is recorded by its values on the basis
``v_{m,n} = s^m t^n / [n]_q!``: for each t-degree n in a finite support,
the bilateral sequence m ↦ ⟨x, v_{m,n}⟩, which is C-finite.  Products,
antipodes and the H_q-action all stay inside this class, and equality is
decided degree by degree.

:func:`corepresentation_hopf` computes the Hopf subalgebra generated by the
coefficient functionals of a module together with a presentation whose
relations are found up to a degree bound.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from . import _poly
from ._linalg import SparseSpan, nullspace, rank, solve as solve_linear
from .hopf import HopfPresentation, HopfReport, verify_bialgebra, verify_hopf_axioms
from .ncalg import NCElement, Presentation, _deglex_key, check_local_confluence
from .qsimod import QsiModuleSpec, _identity, nilpotency_index, require_valid
from .scalars import ScalarField, q_binomial, q_factorial, q_integer
from .seq import CFiniteSeq, SeqMatrix

DEFAULT_ORBIT_DEPTH = 4


class Functional:
    """Finite t-support functional: ``comps[n]`` is m ↦ ⟨x, v_{m,n}⟩."""

    __slots__ = ("F", "comps")

    def __init__(self, F: ScalarField, comps: dict):
        self.F = F
        self.comps = {n: a for n, a in comps.items() if not a.is_zero()}

    # basic functionals ----------------------------------------------------

    @classmethod
    def zero(cls, F):
        return cls(F, {})

    @classmethod
    def epsilon(cls, F):
        return cls(F, {0: CFiniteSeq.constant(F, 1)})

    @classmethod
    def e(cls, F):
        return cls(F, {0: CFiniteSeq.Q(F)})

    @classmethod
    def e_inverse(cls, F):
        return cls(F, {0: CFiniteSeq.geometric(F, 1 / F.q)})

    @classmethod
    def f(cls, F):
        return cls(F, {0: CFiniteSeq.Z(F)})

    @classmethod
    def g(cls, F):
        return cls(F, {1: CFiniteSeq.constant(F, 1)})

    # evaluation -------------------------------------------------------------

    def value(self, m: int, n: int):
        a = self.comps.get(n)
        return self.F.zero if a is None else a[m]

    def comp(self, n: int) -> CFiniteSeq:
        a = self.comps.get(n)
        return CFiniteSeq.zero(self.F) if a is None else a

    @property
    def support(self):
        return sorted(self.comps)

    @property
    def top(self) -> int:
        return max(self.comps) if self.comps else -1

    def counit(self):
        return self.value(0, 0)

    # arithmetic -------------------------------------------------------------

    def __add__(self, other):
        keys = set(self.comps) | set(other.comps)
        return Functional(self.F, {n: self.comp(n) + other.comp(n) for n in keys})

    def __neg__(self):
        return self.scale(-self.F.one)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return Functional(self.F, {n: a.scale(c) for n, a in self.comps.items()})

    def __mul__(self, other):
        if isinstance(other, Functional):
            return convolve(self, other)
        return self.scale(other)

    def __rmul__(self, c):
        return self.scale(c)

    def __pow__(self, k: int):
        out = Functional.epsilon(self.F)
        for _ in range(k):
            out = out * self
        return out

    def is_zero(self) -> bool:
        return not self.comps

    def __eq__(self, other):
        if not isinstance(other, Functional):
            return NotImplemented
        keys = set(self.comps) | set(other.comps)
        return all(self.comp(n) == other.comp(n) for n in keys)

    __hash__ = None

    def antipode(self) -> "Functional":
        return antipode_functional(self)

    def antipode_inverse(self) -> "Functional":
        return antipode_inverse_functional(self)

    def act(self, h: str) -> "Functional":
        """Left action of ``s`` or ``t``: ⟨h⇀x, v⟩ = ⟨x, v h⟩."""
        F = self.F
        if h == "s":
            return Functional(F, {n: a.shift(1).scale(F.power(n)) for n, a in self.comps.items()})
        if h == "t":
            return Functional(F, {n - 1: a.scale(q_integer(n, F))
                                  for n, a in self.comps.items() if n >= 1})
        raise ValueError(f"unknown generator {h!r}")

    def table(self, m_range=range(-4, 5), n_range=range(0, 4)) -> dict:
        return {f"{m},{n}": self.F.format(self.value(m, n)) for n in n_range for m in m_range}

    def __repr__(self):
        parts = [f"n={n}: {a!r}" for n, a in sorted(self.comps.items())]
        return "Functional(" + "; ".join(parts) + ")"


def convolve(x: Functional, y: Functional) -> Functional:
    """⟨xy, v_{m,n}⟩ = Σ_{i+j=n} ⟨x, v_{m+j,i}⟩⟨y, v_{m,j}⟩."""
    F = x.F
    out = {}
    for i, a in x.comps.items():
        for j, b in y.comps.items():
            term = a.shift(j) * b
            out[i + j] = out[i + j] + term if i + j in out else term
    return Functional(F, out)


def _antipode_sign(F, n):
    c = F.one if n % 2 == 0 else -F.one
    return c


def antipode_functional(x: Functional) -> Functional:
    """⟨S(x), v_{m,n}⟩ = ⟨x, S(v_{m,n})⟩ with S(v_{m,n}) = ± q^{n(n+1)/2 − n(m+n)} v_{−m−n,n}."""
    F = x.F
    if x.top > 0 and F.root_of_unity_order() is not None:
        raise ValueError("the functional antipode needs q not a root of unity")
    out = {}
    for n, a in x.comps.items():
        c = _antipode_sign(F, n) * F.power(n * (n + 1) // 2 - n * n)
        out[n] = (a.reflect(-n) * CFiniteSeq.geometric(F, F.power(-n))).scale(c)
    return Functional(F, out)


def antipode_inverse_functional(x: Functional) -> Functional:
    """Inverse of :func:`antipode_functional`."""
    F = x.F
    if x.top > 0 and F.root_of_unity_order() is not None:
        raise ValueError("the functional antipode needs q not a root of unity")
    out = {}
    for n, a in x.comps.items():
        c = _antipode_sign(F, n) * F.power(-(n * (n + 1) // 2))
        out[n] = (a.reflect(-n) * CFiniteSeq.geometric(F, F.power(-n))).scale(c)
    return Functional(F, out)


def pairing_coproduct(x: Functional, m: int, n: int, k: int, l: int):
    """⟨Δx, v_{m,n} ⊗ v_{k,l}⟩ = q^{nk} binom(n+l, n) ⟨x, v_{m+k,n+l}⟩."""
    F = x.F
    return F.power(n * k) * q_binomial(n + l, n, F) * x.value(m + k, n + l)


# ---------------------------------------------------------------------------
# exact linear algebra on functionals
# ---------------------------------------------------------------------------


def _window(seqs) -> int:
    """A window length on which a combination of ``seqs`` vanishing implies it is zero."""
    seen = set()
    total = 0
    for a in seqs:
        if a.order == 0:
            continue
        key = tuple(a.rec)
        if key in seen:
            continue
        seen.add(key)
        total += a.order
    return total


def evaluation_rows(funcs):
    """Rows (one per sample point) of the evaluation matrix of ``funcs``.

    A combination of the functionals is zero exactly when it is zero on
    every row.
    """
    if not funcs:
        return []
    F = funcs[0].F
    degrees = sorted(set().union(*[set(x.comps) for x in funcs]))
    rows = []
    for n in degrees:
        W = _window([x.comp(n) for x in funcs])
        for m in range(W):
            rows.append([x.value(m, n) for x in funcs])
    return rows


def functional_rank(funcs) -> int:
    return rank(evaluation_rows(funcs), len(funcs)) if funcs else 0


def express(target: Functional, funcs):
    """Coefficients c with Σ c_i funcs[i] = target, or None."""
    F = target.F
    allf = list(funcs) + [target]
    rows = evaluation_rows(allf)
    A = [r[:-1] for r in rows]
    b = [r[-1] for r in rows]
    if not rows:
        return [F.zero] * len(funcs)
    return solve_linear(A, b, len(funcs), F.zero)


class FunctionalSpan:
    """Incremental echelon basis of a span of functionals.

    Functionals are compared on sample points (n, m), m in a window whose
    length is the degree of the lcm of all recurrences seen at that n;
    this makes every membership answer exact.  Items carry a label.
    """

    def __init__(self, F: ScalarField):
        self.F = F
        self._ann = {}  # n -> annihilating polynomial
        self._points = []
        self._items = []  # (label, functional)
        self._rows = []  # echelon: (pivot, vector, combo)

    def __len__(self):
        return len(self._rows)

    @property
    def labels(self):
        return [lab for lab, _ in self._items]

    def _grow(self, x: Functional) -> bool:
        grown = False
        for n, a in x.comps.items():
            old = self._ann.get(n, [self.F.one])
            new = _poly.lcm(old, a.rec)
            if len(new) != len(old):
                self._ann[n] = new
                grown = True
            else:
                self._ann.setdefault(n, old)
        if grown:
            self._points = [(n, m) for n in sorted(self._ann) for m in range(len(self._ann[n]) - 1)]
        return grown

    def _vector(self, x: Functional):
        return [x.value(m, n) for n, m in self._points]

    def _reduce(self, vec, combo):
        vec = list(vec)
        for piv, row, rcombo in self._rows:
            c = vec[piv]
            if c != 0:
                vec = [a - c * b for a, b in zip(vec, row)]
                for k, v in rcombo.items():
                    combo[k] = combo.get(k, 0) - c * v
        return vec, combo

    def _insert(self, vec, combo) -> bool:
        vec, combo = self._reduce(vec, combo)
        piv = next((i for i, a in enumerate(vec) if a != 0), None)
        if piv is None:
            return False
        inv = 1 / vec[piv]
        self._rows.append((piv, [a * inv for a in vec], {k: v * inv for k, v in combo.items()}))
        return True

    def _rebuild(self):
        items = self._items
        self._items, self._rows = [], []
        for lab, x in items:
            self._items.append((lab, x))
            self._insert(self._vector(x), {lab: self.F.one})

    def add(self, label, x: Functional) -> bool:
        """Add x if it is independent of the current span."""
        if self._grow(x):
            self._rebuild()
        vec = self._vector(x)
        if self._insert(vec, {label: self.F.one}):
            self._items.append((label, x))
            return True
        return False

    def express(self, x: Functional):
        """Coefficients (label -> scalar) writing x in the span, or None."""
        if self._grow(x):
            self._rebuild()
        vec, combo = self._reduce(self._vector(x), {})
        if any(a != 0 for a in vec):
            return None
        return {k: -v for k, v in combo.items() if v != 0}


# ---------------------------------------------------------------------------
# coefficient functionals
# ---------------------------------------------------------------------------


@dataclass
class CoreprMatrix:
    spec: QsiModuleSpec
    entries: list  # n×n Functionals

    @property
    def n(self):
        return len(self.entries)

    def evaluate(self, m: int, n: int):
        return [[c.value(m, n) for c in row] for row in self.entries]


def coefficient_functionals(spec: QsiModuleSpec) -> CoreprMatrix:
    """⟨c_ij, v_{m,n}⟩ = (A^m B^n / [n]_q!)_ij for the module matrices A, B."""
    require_valid(spec)
    F = spec.F
    if F.root_of_unity_order() is not None:
        raise ValueError("coefficient functionals need q not a root of unity")
    k = nilpotency_index(spec.B, F)
    if k is None:
        raise ValueError("B is not nilpotent: the coefficient functionals have infinite t-support")
    power = SeqMatrix.power_sequence(F, spec.A)
    comps = []
    Bn = _identity(spec.n, F)
    for n in range(k):
        Cn = [[x / q_factorial(n, F) for x in row] for row in Bn]
        comps.append(power * SeqMatrix.constant(F, Cn))
        Bn = [[sum((Bn[i][l] * spec.B[l][j] for l in range(spec.n)), F.zero)
               for j in range(spec.n)] for i in range(spec.n)]
    entries = [[Functional(F, {n: comps[n].rows[i][j] for n in range(k)})
                for j in range(spec.n)] for i in range(spec.n)]
    return CoreprMatrix(spec, entries)


# ---------------------------------------------------------------------------
# words in functionals
# ---------------------------------------------------------------------------


class _WordAlgebra:
    """Words in named functionals, evaluated by convolution (cached).

    ``span(d)`` is spanned by a set of standard words of degree ≤ d, grown
    one degree at a time by multiplying the newest standard words by each
    generator.
    """

    def __init__(self, F, names, funcs):
        self.F = F
        self.names = list(names)
        self.funcs = list(funcs)
        self._cache = {(): Functional.epsilon(F)}
        self._span = FunctionalSpan(F)
        self._span.add((), self._cache[()])
        self._levels = [[()]]

    def value(self, w) -> Functional:
        hit = self._cache.get(w)
        if hit is None:
            hit = self.value(w[:-1]) * self.funcs[w[-1]]
            self._cache[w] = hit
        return hit

    def words(self, max_degree: int):
        out = []
        for d in range(max_degree + 1):
            out.extend(itertools.product(range(len(self.names)), repeat=d))
        return out

    def span(self, max_degree: int) -> FunctionalSpan:
        while len(self._levels) <= max_degree:
            new = []
            cands = sorted({w + (g,) for w in self._levels[-1] for g in range(len(self.names))},
                           key=_deglex_key)
            for w in cands:
                if self._span.add(w, self.value(w)):
                    new.append(w)
            self._levels.append(new)
        return self._span

    def dimension(self, d: int) -> int:
        self.span(d)
        return sum(len(level) for level in self._levels[:d + 1])

    def combine(self, terms: dict) -> Functional:
        total = Functional.zero(self.F)
        for w, c in terms.items():
            total = total + self.value(w).scale(c)
        return total

    def member(self, x: Functional, max_degree: int):
        return self.span(max_degree).express(x)


_LIBRARY = (("e", Functional.e), ("e^-1", Functional.e_inverse),
            ("f", Functional.f), ("g", Functional.g))


def library_name(x: Functional):
    for nm, make in _LIBRARY:
        if x == make(x.F):
            return nm
    return None


@dataclass
class DiscoveredHopfPresentation:
    hopf: HopfPresentation
    witnesses: dict  # generator name -> Functional
    relations: list  # kept relations as dicts word -> coefficient
    relation_degree_bound: int
    graded_dimensions: list  # (degree, presented, functional image)
    complete: bool
    bialgebra: HopfReport
    axioms: HopfReport
    confluent: bool
    notes: list = field(default_factory=list)

    @property
    def generators(self):
        return list(self.hopf.A.generators)

    def relation_strings(self) -> list:
        A = self.hopf.A
        out = []
        for rel in self.relations:
            lead = max(rel, key=_deglex_key)
            rest = {w: -c for w, c in rel.items() if w != lead}
            out.append(f"{A.format_word(lead)} = {A.format_terms(rest) if rest else '0'}")
        return out

    def witness_table(self) -> dict:
        return {nm: x.table() for nm, x in self.witnesses.items()}

    def to_json(self) -> dict:
        data = self.hopf.to_json()
        data["relation_degree_bound"] = self.relation_degree_bound
        data["discovered_relations"] = self.relation_strings()
        data["graded_dimensions"] = [list(t) for t in self.graded_dimensions]
        data["complete_through_degree"] = self.complete
        data["witnesses"] = self.witness_table()
        data["notes"] = list(self.notes)
        return data


def _dedupe_generators(F, cands):
    """Keep candidates not already in the span of ε and earlier choices."""
    chosen = []
    for nm, x in cands:
        if x.is_zero():
            continue
        if express(x, [Functional.epsilon(F)] + [c for _, c in chosen]) is not None:
            continue
        chosen.append((nm, x))
    return chosen


def _generated_algebra(F, gens, spec_entries, membership_degree, depth):
    """Close the entries under the antipode; returns [(name, functional)]."""
    gens = list(gens)
    notes = []
    frontier = list(gens)
    for _ in range(depth):
        new = []
        for nm, x in frontier:
            y = x.antipode()
            allg = gens + new
            W = _WordAlgebra(F, [n for n, _ in allg], [f for _, f in allg])
            if W.member(y, membership_degree) is None:
                new.append((f"S({nm})", y))
        if not new:
            return gens, notes
        gens += new
        frontier = new
    raise RuntimeError(f"antipode orbit did not stabilize within depth {depth}")


def _substitute_library(F, gens, membership_degree):
    """Swap unnamed generators for library functionals generating the same algebra."""
    gens = list(gens)
    notes = []
    for idx in range(len(gens)):
        nm, x = gens[idx]
        if library_name(x) is not None:
            gens[idx] = (library_name(x), x)
            continue
        present = {library_name(f) for _, f in gens}
        for lib, make in _LIBRARY:
            if lib in present:
                continue
            y = make(F)
            W = _WordAlgebra(F, [n for n, _ in gens], [f for _, f in gens])
            if W.member(y, membership_degree) is None:
                continue
            others = gens[:idx] + [(lib, y)] + gens[idx + 1:]
            W2 = _WordAlgebra(F, [n for n, _ in others], [f for _, f in others])
            if W2.member(x, membership_degree) is None:
                continue
            notes.append(f"generator {nm} replaced by {lib}")
            gens = others
            break
    return gens, notes


def _order_generators(gens):
    order = {nm: i for i, (nm, _) in enumerate(_LIBRARY)}
    return sorted(gens, key=lambda p: (order.get(p[0], len(order)), p[0]))


def _find_inverses(F, gens):
    inv = {}
    eps = Functional.epsilon(F)
    for (a, x), (b, y) in itertools.combinations(gens, 2):
        if x * y == eps and y * x == eps:
            inv[b] = a
    return inv


def _kernel_relations(W: _WordAlgebra, D: int):
    """Reduced echelon basis of the relations among words of degree ≤ D."""
    span = W.span(D)
    standard = set(span.labels)
    basis = SparseSpan(_deglex_key)
    for w in W.words(D):
        if w in standard:
            continue
        combo = span.express(W.value(w))
        rel = {w: W.F.one}
        for u, c in combo.items():
            rel[u] = rel.get(u, 0) - c
        basis.add(rel)
    return basis.reduced()


def _minimal_relations(rels, ngens: int, D: int):
    """Greedy minimal subset generating all of ``rels`` inside degree D + 2."""
    rels = sorted(rels, key=lambda r: _deglex_key(max(r, key=_deglex_key)))
    span = SparseSpan(_deglex_key)
    kept = []
    limit = D + 2
    for r in rels:
        if span.contains(r):
            continue
        kept.append(r)
        deg = max(len(w) for w in r)
        for du in range(limit - deg + 1):
            for dw in range(limit - deg - du + 1):
                for u in itertools.product(range(ngens), repeat=du):
                    for w in itertools.product(range(ngens), repeat=dw):
                        span.add({u + x + w: c for x, c in r.items()})
    return kept


def _fit_coproduct(F, x: Functional, basis_words, W: _WordAlgebra):
    """Solve Δx = Σ a_{uw} u ⊗ w by pairing against v_{m,n} ⊗ v_{k,l}."""
    pairs = [(u, w) for u in basis_words for w in basis_words]
    vals = {u: W.value(u) for u in basis_words}
    top = max([x.top] + [vals[u].top for u in basis_words])
    rows, rhs = [], []
    for n in range(top + 1):
        for l in range(top + 1):
            left = [vals[u].comp(n) for u in basis_words] + [x.comp(n + l)]
            right = [vals[u].comp(l) for u in basis_words] + [
                (x.comp(n + l) * CFiniteSeq.geometric(F, F.power(n)))]
            W1, W2 = max(_window(left), 1), max(_window(right), 1)
            for m in range(W1):
                for k in range(W2):
                    rows.append([vals[u].value(m, n) * vals[w].value(k, l) for u, w in pairs])
                    rhs.append(pairing_coproduct(x, m, n, k, l))
    sol = solve_linear(rows, rhs, len(pairs), F.zero)
    if sol is None:
        return None
    return [(c, u, w) for (u, w), c in zip(pairs, sol) if c != 0]


def _terms_to_element(P: Presentation, terms: dict) -> NCElement:
    return P.element({}) + sum((P.normal_form({w: c}) for w, c in terms.items()), P.zero())


def corepresentation_hopf(spec: QsiModuleSpec, relation_degree_bound: int = 2,
                          orbit_depth: int = DEFAULT_ORBIT_DEPTH,
                          membership_degree: int | None = None) -> DiscoveredHopfPresentation:
    F = spec.F
    D = relation_degree_bound
    mdeg = membership_degree if membership_degree is not None else D + 1
    Y = coefficient_functionals(spec)
    cands = [(f"c{i + 1}{j + 1}", Y.entries[i][j]) for i in range(Y.n) for j in range(Y.n)]
    gens = _dedupe_generators(F, cands)
    notes = []
    gens, more = _generated_algebra(F, gens, Y, mdeg, orbit_depth)
    notes += more
    gens, more = _substitute_library(F, gens, mdeg)
    notes += more
    gens = _order_generators(gens)
    inverses = _find_inverses(F, gens)
    # inverse partners of unnamed generators read x^-1
    rename = {}
    for b, a in inverses.items():
        if library_name(dict(gens)[b]) is None:
            rename[b] = a + "^-1"
    gens = [(rename.get(nm, nm), x) for nm, x in gens]
    inverses = {rename.get(b, b): a for b, a in inverses.items()}
    names = [nm for nm, _ in gens]
    W = _WordAlgebra(F, names, [x for _, x in gens])

    rels = _kernel_relations(W, D)
    kept = _minimal_relations(rels, len(names), D)
    P0 = Presentation(F, names, inverses=inverses, check_order=False, derive_inverse_rules=False)
    rules = []
    for r in kept:
        lead = max(r, key=_deglex_key)
        c = r[lead]
        rhs = {w: -a / c for w, a in r.items() if w != lead}
        if lead in [x for x in [(P0.index[b], P0.index[a]) for b, a in inverses.items()]] or \
                lead in [(P0.index[a], P0.index[b]) for b, a in inverses.items()]:
            continue  # added by the presentation itself
        rules.append((lead, rhs))
    P = Presentation(F, names, rules, inverses=inverses, name="corepresentation Hopf algebra")
    conf = check_local_confluence(P)

    # Hopf structure on generators
    entry_terms = {}
    for i in range(Y.n):
        for j in range(Y.n):
            entry_terms[(i, j)] = W.member(Y.entries[i][j], mdeg)
    coproduct, counit, antipode = {}, {}, {}
    basis1 = [w for w in P.normal_monomials(1)]
    basis2 = [w for w in P.normal_monomials(2)]
    for nm, x in gens:
        counit[nm] = x.counit()
        s_terms = W.member(x.antipode(), mdeg)
        if s_terms is None:
            raise RuntimeError(f"antipode of {nm} left the generated algebra")
        antipode[nm] = _terms_to_element(P, s_terms)
        cop = None
        for (i, j) in entry_terms:
            if Y.entries[i][j] == x and all(entry_terms[(i, k)] is not None and entry_terms[(k, j)] is not None
                                            for k in range(Y.n)):
                cop = []
                for k in range(Y.n):
                    a = _terms_to_element(P, entry_terms[(i, k)])
                    b = _terms_to_element(P, entry_terms[(k, j)])
                    cop.append((a, b))
                break
        if cop is None:
            fit = _fit_coproduct(F, x, basis1, W) or _fit_coproduct(F, x, basis2, W)
            if fit is None:
                raise RuntimeError(f"could not fit the coproduct of {nm}")
            cop = [(P.element({u: c}), P.element({w: F.one})) for c, u, w in fit]
        coproduct[nm] = cop
    cop_elems = {nm: [(F.one, a, b) for a, b in cop] for nm, cop in coproduct.items()}
    H = HopfPresentation(P, cop_elems, counit, antipode, name="corepresentation Hopf algebra")
    bi = verify_bialgebra(H)
    ax = verify_hopf_axioms(H, degree_bound=3)

    graded = []
    for d in range(D + 2):
        pres = len(P.normal_monomials(d))
        img = W.dimension(d)
        graded.append((d, pres, img))
    complete = all(p == i for _, p, i in graded)
    if not complete:
        notes.append("graded dimensions of presentation and functional image differ")
    notes.append(f"relations computed up to degree {D}; completeness certified by graded "
                 f"dimensions through degree {D + 1}")
    return DiscoveredHopfPresentation(H, dict(gens), kept, D, graded, complete, bi, ax, conf.ok, notes)


def format_entry(x: Functional, disc: DiscoveredHopfPresentation, max_degree: int = 3) -> str:
    """Write a functional as an element of the discovered algebra."""
    names = disc.generators
    W = _WordAlgebra(x.F, names, [disc.witnesses[n] for n in names])
    terms = W.member(x, max_degree)
    if terms is None:
        return repr(x)
    el = _terms_to_element(disc.hopf.A, terms)
    return repr(el)


# ---------------------------------------------------------------------------
# comodule structure and trivialization
# ---------------------------------------------------------------------------


@dataclass
class CoactionReport:
    table: dict  # j -> list of (i, Functional)
    ok: bool
    messages: list = field(default_factory=list)


def comodule_structure(spec: QsiModuleSpec, grid: int = 3) -> CoactionReport:
    """ρ(m_j) = Σ_i m_i ⊗ c_ij, with coassociativity and counit checked."""
    Y = coefficient_functionals(spec)
    F = spec.F
    n = Y.n
    table = {j: [(i, Y.entries[i][j]) for i in range(n) if not Y.entries[i][j].is_zero()] for j in range(n)}
    msgs = []
    for i in range(n):
        for j in range(n):
            if Y.entries[i][j].value(0, 0) != (F.one if i == j else F.zero):
                msgs.append(f"counit fails at ({i},{j})")
    top = max((c.top for row in Y.entries for c in row), default=0)
    for i in range(n):
        for j in range(n):
            c = Y.entries[i][j]
            for a in range(top + 1):
                for b in range(top + 1):
                    for m in range(-grid, grid + 1):
                        for k in range(-grid, grid + 1):
                            lhs = pairing_coproduct(c, m, a, k, b)
                            rhs = sum((Y.entries[i][l].value(m, a) * Y.entries[l][j].value(k, b)
                                       for l in range(n)), F.zero)
                            if lhs != rhs:
                                msgs.append(f"coassociativity fails at c_{i + 1}{j + 1}, "
                                            f"(m,n,k,l)=({m},{a},{k},{b})")
    return CoactionReport(table, not msgs, msgs)


def _vec_eq(u, v):
    return all(a == b for a, b in zip(u, v))


@dataclass
class TrivializationReport:
    ok: bool
    checked: int
    messages: list = field(default_factory=list)


def trivialization_iso(spec: QsiModuleSpec, bound: int = 2,
                       disc: DiscoveredHopfPresentation | None = None) -> TrivializationReport:
    """m ⊗ x ↦ Σ m_(0) ⊗ m_(1) x and its inverse through the antipode.

    An element of M ⊗ H° is a vector of functionals (coefficient of each
    m_i).  Checked on m_j ⊗ w for all words w of degree ≤ bound: the two
    maps are mutually inverse and intertwine the diagonal H_q-action with
    the action on the right factor only.
    """
    F = spec.F
    Y = coefficient_functionals(spec)
    n = Y.n
    C = Y.entries
    SC = [[C[i][j].antipode() for j in range(n)] for i in range(n)]
    if disc is None:
        disc = corepresentation_hopf(spec, 1)
    names = disc.generators
    W = _WordAlgebra(F, names, [disc.witnesses[nm] for nm in names])
    zero = Functional.zero(F)

    def phi(vec):
        return [sum((C[i][j] * vec[j] for j in range(n)), zero) for i in range(n)]

    def psi(vec):
        return [sum((SC[i][j] * vec[j] for j in range(n)), zero) for i in range(n)]

    def act_diag(h, vec):
        # h (m ⊗ x) = Σ h_(1) m ⊗ h_(2) x with Δs = s⊗s, Δt = s⊗t + t⊗1
        A, B = spec.A, spec.B
        out = []
        for i in range(n):
            if h == "s":
                acc = sum((vec[j].act("s").scale(A[i][j]) for j in range(n)), zero)
            else:
                acc = sum((vec[j].act("t").scale(A[i][j]) + vec[j].scale(B[i][j]) for j in range(n)), zero)
            out.append(acc)
        return out

    def act_right(h, vec):
        return [x.act(h) for x in vec]

    msgs = []
    checked = 0
    for w in W.words(bound):
        x = W.value(w)
        for j in range(n):
            vec = [x if i == j else zero for i in range(n)]
            checked += 1
            if not _vec_eq(psi(phi(vec)), vec) or not _vec_eq(phi(psi(vec)), vec):
                msgs.append(f"maps not inverse on m_{j + 1} ⊗ {W.names and disc.hopf.A.format_word(w)}")
            for h in ("s", "t"):
                if not _vec_eq(phi(act_diag(h, vec)), act_right(h, phi(vec))):
                    msgs.append(f"{h}-equivariance fails on m_{j + 1} ⊗ {disc.hopf.A.format_word(w)}")
    return TrivializationReport(not msgs, checked, msgs)


@dataclass
class InvariantsReport:
    ok: bool
    alpha: list  # per basis vector: list of (Functional, index)
    invariants_dimension: int
    messages: list = field(default_factory=list)


def _alpha(spec: QsiModuleSpec):
    """α(n_j) = Σ_i S̄(c_ij) ⊗ n_i, stored as a vector of functionals."""
    Y = coefficient_functionals(spec)
    n = Y.n
    return [[Y.entries[i][j].antipode_inverse() for i in range(n)] for j in range(n)]


def _act_on_HN(spec, h, vec):
    """Diagonal action on H° ⊗ N: h (x ⊗ n) = Σ h_(1)⇀x ⊗ h_(2) n."""
    F = spec.F
    zero = Functional.zero(F)
    A, B = spec.A, spec.B
    n = spec.n
    out = []
    for i in range(n):
        if h == "s":
            acc = sum((vec[j].act("s").scale(A[i][j]) for j in range(n)), zero)
        else:
            acc = sum((vec[j].act("s").scale(B[i][j]) + vec[j].act("t").scale(F.one if i == j else F.zero)
                       for j in range(n)), zero)
        out.append(acc)
    return out


def invariants_functor(spec: QsiModuleSpec, bound: int = 2,
                       other: QsiModuleSpec | None = None) -> InvariantsReport:
    """Check α_N: N → (H° ⊗ N)^H, its left inverse, and tensor compatibility."""
    F = spec.F
    n = spec.n
    zero = Functional.zero(F)
    alpha = _alpha(spec)
    msgs = []
    for j, vec in enumerate(alpha):
        if not _vec_eq(_act_on_HN(spec, "s", vec), vec):
            msgs.append(f"α(n_{j + 1}) not s-invariant")
        if not all(x.is_zero() for x in _act_on_HN(spec, "t", vec)):
            msgs.append(f"α(n_{j + 1}) not killed by t")
        back = [x.counit() for x in vec]
        if back != [F.one if i == j else F.zero for i in range(n)]:
            msgs.append(f"ε ⊗ id does not invert α on n_{j + 1}")
    # invariants inside span(S̄(c_ij)) ⊗ N
    Wf = [x for vec in alpha for x in vec if not x.is_zero()]
    basisW = []
    for x in Wf:
        if express(x, basisW) is None:
            basisW.append(x)
    unknowns = [(a, i) for a in range(len(basisW)) for i in range(n)]

    def element(coeffs):
        vec = [zero] * n
        for (a, i), c in zip(unknowns, coeffs):
            if c != 0:
                vec[i] = vec[i] + basisW[a].scale(c)
        return vec

    cols = []
    for idx in range(len(unknowns)):
        e = [F.zero] * len(unknowns)
        e[idx] = F.one
        v = element(e)
        sv = _act_on_HN(spec, "s", v)
        tv = _act_on_HN(spec, "t", v)
        cols.append([sv[i] - v[i] for i in range(n)] + tv)
    flat = [c for col in cols for c in col]
    dim = 0
    if unknowns:
        # constraints: each output component, evaluated on sample windows
        comps = []
        for k in range(2 * n):
            fs = [col[k] for col in cols]
            comps.extend(evaluation_rows(fs))
        dim = len(unknowns) - rank(comps, len(unknowns)) if comps else len(unknowns)
    del flat
    if dim != n:
        msgs.append(f"invariants have dimension {dim}, expected {n}")
    if other is not None:
        from .qsimod import tensor as tensor_module
        T = tensor_module(spec, other)
        alphaT = _alpha(T)
        alpha2 = _alpha(other)
        n2 = other.n
        for k in range(n):
            for l in range(n2):
                # Σ y_j x_i ⊗ (n_i ⊗ n'_j)
                prod = [alpha2[l][j] * alpha[k][i] for i in range(n) for j in range(n2)]
                if not _vec_eq(prod, alphaT[k * n2 + l]):
                    msgs.append(f"tensor compatibility fails on n_{k + 1} ⊗ n'_{l + 1}")
    return InvariantsReport(not msgs, alpha, dim, msgs)
