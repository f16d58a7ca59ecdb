"""Finitely presented noncommutative algebras with rewriting normal forms.

A :class:`Presentation` has an ordered list of generators and a list of
rewrite rules ``word -> combination``.  Monomials are tuples of generator
indices; the term order is degree-lexicographic in the declared order.
Normal forms are computed by appending one generator at a time to an
already normal word, so only suffixes of the new word can be reducible.
"""

from __future__ import annotations

import itertools
import re
import sys
from dataclasses import dataclass, field
from functools import reduce

from .scalars import ScalarField

sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))

Word = tuple  # tuple[int, ...]

DEFAULT_STEP_BUDGET = 10**6


class NonTerminationError(RuntimeError):
    """Raised when rewriting exceeds the step budget."""

    def __init__(self, word, budget):
        super().__init__(f"rewriting exceeded {budget} steps on word {word}")
        self.word = word


def _deglex_key(w: Word):
    return (len(w), w)


def _accumulate(target: dict, word, coeff):
    if coeff == 0:
        return
    c = target.get(word)
    c = coeff if c is None else c + coeff
    if c == 0:
        target.pop(word, None)
    else:
        target[word] = c


@dataclass
class RewriteRule:
    lhs: Word
    rhs: dict  # word -> coefficient (raw, need not be normal)

    def as_relation(self) -> dict:
        rel = {self.lhs: 1}
        for w, c in self.rhs.items():
            _accumulate(rel, w, -c)
        return rel


@dataclass
class ConfluenceReport:
    ok: bool
    checked: int
    failures: list = field(default_factory=list)  # (overlap word, nf1, nf2)


@dataclass
class MorphismReport:
    ok: bool
    violations: list = field(default_factory=list)  # (relation text, image)


class Presentation:
    """An algebra given by ordered generators and rewrite rules.

    ``inverses`` maps an inverse generator name to the generator it inverts.
    """

    def __init__(self, F: ScalarField, generators, rules=(), inverses=None,
                 name: str = "", check_order: bool = True,
                 derive_inverse_rules: bool = True,
                 step_budget: int = DEFAULT_STEP_BUDGET):
        self.F = F
        self.name = name
        self.generators = list(generators)
        if len(set(self.generators)) != len(self.generators):
            raise ValueError("duplicate generator names")
        self.index = {g: i for i, g in enumerate(self.generators)}
        self.inverses = {}
        for inv, base in (inverses or {}).items():
            self.inverses[self.index[inv]] = self.index[base]
            self.inverses[self.index[base]] = self.index[inv]
        self.step_budget = step_budget
        self._steps = 0
        self._append_cache = {}
        self._mul_cache = {}
        parsed = []
        for lhs, rhs in rules:
            parsed.append(self._make_rule(lhs, rhs))
        parsed.extend(self._inverse_rules(parsed if derive_inverse_rules else []))
        if check_order:
            for r in parsed:
                for w in r.rhs:
                    if _deglex_key(w) >= _deglex_key(r.lhs):
                        raise ValueError(
                            f"rule {self.format_word(r.lhs)} -> ... does not decrease "
                            f"(term {self.format_word(w)})")
        self.rules = parsed
        self._by_last = {}
        for r in self.rules:
            self._by_last.setdefault(r.lhs[-1], []).append(r)

    # construction helpers -------------------------------------------------

    def _make_rule(self, lhs, rhs) -> RewriteRule:
        if isinstance(lhs, str):
            lhs = self.parse_word(lhs)
        lhs = tuple(lhs)
        if isinstance(rhs, str):
            rhs = self.parse_combination(rhs)
        elif isinstance(rhs, NCElement):
            rhs = dict(rhs.terms)
        else:
            rhs = {tuple(w): self.F(c) for w, c in dict(rhs).items()}
        if len(lhs) < 2:
            raise ValueError("rule left-hand sides need at least two letters")
        return RewriteRule(lhs, rhs)

    def _inverse_rules(self, given):
        out = []
        have = {r.lhs for r in given}
        for a, b in self.inverses.items():
            for w in ((a, b),):
                if w not in have:
                    out.append(RewriteRule(w, {(): self.F.one}))
                    have.add(w)
        # q-commutations of a generator with an inverse, derived from monomial rules
        derived = []
        for r in given:
            if len(r.lhs) != 2 or len(r.rhs) != 1:
                continue
            (w, c), = r.rhs.items()
            x, y = r.lhs
            if w != (y, x) or x in self.inverses and self.inverses[x] == y:
                continue
            # x y = c y x
            for xi, yi, ci in ((x, y, c), ):
                cand = []
                if xi in self.inverses:
                    cand.append((self.inverses[xi], yi, 1 / ci))  # x^-1 y = c^-1 y x^-1
                if yi in self.inverses:
                    cand.append((xi, self.inverses[yi], 1 / ci))
                if xi in self.inverses and yi in self.inverses:
                    cand.append((self.inverses[xi], self.inverses[yi], ci))
                for u, v, k in cand:
                    # u v = k v u; orient larger word on the left
                    if (u, v) > (v, u):
                        lhs, rhs = (u, v), {(v, u): k}
                    else:
                        lhs, rhs = (v, u), {(u, v): 1 / k}
                    if lhs not in have:
                        derived.append(RewriteRule(lhs, rhs))
                        have.add(lhs)
        return out + derived

    # parsing / printing -----------------------------------------------------

    def parse_word(self, text: str) -> Word:
        text = text.strip()
        names = sorted(self.generators, key=len, reverse=True)
        out = []
        pos = 0
        while pos < len(text):
            if text[pos] in " *":
                pos += 1
                continue
            for nm in names:
                if text.startswith(nm, pos):
                    pos += len(nm)
                    m = re.match(r"\^(-?\d+)", text[pos:])
                    g = self.index[nm]
                    k = 1
                    if m and not nm.endswith("^-1"):
                        k = int(m.group(1))
                        pos += m.end()
                    if k < 0:
                        if g not in self.inverses:
                            raise ValueError(f"{nm} has no inverse")
                        g, k = self.inverses[g], -k
                    out.extend([g] * k)
                    break
            else:
                raise ValueError(f"cannot parse word {text!r} at {text[pos:]!r}")
        return tuple(out)

    def parse_combination(self, text: str) -> dict:
        """Parse ``"q*st - 2*t + 1"`` into a raw word -> coefficient dict."""
        out = {}
        for sign, term in _split_terms(text):
            coeff = self.F.one
            word = ()
            factors = _split_factors(term)
            for fac in factors:
                try:
                    w = self.parse_word(fac)
                    word = word + w
                except ValueError:
                    coeff = coeff * self.F.parse(fac)
            _accumulate(out, word, coeff if sign > 0 else -coeff)
        return out

    def format_word(self, w: Word) -> str:
        if not w:
            return "1"
        parts = []
        for g, grp in itertools.groupby(w):
            k = len(list(grp))
            nm = self.generators[g]
            if k == 1:
                parts.append(nm)
            elif nm.endswith("^-1"):
                parts.append(f"{nm[:-3]}^-{k}")
            else:
                parts.append(f"{nm}^{k}")
        return "*".join(parts)

    def format_terms(self, terms: dict) -> str:
        if not terms:
            return "0"
        out = []
        for w in sorted(terms, key=_deglex_key, reverse=True):
            c = terms[w]
            ws = self.format_word(w)
            cs = self.F.format(c)
            if ws == "1":
                out.append(cs)
            elif c == 1:
                out.append(ws)
            elif c == -1:
                out.append("-" + ws)
            elif not re.search(r"[ +/]|.-", cs):
                out.append(f"{cs}*{ws}")
            else:
                out.append(f"({cs})*{ws}")
        s = out[0]
        for t in out[1:]:
            s += " - " + t[1:] if t.startswith("-") else " + " + t
        return s

    def __repr__(self):
        nm = self.name or "Presentation"
        return f"<{nm}: generators {self.generators}, {len(self.rules)} rules>"

    # rewriting -------------------------------------------------------------

    def _append(self, word: Word, g: int) -> dict:
        key = (word, g)
        hit = self._append_cache.get(key)
        if hit is not None:
            return hit
        w = word + (g,)
        result = None
        for r in self._by_last.get(g, ()):
            n = len(r.lhs)
            if n <= len(w) and w[-n:] == r.lhs:
                self._steps += 1
                if self._steps > self.step_budget:
                    raise NonTerminationError(self.format_word(w), self.step_budget)
                prefix = w[:-n]
                result = {}
                for mono, c in r.rhs.items():
                    for m2, c2 in self._mul_by_word({prefix: 1}, mono).items():
                        _accumulate(result, m2, c * c2)
                break
        if result is None:
            result = {w: 1}
        self._append_cache[key] = result
        return result

    def _mul_by_word(self, terms: dict, word: Word) -> dict:
        for g in word:
            new = {}
            for m, c in terms.items():
                for m2, c2 in self._append(m, g).items():
                    _accumulate(new, m2, c * c2)
            terms = new
        return terms

    def mul_monomials(self, a: Word, b: Word) -> dict:
        key = (a, b)
        hit = self._mul_cache.get(key)
        if hit is None:
            hit = self._mul_by_word({a: 1}, b)
            self._mul_cache[key] = hit
        return hit

    def normal_form(self, x) -> "NCElement":
        """Normal form of a raw word, a raw combination, or an element."""
        self._steps = 0
        if isinstance(x, NCElement):
            return x
        if isinstance(x, str):
            x = self.parse_combination(x)
        elif isinstance(x, tuple):
            x = {x: self.F.one}
        out = {}
        for w, c in x.items():
            for m, c2 in self._mul_by_word({(): 1}, tuple(w)).items():
                _accumulate(out, m, self.F(c) * c2)
        return NCElement(self, out)

    def is_normal(self, w: Word) -> bool:
        for r in self.rules:
            n = len(r.lhs)
            for i in range(len(w) - n + 1):
                if w[i:i + n] == r.lhs:
                    return False
        return True

    # elements ----------------------------------------------------------------

    def element(self, terms: dict) -> "NCElement":
        return self.normal_form(terms)

    def zero(self) -> "NCElement":
        return NCElement(self, {})

    def one(self) -> "NCElement":
        return NCElement(self, {(): self.F.one})

    def scalar(self, c) -> "NCElement":
        c = self.F(c)
        return NCElement(self, {(): c} if c != 0 else {})

    def gen(self, name) -> "NCElement":
        g = self.index[name] if isinstance(name, str) else name
        return NCElement(self, {(g,): self.F.one})

    def __call__(self, text) -> "NCElement":
        return self.normal_form(text)

    def normal_monomials(self, max_degree: int) -> list:
        """All normal words of degree <= max_degree, in deglex order."""
        out = [()]
        layer = [()]
        for _ in range(max_degree):
            nxt = []
            for w in layer:
                for g in range(len(self.generators)):
                    w2 = w + (g,)
                    if self._suffix_normal(w2):
                        nxt.append(w2)
            out.extend(nxt)
            layer = nxt
        return out

    def _suffix_normal(self, w: Word) -> bool:
        for r in self._by_last.get(w[-1], ()):
            n = len(r.lhs)
            if n <= len(w) and w[-n:] == r.lhs:
                return False
        return True

    # relations ------------------------------------------------------------

    def relations(self) -> list:
        """Defining relations as raw word -> coefficient dicts (lhs - rhs)."""
        return [r.as_relation() for r in self.rules]

    def to_json(self) -> dict:
        base_inv = {}
        seen = set()
        for a, b in self.inverses.items():
            if (b, a) in seen:
                continue
            seen.add((a, b))
            if a > b:
                a, b = b, a
            base_inv[self.generators[b]] = self.generators[a]
        return {
            "generators": [g for i, g in enumerate(self.generators)
                           if self.generators[i] not in base_inv],
            "inverses": base_inv,
            "order": list(self.generators),
            "rules": [{"lhs": " ".join(self.generators[i] for i in r.lhs),
                       "rhs": self.format_terms(r.rhs)} for r in self.rules],
        }

    @classmethod
    def from_json(cls, data: dict, F: ScalarField, **kw) -> "Presentation":
        gens = list(data["generators"])
        inverses = dict(data.get("inverses", {}))
        order = data.get("order")
        if order is None:
            order = []
            inv_of = {b: a for a, b in inverses.items()}
            for g in gens:
                order.append(g)
                if g in inv_of:
                    order.append(inv_of[g])
        missing = set(gens) | set(inverses)
        if set(order) != missing:
            raise ValueError("order must list every generator and inverse exactly once")
        pres = cls(F, order, (), inverses=inverses, name=data.get("name", ""),
                   check_order=False, derive_inverse_rules=False)
        rules = [(pres.parse_word(r["lhs"]), pres.parse_combination(r["rhs"]))
                 for r in data.get("rules", [])]
        return cls(F, order, rules, inverses=inverses, name=data.get("name", ""), **kw)


def _split_terms(text: str):
    """Split a combination at top-level + and - signs."""
    text = text.strip()
    depth = 0
    terms = []
    cur = ""
    sign = 1
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if depth == 0 and ch in "+-" and cur.strip() and not cur.rstrip().endswith(("^", "*", "/")):
            terms.append((sign, cur.strip()))
            sign = 1 if ch == "+" else -1
            cur = ""
        elif depth == 0 and ch in "+-" and not cur.strip():
            sign = sign * (1 if ch == "+" else -1)
        else:
            cur += ch
        i += 1
    if cur.strip():
        terms.append((sign, cur.strip()))
    return terms


def _split_factors(term: str):
    depth = 0
    parts = []
    cur = ""
    for ch in term:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "*" and depth == 0:
            parts.append(cur.strip())
            cur = ""
        else:
            cur += ch
    parts.append(cur.strip())
    return [p for p in parts if p]


class NCElement:
    """An immutable normal-form element of a presentation."""

    __slots__ = ("pres", "terms", "_hash")

    def __init__(self, pres: Presentation, terms: dict):
        self.pres = pres
        self.terms = {w: c for w, c in terms.items() if c != 0}
        self._hash = None

    def _coerce(self, other):
        if isinstance(other, NCElement):
            if other.pres is not self.pres:
                raise ValueError("elements of different presentations")
            return other
        return self.pres.scalar(other)

    def __add__(self, other):
        o = self._coerce(other)
        out = dict(self.terms)
        for w, c in o.terms.items():
            _accumulate(out, w, c)
        return NCElement(self.pres, out)

    __radd__ = __add__

    def __neg__(self):
        return NCElement(self.pres, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, NCElement):
            c = self.pres.F(other)
            return NCElement(self.pres, {w: a * c for w, a in self.terms.items()})
        o = self._coerce(other)
        return multiply(self, o)

    def __rmul__(self, other):
        c = self.pres.F(other)
        return NCElement(self.pres, {w: c * a for w, a in self.terms.items()})

    def __pow__(self, k: int):
        out = self.pres.one()
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, NCElement):
            try:
                other = self.pres.scalar(other)
            except TypeError:
                return NotImplemented
        return self.pres is other.pres and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((len(w) for w in self.terms), default=-1)

    def scalar_part(self):
        return self.terms.get((), self.pres.F.zero)

    def is_scalar(self) -> bool:
        return all(w == () for w in self.terms)

    def leading(self):
        w = max(self.terms, key=_deglex_key)
        return w, self.terms[w]

    def __repr__(self):
        return self.pres.format_terms(self.terms)


def normal_form(x, P: Presentation) -> NCElement:
    return P.normal_form(x)


def multiply(x: NCElement, y: NCElement) -> NCElement:
    P = x.pres
    P._steps = 0
    out = {}
    for a, ca in x.terms.items():
        for b, cb in y.terms.items():
            for m, c in P.mul_monomials(a, b).items():
                _accumulate(out, m, ca * cb * c)
    return NCElement(P, out)


def check_local_confluence(P: Presentation, overlap_bound: int | None = None) -> ConfluenceReport:
    """Resolve every overlap and inclusion ambiguity of the rule set."""
    failures = []
    checked = 0
    rules = P.rules

    def reduce_once(word, rule, pos):
        pre, post = word[:pos], word[pos + len(rule.lhs):]
        out = {}
        for w, c in rule.rhs.items():
            _accumulate(out, pre + w + post, c)
        return P.normal_form(out)

    for i, r1 in enumerate(rules):
        for j, r2 in enumerate(rules):
            l1, l2 = r1.lhs, r2.lhs
            cands = []
            for k in range(1, min(len(l1), len(l2))):
                if l1[-k:] == l2[:k]:
                    cands.append((l1 + l2[k:], 0, len(l1) - k))
            if i != j and len(l2) <= len(l1):
                for pos in range(len(l1) - len(l2) + 1):
                    if l1[pos:pos + len(l2)] == l2:
                        cands.append((l1, 0, pos))
            for word, p1, p2 in cands:
                if overlap_bound is not None and len(word) > overlap_bound:
                    continue
                checked += 1
                a = reduce_once(word, r1, p1)
                b = reduce_once(word, r2, p2)
                if a != b:
                    failures.append((P.format_word(word), a, b))
    return ConfluenceReport(not failures, checked, failures)


def apply_generator_map(x: NCElement, images: dict, target: Presentation | None = None):
    """Multiplicative extension of a generator map, normalized in the target.

    ``images`` maps generator names or indices of the source to elements of
    the target presentation (or scalars when the target is the ground field,
    signalled by ``target=None`` and scalar images).
    """
    P = x.pres
    imgs = [_lookup_image(images, P, g) for g in range(len(P.generators))]
    return map_raw(x.terms, imgs, P.F, target)


def _lookup_image(images, P, g):
    if P.generators[g] in images:
        return images[P.generators[g]]
    if g in images:
        return images[g]
    raise KeyError(f"no image for generator {P.generators[g]}")


def map_raw(terms: dict, imgs: list, F: ScalarField, target: Presentation | None):
    """Evaluate a raw word combination on generator images."""
    if target is None:
        target_one = F.one
        total = F.zero
    else:
        target_one = target.one()
        total = target.zero()
    cache = {}

    def word_image(w):
        if w in cache:
            return cache[w]
        if not w:
            val = target_one
        else:
            val = word_image(w[:-1]) * imgs[w[-1]]
        cache[w] = val
        return val

    for w, c in terms.items():
        total = total + word_image(w) * c
    return total


def check_morphism(images: dict, source: Presentation, target: Presentation | None) -> MorphismReport:
    """Check that every defining relation of ``source`` maps to zero."""
    imgs = [_lookup_image(images, source, g) for g in range(len(source.generators))]
    bad = []
    for rel in source.relations():
        img = map_raw(rel, imgs, source.F, target)
        if (img != 0) if target is None else not img.is_zero():
            bad.append((source.format_terms(rel) + " = 0", img))
    return MorphismReport(not bad, bad)


# ---------------------------------------------------------------------------
# tensor products
# ---------------------------------------------------------------------------


class TensorPresentation(Presentation):
    """P_1 ⊗ ... ⊗ P_k: factors' generators commute across factors.

    Normal words are concatenations of normal words of the factors, so
    multiplication is done factorwise.
    """

    def __init__(self, factors):
        factors = list(factors)
        F = factors[0].F
        for P in factors:
            if P.F != F:
                raise ValueError("tensor factors over different fields")
        self.factors = factors
        self.offsets = []
        gens = []
        owner = []
        local = []
        inverses = {}
        for k, P in enumerate(factors):
            self.offsets.append(len(gens))
            for i, g in enumerate(P.generators):
                gens.append(f"{g}@{k}")
                owner.append(k)
                local.append(i)
            for a, b in P.inverses.items():
                inverses[f"{P.generators[a]}@{k}"] = f"{P.generators[b]}@{k}"
        self.owner = owner
        self.local = local
        rules = []
        for k, P in enumerate(factors):
            off = self.offsets[k]
            for r in P.rules:
                rules.append((tuple(off + g for g in r.lhs),
                              {tuple(off + g for g in w): c for w, c in r.rhs.items()}))
        for a in range(len(gens)):
            for b in range(len(gens)):
                if owner[a] > owner[b]:
                    rules.append(((a, b), {(b, a): F.one}))
        # avoid listing each inverse pair twice in the constructor
        inv_one_way = {}
        for a, b in inverses.items():
            if b not in inv_one_way:
                inv_one_way[a] = b
        super().__init__(F, gens, rules, inverses=inv_one_way,
                         name=" ⊗ ".join(P.name or "P" for P in factors),
                         check_order=True, derive_inverse_rules=False)
        # the inverse-pair rules already come from the factors
        seen = set()
        uniq = []
        for r in self.rules:
            if r.lhs in seen:
                continue
            seen.add(r.lhs)
            uniq.append(r)
        self.rules = uniq
        self._by_last = {}
        for r in self.rules:
            self._by_last.setdefault(r.lhs[-1], []).append(r)

    def split(self, w: Word) -> tuple:
        parts = [[] for _ in self.factors]
        for g in w:
            parts[self.owner[g]].append(self.local[g])
        return tuple(tuple(p) for p in parts)

    def join(self, parts) -> Word:
        out = []
        for k, p in enumerate(parts):
            off = self.offsets[k]
            out.extend(off + g for g in p)
        return tuple(out)

    def _append(self, word: Word, g: int) -> dict:
        key = (word, g)
        hit = self._append_cache.get(key)
        if hit is not None:
            return hit
        parts = self.split(word)
        k = self.owner[g]
        res = self.factors[k]._append(parts[k], self.local[g])
        out = {}
        for m, c in res.items():
            new = list(parts)
            new[k] = m
            out[self.join(new)] = c
        self._append_cache[key] = out
        return out

    def mul_monomials(self, a: Word, b: Word) -> dict:
        key = (a, b)
        hit = self._mul_cache.get(key)
        if hit is not None:
            return hit
        pa, pb = self.split(a), self.split(b)
        prods = [self.factors[k].mul_monomials(pa[k], pb[k]) for k in range(len(self.factors))]
        out = {}
        for combo in itertools.product(*[list(p.items()) for p in prods]):
            c = reduce(lambda x, y: x * y, (t[1] for t in combo), 1)
            _accumulate(out, self.join([t[0] for t in combo]), c)
        self._mul_cache[key] = out
        return out

    def pure(self, elems) -> NCElement:
        """x_1 ⊗ ... ⊗ x_k for elements of the factors."""
        out = {}
        for combo in itertools.product(*[list(e.terms.items()) for e in elems]):
            c = reduce(lambda x, y: x * y, (t[1] for t in combo), 1)
            _accumulate(out, self.join([t[0] for t in combo]), c)
        return NCElement(self, out)

    def format_terms(self, terms: dict) -> str:
        if not terms:
            return "0"
        out = []
        for w in sorted(terms, key=_deglex_key, reverse=True):
            c = terms[w]
            parts = self.split(w)
            ws = " ⊗ ".join(P.format_word(p) for P, p in zip(self.factors, parts))
            cs = self.F.format(c)
            if c == 1:
                out.append(ws)
            elif c == -1:
                out.append("-" + ws)
            elif not re.search(r"[ +/]|.-", cs):
                out.append(f"{cs}*({ws})")
            else:
                out.append(f"({cs})*({ws})")
        s = out[0]
        for t in out[1:]:
            s += " - " + t[1:] if t.startswith("-") else " + " + t
        return s


def tensor(*factors: Presentation) -> TensorPresentation:
    return TensorPresentation(factors)


def trivial_presentation(F: ScalarField) -> Presentation:
    """The ground field as a presentation with no generators."""
    return Presentation(F, [], name="C")
