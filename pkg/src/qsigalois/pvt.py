"""Picard-Vessiot rings, torsors and cleft trivializations.

The ring R = C<Q, Q^-1, τ>/(Qτ = qτQ) with σ(Q) = qQ, θ(Q) = 0, σ(τ) = qτ,
θ(τ) = 1 is the solution ring of the first example.  It carries a coaction
of GH_q; the finite analogues are the torsors R_λ over the Taft algebras.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ._linalg import nullspace, rank, solve as solve_linear
from .hopf import GHq, HopfPresentation, Taft
from .ncalg import NCElement, Presentation, TensorPresentation, check_morphism, map_raw, tensor
from .scalars import ScalarField, cyclotomic, q_factorial


@dataclass
class Report:
    ok: bool
    messages: list = field(default_factory=list)
    data: dict = field(default_factory=dict)

    def __bool__(self):
        return self.ok


# ---------------------------------------------------------------------------
# qsi algebras
# ---------------------------------------------------------------------------


class QsiAlgebra:
    """A presentation with σ (an automorphism) and θ = θ^(1), a σ-derivation.

    ``sigma`` and ``theta`` map generator names to elements (or strings);
    σ extends multiplicatively and θ by θ(xy) = σ(x)θ(y) + θ(x)y.
    """

    def __init__(self, algebra: Presentation, sigma: dict, theta: dict,
                 sigma_inverse: dict | None = None, name: str = ""):
        self.A = algebra
        self.F = algebra.F
        self.name = name or algebra.name
        gens = algebra.generators
        self._sigma = [self._elem(sigma[g]) for g in gens]
        self._theta = [self._elem(theta[g]) for g in gens]
        self._sigma_inv = None if sigma_inverse is None else [self._elem(sigma_inverse[g]) for g in gens]
        self._s_cache = {}
        self._t_cache = {}

    def _elem(self, x) -> NCElement:
        if isinstance(x, NCElement):
            return x
        if isinstance(x, str):
            return self.A(x)
        return self.A.scalar(x)

    def sigma_word(self, w) -> NCElement:
        hit = self._s_cache.get(w)
        if hit is None:
            hit = self.A.one() if not w else self.sigma_word(w[:-1]) * self._sigma[w[-1]]
            self._s_cache[w] = hit
        return hit

    def theta_word(self, w) -> NCElement:
        hit = self._t_cache.get(w)
        if hit is None:
            if not w:
                hit = self.A.zero()
            else:
                head, g = w[:-1], w[-1]
                hit = self.sigma_word(head) * self._theta[g] + self.theta_word(head) * self.A.element({(g,): self.F.one})
            self._t_cache[w] = hit
        return hit

    def _coerce(self, x) -> NCElement:
        return self._elem(x) if not isinstance(x, NCElement) else x

    def sigma(self, x, k: int = 1) -> NCElement:
        x = self._coerce(x)
        if k < 0:
            if self._sigma_inv is None:
                raise ValueError("σ^{-1} not supplied")
            for _ in range(-k):
                x = map_raw(x.terms, self._sigma_inv, self.F, self.A)
            return x
        for _ in range(k):
            out = self.A.zero()
            for w, c in x.terms.items():
                out = out + self.sigma_word(w) * c
            x = out
        return x

    def theta(self, x, i: int = 1) -> NCElement:
        """θ^(i)(x) = θ^i(x)/[i]_q!."""
        x = self._coerce(x)
        fact = q_factorial(i, self.F)
        if fact == 0:
            raise ZeroDivisionError(f"[{i}]_q! vanishes: θ^({i}) is not θ^i/[i]!")
        for _ in range(i):
            out = self.A.zero()
            for w, c in x.terms.items():
                out = out + self.theta_word(w) * c
            x = out
        return x * (1 / fact)

    def act(self, h: NCElement, x) -> NCElement:
        """Action of an element of H_q through s ↦ σ, s^-1 ↦ σ^{-1}, t ↦ θ."""
        x = self._coerce(x)
        out = self.A.zero()
        H = h.pres
        for w, c in h.terms.items():
            y = x
            for g in reversed(w):
                nm = H.generators[g]
                if nm == "s":
                    y = self.sigma(y)
                elif nm == "s^-1":
                    y = self.sigma(y, -1)
                elif nm == "t":
                    y = self.theta(y)
                else:
                    raise ValueError(f"unknown H_q generator {nm}")
            out = out + y * c
        return out

    def verify(self) -> Report:
        """σ and θ respect the relations, σ is invertible, θσ = qσθ on generators."""
        A, F = self.A, self.F
        msgs = []
        rep = check_morphism({i: s for i, s in enumerate(self._sigma)}, A, A)
        if not rep.ok:
            msgs.append(f"σ does not respect {len(rep.violations)} relation(s)")
        for rel in A.relations():
            img = A.zero()
            for w, c in rel.items():
                img = img + self.theta_word(w) * c
            if not img.is_zero():
                msgs.append(f"θ does not respect relation {A.format_terms(rel)}")
        if self._sigma_inv is not None:
            for i, g in enumerate(A.generators):
                x = A.gen(g)
                if not (self.sigma(self.sigma(x, -1)) == x and self.sigma(self.sigma(x), -1) == x):
                    msgs.append(f"σ^{-1} is not inverse to σ on {g}")
        for g in A.generators:
            x = A.gen(g)
            if not self.theta(self.sigma(x)) == self.sigma(self.theta(x)) * F.q:
                msgs.append(f"θσ = qσθ fails on {g}")
        return Report(not msgs, msgs)


def builtin_R(F: ScalarField, allow_root_of_unity: bool = False) -> QsiAlgebra:
    if F.root_of_unity_order() is not None and not allow_root_of_unity:
        raise ValueError("R needs q not a root of unity (pass allow_root_of_unity=True to override)")
    A = Presentation(F, ["Q", "Q^-1", "τ"], [("τQ", "q^-1*Qτ")], inverses={"Q^-1": "Q"}, name="R")
    return QsiAlgebra(A, {"Q": "q*Q", "Q^-1": "q^-1*Q^-1", "τ": "q*τ"},
                      {"Q": 0, "Q^-1": 0, "τ": 1},
                      {"Q": "q^-1*Q", "Q^-1": "q*Q^-1", "τ": "q^-1*τ"}, name="R")


def qsi_from_difference(algebra: Presentation, sigma: dict, sigma_inverse: dict | None = None) -> QsiAlgebra:
    """A difference algebra as a qsi algebra with all θ^(i) = 0."""
    return QsiAlgebra(algebra, sigma, {g: 0 for g in algebra.generators}, sigma_inverse)


def laurent_difference_algebra(F: ScalarField) -> QsiAlgebra:
    A = Presentation(F, ["Q", "Q^-1"], [], inverses={"Q^-1": "Q"}, name="C[Q,Q^-1]")
    return qsi_from_difference(A, {"Q": "q*Q", "Q^-1": "q^-1*Q^-1"}, {"Q": "q^-1*Q", "Q^-1": "q*Q^-1"})


def r_window(R: QsiAlgebra, q_degree: int = 4, tau_degree: int = 4) -> list:
    """Normal words Q^a τ^b with |a| ≤ q_degree, b ≤ tau_degree."""
    A = R.A
    out = []
    for a in range(-q_degree, q_degree + 1):
        for b in range(tau_degree + 1):
            g = "Q" if a >= 0 else "Q^-1"
            out.append((A.index[g],) * abs(a) + (A.index["τ"],) * b)
    return out


def constants(R: QsiAlgebra, window) -> list:
    """Basis of {x in span(window) : σ(x) = x, θ(x) = 0}."""
    A, F = R.A, R.F
    words = [tuple(w) for w in window]
    images = []
    keys = {}
    for w in words:
        x = A.element({w: F.one})
        s = R.sigma(x) - x
        t = R.theta(x)
        col = {}
        for u, c in s.terms.items():
            col[("s", u)] = c
        for u, c in t.terms.items():
            col[("t", u)] = c
        for k in col:
            keys.setdefault(k, len(keys))
        images.append(col)
    rows = [[F.zero] * len(words) for _ in keys]
    for j, col in enumerate(images):
        for k, c in col.items():
            rows[keys[k]][j] = c
    basis = nullspace(rows, len(words), F.zero, F.one) if rows else [
        [F.one if i == j else F.zero for i in range(len(words))] for j in range(len(words))]
    return [A.element({w: c for w, c in zip(words, v) if c != 0}) for v in basis]


# ---------------------------------------------------------------------------
# simplicity of R
# ---------------------------------------------------------------------------


@dataclass
class Certificate:
    start: NCElement
    moves: list  # ("theta", n) | ("multiply", c, l) | ("eliminate", s)
    result: NCElement

    def __len__(self):
        return len(self.moves)


def _tau_degree(R: QsiAlgebra, x: NCElement) -> int:
    t = R.A.index["τ"]
    return max((w.count(t) for w in x.terms), default=0)


def _q_exponent(R: QsiAlgebra, w) -> int:
    A = R.A
    return w.count(A.index["Q"]) - w.count(A.index["Q^-1"])


def _q_monomial(R: QsiAlgebra, c, l: int) -> NCElement:
    A = R.A
    g = "Q" if l >= 0 else "Q^-1"
    return A.element({(A.index[g],) * abs(l): R.F(c)})


def apply_move(R: QsiAlgebra, x: NCElement, move) -> NCElement:
    kind = move[0]
    if kind == "theta":
        return R.theta(x, move[1])
    if kind == "multiply":
        return _q_monomial(R, move[1], move[2]) * x
    if kind == "eliminate":
        s = move[1]
        qs = R.F.power(s)
        return (x * qs - R.sigma(x)) * (1 / (qs - 1))
    raise ValueError(f"unknown move {kind}")


def simplicity_reduce(R: QsiAlgebra, f) -> Certificate:
    """Moves inside the two-sided qsi ideal generated by f that end at 1."""
    F = R.F
    if F.root_of_unity_order() is not None:
        raise ValueError("the elimination step needs q not a root of unity")
    f = R._coerce(f)
    if f.is_zero():
        raise ValueError("f = 0 generates the zero ideal")
    moves = []
    x = f
    n = _tau_degree(R, x)
    if n > 0:
        moves.append(("theta", n))
        x = apply_move(R, x, moves[-1])
    exps = {_q_exponent(R, w): c for w, c in x.terms.items()}
    low = min(exps)
    c0 = exps[low]
    if low != 0 or c0 != 1:
        moves.append(("multiply", 1 / c0, -low))
        x = apply_move(R, x, moves[-1])
    for s in sorted({_q_exponent(R, w) for w in x.terms}):
        if s != 0:
            moves.append(("eliminate", s))
            x = apply_move(R, x, moves[-1])
    return Certificate(f, moves, x)


def replay(R: QsiAlgebra, cert: Certificate) -> NCElement:
    x = cert.start
    for mv in cert.moves:
        x = apply_move(R, x, mv)
    return x


# ---------------------------------------------------------------------------
# comodule algebras
# ---------------------------------------------------------------------------


class ComoduleAlgebra:
    """An algebra with a right coaction ρ: A → A ⊗ H given on generators."""

    def __init__(self, algebra: Presentation, hopf: HopfPresentation, rho: dict, name: str = ""):
        self.A = algebra
        self.H = hopf
        self.F = algebra.F
        self.name = name or algebra.name
        self.T = tensor(algebra, hopf.A)
        self._T3 = None
        self._rho = []
        for g in algebra.generators:
            val = rho[g]
            if isinstance(val, NCElement):
                self._rho.append(val)
            else:
                total = self.T.zero()
                for c, a, h in val:
                    total = total + self.T.pure([self._a(a), self._h(h)]) * self.F(c)
                self._rho.append(total)
        self._cache = {}

    def _a(self, x):
        return x if isinstance(x, NCElement) else (self.A(x) if isinstance(x, str) else self.A.scalar(x))

    def _h(self, x):
        H = self.H.A
        return x if isinstance(x, NCElement) else (H(x) if isinstance(x, str) else H.scalar(x))

    @property
    def T3(self) -> TensorPresentation:
        if self._T3 is None:
            self._T3 = tensor(self.A, self.H.A, self.H.A)
        return self._T3

    def rho_word(self, w) -> NCElement:
        hit = self._cache.get(w)
        if hit is None:
            hit = self.T.one() if not w else self.rho_word(w[:-1]) * self._rho[w[-1]]
            self._cache[w] = hit
        return hit

    def rho(self, x) -> NCElement:
        x = self._a(x)
        out = self.T.zero()
        for w, c in x.terms.items():
            out = out + self.rho_word(w) * c
        return out

    def pure(self, a, h) -> NCElement:
        return self.T.pure([self._a(a), self._h(h)])

    def verify(self) -> Report:
        """ρ is an algebra map; coassociativity and counit on generators."""
        msgs = []
        rep = check_morphism({i: r for i, r in enumerate(self._rho)}, self.A, self.T)
        if not rep.ok:
            msgs.append(f"ρ does not respect {len(rep.violations)} relation(s)")
        A, HA, T3 = self.A, self.H.A, self.T3
        for i, g in enumerate(A.generators):
            r = self._rho[i]
            left = T3.zero()
            right = T3.zero()
            collapse = A.zero()
            for w, c in r.terms.items():
                aw, hw = self.T.split(w)
                hel = HA.element({hw: self.F.one})
                # (ρ ⊗ id)
                for w2, c2 in self.rho_word(aw).terms.items():
                    a2, h2 = self.T.split(w2)
                    left = left + T3.pure([A.element({a2: self.F.one}), HA.element({h2: self.F.one}), hel]) * (c * c2)
                # (id ⊗ Δ)
                for w3, c3 in self.H.coproduct(hel).terms.items():
                    h1, h2 = self.H.T2.split(w3)
                    right = right + T3.pure([A.element({aw: self.F.one}), HA.element({h1: self.F.one}),
                                             HA.element({h2: self.F.one})]) * (c * c3)
                collapse = collapse + A.element({aw: self.F.one}) * (c * self.H.counit(hel))
            if not left == right:
                msgs.append(f"coassociativity fails on {g}")
            if not collapse == A.gen(g):
                msgs.append(f"counit fails on {g}")
        return Report(not msgs, msgs)


def coaction_R(F: ScalarField, allow_root_of_unity: bool = False) -> tuple:
    """(R, ρ) with ρ(Q) = Q⊗u, ρ(τ) = τ⊗1 + Q⊗v over GH_q; returns (QsiAlgebra, ComoduleAlgebra)."""
    R = builtin_R(F, allow_root_of_unity)
    CA = ComoduleAlgebra(R.A, GHq(F), {
        "Q": [(1, "Q", "u")], "Q^-1": [(1, "Q^-1", "u^-1")],
        "τ": [(1, "τ", "1"), (1, "Q", "v")]}, name="R")
    return R, CA


def coaction_equivariance(R: QsiAlgebra, CA: ComoduleAlgebra, degree: int = 3) -> Report:
    """ρ∘σ = (σ⊗id)∘ρ and ρ∘θ = (θ⊗id)∘ρ on normal words of degree ≤ degree."""
    msgs = []
    T = CA.T

    def lift(op, y):
        out = T.zero()
        for w, c in y.terms.items():
            aw, hw = T.split(w)
            img = op(R.A.element({aw: R.F.one}))
            out = out + T.pure([img, CA.H.A.element({hw: R.F.one})]) * c
        return out

    for w in R.A.normal_monomials(degree):
        x = R.A.element({w: R.F.one})
        if not CA.rho(R.sigma(x)) == lift(R.sigma, CA.rho(x)):
            msgs.append(f"σ-equivariance fails on {R.A.format_word(w)}")
        if not CA.rho(R.theta(x)) == lift(R.theta, CA.rho(x)):
            msgs.append(f"θ-equivariance fails on {R.A.format_word(w)}")
    return Report(not msgs, msgs)


def _finite_basis(P: Presentation, cap: int = 12) -> list:
    """Normal words of a finite-dimensional presentation, or None if the count keeps growing."""
    prev = None
    for d in range(cap + 1):
        cur = P.normal_monomials(d)
        if prev is not None and len(cur) == len(prev):
            return cur
        prev = cur
    return None


def galois_map_check(CA: ComoduleAlgebra, bound: int = 4) -> Report:
    """x ⊗ y ↦ (x⊗1)ρ(y) is bijective (finite case) or triangular (R)."""
    F = CA.F
    basisA = _finite_basis(CA.A)
    basisH = _finite_basis(CA.H.A)
    if basisA is not None and basisH is not None:
        T = CA.T
        cols = []
        index = {}
        for x in basisA:
            for y in basisA:
                img = CA.pure(CA.A.element({x: F.one}), 1) * CA.rho(CA.A.element({y: F.one}))
                for w in img.terms:
                    index.setdefault(w, len(index))
                cols.append(img)
        target = len(basisA) * len(basisH)
        rows = [[F.zero] * len(cols) for _ in range(len(index))]
        for j, img in enumerate(cols):
            for w, c in img.terms.items():
                rows[index[w]][j] = c
        rk = rank(rows, len(cols)) if rows else 0
        ok = rk == len(cols) == target
        msg = f"rank {rk} on a {len(cols)}-dimensional source, target dimension {target}"
        return Report(ok, [msg], {"rank": rk, "source": len(cols), "target": target})
    # graded case: R over GH_q
    A, HA = CA.A, CA.H.A
    msgs = []
    checked = 0
    for m in range(-bound, bound + 1):
        for n in range(bound + 1):
            if abs(m) + n > bound:
                continue
            gQ = "Q" if m >= 0 else "Q^-1"
            y = A.element({(A.index[gQ],) * abs(m) + (A.index["τ"],) * n: F.one})
            img = CA.rho(y)
            gu = "u" if m >= 0 else "u^-1"
            comps = {}
            for w, c in img.terms.items():
                aw, hw = CA.T.split(w)
                comps.setdefault(hw, A.zero())
                comps[hw] = comps[hw] + A.element({aw: c})
            top = (HA.index[gu],) * abs(m) + (HA.index["v"],) * n
            allowed = {(HA.index[gu],) * abs(m) + (HA.index["v"],) * k for k in range(n + 1)}
            if set(comps) - allowed:
                msgs.append(f"ρ(Q^{m}τ^{n}) leaves the triangular pattern")
            diag = comps.get(top, A.zero())
            e = m + n
            gd = "Q" if e >= 0 else "Q^-1"
            expect = A.element({(A.index[gd],) * abs(e): F.one})
            if not diag == expect:
                msgs.append(f"diagonal entry of Q^{m}τ^{n} is {diag!r}, expected a unit Q^{e}")
            checked += 1
    return Report(not msgs, msgs or [f"triangular with unit diagonal on {checked} basis elements"],
                  {"checked": checked})


def taft_torsor(N: int, lam, F: ScalarField | None = None) -> ComoduleAlgebra:
    """R_λ = C<s', t'>/(t's' = q s't', s'^N = 1, t'^N = λ) over Taft(N)."""
    F = F or cyclotomic(N)
    if F.root_of_unity_order() != N:
        raise ValueError(f"q must be a primitive {N}-th root of unity")
    lam = F(lam)
    A = Presentation(F, ["s'", "t'"],
                     [("t's'", "q*s't'"), ("s'" * N, "1"), ("t'" * N, {(): lam} if lam != 0 else {})],
                     name=f"R_{F.format(lam)}")
    H = Taft(N, F)
    return ComoduleAlgebra(A, H, {"s'": [(1, "s'", "s")], "t'": [(1, "s'", "t"), (1, "t'", "1")]},
                           name=f"R_{F.format(lam)}")


def trivial_comodule_algebra(H: HopfPresentation) -> ComoduleAlgebra:
    from .ncalg import trivial_presentation
    return ComoduleAlgebra(trivial_presentation(H.F), H, {}, name="C")


# ---------------------------------------------------------------------------
# cleft structure
# ---------------------------------------------------------------------------


@dataclass
class CleftReport:
    ok: bool
    messages: list
    inverse: dict | None = None  # H basis word -> element of A


def _phi_apply(CA, phi, h: NCElement) -> NCElement:
    out = CA.A.zero()
    for w, c in h.terms.items():
        out = out + CA._a(phi[w]) * c
    return out


def cleft_check(CA: ComoduleAlgebra, phi: dict) -> CleftReport:
    """``phi`` maps each normal word of H to an element of A."""
    F = CA.F
    basisH = _finite_basis(CA.H.A)
    basisA = _finite_basis(CA.A)
    if basisH is None or basisA is None:
        raise ValueError("cleft_check needs finite-dimensional algebras")
    HA = CA.H.A
    msgs = []
    for h in basisH:
        hel = HA.element({h: F.one})
        lhs = CA.rho(CA._a(phi[h]))
        rhs = CA.T.zero()
        for w, c in CA.H.coproduct(hel).terms.items():
            h1, h2 = CA.H.T2.split(w)
            rhs = rhs + CA.pure(CA._a(phi[h1]), HA.element({h2: F.one})) * c
        if not lhs == rhs:
            msgs.append(f"φ is not a comodule map at {HA.format_word(h)}")
    if msgs:
        return CleftReport(False, msgs)
    # unknowns ψ(h_b) = Σ_a x[b,a] a
    nb, na = len(basisH), len(basisA)
    idxA = {w: i for i, w in enumerate(basisA)}
    eq_rows, rhs_vals = [], []
    for h in basisH:
        hel = HA.element({h: F.one})
        eps = CA.H.counit(hel)
        terms = list(CA.H.coproduct(hel).terms.items())
        for side in ("left", "right"):
            rows = [[F.zero] * (nb * na) for _ in range(na)]
            for w, c in terms:
                h1, h2 = CA.H.T2.split(w)
                known = CA._a(phi[h1] if side == "left" else phi[h2])
                unk = basisH.index(h2 if side == "left" else h1)
                for a in basisA:
                    aw = CA.A.element({a: F.one})
                    prod = known * aw if side == "left" else aw * known
                    for u, cc in prod.terms.items():
                        rows[idxA[u]][unk * na + idxA[a]] += c * cc
            target = [F.zero] * na
            target[idxA[()]] = eps
            eq_rows.extend(rows)
            rhs_vals.extend(target)
    sol = solve_linear(eq_rows, rhs_vals, nb * na, F.zero)
    if sol is None:
        return CleftReport(False, ["φ has no convolution inverse"])
    inv = {}
    for b, h in enumerate(basisH):
        inv[h] = CA.A.element({a: sol[b * na + i] for i, a in enumerate(basisA) if sol[b * na + i] != 0})
    return CleftReport(True, ["φ is a convolution-invertible comodule map"], inv)


def identity_phi(CA: ComoduleAlgebra, rename: dict | None = None) -> dict:
    """φ(h) = h read in A through a generator renaming (s ↦ s', t ↦ t' by default)."""
    rename = rename or {g: g + "'" for g in CA.H.A.generators}
    images = [CA.A.gen(rename[g]) for g in CA.H.A.generators]
    out = {}
    for w in _finite_basis(CA.H.A):
        out[w] = map_raw({w: CA.F.one}, images, CA.F, CA.A)
    return out


@dataclass
class Comodule:
    """Finite-dimensional right H-comodule: ρ(n_j) = Σ_i n_i ⊗ c[i][j]."""

    H: HopfPresentation
    c: list  # matrix of H elements

    @property
    def n(self):
        return len(self.c)

    def verify(self) -> Report:
        H = self.H
        F = H.F
        msgs = []
        for i in range(self.n):
            for j in range(self.n):
                lhs = H.coproduct(self.c[i][j])
                rhs = H.T2.zero()
                for k in range(self.n):
                    rhs = rhs + H.T2.pure([self.c[i][k], self.c[k][j]])
                if not lhs == rhs:
                    msgs.append(f"Δ(c_{i + 1}{j + 1}) != Σ c_ik ⊗ c_kj")
                if H.counit(self.c[i][j]) != (F.one if i == j else F.zero):
                    msgs.append(f"ε(c_{i + 1}{j + 1}) wrong")
        return Report(not msgs, msgs)


def taft_two_dim_comodule(H: HopfPresentation) -> Comodule:
    """ρ(m1) = m1⊗s^{N-1} + m2⊗s^{N-1}t, ρ(m2) = m2⊗1 (dual of s ↦ diag(q,1), t ↦ e21)."""
    A = H.A
    N = H.F.root_of_unity_order()
    sN1 = A.gen("s") ** (N - 1)
    return Comodule(H, [[sN1, A.zero()], [sN1 * A.gen("t"), A.one()]])


def trivial_comodule(H: HopfPresentation) -> Comodule:
    return Comodule(H, [[H.A.one()]])


def cleft_trivialize(N: Comodule, CA: ComoduleAlgebra, phi: dict, cleft: CleftReport | None = None) -> Report:
    """n ⊗ x ↦ Σ n_(0) ⊗ φ(n_(1))x and its φ^{-1}-twisted inverse.

    Checked on n_j ⊗ a for a in a basis of A: mutually inverse, and
    comodule maps from the diagonal coaction to the coaction on A only.
    """
    cleft = cleft or cleft_check(CA, phi)
    if not cleft.ok:
        return Report(False, ["precondition: φ not cleft"] + cleft.messages)
    rep = N.verify()
    if not rep.ok:
        return Report(False, ["N is not a comodule"] + rep.messages)
    F = CA.F
    psi = cleft.inverse
    n = N.n
    basisA = _finite_basis(CA.A)
    phic = [[_phi_apply(CA, phi, N.c[i][j]) for j in range(n)] for i in range(n)]
    psic = [[_phi_apply(CA, psi, N.c[i][j]) for j in range(n)] for i in range(n)]

    def Phi(vec):
        return [sum((phic[i][j] * vec[j] for j in range(n)), CA.A.zero()) for i in range(n)]

    def Psi(vec):
        return [sum((psic[i][j] * vec[j] for j in range(n)), CA.A.zero()) for i in range(n)]

    def diag_coaction(vec):
        # Σ_j n_j ⊗ x_j ↦ Σ_i n_i ⊗ Σ_j (1⊗c_ij) ρ(x_j)
        return [sum((CA.pure(1, N.c[i][j]) * CA.rho(vec[j]) for j in range(n)), CA.T.zero()) for i in range(n)]

    def right_coaction(vec):
        return [CA.rho(x) for x in vec]

    def Phi_id(tvec):
        # (Φ ⊗ id) on vectors of A⊗H elements
        return [sum((CA.pure(phic[i][j], 1) * tvec[j] for j in range(n)), CA.T.zero()) for i in range(n)]

    msgs = []
    checked = 0
    for j in range(n):
        for a in basisA:
            x = CA.A.element({a: F.one})
            vec = [x if i == j else CA.A.zero() for i in range(n)]
            checked += 1
            if Psi(Phi(vec)) != vec or Phi(Psi(vec)) != vec:
                msgs.append(f"maps not inverse on n_{j + 1} ⊗ {CA.A.format_word(a)}")
            if right_coaction(Phi(vec)) != Phi_id(diag_coaction(vec)):
                msgs.append(f"not a comodule map on n_{j + 1} ⊗ {CA.A.format_word(a)}")
    return Report(not msgs, msgs or [f"checked {checked} basis tensors"], {"checked": checked})


# ---------------------------------------------------------------------------
# universal coaction
# ---------------------------------------------------------------------------


def universal_coaction_roundtrip(S: Presentation, u, v, R: QsiAlgebra | None = None,
                                 degree: int = 3) -> Report:
    """Forward: (u', v') ↦ ψ with ψ(Y) = (Y⊗1)·[[u', v'],[0,1]], a qsi morphism R → R⊗S.
    Backward: (Y^{-1}⊗1)ψ(Y) has constant entries (u', v') again."""
    F = S.F
    R = R or builtin_R(F)
    u = S(u) if isinstance(u, str) else (u if isinstance(u, NCElement) else S.scalar(u))
    v = S(v) if isinstance(v, str) else (v if isinstance(v, NCElement) else S.scalar(v))
    msgs = []
    if not (u * v == v * u * F.q):
        return Report(False, ["precondition: u'v' != q v'u'"])
    # u' invertible: look for an inverse among normal words of low degree
    uinv = _find_inverse(S, u)
    if uinv is None:
        return Report(False, ["precondition: u' is not invertible"])
    T = tensor(R.A, S)
    A = R.A
    images = {"Q": T.pure([A.gen("Q"), u]), "Q^-1": T.pure([A.gen("Q^-1"), uinv]),
              "τ": T.pure([A.gen("τ"), S.one()]) + T.pure([A.gen("Q"), v])}
    rep = check_morphism(images, A, T)
    if not rep.ok:
        msgs.append("ψ does not respect the relations of R")
    imgs = [images[g] for g in A.generators]

    def psi(x):
        return map_raw(x.terms, imgs, F, T)

    def lift(op, y):
        out = T.zero()
        for w, c in y.terms.items():
            aw, sw = T.split(w)
            out = out + T.pure([op(A.element({aw: F.one})), S.element({sw: F.one})]) * c
        return out

    for w in A.normal_monomials(degree):
        x = A.element({w: F.one})
        if not psi(R.sigma(x)) == lift(R.sigma, psi(x)):
            msgs.append(f"ψ∘σ != σ∘ψ on {A.format_word(w)}")
        if not psi(R.theta(x)) == lift(R.theta, psi(x)):
            msgs.append(f"ψ∘θ != θ∘ψ on {A.format_word(w)}")
    # backward direction
    one = S.one()
    h11 = T.pure([A.gen("Q^-1"), one]) * psi(A.gen("Q"))
    h12 = T.pure([A.gen("Q^-1"), one]) * psi(A.gen("τ")) - T.pure([A("Q^-1*τ"), one])
    back = []
    for h in (h11, h12):
        val = S.zero()
        for w, c in h.terms.items():
            aw, sw = T.split(w)
            if aw:
                msgs.append("entry of (Y⊗1)^{-1}ψ(Y) is not constant")
                break
            val = val + S.element({sw: c})
        back.append(val)
    if len(back) == 2:
        if not (back[0] == u and back[1] == v):
            msgs.append("round trip does not return (u', v')")
        if not back[0] * back[1] == back[1] * back[0] * F.q:
            msgs.append("recovered pair fails u'v' = q v'u'")
    return Report(not msgs, msgs, {"psi": {g: repr(images[g]) for g in A.generators}})


def _find_inverse(S: Presentation, u: NCElement, max_degree: int = 4):
    F = S.F
    if u.is_scalar():
        c = u.scalar_part()
        return S.scalar(1 / c) if c != 0 else None
    words = S.normal_monomials(max_degree)
    index = {}
    cols = []
    for w in words:
        x = S.element({w: F.one})
        p1, p2 = u * x, x * u
        col = {("l", k): c for k, c in p1.terms.items()}
        col.update({("r", k): c for k, c in p2.terms.items()})
        for k in col:
            index.setdefault(k, len(index))
        cols.append(col)
    index.setdefault(("l", ()), len(index))
    index.setdefault(("r", ()), len(index))
    rows = [[F.zero] * len(words) for _ in index]
    for j, col in enumerate(cols):
        for k, c in col.items():
            rows[index[k]][j] = c
    rhs = [F.zero] * len(index)
    rhs[index[("l", ())]] = F.one
    rhs[index[("r", ())]] = F.one
    sol = solve_linear(rows, rhs, len(words), F.zero)
    if sol is None:
        return None
    return S.element({w: c for w, c in zip(words, sol) if c != 0})


# ---------------------------------------------------------------------------
# normalization of a fundamental system
# ---------------------------------------------------------------------------


@dataclass
class NormalizationReport:
    ok: bool
    messages: list
    a: NCElement | None = None
    b: NCElement | None = None
    f: NCElement | None = None
    g: object = None


def normalize_fundamental_system(A: QsiAlgebra, a, b, c, d, window=None) -> NormalizationReport:
    """Bring [[a, b],[c, d]] to [[a', b'],[0, 1]] with b' = b + g a', and map R onto A."""
    F = A.F
    if F.q == 1:
        raise ValueError("q = 1: the normalization divides by 1 - q")
    a, b, c, d = (A._coerce(x) for x in (a, b, c, d))
    msgs = []
    q = F.q
    hyp = [(A.sigma(a), a * q, "σ(a) = qa"), (A.theta(a), c, "θ(a) = c"),
           (A.sigma(c), c, "σ(c) = c"), (A.theta(c), A.A.zero(), "θ(c) = 0"),
           (A.sigma(b), b * q, "σ(b) = qb"), (A.theta(b), d, "θ(b) = d"),
           (A.sigma(d), d, "σ(d) = d"), (A.theta(d), A.A.zero(), "θ(d) = 0")]
    for lhs, rhs, label in hyp:
        if not lhs == rhs:
            msgs.append(f"hypothesis {label} fails")
    if msgs:
        return NormalizationReport(False, msgs)
    if not (c.is_scalar() and d.is_scalar()):
        return NormalizationReport(False, ["c, d are not scalars: constants exceed C in this window"])
    cc, dd = c.scalar_part(), d.scalar_part()
    if dd != 0:
        x, y = F.zero, 1 / dd
    elif cc != 0:
        x, y = 1 / cc, F.zero
    else:
        return NormalizationReport(False, ["c = d = 0: the matrix is not invertible"])
    a1 = a * dd - b * cc
    b1 = a * x + b * y
    ainv = _find_inverse(A.A, a1)
    if ainv is None:
        return NormalizationReport(False, ["a' is not invertible"])
    f = ainv * b1 * q - b1 * ainv
    if not (A.sigma(f) == f and A.theta(f).is_zero()):
        return NormalizationReport(False, ["f is not a constant"], a1, b1, f)
    if not f.is_scalar():
        return NormalizationReport(False, ["f is constant but not a scalar in this window"], a1, b1, f)
    g = f.scalar_part() / (1 - q)
    b2 = b1 + a1 * g
    # the map R → A: Q ↦ a', Q^-1 ↦ a'^{-1}, τ ↦ b'
    R = builtin_R(F, allow_root_of_unity=True)
    images = {"Q": a1, "Q^-1": ainv, "τ": b2}
    rep = check_morphism(images, R.A, A.A)
    if not rep.ok:
        msgs.append("Q ↦ a', τ ↦ b' does not respect the relations of R")
    imgs = [images[gn] for gn in R.A.generators]
    for gn in R.A.generators:
        x = R.A.gen(gn)
        if not map_raw(R.sigma(x).terms, imgs, F, A.A) == A.sigma(images[gn]):
            msgs.append(f"σ not preserved on {gn}")
        if not map_raw(R.theta(x).terms, imgs, F, A.A) == A.theta(images[gn]):
            msgs.append(f"θ not preserved on {gn}")
    # surjectivity: each generator of A has a preimage among low-degree words of R
    pre = {}
    words = R.A.normal_monomials(2)
    for gn in A.A.generators:
        target = A.A.gen(gn)
        index = {}
        cols = []
        for w in words:
            img = map_raw({w: F.one}, imgs, F, A.A)
            for k in img.terms:
                index.setdefault(k, len(index))
            cols.append(img)
        for k in target.terms:
            index.setdefault(k, len(index))
        rows = [[F.zero] * len(words) for _ in index]
        for j, img in enumerate(cols):
            for k, cf in img.terms.items():
                rows[index[k]][j] = cf
        rhs = [F.zero] * len(index)
        for k, cf in target.terms.items():
            rhs[index[k]] = cf
        sol = solve_linear(rows, rhs, len(words), F.zero)
        if sol is None:
            msgs.append(f"{gn} has no preimage of degree ≤ 2")
        else:
            pre[gn] = R.A.element({w: cf for w, cf in zip(words, sol) if cf != 0})
    if len(pre) == len(A.A.generators):
        # the preimage map A → R is an inverse on generators
        inv_imgs = [pre[gn] for gn in A.A.generators]
        for gn in R.A.generators:
            back = map_raw(images[gn].terms, inv_imgs, F, R.A)
            if not back == R.A.gen(gn):
                msgs.append(f"preimage map is not inverse on {gn}")
    return NormalizationReport(not msgs, msgs, a1, b2, f, g)
