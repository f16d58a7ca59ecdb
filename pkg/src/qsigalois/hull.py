"""The qsi field C(t) and its image in twisted series over F(ℤ, C(t)).

Functions n ↦ b(t, q^n) are modelled by two-variable rational functions
b(t, Q); the shift σ acts by Q ↦ qQ.  A :class:`HullElement` is a
truncated series Σ X^i a_i with a X = X Σ(a), whose coefficients are k×k
matrices over C(t, Q) (k = 1 for plain series, larger k for deformations
with coefficients in a finite-dimensional test algebra).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import sympy
from sympy import QQ
from sympy.polys.fields import field as sympy_field

from .scalars import ScalarField, gaussian_polynomial, q_factorial

DEFAULT_ORDER = 5


class HullContext:
    """The coefficient field C(t, Q) for a given scalar field."""

    def __init__(self, F: ScalarField):
        if F.kind == "cyclotomic" or F.root_of_unity_order() is not None:
            raise ValueError("the hull computations need q not a root of unity")
        self.F = F
        if F.kind == "rational_functions":
            self.K, self.qsym, self.t, self.Q = sympy_field("q,t,Q", QQ)
            self.q = self.qsym
            self._ti, self._Qi = 1, 2
        else:
            self.K, self.t, self.Q = sympy_field("t,Q", QQ)
            self.q = self.K(sympy.Rational(F.q.numerator, F.q.denominator))
            self._ti, self._Qi = 0, 1
        self.zero = self.K(0)
        self.one = self.K(1)

    def __eq__(self, other):
        return isinstance(other, HullContext) and other.F == self.F

    def __hash__(self):
        return hash(self.F)

    def scalar(self, c):
        if hasattr(c, "numer") and getattr(c, "field", None) == self.K:
            return c
        if self.F.kind == "rational_functions" and hasattr(c, "f"):
            return self.K.from_expr(c.f.as_expr())
        if isinstance(c, str):
            return self.parse(c)
        c = self.F(c)
        if hasattr(c, "numerator"):
            return self.K(sympy.Rational(c.numerator, c.denominator))
        return self.K.from_expr(sympy.sympify(str(c)))

    def parse(self, text: str):
        expr = sympy.sympify(text.replace("^", "**"), locals={"Q": sympy.Symbol("Q"), "t": sympy.Symbol("t"),
                                                             "q": sympy.Symbol("q")})
        if self.F.kind != "rational_functions":
            expr = expr.subs(sympy.Symbol("q"), sympy.Rational(self.F.q.numerator, self.F.q.denominator))
        return self.K.from_expr(expr)

    def format(self, a) -> str:
        return str(a.as_expr()).replace("**", "^")

    def _subs(self, a, index: int, value):
        R = self.K.ring
        x = R.gens[index]
        v = value.numer if value.denom == 1 else None
        if v is None:
            raise ValueError("substitution value must be a polynomial")
        return self.K.new(a.numer.compose(x, v), a.denom.compose(x, v))

    def _scale_var(self, a, index: int, c):
        """Substitute x ↦ c·x for the variable at ``index`` and a constant c ∈ K."""
        R = self.K.ring
        x = R.gens[index]
        num, den = c.numer, c.denom
        N, D = a.numer, a.denom
        d = max(N.degree(x), D.degree(x))

        def homog(P):
            out = R(0)
            for monom, coeff in P.terms():
                e = monom[index]
                out += R({monom: coeff}) * num ** e * den ** (d - e)
            return out
        return self.K.new(homog(N), homog(D))

    def shift_Q(self, a, j: int = 1):
        """Σ^j: Q ↦ q^j Q."""
        return a if j == 0 else self._scale_var(a, self._Qi, self.q ** j)

    def sigma_t(self, a, n: int = 1):
        """t ↦ q^n t."""
        return a if n == 0 else self._scale_var(a, self._ti, self.q ** n)

    def t_to_tQ(self, a):
        return self._subs(a, self._ti, self.t * self.Q)

    def eval_Q_power(self, a, n: int):
        """Q ↦ q^n."""
        c = self.q ** n
        R = self.K.ring
        Qv = R.gens[self._Qi]
        num, den = c.numer, c.denom

        def ev(P):
            d = P.degree(Qv)
            out = R(0)
            for monom, coeff in P.terms():
                e = monom[self._Qi]
                m = list(monom)
                m[self._Qi] = 0
                out += R({tuple(m): coeff}) * num ** e * den ** (d - e)
            return out, d
        (N, dn), (D, dd) = ev(a.numer), ev(a.denom)
        # N/den^dn over D/den^dd
        return self.K.new(N, D) * self.K.new(den ** dd, den ** dn) if dn != dd else self.K.new(N, D)

    def q_int(self, n: int):
        return sum((self.q ** i for i in range(n)), self.zero)

    def q_binom(self, m: int, n: int):
        coeffs = gaussian_polynomial(m, n)
        return sum((c * self.q ** i for i, c in enumerate(coeffs)), self.zero)

    def q_fact(self, n: int):
        out = self.one
        for i in range(1, n + 1):
            out = out * self.q_int(i)
        return out


# ---------------------------------------------------------------------------
# the qsi field C(t)
# ---------------------------------------------------------------------------


class RationalQsiField:
    """C(t) with σ(f)(t) = f(qt) and θ^(1)(f) = (f(qt) − f(t))/((q−1)t)."""

    def __init__(self, F: ScalarField):
        self.ctx = HullContext(F)

    def __call__(self, x):
        return self.ctx.parse(x) if isinstance(x, str) else self.ctx.scalar(x)

    def sigma(self, a, n: int = 1):
        return self.ctx.sigma_t(a, n)

    def theta1(self, a):
        c = self.ctx
        return (c.sigma_t(a) - a) / ((c.q - 1) * c.t)

    def theta(self, a, i: int = 1):
        for _ in range(i):
            a = self.theta1(a)
        return a / self.ctx.q_fact(i)


# ---------------------------------------------------------------------------
# series
# ---------------------------------------------------------------------------


def _mat_mul(A, B, zero):
    return [[sum((A[i][k] * B[k][j] for k in range(len(B))), zero) for j in range(len(B[0]))]
            for i in range(len(A))]


def _mat_add(A, B):
    return [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(A, B)]


def _mat_scale(A, c):
    return [[c * a for a in r] for r in A]


def _mat_is_zero(A):
    return all(a == 0 for r in A for a in r)


def _mat_inverse(A, ctx):
    n = len(A)
    M = [list(r) + [ctx.one if i == j else ctx.zero for j in range(n)] for i, r in enumerate(A)]
    for col in range(n):
        piv = next((i for i in range(col, n) if M[i][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("constant coefficient is not invertible")
        M[col], M[piv] = M[piv], M[col]
        inv = ctx.one / M[col][col]
        M[col] = [x * inv for x in M[col]]
        for i in range(n):
            if i != col and M[i][col] != 0:
                f = M[i][col]
                M[i] = [x - f * y for x, y in zip(M[i], M[col])]
    return [r[n:] for r in M]


class HullElement:
    """Σ_{i ≤ D} X^i a_i + O(X^{D+1}) with k×k matrix coefficients over C(t, Q)."""

    def __init__(self, ctx: HullContext, coeffs, prec: int = DEFAULT_ORDER, k: int | None = None):
        self.ctx = ctx
        coeffs = list(coeffs)
        if k is None:
            k = len(coeffs[0]) if coeffs and isinstance(coeffs[0], list) else 1
        self.k = k
        norm = []
        for a in coeffs[:prec + 1]:
            if not isinstance(a, list):
                a = [[ctx.scalar(a) if i == j else ctx.zero for j in range(k)] for i in range(k)]
            norm.append([[ctx.scalar(x) for x in r] for r in a])
        zero = [[ctx.zero] * k for _ in range(k)]
        while len(norm) < prec + 1:
            norm.append([list(r) for r in zero])
        self.coeffs = norm
        self.prec = prec

    @classmethod
    def constant(cls, ctx, a, prec=DEFAULT_ORDER, k=1):
        return cls(ctx, [a], prec, k)

    @classmethod
    def X(cls, ctx, prec=DEFAULT_ORDER, k=1):
        return cls(ctx, [0, 1], prec, k)

    @classmethod
    def Q(cls, ctx, prec=DEFAULT_ORDER, k=1):
        return cls(ctx, [ctx.Q], prec, k)

    def _new(self, coeffs, prec=None):
        return HullElement(self.ctx, coeffs, self.prec if prec is None else prec, self.k)

    def _prec(self, other):
        return min(self.prec, other.prec)

    def _coerce(self, other):
        if isinstance(other, HullElement):
            return other
        return HullElement.constant(self.ctx, other, self.prec, self.k)

    def __add__(self, other):
        other = self._coerce(other)
        p = self._prec(other)
        return self._new([_mat_add(a, b) for a, b in zip(self.coeffs[:p + 1], other.coeffs[:p + 1])], p)

    __radd__ = __add__

    def __neg__(self):
        return self._new([_mat_scale(a, -self.ctx.one) for a in self.coeffs])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        p = self._prec(other)
        ctx = self.ctx
        out = []
        for n in range(p + 1):
            acc = [[ctx.zero] * self.k for _ in range(self.k)]
            for i in range(n + 1):
                j = n - i
                a, b = self.coeffs[i], other.coeffs[j]
                if _mat_is_zero(a) or _mat_is_zero(b):
                    continue
                sa = [[ctx.shift_Q(x, j) for x in r] for r in a]
                acc = _mat_add(acc, _mat_mul(sa, b, ctx.zero))
            out.append(acc)
        return self._new(out, p)

    def __rmul__(self, other):
        return self._coerce(other) * self

    def inverse(self) -> "HullElement":
        """b_k = σ^k(a_0)^{-1}(−Σ_{i≥1} σ^{k−i}(a_i) b_{k−i})."""
        ctx = self.ctx
        a = self.coeffs
        b = []
        for n in range(self.prec + 1):
            s_a0_inv = _mat_inverse([[ctx.shift_Q(x, n) for x in r] for r in a[0]], ctx)
            if n == 0:
                b.append(s_a0_inv)
                continue
            acc = [[ctx.zero] * self.k for _ in range(self.k)]
            for i in range(1, n + 1):
                sa = [[ctx.shift_Q(x, n - i) for x in r] for r in a[i]]
                acc = _mat_add(acc, _mat_mul(sa, b[n - i], ctx.zero))
            b.append(_mat_mul(s_a0_inv, _mat_scale(acc, -ctx.one), ctx.zero))
        return self._new(b)

    def hat_sigma(self) -> "HullElement":
        ctx = self.ctx
        return self._new([[[ctx.q ** i * ctx.shift_Q(x) for x in r] for r in a] for i, a in enumerate(self.coeffs)])

    def hat_theta(self, l: int = 1) -> "HullElement":
        ctx = self.ctx
        out = []
        for i in range(self.prec + 1 - l):
            c = ctx.q_binom(i + l, l)
            out.append(_mat_scale(self.coeffs[i + l], c))
        if not out:
            out = [[[ctx.zero] * self.k for _ in range(self.k)]]
        return self._new(out, self.prec - l)

    def d_dt(self) -> "HullElement":
        ctx = self.ctx
        return self._new([[[x.diff(ctx.t) for x in r] for r in a] for a in self.coeffs])

    def evaluate(self, n: int) -> list:
        """Coefficients with Q ↦ q^n: the values at n of the functions ℤ → C(t)."""
        ctx = self.ctx
        return [[[ctx.eval_Q_power(x, n) for x in r] for r in a] for a in self.coeffs]

    def truncate(self, D: int) -> "HullElement":
        return self._new(self.coeffs[:D + 1], min(D, self.prec))

    def first_difference(self, other, D: int | None = None):
        other = self._coerce(other)
        p = self._prec(other) if D is None else min(D, self._prec(other))
        for i in range(p + 1):
            if self.coeffs[i] != other.coeffs[i]:
                return i
        return None

    def equal_through(self, other, D: int | None = None) -> bool:
        return self.first_difference(other, D) is None

    def coeff(self, i: int):
        a = self.coeffs[i]
        return a[0][0] if self.k == 1 else a

    def __repr__(self):
        ctx = self.ctx
        parts = []
        for i, a in enumerate(self.coeffs):
            if _mat_is_zero(a):
                continue
            s = ctx.format(a[0][0]) if self.k == 1 else str([[ctx.format(x) for x in r] for r in a])
            if i == 0:
                parts.append(s)
            else:
                xs = "X" if i == 1 else f"X^{i}"
                parts.append(xs if s == "1" else f"{xs}*({s})")
        return (" + ".join(parts) if parts else "0") + f" + O(X^{self.prec + 1})"


# ---------------------------------------------------------------------------
# the universal Hopf morphism
# ---------------------------------------------------------------------------


def universal_hopf(L: RationalQsiField, a, D: int = DEFAULT_ORDER) -> HullElement:
    """ι(a) = Σ X^i θ^(i)(a)(t ↦ tQ)."""
    ctx = L.ctx
    a = L(a) if not hasattr(a, "numer") else a
    coeffs = []
    cur = a
    for i in range(D + 1):
        coeffs.append(ctx.t_to_tQ(cur / ctx.q_fact(i)))
        cur = L.theta1(cur)
    return HullElement(ctx, coeffs, D)


@dataclass
class Report:
    ok: bool
    messages: list = field(default_factory=list)
    data: dict = field(default_factory=dict)

    def __bool__(self):
        return self.ok


def verify_qsi_morphism(L: RationalQsiField, a, b, D: int = DEFAULT_ORDER, max_theta: int = 3) -> Report:
    a = L(a) if not hasattr(a, "numer") else a
    b = L(b) if not hasattr(b, "numer") else b
    msgs = []
    ia, ib = universal_hopf(L, a, D), universal_hopf(L, b, D)
    d = universal_hopf(L, a * b, D).first_difference(ia * ib)
    if d is not None:
        msgs.append(f"ι(ab) != ι(a)ι(b) at X^{d}")
    d = universal_hopf(L, L.sigma(a), D).first_difference(ia.hat_sigma())
    if d is not None:
        msgs.append(f"ι(σa) != Σ̂ι(a) at X^{d}")
    for i in range(1, max_theta + 1):
        lhs = universal_hopf(L, L.theta(a, i), D - i)
        d = lhs.first_difference(ia.hat_theta(i))
        if d is not None:
            msgs.append(f"ι(θ^({i})a) != Θ̂^({i})ι(a) at X^{d}")
    return Report(not msgs, msgs)


def hull_generator(ctx: HullContext, c, D: int = DEFAULT_ORDER, k: int = 1) -> HullElement:
    """G_c = (c + tQ + X)^{-1}."""
    c = ctx.scalar(c)
    P = HullElement(ctx, [c + ctx.t * ctx.Q, 1], D, k)
    return P.inverse()


def hull_stability_check(F: ScalarField, c, D: int = DEFAULT_ORDER) -> Report:
    """Σ̂, Θ̂^(1) and ∂/∂t map the generators X, Q, G_c back into the hull:

    Σ̂G_c = q^{-1}G_{c/q},  Θ̂G_c = −q^{-1}G_{c/q}G_c,  ∂_t G_c = −G_c Q G_c.
    """
    ctx = HullContext(F)
    c = ctx.scalar(c)
    q = ctx.q
    X, Qs = HullElement.X(ctx, D), HullElement.Q(ctx, D)
    G = hull_generator(ctx, c, D)
    G2 = hull_generator(ctx, c / q, D)
    checks = [
        ("Σ̂X = qX", X.hat_sigma(), X * q),
        ("Θ̂X = 1", X.hat_theta(), HullElement.constant(ctx, 1, D - 1)),
        ("∂X = 0", X.d_dt(), HullElement.constant(ctx, 0, D)),
        ("Σ̂Q = qQ", Qs.hat_sigma(), Qs * q),
        ("Θ̂Q = 0", Qs.hat_theta(), HullElement.constant(ctx, 0, D - 1)),
        ("∂Q = 0", Qs.d_dt(), HullElement.constant(ctx, 0, D)),
        ("QX = qXQ", Qs * X, X * Qs * q),
        ("G_c(c+tQ+X) = 1", G * HullElement(ctx, [c + ctx.t * ctx.Q, 1], D), HullElement.constant(ctx, 1, D)),
        ("Σ̂G_c = q^-1 G_{c/q}", G.hat_sigma(), G2 * (1 / q)),
        ("Σ̂G_c = (c + q(tQ+X))^-1", G.hat_sigma(), HullElement(ctx, [c + q * ctx.t * ctx.Q, q], D).inverse()),
        ("Θ̂G_c = −q^-1 G_{c/q} G_c", G.hat_theta(), (G2 * G) * (-1 / q)),
        ("∂G_c = −G_c Q G_c", G.d_dt(), -(G * Qs * G)),
        ("∂ι(t) = Q", universal_hopf(RationalQsiField(F), "t", D).d_dt(), Qs),
    ]
    msgs = []
    for label, lhs, rhs in checks:
        d = lhs.first_difference(rhs)
        if d is not None:
            msgs.append(f"{label} fails at X^{d}")
    return Report(not msgs, msgs, {"checks": [c[0] for c in checks], "order": D})


# ---------------------------------------------------------------------------
# deformations
# ---------------------------------------------------------------------------


@dataclass
class Witness:
    """A pair (e, f) of k×k matrices over F with ef = qfe."""

    F: ScalarField
    e: list
    f: list

    @property
    def k(self):
        return len(self.e)


def _fmat_mul(A, B, F):
    return [[sum((A[i][l] * B[l][j] for l in range(len(B))), F.zero) for j in range(len(B[0]))]
            for i in range(len(A))]


def _fmat_eq(A, B):
    return all(a == b for r1, r2 in zip(A, B) for a, b in zip(r1, r2))


def _nilpotent(M, F) -> bool:
    n = len(M)
    P = M
    for _ in range(n):
        if all(x == 0 for r in P for x in r):
            return True
        P = _fmat_mul(P, M, F)
    return all(x == 0 for r in P for x in r)


def witness(F: ScalarField, e, f) -> Witness:
    e = [[F.parse(x) if isinstance(x, str) else F(x) for x in r] for r in e]
    f = [[F.parse(x) if isinstance(x, str) else F(x) for x in r] for r in f]
    return Witness(F, e, f)


def regular_representation(F: ScalarField, basis, table) -> dict:
    """Left-regular matrices of a multiplication table {"a*b": {"c": coeff}}."""
    idx = {b: i for i, b in enumerate(basis)}
    mats = {}
    for a in basis:
        M = [[F.zero] * len(basis) for _ in basis]
        for b in basis:
            for c, coeff in table.get(f"{a}*{b}", {}).items():
                M[idx[c]][idx[b]] += F.parse(coeff) if isinstance(coeff, str) else F(coeff)
        mats[a] = M
    return mats


def load_witness(F: ScalarField, data) -> Witness:
    """JSON: {"e": matrix, "f": matrix} or {"basis", "table", "e": {basis: coeff}, "f": {...}}."""
    if isinstance(data, str):
        data = json.loads(data)
    if "table" in data:
        mats = regular_representation(F, data["basis"], data["table"])
        n = len(data["basis"])

        def combo(d):
            M = [[F.zero] * n for _ in range(n)]
            for b, c in d.items():
                c = F.parse(c) if isinstance(c, str) else F(c)
                M = [[x + c * y for x, y in zip(r1, r2)] for r1, r2 in zip(M, mats[b])]
            return M
        return Witness(F, combo(data["e"]), combo(data["f"]))
    return witness(F, data["e"], data["f"])


def identity_witness(F: ScalarField, k: int = 1) -> Witness:
    return Witness(F, [[F.one if i == j else F.zero for j in range(k)] for i in range(k)],
                   [[F.zero] * k for _ in range(k)])


def check_witness(w: Witness) -> Report:
    F = w.F
    msgs = []
    ef = _fmat_mul(w.e, w.f, F)
    fe = _fmat_mul(w.f, w.e, F)
    if not _fmat_eq(ef, [[F.q * x for x in r] for r in fe]):
        msgs.append("ef != q fe")
    try:
        from .seq import _mat_inverse_scalar
        _mat_inverse_scalar(w.e, F)
    except ArithmeticError:
        msgs.append("e is not invertible")
    if not _nilpotent(w.f, F):
        msgs.append("f is not nilpotent")
    one = [[F.one if i == j else F.zero for j in range(w.k)] for i in range(w.k)]
    unipotent = _nilpotent([[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(w.e, one)], F)
    return Report(not msgs, msgs, {"e_minus_1_nilpotent": unipotent})


class Deformation:
    """φ(Q) = eQ, φ(X) = X + fQ, identity on C(t)."""

    def __init__(self, w: Witness, D: int = DEFAULT_ORDER):
        self.w = w
        self.ctx = HullContext(w.F)
        self.D = D
        ctx = self.ctx
        k = w.k
        self.e = [[ctx.scalar(x) for x in r] for r in w.e]
        self.f = [[ctx.scalar(x) for x in r] for r in w.f]
        eQ = [[x * ctx.Q for x in r] for r in self.e]
        fQ = [[x * ctx.Q for x in r] for r in self.f]
        one = [[ctx.one if i == j else ctx.zero for j in range(k)] for i in range(k)]
        self.Q = HullElement(ctx, [eQ], D, k)
        self.X = HullElement(ctx, [fQ, one], D, k)

    def scalar(self, c) -> HullElement:
        return HullElement.constant(self.ctx, c, self.D, self.w.k)

    def G(self, c) -> HullElement:
        """φ(G_c) = (c + t eQ + X + fQ)^{-1}."""
        ctx = self.ctx
        return (self.scalar(self.ctx.scalar(c)) + self.Q * ctx.t + self.X).inverse()


def deformation_witness(w: Witness, D: int = DEFAULT_ORDER, c=1) -> Report:
    rep = check_witness(w)
    if not rep.ok:
        return Report(False, ["precondition: " + m for m in rep.messages], rep.data)
    phi = Deformation(w, D)
    ctx = phi.ctx
    q = ctx.q
    c = ctx.scalar(c)
    Qd, Xd = phi.Q, phi.X
    G, G2 = phi.G(c), phi.G(c / q)
    P = phi.scalar(c) + Qd * ctx.t + Xd
    checks = [
        ("φ(Q)φ(X) = qφ(X)φ(Q)", Qd * Xd, Xd * Qd * q),
        ("Σ̂φ(Q) = φ(qQ)", Qd.hat_sigma(), Qd * q),
        ("Σ̂φ(X) = φ(qX)", Xd.hat_sigma(), Xd * q),
        ("Θ̂φ(Q) = 0", Qd.hat_theta(), HullElement.constant(ctx, 0, D - 1, w.k)),
        ("Θ̂φ(X) = 1", Xd.hat_theta(), HullElement.constant(ctx, 1, D - 1, w.k)),
        ("φ(G_c)φ(c+tQ+X) = 1", G * P, phi.scalar(1)),
        ("Σ̂φ(G_c) = q^-1 φ(G_{c/q})", G.hat_sigma(), G2 * (1 / q)),
        ("Θ̂φ(G_c) = −q^-1 φ(G_{c/q})φ(G_c)", G.hat_theta(), (G2 * G) * (-1 / q)),
    ]
    msgs = []
    for label, lhs, rhs in checks:
        d = lhs.first_difference(rhs)
        if d is not None:
            msgs.append(f"{label} fails at X^{d}")
    data = dict(rep.data)
    data["checks"] = [c[0] for c in checks]
    return Report(not msgs, msgs, data)


def _commute(A, B, F) -> bool:
    return _fmat_eq(_fmat_mul(A, B, F), _fmat_mul(B, A, F))


def deformation_compose(w1: Witness, w2: Witness) -> Witness:
    """[[e1, f1],[0, 1]]·[[e2, f2],[0, 1]] = [[e1e2, e1f2 + f1],[0, 1]]."""
    F = w1.F
    for a in (w1.e, w1.f):
        for b in (w2.e, w2.f):
            if not _commute(a, b, F):
                raise ValueError("the two witnesses do not commute with each other")
    e = _fmat_mul(w1.e, w2.e, F)
    ef = _fmat_mul(w1.e, w2.f, F)
    f = [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(ef, w1.f)]
    return Witness(F, e, f)


def kron_witness(w: Witness, k: int, side: str) -> Witness:
    """Embed w into k-fold larger matrices as w⊗1 (side="left") or 1⊗w (side="right")."""
    F = w.F
    I = [[F.one if i == j else F.zero for j in range(k)] for i in range(k)]

    def kron(A, B):
        return [[A[i // len(B)][j // len(B)] * B[i % len(B)][j % len(B)]
                 for j in range(len(A) * len(B))] for i in range(len(A) * len(B))]
    if side == "left":
        return Witness(F, kron(w.e, I), kron(w.f, I))
    return Witness(F, kron(I, w.e), kron(I, w.f))
