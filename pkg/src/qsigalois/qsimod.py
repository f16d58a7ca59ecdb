"""Finite-dimensional qsi modules over the constant field and their solutions.

A module is stored by the matrices of s and t acting on column coordinates,
``A = π(s)`` and ``B = π(t)``, which satisfy ``B A = q A B``.  The linear
system for the basis vector m, ``σ(m) = A' m`` and ``θ(m) = B' m``, uses
the transposes ``A' = Aᵀ``, ``B' = Bᵀ`` (these satisfy ``A' B' = q B' A'``).

:func:`solve` returns the fundamental matrix

    Y = Σ_i X^i B'^i 𝔸 / [i]_q!,   𝔸(n) = A'^n,

so that ``Σ̂ Y = A' Y`` and ``Θ̂ Y = B' Y``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .scalars import ScalarField, q_factorial
from .seq import (DEFAULT_ORDER, CFiniteSeq, NotInvertibleError, SeqMatrix, TwistedSeries,
                  _mat_inverse_scalar, _mat_mul_scalar, closed_form, hat_sigma, hat_theta,
                  series_invert, series_multiply)


def _transpose(M):
    return [list(r) for r in zip(*M)]


def _eq(M, N):
    return all(a == b for r1, r2 in zip(M, N) for a, b in zip(r1, r2))


def _add(M, N):
    return [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(M, N)]


def _scale(M, c):
    return [[c * a for a in r] for r in M]


def _kron(M, N, F):
    return [[M[i // len(N)][j // len(N[0])] * N[i % len(N)][j % len(N[0])]
             for j in range(len(M[0]) * len(N[0]))] for i in range(len(M) * len(N))]


def _identity(n, F):
    return [[F.one if i == j else F.zero for j in range(n)] for i in range(n)]


def _is_zero(M):
    return all(a == 0 for r in M for a in r)


@dataclass
class QsiModuleSpec:
    """Matrices of s and t on an n-dimensional module (B A = q A B)."""

    F: ScalarField
    A: list
    B: list

    def __post_init__(self):
        self.A = [[self.F(x) for x in row] for row in self.A]
        self.B = [[self.F(x) for x in row] for row in self.B]
        n = len(self.A)
        if any(len(r) != n for r in self.A) or len(self.B) != n or any(len(r) != n for r in self.B):
            raise ValueError("A and B must be square of the same size")

    @property
    def n(self) -> int:
        return len(self.A)

    @property
    def system_A(self):
        return _transpose(self.A)

    @property
    def system_B(self):
        return _transpose(self.B)

    @classmethod
    def from_system(cls, F, A, B) -> "QsiModuleSpec":
        """Build from system matrices (σ(m) = A m, A B = q B A)."""
        return cls(F, _transpose([[F(x) for x in r] for r in A]), _transpose([[F(x) for x in r] for r in B]))

    @classmethod
    def trivial(cls, F, n: int = 1) -> "QsiModuleSpec":
        return cls(F, _identity(n, F), [[F.zero] * n for _ in range(n)])

    @classmethod
    def from_json(cls, data, F: ScalarField) -> "QsiModuleSpec":
        if isinstance(data, str):
            data = json.loads(data)

        def conv(M):
            return [[F.parse(x) if isinstance(x, str) else F(x) for x in row] for row in M]

        A, B = conv(data["A"]), conv(data["B"])
        if "n" in data and data["n"] != len(A):
            raise ValueError("n does not match the matrix size")
        conv_flag = data.get("convention", "partIII")
        if conv_flag == "partIII":
            return cls(F, A, B)
        if conv_flag in ("partII-transposed", "partII"):
            return cls.from_system(F, A, B)
        raise ValueError(f"unknown convention {conv_flag!r}")

    def to_json(self) -> dict:
        fmt = self.F.format
        return {"n": self.n, "A": [[fmt(x) for x in r] for r in self.A],
                "B": [[fmt(x) for x in r] for r in self.B], "convention": "partIII"}


@dataclass
class Report:
    ok: bool
    messages: list = field(default_factory=list)
    data: dict = field(default_factory=dict)

    def __bool__(self):
        return self.ok


class InvalidModuleError(ValueError):
    pass


def validate(spec: QsiModuleSpec) -> Report:
    F = spec.F
    A, B, q = spec.A, spec.B, F.q
    msgs = []
    try:
        _mat_inverse_scalar(A, F)
    except NotInvertibleError:
        return Report(False, ["A is not invertible"])
    BA = _mat_mul_scalar(B, A, F)
    AB = _mat_mul_scalar(A, B, F)
    if _eq(BA, _scale(AB, q)):
        return Report(True, ["B A = q A B holds (module convention)"], {"convention": "partIII"})
    msgs.append("B A = q A B fails")
    if _eq(AB, _scale(BA, q)):
        msgs.append("A B = q B A holds: these are system matrices; ingest with convention partII-transposed")
        return Report(False, msgs, {"convention": "partII-transposed"})
    return Report(False, msgs)


def require_valid(spec: QsiModuleSpec) -> QsiModuleSpec:
    rep = validate(spec)
    if not rep.ok:
        raise InvalidModuleError("; ".join(rep.messages))
    return spec


def tensor(spec1: QsiModuleSpec, spec2: QsiModuleSpec) -> QsiModuleSpec:
    """s ↦ A1⊗A2, t ↦ A1⊗B2 + B1⊗I."""
    F = spec1.F
    if spec2.F != F:
        raise ValueError("modules over different fields")
    A = _kron(spec1.A, spec2.A, F)
    B = _add(_kron(spec1.A, spec2.B, F), _kron(spec1.B, _identity(spec2.n, F), F))
    return QsiModuleSpec(F, A, B)


def dual(spec: QsiModuleSpec) -> QsiModuleSpec:
    """Left module on M* through the antipode: s ↦ (A^{-1})ᵀ, t ↦ (−q B A^{-1})ᵀ."""
    F = spec.F
    Ainv = _mat_inverse_scalar(spec.A, F)
    Bs = _scale(_mat_mul_scalar(spec.B, Ainv, F), -F.q)
    return QsiModuleSpec(F, _transpose(Ainv), _transpose(Bs))


def nilpotency_index(M, F) -> int | None:
    """Smallest k with M^k = 0, or None."""
    n = len(M)
    P = _identity(n, F)
    for k in range(1, n + 1):
        P = _mat_mul_scalar(P, M, F)
        if _is_zero(P):
            return k
    return None


# ---------------------------------------------------------------------------
# matrices of twisted series
# ---------------------------------------------------------------------------


class SeriesMatrix:
    """An n×n matrix over the twisted series ring, stored as one series with
    matrix-of-sequence coefficients."""

    def __init__(self, series: TwistedSeries):
        self.series = series

    @property
    def F(self):
        return self.series.F

    @property
    def n(self):
        return self.series.coeffs[0].n

    @property
    def prec(self):
        return self.series.prec

    def entry(self, i: int, j: int) -> TwistedSeries:
        return TwistedSeries([c.rows[i][j] for c in self.series.coeffs], self.series.prec)

    def entries(self):
        return [[self.entry(i, j) for j in range(self.n)] for i in range(self.n)]

    @classmethod
    def from_entries(cls, F, rows, prec=None) -> "SeriesMatrix":
        n = len(rows)
        length = max(len(e.coeffs) for r in rows for e in r)
        if prec is not None:
            length = prec + 1
        coeffs = []
        for k in range(length):
            coeffs.append(SeqMatrix(F, [[rows[i][j].coeff(k) for j in range(n)] for i in range(n)]))
        return cls(TwistedSeries(coeffs, prec))

    def left_constant(self, M) -> "SeriesMatrix":
        C = SeqMatrix.constant(self.F, M)
        return SeriesMatrix(TwistedSeries([C * a for a in self.series.coeffs], self.prec))

    def right_constant(self, M) -> "SeriesMatrix":
        C = SeqMatrix.constant(self.F, M)
        return SeriesMatrix(TwistedSeries([a * C for a in self.series.coeffs], self.prec))

    def __mul__(self, other: "SeriesMatrix") -> "SeriesMatrix":
        return SeriesMatrix(series_multiply(self.series, other.series))

    def __add__(self, other):
        return SeriesMatrix(self.series + other.series)

    def __neg__(self):
        return SeriesMatrix(-self.series)

    def hat_sigma(self):
        return SeriesMatrix(hat_sigma(self.series))

    def hat_theta(self, l: int = 1):
        return SeriesMatrix(hat_theta(l, self.series))

    def inverse(self, D: int | None = None) -> "SeriesMatrix":
        """Two-sided inverse; exact when self is an exact polynomial whose
        inverse is again a polynomial (checked by multiplying back)."""
        S = self.series
        if S.prec is None:
            bound = max(D or 0, (len(S.coeffs) - 1) * self.n + 1)
            T = series_invert(S, bound)
            Z = TwistedSeries(T.coeffs, None)
            one = TwistedSeries([SeqMatrix.identity(self.F, self.n)], None)
            if series_multiply(S, Z) == one and series_multiply(Z, S) == one:
                return SeriesMatrix(Z)
        return SeriesMatrix(series_invert(S, D))

    def first_difference(self, other, D):
        for k in range(D + 1):
            a, b = self.series.coeff(k), other.series.coeff(k)
            for i in range(self.n):
                for j in range(self.n):
                    if not a.rows[i][j] == b.rows[i][j]:
                        return (k, i, j)
        return None

    def format(self, names=None) -> list:
        names = names or default_names(self.F)
        out = []
        for i in range(self.n):
            row = []
            for j in range(self.n):
                row.append(format_series(self.entry(i, j), names))
            out.append(row)
        return out

    def to_string(self, names=None) -> str:
        return "[" + ", ".join("[" + ", ".join(r) + "]" for r in self.format(names)) + "]"

    def __repr__(self):
        return self.to_string()


def default_names(F: ScalarField, extra=None) -> dict:
    """Labels for geometric sequences used when printing: Q(n) = q^n and Q^-1."""
    names = {"Q": F.q, "Q^-1": 1 / F.q, "Q^2": F.q ** 2, "Q^-2": 1 / F.q ** 2}
    for k, v in (extra or {}).items():
        names[k] = F(v)
        names[k + "^-1"] = 1 / F(v)
    return names


def format_series(S: TwistedSeries, names) -> str:
    parts = []
    for i, a in enumerate(S.coeffs):
        if a.is_zero():
            continue
        s = closed_form(a, names) or repr(a)
        if i and s == "1":
            parts.append("X" if i == 1 else f"X^{i}")
            continue
        if i and any(ch in s for ch in " +") and not s.startswith("["):
            s = f"({s})"
        parts.append(s if i == 0 else (f"X*{s}" if i == 1 else f"X^{i}*{s}"))
    out = " + ".join(parts) if parts else "0"
    if S.prec is not None:
        out += f" + O(X^{S.prec + 1})"
    return out


@dataclass
class SolutionMatrix:
    Y: SeriesMatrix
    spec: QsiModuleSpec
    exact: bool
    notes: list = field(default_factory=list)


def solve(spec: QsiModuleSpec, D: int = DEFAULT_ORDER) -> SolutionMatrix:
    require_valid(spec)
    F = spec.F
    A, B = spec.system_A, spec.system_B
    N = F.root_of_unity_order()
    k = nilpotency_index(B, F)
    if N is not None and (k is None or k > N):
        raise ValueError(
            f"q is a root of unity of order {N} and B is not nilpotent of index <= {N}: "
            "the solution would divide by a vanishing q-factorial")
    power = SeqMatrix.power_sequence(F, A)
    notes = []
    terms = []
    Bi = _identity(spec.n, F)
    i = 0
    while True:
        if _is_zero(Bi):
            exact = True
            break
        if i > D:
            exact = False
            notes.append(f"B is not nilpotent; series truncated at X^{D}")
            break
        coeff = _scale(Bi, 1 / q_factorial(i, F))
        terms.append(SeqMatrix.constant(F, coeff) * power)
        Bi = _mat_mul_scalar(Bi, B, F)
        i += 1
    Y = SeriesMatrix(TwistedSeries(terms, None if exact else D))
    return SolutionMatrix(Y, spec, exact, notes)


def _limits(S: SeriesMatrix):
    """Degrees through which Σ̂-type and Θ̂-type identities can be compared."""
    if S.prec is None:
        lim = len(S.series.coeffs)
        return lim, lim
    return S.prec, S.prec - 1


def _const(F, M, prec):
    return SeriesMatrix(TwistedSeries([SeqMatrix.constant(F, M)], prec))


def verify_solution(sol: SolutionMatrix, D: int = DEFAULT_ORDER) -> Report:
    spec, Y = sol.spec, sol.Y
    F = spec.F
    A, B = spec.system_A, spec.system_B
    ls, lt = _limits(Y)
    msgs = []
    diff = Y.hat_sigma().first_difference(Y.left_constant(A), ls)
    if diff is not None:
        msgs.append(f"Σ̂Y = AY fails at X^{diff[0]}, entry ({diff[1]},{diff[2]})")
    diff = Y.hat_theta(1).first_difference(Y.left_constant(B), lt)
    if diff is not None:
        msgs.append(f"Θ̂Y = BY fails at X^{diff[0]}, entry ({diff[1]},{diff[2]})")
    try:
        Z = Y.inverse(Y.prec if Y.prec is not None else D)
        lim = _limits(Z)[0]
        one = _const(F, _identity(spec.n, F), Z.prec)
        if (Y * Z).first_difference(one, lim) is not None or (Z * Y).first_difference(one, lim) is not None:
            msgs.append("Y Z != 1")
    except NotInvertibleError as exc:
        msgs.append(f"Y not invertible: {exc}")
    return Report(not msgs, msgs)


@dataclass
class Trivialization:
    Z: SeriesMatrix
    report: Report


def trivializing_matrix(sol: SolutionMatrix, D: int = DEFAULT_ORDER) -> Trivialization:
    """Z = Y^{-1}, with σ(Z) = Z A^{-1} and θ(Z) = −Z A^{-1} B checked."""
    spec = sol.spec
    F = spec.F
    A, B = spec.system_A, spec.system_B
    Ainv = _mat_inverse_scalar(A, F)
    Z = sol.Y.inverse(sol.Y.prec if sol.Y.prec is not None else D)
    ls, lt = _limits(Z)
    msgs = []
    if Z.hat_sigma().first_difference(Z.right_constant(Ainv), ls) is not None:
        msgs.append("σ(Z) = Z A^{-1} fails")
    rhs = -Z.right_constant(_mat_mul_scalar(Ainv, B, F))
    if Z.hat_theta(1).first_difference(rhs, lt) is not None:
        msgs.append("θ(Z) = −Z A^{-1} B fails")
    # c = Z m: σ(c) = σ(Z) A m and θ(c) = (θ(Z) + σ(Z) B) m
    sZ = Z.hat_sigma()
    if sZ.right_constant(A).first_difference(Z, ls) is not None:
        msgs.append("constants Z m are not σ-fixed")
    zero = _const(F, [[0] * spec.n for _ in range(spec.n)], Z.prec)
    if (Z.hat_theta(1) + sZ.right_constant(B)).first_difference(zero, lt) is not None:
        msgs.append("constants Z m are not θ-killed")
    # back direction: Z^{-1} is again a fundamental system
    Y2 = Z.inverse(Z.prec if Z.prec is not None else D)
    back = verify_solution(SolutionMatrix(Y2, spec, Y2.prec is None), D)
    if not back.ok:
        msgs.append("Z^{-1} is not a fundamental system: " + "; ".join(back.messages))
    return Trivialization(Z, Report(not msgs, msgs))


# ---------------------------------------------------------------------------
# worked examples
# ---------------------------------------------------------------------------


def first_example(F: ScalarField) -> QsiModuleSpec:
    """σ(m1) = q m1, θ(m1) = m2, m2 constant: π(s) = diag(q,1), π(t) = e21."""
    return QsiModuleSpec(F, [[F.q, 0], [0, 1]], [[0, 0], [1, 0]])


def jordan_example(F: ScalarField) -> QsiModuleSpec:
    """3-dimensional example with a Jordan block in σ."""
    q = F.q
    return QsiModuleSpec.from_system(F, [[q, 1, 0], [0, q, 0], [0, 0, 1]],
                                     [[0, 0, 1], [0, 0, 0], [0, 0, 0]])


def scaled_example(F: ScalarField, l) -> QsiModuleSpec:
    """2-dimensional example with σ = l·diag(q, 1)."""
    l = F(l)
    return QsiModuleSpec.from_system(F, [[l * F.q, 0], [0, l]], [[0, 1], [0, 0]])


def three_dim_example(F: ScalarField) -> QsiModuleSpec:
    q = F.q
    return QsiModuleSpec(F, [[q, 0, 0], [1, q, 0], [0, 0, 1]], [[0, 0, 0], [0, 0, 0], [1, 0, 0]])
