"""Bilateral C-finite sequences and twisted power series over them.

A :class:`CFiniteSeq` is a map Z -> field given by a recurrence
``c_0 a(n) + ... + c_r a(n+r) = 0`` with ``c_0`` and ``c_r`` nonzero and
``r`` consecutive values.  Sums and pointwise products are again C-finite;
their recurrences are recovered with Berlekamp-Massey from enough terms,
which is exact because the orders are bounded a priori.

A :class:`TwistedSeries` is ``Σ X^i a_i`` with ``a X = X σ(a)`` where σ is
the shift on coefficients.  Coefficients may be sequences or matrices of
sequences (:class:`SeqMatrix`).
"""

from __future__ import annotations

from fractions import Fraction

from . import _poly
from .scalars import ScalarField, q_binomial

DEFAULT_ORDER = 8


class NotInvertibleError(ArithmeticError):
    pass


def berlekamp_massey(values, F: ScalarField):
    """Shortest recurrence for ``values``; returns [c_0, ..., c_r] with c_r = 1."""
    C = [F.one]
    B = [F.one]
    L = 0
    m = 1
    b = F.one
    for n in range(len(values)):
        d = values[n]
        for i in range(1, L + 1):
            d = d + C[i] * values[n - i]
        if d == 0:
            m += 1
            continue
        coef = d / b
        T = list(C)
        shifted = [F.zero] * m + [coef * x for x in B]
        if len(shifted) > len(C):
            C = C + [F.zero] * (len(shifted) - len(C))
        C = [C[i] - (shifted[i] if i < len(shifted) else 0) for i in range(len(C))]
        if 2 * L <= n:
            L = n + 1 - L
            B = T
            b = d
            m = 1
        else:
            m += 1
    C = C + [F.zero] * (L + 1 - len(C))
    C = C[:L + 1]
    # a(n) + C1 a(n-1) + ... + CL a(n-L) = 0  ->  coefficients of a(n), ..., a(n+L)
    return [C[L - i] for i in range(L + 1)]


class CFiniteSeq:
    """A bilateral C-finite sequence."""

    __slots__ = ("F", "rec", "start", "_vals")

    def __init__(self, F: ScalarField, recurrence, window, start: int | None = None):
        rec = [F(c) for c in recurrence]
        while len(rec) > 1 and rec[-1] == 0:
            raise ValueError("leading recurrence coefficient must be nonzero")
        r = len(rec) - 1
        if rec[0] == 0 and r > 0:
            raise ValueError("trailing recurrence coefficient must be nonzero for a bilateral sequence")
        window = [F(v) for v in window]
        if len(window) != r:
            raise ValueError(f"need {r} initial values, got {len(window)}")
        self.F = F
        self.rec = tuple(rec)
        self.start = -(r // 2) if start is None else start
        self._vals = {self.start + i: v for i, v in enumerate(window)}

    # construction ---------------------------------------------------------

    @classmethod
    def constant(cls, F: ScalarField, c) -> "CFiniteSeq":
        c = F(c)
        if c == 0:
            return cls.zero(F)
        return cls(F, [-F.one, F.one], [c], start=0)

    @classmethod
    def zero(cls, F: ScalarField) -> "CFiniteSeq":
        return cls(F, [F.one], [], start=0)

    @classmethod
    def geometric(cls, F: ScalarField, ratio, coeff=1) -> "CFiniteSeq":
        """n -> coeff * ratio^n."""
        ratio = F(ratio)
        if ratio == 0:
            raise ValueError("ratio must be nonzero")
        if F(coeff) == 0:
            return cls.zero(F)
        return cls(F, [-ratio, F.one], [F(coeff)], start=0)

    @classmethod
    def Q(cls, F: ScalarField) -> "CFiniteSeq":
        """n -> q^n."""
        return cls.geometric(F, F.q)

    @classmethod
    def Z(cls, F: ScalarField) -> "CFiniteSeq":
        """n -> n."""
        return cls(F, [1, -2, 1], [-1, 0], start=-1)

    @classmethod
    def from_values(cls, F: ScalarField, values, start: int, order_bound: int) -> "CFiniteSeq":
        """Recover a sequence of order <= order_bound from 2*order_bound values."""
        vals = [F(v) for v in values]
        if len(vals) < 2 * order_bound:
            raise ValueError("need 2*order_bound values")
        rec = berlekamp_massey(vals, F)
        r = len(rec) - 1
        if r == 0:
            return cls.zero(F)
        if rec[0] == 0:
            raise ValueError("values do not come from a bilateral C-finite sequence")
        seq = cls(F, rec, vals[:r], start=start)
        return seq.recentered()

    @classmethod
    def from_json(cls, F: ScalarField, data: dict) -> "CFiniteSeq":
        rec = [F(x) if not isinstance(x, str) else F.parse(x) for x in data["recurrence"]]
        win = {int(k): (F.parse(v) if isinstance(v, str) else F(v)) for k, v in data["window"].items()}
        r = len(rec) - 1
        ks = sorted(win)
        if len(ks) < r or ks != list(range(ks[0], ks[0] + len(ks))):
            raise ValueError("window must list consecutive indices")
        seq = cls(F, rec, [win[k] for k in ks[:r]], start=ks[0])
        for k in ks[r:]:
            if seq[k] != win[k]:
                raise ValueError(f"window value at {k} contradicts the recurrence")
        return seq

    def to_json(self) -> dict:
        r = self.order
        lo = -(r // 2)
        return {"recurrence": [self.F.format(c) for c in self.rec],
                "window": {str(n): self.F.format(self[n]) for n in range(lo, lo + r)}}

    def recentered(self) -> "CFiniteSeq":
        r = self.order
        lo = -(r // 2)
        return CFiniteSeq(self.F, self.rec, [self[n] for n in range(lo, lo + r)], start=lo)

    # evaluation -----------------------------------------------------------

    @property
    def order(self) -> int:
        return len(self.rec) - 1

    def __getitem__(self, n: int):
        vals = self._vals
        hit = vals.get(n)
        if hit is not None:
            return hit
        r = self.order
        if r == 0:
            return self.F.zero
        rec = self.rec
        hi = self.start + r - 1
        while hi + 1 in vals:
            hi += 1
        lo = self.start
        while lo - 1 in vals:
            lo -= 1
        if n > hi:
            for k in range(hi + 1, n + 1):
                acc = self.F.zero
                for i in range(r):
                    acc = acc + rec[i] * vals[k - r + i]
                vals[k] = -acc / rec[r]
        else:
            for k in range(lo - 1, n - 1, -1):
                acc = self.F.zero
                for i in range(1, r + 1):
                    acc = acc + rec[i] * vals[k + i]
                vals[k] = -acc / rec[0]
        return vals[n]

    def values(self, lo: int, hi: int) -> list:
        """a(lo), ..., a(hi - 1)."""
        if lo < 0 < hi:
            self[lo]
        return [self[n] for n in range(lo, hi)]

    # arithmetic -------------------------------------------------------------

    def _combine(self, other: "CFiniteSeq", bound: int, op) -> "CFiniteSeq":
        lo = -bound
        vals = [op(self[n], other[n]) for n in range(lo, lo + 2 * bound)]
        return CFiniteSeq.from_values(self.F, vals, lo, bound)

    def __add__(self, other):
        if not isinstance(other, CFiniteSeq):
            other = CFiniteSeq.constant(self.F, other)
        if other.order == 0:
            return self
        if self.order == 0:
            return other
        if self.rec == other.rec:
            r = self.order
            return CFiniteSeq(self.F, self.rec,
                              [self[n] + other[n] for n in range(self.start, self.start + r)],
                              start=self.start)
        return self._combine(other, self.order + other.order, lambda a, b: a + b)

    __radd__ = __add__

    def __neg__(self):
        return self.scale(-self.F.one)

    def __sub__(self, other):
        if not isinstance(other, CFiniteSeq):
            other = CFiniteSeq.constant(self.F, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "CFiniteSeq":
        c = self.F(c)
        if c == 0:
            return CFiniteSeq.zero(self.F)
        r = self.order
        return CFiniteSeq(self.F, self.rec, [c * self[n] for n in range(self.start, self.start + r)],
                          start=self.start)

    def __mul__(self, other):
        if isinstance(other, CFiniteSeq):
            return hadamard_product(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k: int):
        out = CFiniteSeq.constant(self.F, 1)
        for _ in range(k):
            out = out * self
        return out

    def inverse(self) -> "CFiniteSeq":
        """Pointwise inverse; exact when the sequence is c * r^n."""
        m = self.minimal()
        if m.order != 1:
            raise NotInvertibleError("pointwise inverse is C-finite only for geometric sequences here")
        ratio = -m.rec[0] / m.rec[1]
        return CFiniteSeq.geometric(self.F, 1 / ratio, 1 / m[0])

    def minimal(self) -> "CFiniteSeq":
        r = self.order
        if r == 0:
            return self
        return CFiniteSeq.from_values(self.F, self.values(-r, r), -r, r)

    def shift(self, k: int = 1) -> "CFiniteSeq":
        """n -> a(n + k)."""
        r = self.order
        return CFiniteSeq(self.F, self.rec, [self[self.start + k + i] for i in range(r)],
                          start=self.start)

    def reflect(self, c: int = 0) -> "CFiniteSeq":
        """n -> a(c - n)."""
        r = self.order
        if r == 0:
            return self
        rec = list(reversed(self.rec))
        return CFiniteSeq(self.F, rec, [self[c - n] for n in range(0, r)], start=0).recentered()

    # predicates -----------------------------------------------------------

    def is_zero(self) -> bool:
        r = self.order
        return all(self[n] == 0 for n in range(-(r // 2), -(r // 2) + r))

    def __eq__(self, other):
        if not isinstance(other, CFiniteSeq):
            try:
                other = CFiniteSeq.constant(self.F, other)
            except TypeError:
                return NotImplemented
        span = self.order + other.order
        lo = -(span // 2)
        return all(self[n] == other[n] for n in range(lo, lo + span))

    __hash__ = None

    def zero_like(self):
        return CFiniteSeq.zero(self.F)

    def one_like(self):
        return CFiniteSeq.constant(self.F, 1)

    def __repr__(self):
        r = self.order
        if r == 0:
            return "0"
        named = closed_form(self, {"Q": self.F.q})
        if named is not None:
            return named
        vals = ", ".join(self.F.format(self[n]) for n in range(-2, 3))
        return f"[… {vals} …]"


def closed_form(a: CFiniteSeq, names: dict, max_power: int = 2) -> str | None:
    """Write ``a`` as a combination of Z^j * (named geometric sequences), if possible.

    ``names`` maps a label such as ``"Q"`` to its ratio; products of labels
    are tried as well.  Returns None when no such expression exists.
    """
    F = a.F
    if a.order == 0:
        return "0"
    labels = [("", F.one)]
    for nm, r in names.items():
        labels += [(lab + ("*" if lab else "") + nm, rr * F(r)) for lab, rr in labels]
    seen = set()
    cands = []
    for lab, r in labels:
        if r in seen:
            continue
        seen.add(r)
        for j in range(max_power + 1):
            zlab = "" if j == 0 else ("Z" if j == 1 else f"Z^{j}")
            full = "*".join(x for x in (zlab, lab) if x)
            cands.append((full, j, r))
    m = len(cands)
    lo = -(m // 2)
    rows = []
    for k in range(lo, lo + m + a.order):
        row = [F(k) ** j * (F(r) ** k if k >= 0 else 1 / F(r) ** (-k)) for _, j, r in cands]
        rows.append(row + [a[k]])
    sol = _solve_consistent(rows, m, F)
    if sol is None:
        return None
    total = CFiniteSeq.zero(F)
    for (_, j, r), c in zip(cands, sol):
        if c != 0:
            total = total + CFiniteSeq.geometric(F, r, c) * (CFiniteSeq.Z(F) ** j if j else 1)
    if not total == a:
        return None
    parts = []
    for (lab, _, _), c in zip(cands, sol):
        if c == 0:
            continue
        cs = F.format(c)
        if not lab:
            parts.append(cs)
        elif c == 1:
            parts.append(lab)
        elif c == -1:
            parts.append("-" + lab)
        else:
            simple = not any(ch in cs[1:] for ch in " +-/")
            parts.append(f"{cs}*{lab}" if simple else f"({cs})*{lab}")
    out = parts[0]
    for p in parts[1:]:
        out += " - " + p[1:] if p.startswith("-") else " + " + p
    return out


def _solve_consistent(rows, m, F):
    """Solve an overdetermined linear system given as augmented rows."""
    M = [list(r) for r in rows]
    piv_cols = []
    r = 0
    for col in range(m):
        piv = next((i for i in range(r, len(M)) if M[i][col] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = 1 / M[r][col]
        M[r] = [x * inv for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][col] != 0:
                f = M[i][col]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        piv_cols.append(col)
        r += 1
    for i in range(r, len(M)):
        if M[i][m] != 0:
            return None
    sol = [F.zero] * m
    for i, col in enumerate(piv_cols):
        sol[col] = M[i][m]
    return sol


def shift(a, k: int = 1):
    return a.shift(k)


def hadamard_product(a: CFiniteSeq, b: CFiniteSeq) -> CFiniteSeq:
    if a.order == 0 or b.order == 0:
        return CFiniteSeq.zero(a.F)
    if a.order == 1 or b.order == 1:
        g, other = (a, b) if a.order == 1 else (b, a)
        ratio = -g.rec[0] / g.rec[1]
        # (c r^n) * x(n): recurrence coefficients scale by r^{-i}
        rec = [other.rec[i] * (1 / ratio) ** i for i in range(len(other.rec))]
        start = other.start
        vals = [g[n] * other[n] for n in range(start, start + other.order)]
        return CFiniteSeq(a.F, rec, vals, start=start)
    bound = a.order * b.order
    lo = -bound
    vals = [a[n] * b[n] for n in range(lo, lo + 2 * bound)]
    return CFiniteSeq.from_values(a.F, vals, lo, bound)


def cfinite_equal(a: CFiniteSeq, b: CFiniteSeq) -> bool:
    return a == b


# ---------------------------------------------------------------------------
# matrices of sequences
# ---------------------------------------------------------------------------


def _mat_mul_scalar(A, B, F):
    n, m, p = len(A), len(B), len(B[0])
    return [[sum((A[i][k] * B[k][j] for k in range(m)), F.zero) for j in range(p)] for i in range(n)]


def _mat_inverse_scalar(A, F):
    n = len(A)
    M = [[F(x) for x in row] + [F.one if i == j else F.zero for j in range(n)] for i, row in enumerate(A)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            raise NotInvertibleError("singular matrix")
        M[col], M[piv] = M[piv], M[col]
        inv = 1 / M[col][col]
        M[col] = [x * inv for x in M[col]]
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return [row[n:] for row in M]


def charpoly(A, F: ScalarField):
    """Characteristic polynomial of a square matrix, lowest degree first."""
    n = len(A)
    A = [[F(x) for x in row] for row in A]
    coeffs = [F.zero] * (n + 1)
    coeffs[n] = F.one
    M = [[F.zero] * n for _ in range(n)]
    for k in range(1, n + 1):
        AM = _mat_mul_scalar(A, M, F)
        M = [[AM[i][j] + (coeffs[n - k + 1] if i == j else F.zero) for j in range(n)] for i in range(n)]
        AM = _mat_mul_scalar(A, M, F)
        tr = sum((AM[i][i] for i in range(n)), F.zero)
        coeffs[n - k] = -tr / k
    return coeffs


class SeqMatrix:
    """A square matrix of C-finite sequences (a matrix-valued sequence)."""

    __slots__ = ("F", "rows")

    def __init__(self, F: ScalarField, rows):
        self.F = F
        self.rows = [[x if isinstance(x, CFiniteSeq) else CFiniteSeq.constant(F, x) for x in r]
                     for r in rows]

    @property
    def n(self):
        return len(self.rows)

    @classmethod
    def constant(cls, F, A) -> "SeqMatrix":
        return cls(F, [[CFiniteSeq.constant(F, x) for x in row] for row in A])

    @classmethod
    def identity(cls, F, n) -> "SeqMatrix":
        return cls.constant(F, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def power_sequence(cls, F: ScalarField, A) -> "SeqMatrix":
        """n -> A^n with the characteristic polynomial as common recurrence."""
        A = [[F(x) for x in row] for row in A]
        n = len(A)
        chi = charpoly(A, F)
        if chi[0] == 0:
            raise NotInvertibleError("A must be invertible for a bilateral power sequence")
        lo = -(n // 2)
        Ainv = _mat_inverse_scalar(A, F)
        powers = {}
        P = [[F.one if i == j else F.zero for j in range(n)] for i in range(n)]
        powers[0] = P
        for k in range(1, max(n + lo, 1)):
            powers[k] = _mat_mul_scalar(powers[k - 1], A, F)
        for k in range(-1, lo - 1, -1):
            powers[k] = _mat_mul_scalar(powers[k + 1], Ainv, F)
        rows = [[CFiniteSeq(F, chi, [powers[k][i][j] for k in range(lo, lo + n)], start=lo)
                 for j in range(n)] for i in range(n)]
        return cls(F, rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def at(self, k: int):
        return [[x[k] for x in row] for row in self.rows]

    def _map(self, f):
        return SeqMatrix(self.F, [[f(x) for x in row] for row in self.rows])

    def __add__(self, other):
        return SeqMatrix(self.F, [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)])

    def __sub__(self, other):
        return SeqMatrix(self.F, [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)])

    def __neg__(self):
        return self._map(lambda x: -x)

    def __mul__(self, other):
        if isinstance(other, SeqMatrix):
            n, m, p = self.n, other.n, len(other.rows[0])
            out = []
            for i in range(n):
                row = []
                for j in range(p):
                    acc = CFiniteSeq.zero(self.F)
                    for k in range(m):
                        a, b = self.rows[i][k], other.rows[k][j]
                        if a.order and b.order:
                            acc = acc + a * b
                    row.append(acc)
                out.append(row)
            return SeqMatrix(self.F, out)
        if isinstance(other, CFiniteSeq):
            return self._map(lambda x: x * other)
        return self._map(lambda x: x.scale(other))

    def __rmul__(self, other):
        return self._map(lambda x: x.scale(other))

    def scale(self, c):
        return self._map(lambda x: x.scale(c))

    def shift(self, k: int = 1):
        return self._map(lambda x: x.shift(k))

    def is_zero(self):
        return all(x.is_zero() for row in self.rows for x in row)

    def __eq__(self, other):
        if not isinstance(other, SeqMatrix):
            return NotImplemented
        return all(a == b for r1, r2 in zip(self.rows, other.rows) for a, b in zip(r1, r2))

    __hash__ = None

    def zero_like(self):
        return SeqMatrix.constant(self.F, [[0] * self.n for _ in range(self.n)])

    def one_like(self):
        return SeqMatrix.identity(self.F, self.n)

    def determinant(self) -> CFiniteSeq:
        return _det([[x for x in row] for row in self.rows], self.F)

    def inverse(self) -> "SeqMatrix":
        """Adjugate over the determinant; needs a geometric determinant."""
        n = self.n
        dinv = self.determinant().inverse()
        adj = [[None] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                minor = [[self.rows[r][c] for c in range(n) if c != i] for r in range(n) if r != j]
                cof = _det(minor, self.F) if minor else CFiniteSeq.constant(self.F, 1)
                adj[i][j] = cof if (i + j) % 2 == 0 else -cof
        return SeqMatrix(self.F, [[x * dinv for x in row] for row in adj])

    def __repr__(self):
        return "[" + ", ".join("[" + ", ".join(repr(x) for x in row) + "]" for row in self.rows) + "]"


def _det(M, F):
    n = len(M)
    if n == 1:
        return M[0][0]
    if n == 2:
        return M[0][0] * M[1][1] - M[0][1] * M[1][0]
    acc = CFiniteSeq.zero(F)
    for j in range(n):
        if M[0][j].is_zero():
            continue
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        term = M[0][j] * _det(minor, F)
        acc = acc + term if j % 2 == 0 else acc - term
    return acc


# ---------------------------------------------------------------------------
# twisted series
# ---------------------------------------------------------------------------


class TwistedSeries:
    """Σ X^i a_i with a X = X σ(a); ``prec`` is None for exact polynomials."""

    __slots__ = ("coeffs", "prec", "F")

    def __init__(self, coeffs, prec: int | None = DEFAULT_ORDER, F: ScalarField | None = None):
        coeffs = list(coeffs)
        if not coeffs:
            raise ValueError("need at least one coefficient to fix the coefficient ring")
        self.F = F or coeffs[0].F
        if prec is not None:
            z = coeffs[0].zero_like()
            coeffs = (coeffs + [z] * (prec + 1 - len(coeffs)))[:prec + 1]
        else:
            while len(coeffs) > 1 and coeffs[-1].is_zero():
                coeffs.pop()
        self.coeffs = coeffs
        self.prec = prec

    @classmethod
    def constant(cls, a, prec=None):
        return cls([a], prec)

    @classmethod
    def X(cls, F: ScalarField, prec=None, like=None):
        one = like.one_like() if like is not None else CFiniteSeq.constant(F, 1)
        return cls([one.zero_like(), one], prec)

    def coeff(self, i: int):
        if i < len(self.coeffs):
            return self.coeffs[i]
        return self.coeffs[0].zero_like()

    def _limit(self, other=None):
        ps = [p for p in (self.prec, other.prec if other is not None else None) if p is not None]
        return min(ps) if ps else None

    def __add__(self, other):
        if not isinstance(other, TwistedSeries):
            other = TwistedSeries([other], None)
        prec = self._limit(other)
        n = max(len(self.coeffs), len(other.coeffs)) if prec is None else prec + 1
        return TwistedSeries([self.coeff(i) + other.coeff(i) for i in range(n)], prec)

    __radd__ = __add__

    def __neg__(self):
        return TwistedSeries([-a for a in self.coeffs], self.prec)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, TwistedSeries):
            return TwistedSeries([a * other for a in self.coeffs], self.prec)
        return series_multiply(self, other)

    def left_scale(self, c):
        """c * S for a coefficient c placed on the left (c X^i = X^i σ^i(c))."""
        return TwistedSeries([c.shift(i) * a for i, a in enumerate(self.coeffs)], self.prec)

    def truncate(self, D: int) -> "TwistedSeries":
        return TwistedSeries(self.coeffs[:D + 1], D if self.prec is None else min(D, self.prec))

    def equal_through(self, other, D: int) -> bool:
        return all(self.coeff(i) == other.coeff(i) for i in range(D + 1))

    def first_difference(self, other, D: int):
        for i in range(D + 1):
            if not self.coeff(i) == other.coeff(i):
                return i
        return None

    def __eq__(self, other):
        if not isinstance(other, TwistedSeries):
            return NotImplemented
        lim = self._limit(other)
        if lim is None:
            lim = max(len(self.coeffs), len(other.coeffs)) - 1
        return self.equal_through(other, lim)

    __hash__ = None

    def is_zero(self) -> bool:
        return all(a.is_zero() for a in self.coeffs)

    def __repr__(self):
        parts = []
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            s = repr(a)
            if i and s == "1":
                parts.append("X" if i == 1 else f"X^{i}")
                continue
            if i and any(ch in s for ch in " +") and not s.startswith("["):
                s = f"({s})"
            parts.append(s if i == 0 else (f"X*{s}" if i == 1 else f"X^{i}*{s}"))
        out = " + ".join(parts) if parts else "0"
        if self.prec is not None:
            out += f" + O(X^{self.prec + 1})"
        return out


def series_multiply(S1: TwistedSeries, S2: TwistedSeries) -> TwistedSeries:
    prec = S1._limit(S2)
    n = len(S1.coeffs) + len(S2.coeffs) - 1 if prec is None else prec + 1
    out = []
    for k in range(n):
        acc = None
        for i in range(min(k, len(S1.coeffs) - 1) + 1):
            j = k - i
            if j >= len(S2.coeffs):
                continue
            a, b = S1.coeffs[i], S2.coeffs[j]
            if a.is_zero() or b.is_zero():
                continue
            term = a.shift(j) * b
            acc = term if acc is None else acc + term
        out.append(acc if acc is not None else S1.coeffs[0].zero_like())
    return TwistedSeries(out, prec)


def hat_sigma(S: TwistedSeries) -> TwistedSeries:
    F = S.F
    return TwistedSeries([a.shift(1) * F.power(i) for i, a in enumerate(S.coeffs)], S.prec)


def hat_theta(l: int, S: TwistedSeries) -> TwistedSeries:
    F = S.F
    if l == 0:
        return S
    n = len(S.coeffs) - l
    if n <= 0:
        return TwistedSeries([S.coeffs[0].zero_like()], None if S.prec is None else max(S.prec - l, 0))
    coeffs = [S.coeffs[i + l] * q_binomial(i + l, l, F) for i in range(n)]
    prec = None if S.prec is None else S.prec - l
    return TwistedSeries(coeffs, prec)


def series_invert(S: TwistedSeries, D: int | None = None) -> TwistedSeries:
    """Two-sided inverse modulo X^{D+1}."""
    D = S.prec if D is None and S.prec is not None else (D if D is not None else DEFAULT_ORDER)
    if S.prec is not None:
        D = min(D, S.prec)
    a0 = S.coeff(0)
    try:
        inv0 = a0.inverse()
    except NotInvertibleError as exc:
        raise NotInvertibleError(f"constant term not invertible: {exc}") from exc
    b = [inv0]
    for k in range(1, D + 1):
        acc = None
        for i in range(1, k + 1):
            ai = S.coeff(i)
            if ai.is_zero():
                continue
            term = ai.shift(k - i) * b[k - i]
            acc = term if acc is None else acc + term
        if acc is None:
            b.append(a0.zero_like())
        else:
            b.append(-(inv0.shift(k) * acc))
    return TwistedSeries(b, D)
