"""Exact scalar fields and q-combinatorics.

Three kinds of field are supported:

* ``rationals(q)``: the rational numbers with a chosen nonzero rational q,
* ``cyclotomic(N)``: Q(zeta_N) with q = zeta_N, elements reduced modulo the
  N-th cyclotomic polynomial,
* ``rational_functions()``: Q(q) with q an indeterminate.

Elements are plain immutable Python values (``Fraction``, :class:`Cyclo`,
:class:`RatFunc`) that interoperate with ``int`` and ``Fraction``; the
:class:`ScalarField` object knows how to coerce, parse and print them.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache

import sympy
from sympy.polys.fields import field as _sympy_field

from . import _poly

_QFIELD, _QGEN = _sympy_field("q", sympy.QQ)


def _to_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    return Fraction(int(c.numerator), int(c.denominator))


# ---------------------------------------------------------------------------
# cyclotomic numbers
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, lowest degree first."""
    x = sympy.Symbol("x")
    coeffs = sympy.Poly(sympy.cyclotomic_poly(n, x), x).all_coeffs()
    return tuple(int(c) for c in reversed(coeffs))


class Cyclo:
    """Element of Q(zeta_N) as a reduced coefficient vector in zeta."""

    __slots__ = ("n", "coeffs", "_hash")

    def __init__(self, n: int, coeffs):
        mod = cyclotomic_polynomial(n)
        p = _poly.trim([_to_fraction(c) for c in coeffs])
        if len(p) >= len(mod):
            _, p = _poly.divmod_(p, [Fraction(c) for c in mod])
        self.n = n
        self.coeffs = tuple(p)
        self._hash = None

    def _lift(self, other):
        if isinstance(other, Cyclo):
            if other.n != self.n:
                raise ValueError("mixing different cyclotomic fields")
            return other
        if isinstance(other, (int, Fraction)):
            return Cyclo(self.n, [other])
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return Cyclo(self.n, _poly.add(self.coeffs, o.coeffs))

    __radd__ = __add__

    def __neg__(self):
        return Cyclo(self.n, [-c for c in self.coeffs])

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return Cyclo(self.n, _poly.mul(self.coeffs, o.coeffs))

    __rmul__ = __mul__

    def inverse(self):
        if not self.coeffs:
            raise ZeroDivisionError("inverse of zero in cyclotomic field")
        mod = [Fraction(c) for c in cyclotomic_polynomial(self.n)]
        g, u, _ = _xgcd_fraction(list(self.coeffs), mod)
        return Cyclo(self.n, u)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = Cyclo(self.n, [1])
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, Cyclo):
            return self.n == other.n and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == tuple(_poly.trim([Fraction(other)]))
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            if len(self.coeffs) <= 1:
                self._hash = hash(self.coeffs[0] if self.coeffs else Fraction(0))
            else:
                self._hash = hash((self.n, self.coeffs))
        return self._hash

    def __repr__(self):
        return _format_poly(self.coeffs, "zeta")


def _xgcd_fraction(p, r):
    r0, r1 = _poly.trim(p), _poly.trim(r)
    s0, s1 = [Fraction(1)], []
    while r1:
        quo, rem = _poly.divmod_(r0, r1)
        r0, r1 = r1, rem
        s0, s1 = s1, _poly.sub(s0, _poly.mul(quo, s1))
    lead = r0[-1]
    return _poly.scale(r0, 1 / lead), _poly.scale(s0, 1 / lead), None


# ---------------------------------------------------------------------------
# rational functions in q
# ---------------------------------------------------------------------------


class RatFunc:
    """Element of Q(q); a thin wrapper giving int/Fraction interop."""

    __slots__ = ("f",)

    def __init__(self, f):
        if isinstance(f, RatFunc):
            f = f.f
        elif isinstance(f, Fraction):
            f = _QFIELD(sympy.QQ(f.numerator, f.denominator))
        elif isinstance(f, int):
            f = _QFIELD(f)
        self.f = f

    @staticmethod
    def _lift(other):
        if isinstance(other, RatFunc):
            return other.f
        if isinstance(other, int):
            return _QFIELD(other)
        if isinstance(other, Fraction):
            return _QFIELD(sympy.QQ(other.numerator, other.denominator))
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        return NotImplemented if o is NotImplemented else RatFunc(self.f + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        return NotImplemented if o is NotImplemented else RatFunc(self.f - o)

    def __rsub__(self, other):
        o = self._lift(other)
        return NotImplemented if o is NotImplemented else RatFunc(o - self.f)

    def __mul__(self, other):
        o = self._lift(other)
        return NotImplemented if o is NotImplemented else RatFunc(self.f * o)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        if o == 0:
            raise ZeroDivisionError("division by zero rational function")
        return RatFunc(self.f / o)

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        if self.f == 0:
            raise ZeroDivisionError("division by zero rational function")
        return RatFunc(o / self.f)

    def __neg__(self):
        return RatFunc(-self.f)

    def __pow__(self, k: int):
        if k == 0:
            return RatFunc(1)
        if k < 0:
            return (1 / self) ** (-k)
        return RatFunc(self.f**k)

    def inverse(self):
        return 1 / self

    def constant_value(self):
        """The rational value if this is a constant, else None."""
        if self.f.numer.degree() <= 0 and self.f.denom.degree() == 0:
            num = self.f.numer.LC if self.f.numer else 0
            return _to_fraction(num) / _to_fraction(self.f.denom.LC)
        return None

    def __eq__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self.f == o

    def __hash__(self):
        c = self.constant_value()
        return hash(c) if c is not None else hash(self.f)

    def numerator_coeffs(self):
        return [_to_fraction(c) for c in reversed(self.f.numer.to_dense())] if self.f.numer else []

    def denominator_coeffs(self):
        return [_to_fraction(c) for c in reversed(self.f.denom.to_dense())]

    def __repr__(self):
        return str(self.f).replace("**", "^")


# ---------------------------------------------------------------------------
# fields
# ---------------------------------------------------------------------------


def _format_poly(coeffs, var: str) -> str:
    terms = []
    for k, c in enumerate(coeffs):
        if c == 0:
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        if not mono:
            terms.append(str(c))
        elif c == 1:
            terms.append(mono)
        elif c == -1:
            terms.append("-" + mono)
        else:
            cs = str(c)
            terms.append(f"({cs})*{mono}" if "/" in cs else f"{cs}*{mono}")
    if not terms:
        return "0"
    out = terms[0]
    for t in terms[1:]:
        out += " - " + t[1:] if t.startswith("-") else " + " + t
    return out


@dataclass(frozen=True)
class ScalarField:
    """An exact field with a designated nonzero element q.

    Build instances with :func:`rationals`, :func:`cyclotomic` or
    :func:`rational_functions` rather than directly.
    """

    kind: str
    q_value: Fraction | None = None
    order: int | None = None
    _cache: dict = dc_field(default_factory=dict, compare=False, hash=False, repr=False)

    # construction ---------------------------------------------------------

    def __post_init__(self):
        if self.kind == "rationals":
            if self.q_value is None or self.q_value == 0:
                raise ValueError("q must be a nonzero rational")
        elif self.kind == "cyclotomic":
            if not self.order or self.order < 1:
                raise ValueError("cyclotomic order must be positive")
        elif self.kind != "rational_functions":
            raise ValueError(f"unknown field kind {self.kind!r}")

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    @property
    def q(self):
        if self.kind == "rationals":
            return self.q_value
        if self.kind == "cyclotomic":
            return Cyclo(self.order, [0, 1])
        return RatFunc(_QGEN)

    def __call__(self, x):
        """Coerce an int, Fraction, string or field element into the field."""
        if isinstance(x, str):
            return self.parse(x)
        if self.kind == "rationals":
            if isinstance(x, (int, Fraction)):
                return Fraction(x)
            raise TypeError(f"cannot coerce {x!r} into Q")
        if self.kind == "cyclotomic":
            if isinstance(x, Cyclo):
                if x.n != self.order:
                    raise TypeError("cyclotomic order mismatch")
                return x
            if isinstance(x, (int, Fraction)):
                return Cyclo(self.order, [x])
            raise TypeError(f"cannot coerce {x!r} into Q(zeta_{self.order})")
        if isinstance(x, RatFunc):
            return x
        if isinstance(x, (int, Fraction)):
            return RatFunc(x)
        raise TypeError(f"cannot coerce {x!r} into Q(q)")

    def is_element(self, x) -> bool:
        try:
            self(x)
        except TypeError:
            return False
        return True

    # parsing and printing -------------------------------------------------

    def parse(self, text: str):
        """Parse a scalar literal such as ``3/4``, ``q^2 - 1/(q+1)`` or ``zeta``."""
        src = text.strip()
        if not re.fullmatch(r"[0-9qzeta+\-*/^() .]*", src) or not src:
            raise ValueError(f"bad scalar literal {text!r}")
        src = src.replace("zeta", "q").replace("^", "**")
        try:
            expr = sympy.sympify(src, locals={"q": sympy.Symbol("q")}, rational=True)
            frac = _QFIELD.from_expr(expr)
        except (sympy.SympifyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"bad scalar literal {text!r}") from exc
        if self.kind == "rational_functions":
            return RatFunc(frac)
        num = [_to_fraction(c) for c in reversed(frac.numer.to_dense())] if frac.numer else []
        den = [_to_fraction(c) for c in reversed(frac.denom.to_dense())]
        d = _poly.evaluate([self(c) for c in den], self.q, self.one)
        if d == 0:
            raise ValueError(f"literal {text!r} has a pole at q")
        return _poly.evaluate([self(c) for c in num], self.q, self.one) / d

    def format(self, x) -> str:
        x = self(x)
        if self.kind == "cyclotomic":
            return _format_poly(x.coeffs, "zeta")
        return str(x) if not isinstance(x, RatFunc) else repr(x)

    def __repr__(self):
        if self.kind == "rationals":
            return f"ScalarField(rationals, q={self.q_value})"
        if self.kind == "cyclotomic":
            return f"ScalarField(cyclotomic({self.order}))"
        return "ScalarField(rational functions in q)"

    def __reduce__(self):
        return (ScalarField, (self.kind, self.q_value, self.order))

    # properties -----------------------------------------------------------

    def root_of_unity_order(self) -> int | None:
        if "rou" not in self._cache:
            self._cache["rou"] = _root_order(self)
        return self._cache["rou"]

    def power(self, k: int):
        """q**k, allowing negative k."""
        return self.q**k if k >= 0 else 1 / self.q ** (-k)

    def describe(self) -> dict:
        if self.kind == "rationals":
            return {"kind": "rationals", "q": str(self.q_value)}
        if self.kind == "cyclotomic":
            return {"kind": "cyclotomic", "N": self.order}
        return {"kind": "rational_functions"}


def _root_order(F: ScalarField) -> int | None:
    if F.kind == "rationals":
        if F.q_value == 1:
            return 1
        if F.q_value == -1:
            return 2
        return None
    if F.kind == "cyclotomic":
        return F.order
    return None


def rationals(q=2) -> ScalarField:
    return ScalarField("rationals", q_value=Fraction(q))


def cyclotomic(n: int) -> ScalarField:
    return ScalarField("cyclotomic", order=n)


def rational_functions() -> ScalarField:
    return ScalarField("rational_functions")


def field_from_spec(text: str) -> ScalarField:
    """Parse a field description: ``indeterminate``, ``zeta3`` or a rational."""
    text = text.strip()
    if text in ("q", "indeterminate", "generic"):
        return rational_functions()
    m = re.fullmatch(r"(?:zeta|cyclotomic)\(?(\d+)\)?", text)
    if m:
        return cyclotomic(int(m.group(1)))
    try:
        return rationals(Fraction(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"cannot interpret {text!r} as a value of q") from exc


# ---------------------------------------------------------------------------
# q-combinatorics
# ---------------------------------------------------------------------------


def is_root_of_unity(F: ScalarField) -> int | None:
    """Smallest N with q^N = 1, or None."""
    return F.root_of_unity_order()


def q_integer(n: int, F: ScalarField):
    """[n]_q = 1 + q + ... + q^(n-1)."""
    out = F.zero
    p = F.one
    for _ in range(n):
        out = out + p
        p = p * F.q
    return out


def q_factorial(n: int, F: ScalarField):
    out = F.one
    for i in range(1, n + 1):
        out = out * q_integer(i, F)
    return out


@lru_cache(maxsize=None)
def gaussian_polynomial(m: int, n: int) -> tuple[int, ...]:
    """Integer coefficients of the Gaussian binomial (m choose n) in q."""
    if n < 0 or m < n:
        return ()
    if n == 0 or n == m:
        return (1,)
    a = gaussian_polynomial(m - 1, n - 1)
    b = gaussian_polynomial(m - 1, n)
    out = [0] * max(len(a), len(b) + n)
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i + n] += c
    return tuple(out)


def q_binomial(m: int, n: int, F: ScalarField):
    """Gaussian binomial, computed as a polynomial and specialised at q."""
    key = ("binom", m, n)
    cache = F._cache
    if key not in cache:
        coeffs = gaussian_polynomial(m, n)
        cache[key] = _poly.evaluate([F(c) for c in coeffs], F.q, F.one) if coeffs else F.zero
    return cache[key]


def q_pascal_identity_check(m: int, l: int, F: ScalarField) -> bool:
    if not 1 <= l <= m:
        raise ValueError("need 1 <= l <= m")
    lhs = F.power(l) * q_binomial(m, l, F) + q_binomial(m, l - 1, F)
    rhs = q_binomial(m, l, F) + F.power(m - l + 1) * q_binomial(m, l - 1, F)
    return lhs == rhs
