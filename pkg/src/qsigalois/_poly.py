"""Dense univariate polynomials over an exact field.

A polynomial is a list of coefficients, lowest degree first, with no
trailing zeros.  The zero polynomial is the empty list.  Coefficients can
be any objects supporting field arithmetic (Fraction, cyclotomic numbers,
sympy rational functions).
"""

from __future__ import annotations


def trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def add(p, r):
    n = max(len(p), len(r))
    out = []
    for i in range(n):
        a = p[i] if i < len(p) else 0
        b = r[i] if i < len(r) else 0
        out.append(a + b)
    return trim(out)


def scale(p, c):
    return trim([c * a for a in p])


def sub(p, r):
    return add(p, [-b for b in r])


def mul(p, r):
    if not p or not r:
        return []
    out = [0] * (len(p) + len(r) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(r):
            out[i + j] = out[i + j] + a * b
    return trim(out)


def divmod_(p, d):
    d = trim(d)
    if not d:
        raise ZeroDivisionError("polynomial division by zero")
    p = trim(p)
    lead = d[-1]
    quot = [0] * max(len(p) - len(d) + 1, 0)
    rem = list(p)
    while len(rem) >= len(d) and rem:
        k = len(rem) - len(d)
        c = rem[-1] / lead
        quot[k] = c
        for i, b in enumerate(d):
            rem[i + k] = rem[i + k] - c * b
        rem = trim(rem[:-1] if rem[-1] == 0 else rem)
        rem = trim(rem)
    return trim(quot), rem


def monic(p):
    p = trim(p)
    if not p:
        return p
    lead = p[-1]
    return [a / lead for a in p]


def gcd(p, r):
    p, r = trim(p), trim(r)
    while r:
        p, r = r, divmod_(p, r)[1]
    return monic(p)


def lcm(p, r):
    if not p or not r:
        return []
    g = gcd(p, r)
    q, _ = divmod_(mul(p, r), g)
    return monic(q)


def xgcd(p, r):
    """Return (g, u, v) with u*p + v*r = g monic."""
    r0, r1 = trim(p), trim(r)
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while r1:
        q, rem = divmod_(r0, r1)
        r0, r1 = r1, rem
        s0, s1 = s1, sub(s0, mul(q, s1))
        t0, t1 = t1, sub(t0, mul(q, t1))
    lead = r0[-1]
    inv = 1 / lead if not hasattr(lead, "inverse") else lead.inverse()
    return scale(r0, inv), scale(s0, inv), scale(t0, inv)


def evaluate(p, x, one=1):
    acc = 0 * one
    for c in reversed(p):
        acc = acc * x + c
    return acc


def degree(p):
    return len(trim(p)) - 1
