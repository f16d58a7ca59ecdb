"""Exact Gaussian elimination over any of the scalar fields."""

from __future__ import annotations


def rref(rows, ncols: int):
    """Reduced row echelon form; returns (rows, pivot columns)."""
    M = [list(r) for r in rows]
    pivots = []
    r = 0
    for col in range(ncols):
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
        pivots.append(col)
        r += 1
        if r == len(M):
            break
    return M[:r], pivots


def rank(rows, ncols: int) -> int:
    return len(rref(rows, ncols)[1])


def nullspace(rows, ncols: int, zero, one):
    """Basis of {x : M x = 0}."""
    R, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [zero] * ncols
        v[fc] = one
        for row, pc in zip(R, pivots):
            v[pc] = -row[fc]
        basis.append(v)
    return basis


def solve(rows, rhs, ncols: int, zero):
    """One solution of M x = rhs, or None."""
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    R, pivots = rref(aug, ncols + 1)
    if ncols in pivots:
        return None
    x = [zero] * ncols
    for row, pc in zip(R, pivots):
        x[pc] = row[ncols]
    return x


class SparseSpan:
    """Incrementally built span of sparse vectors (dicts key -> scalar).

    Vectors are reduced against stored ones by their leading key, the
    largest key under ``order``.
    """

    def __init__(self, order):
        self.order = order
        self.basis = {}

    def _lead(self, v):
        return max(v, key=self.order)

    def reduce(self, v: dict) -> dict:
        v = {k: c for k, c in v.items() if c != 0}
        while v:
            done = True
            for k in sorted(v, key=self.order, reverse=True):
                b = self.basis.get(k)
                if b is None:
                    continue
                c = v[k]
                for kk, bc in b.items():
                    nv = v.get(kk, 0) - c * bc
                    if nv == 0:
                        v.pop(kk, None)
                    else:
                        v[kk] = nv
                done = False
                break
            if done:
                break
        return v

    def add(self, v: dict) -> bool:
        v = self.reduce(v)
        if not v:
            return False
        lead = self._lead(v)
        inv = 1 / v[lead]
        self.basis[lead] = {k: c * inv for k, c in v.items()}
        return True

    def contains(self, v: dict) -> bool:
        return not self.reduce(v)

    def __len__(self):
        return len(self.basis)

    def reduced(self) -> list:
        """The stored vectors, inter-reduced, sorted by leading key."""
        out = []
        for lead in sorted(self.basis, key=self.order):
            v = dict(self.basis[lead])
            others = SparseSpan(self.order)
            others.basis = {k: b for k, b in self.basis.items() if k != lead}
            rest = others.reduce({k: c for k, c in v.items() if k != lead})
            rest[lead] = v[lead]
            out.append(rest)
        return out
