"""Integer homology through Smith normal form.

Boundary matrices are kept sparse as ``{column: {row: coefficient}}`` with
Python integers, so nothing overflows.  Two routes compute invariant factors:
:func:`smith_normal_form` is the dense textbook reduction that also returns
the unimodular transforms, and :func:`invariant_factors` first strips unit
pivots from the sparse matrix (cubical and simplicial boundaries are almost
all ±1) and hands only the leftover block to the dense routine.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Mapping, Sequence

from .precubical import PrecubicalSet, validate

Sparse = dict[int, dict[int, int]]


# -- Smith normal form -------------------------------------------------------------

def _identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(M: Sequence[Sequence[int]]):
    """Return ``(D, U, V)`` with ``U @ M @ V == D`` and ``D`` in Smith form.

    ``U`` (rows) and ``V`` (columns) are unimodular.  The diagonal of ``D`` is
    non-negative and each entry divides the next.
    """
    A = [list(map(int, row)) for row in M]
    m = len(A)
    n = len(A[0]) if m else 0
    U = _identity(m)
    V = _identity(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, c):  # row_dst += c * row_src
        A[dst] = [a + c * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a + c * b for a, b in zip(U[dst], U[src])]

    def add_col(src, dst, c):
        for row in A:
            row[dst] += c * row[src]
        for row in V:
            row[dst] += c * row[src]

    t = 0
    while t < min(m, n):
        nz = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = A[t][t]
            changed = False
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // p
                    add_row(t, i, -q)
                    if A[i][t]:
                        swap_rows(t, i)
                        changed = True
                        break
            if changed:
                continue
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // p
                    add_col(t, j, -q)
                    if A[t][j]:
                        swap_cols(t, j)
                        changed = True
                        break
            if changed:
                continue
            # pivot row and column are clear; enforce divisibility of the rest
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if A[i][j] % p), None)
            if bad is None:
                break
            add_row(bad[0], t, 1)
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-a for a in U[t]]
        t += 1
    return A, U, V


def is_smith_form(D: Sequence[Sequence[int]]) -> bool:
    m = len(D)
    n = len(D[0]) if m else 0
    for i in range(m):
        for j in range(n):
            if i != j and D[i][j]:
                return False
    diag = [D[i][i] for i in range(min(m, n))]
    if any(d < 0 for d in diag):
        return False
    for a, b in zip(diag, diag[1:]):
        if a == 0 and b != 0:
            return False
        if a and b % a:
            return False
    return True


def _to_dense(cols: Sparse, rows: list[int], colkeys: list[int]):
    index = {r: i for i, r in enumerate(rows)}
    A = [[0] * len(colkeys) for _ in rows]
    for j, c in enumerate(colkeys):
        for r, v in cols[c].items():
            A[index[r]][j] = v
    return A


def invariant_factors(cols: Sparse, n_rows: int | None = None) -> list[int]:
    """Nonzero invariant factors of a sparse integer matrix, ascending.

    Their count is the rank.  The input is not modified.
    """
    cols = {c: dict(col) for c, col in cols.items() if col}
    rows: dict[int, dict[int, int]] = {}
    for c, col in cols.items():
        for r, v in col.items():
            rows.setdefault(r, {})[c] = v
    ones = 0
    while True:
        pivot = None
        best = None
        for c, col in cols.items():
            for r, v in col.items():
                if v in (1, -1):
                    cost = (len(col) - 1) * (len(rows[r]) - 1)
                    if best is None or cost < best:
                        best, pivot = cost, (r, c)
                        if cost == 0:
                            break
            if best == 0:
                break
        if pivot is None:
            break
        r0, c0 = pivot
        p = cols[c0][r0]
        prow = rows[r0]
        # clear column c0 with row operations, then drop row r0 and column c0
        for r in list(cols[c0]):
            if r == r0:
                continue
            f = cols[c0][r] * p  # p = ±1, so -f/p == -f*p
            row = rows[r]
            for c, v in prow.items():
                nv = row.get(c, 0) - f * v
                if nv:
                    row[c] = nv
                    cols[c][r] = nv
                else:
                    row.pop(c, None)
                    cols[c].pop(r, None)
        for c in prow:
            cols[c].pop(r0, None)
        del rows[r0]
        del cols[c0]
        for c in [c for c, col in cols.items() if not col]:
            del cols[c]
        ones += 1
    rest: list[int] = []
    if cols:
        rkeys = sorted(rows)
        ckeys = sorted(cols)
        D, _, _ = smith_normal_form(_to_dense(cols, rkeys, ckeys))
        rest = [D[i][i] for i in range(min(len(rkeys), len(ckeys))) if D[i][i]]
    return [1] * ones + sorted(rest)


# -- chain complexes -------------------------------------------------------------

@dataclass
class ChainComplex:
    """Free chain complex with ordered bases.

    ``basis[n]`` lists the generators of degree ``n``; ``boundary[n]`` is the
    sparse matrix of ``∂_n: C_n -> C_{n-1}`` indexed by positions in those bases.
    """

    basis: list[list] = field(default_factory=list)
    boundary: dict[int, Sparse] = field(default_factory=dict)

    @property
    def top(self) -> int:
        return len(self.basis) - 1

    def rank(self, n: int) -> int:
        return len(self.basis[n]) if 0 <= n < len(self.basis) else 0

    def dense(self, n: int) -> list[list[int]]:
        """``∂_n`` as a dense list-of-rows matrix."""
        cols = self.boundary.get(n, {})
        A = [[0] * self.rank(n) for _ in range(self.rank(n - 1))]
        for c, col in cols.items():
            for r, v in col.items():
                A[r][c] = v
        return A

    def check(self) -> bool:
        """``∂_{n} ∘ ∂_{n+1} = 0`` for every ``n``."""
        for n in range(1, self.top):
            lower = self.boundary.get(n, {})
            for col in self.boundary.get(n + 1, {}).values():
                acc: dict[int, int] = {}
                for mid, v in col.items():
                    for r, w in lower.get(mid, {}).items():
                        acc[r] = acc.get(r, 0) + v * w
                if any(acc.values()):
                    return False
        return True

    def euler_characteristic(self) -> int:
        return sum((-1) ** n * len(b) for n, b in enumerate(self.basis))


@dataclass(frozen=True)
class HomologyGroups:
    betti: tuple[int, ...]
    torsion: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.betti) != len(self.torsion):
            raise ValueError("betti and torsion lengths differ")
        for t in self.torsion:
            for a, b in zip(t, t[1:]):
                if b % a:
                    raise ValueError(f"invariant factors {t} do not divide successively")

    def trimmed(self) -> "HomologyGroups":
        n = len(self.betti)
        while n > 1 and self.betti[n - 1] == 0 and not self.torsion[n - 1]:
            n -= 1
        return HomologyGroups(self.betti[:n], self.torsion[:n])

    def euler_characteristic(self) -> int:
        return sum((-1) ** n * b for n, b in enumerate(self.betti))

    def to_json(self) -> dict:
        return {"degrees": [{"n": n, "betti": b, "torsion": list(t)}
                            for n, (b, t) in enumerate(zip(self.betti, self.torsion))]}

    @classmethod
    def from_json(cls, data: Mapping) -> "HomologyGroups":
        degs = sorted(data["degrees"], key=lambda d: d["n"])
        return cls(tuple(d["betti"] for d in degs), tuple(tuple(d["torsion"]) for d in degs))

    def __str__(self):
        parts = []
        for n, (b, t) in enumerate(zip(self.betti, self.torsion)):
            terms = (["Z^%d" % b if b > 1 else "Z"] if b else []) + [f"Z/{d}" for d in t]
            parts.append(f"H_{n} = " + (" + ".join(terms) if terms else "0"))
        return ", ".join(parts)


def homology(C: ChainComplex) -> HomologyGroups:
    factors = {n: invariant_factors(C.boundary.get(n, {})) for n in range(1, C.top + 1)}
    betti, torsion = [], []
    for n in range(C.top + 1):
        r_out = len(factors.get(n, ()))
        into = factors.get(n + 1, [])
        betti.append(C.rank(n) - r_out - len(into))
        torsion.append(tuple(d for d in into if d > 1))
    if not betti:
        return HomologyGroups((0,), ((),))
    return HomologyGroups(tuple(betti), tuple(torsion))


def compare(H1: HomologyGroups, H2: HomologyGroups) -> bool:
    """Degreewise equality, treating missing top degrees as zero groups."""
    return H1.trimmed() == H2.trimmed()


def cubical_chain_complex(X: PrecubicalSet) -> ChainComplex:
    """Cellular chains of ``|X|`` with ``∂x = Σ_i (-1)^i (d^1_i x - d^0_i x)``."""
    report = validate(X)
    if not report.ok:
        raise ValueError(f"precubical identities fail: {report.violations[0]}")
    basis = [list(X.cubes(n)) for n in range(X.max_dim + 1)]
    index = [{x: i for i, x in enumerate(b)} for b in basis]
    boundary: dict[int, Sparse] = {}
    for n in range(1, X.max_dim + 1):
        mat: Sparse = {}
        for c, x in enumerate(basis[n]):
            col: dict[int, int] = {}
            for i, (f0, f1) in enumerate(X.faces(x), start=1):
                s = -1 if i % 2 else 1
                for f, sign in ((f1, s), (f0, -s)):
                    r = index[n - 1][f]
                    col[r] = col.get(r, 0) + sign
            col = {r: v for r, v in col.items() if v}
            if col:
                mat[c] = col
        boundary[n] = mat
    C = ChainComplex(basis, boundary)
    if not C.check():
        raise AssertionError("boundary of boundary is not zero")
    return C


def pcs_homology(X: PrecubicalSet) -> HomologyGroups:
    return homology(cubical_chain_complex(X))
