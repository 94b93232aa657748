"""Abstract simplicial complexes and their cubical barycentric subdivision."""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from importlib import resources
from itertools import combinations
from typing import Iterable, Mapping

from .homology import ChainComplex, Sparse
from .precubical import PrecubicalSet

Simplex = tuple[int, ...]


@dataclass(frozen=True)
class SimplicialComplex:
    """Connected abstract simplicial complex on the vertices ``1..n_vertices``.

    Simplexes are sorted integer tuples.  Construction checks closure under
    nonempty faces, that every vertex is used, and connectivity.
    """

    n_vertices: int
    simplexes: frozenset

    def __post_init__(self):
        N = self.n_vertices
        if N < 1:
            raise ValueError("a complex needs at least one vertex")
        for s in self.simplexes:
            if not s or list(s) != sorted(set(s)):
                raise ValueError(f"simplex {s!r} is not a nonempty sorted vertex tuple")
            if s[0] < 1 or s[-1] > N:
                raise ValueError(f"simplex {s!r} uses a vertex outside 1..{N}")
            for f in combinations(s, len(s) - 1):
                if f and f not in self.simplexes:
                    raise ValueError(f"face {f!r} of {s!r} is missing")
        missing = [v for v in range(1, N + 1) if (v,) not in self.simplexes]
        if missing:
            raise ValueError(f"vertices {missing} are not used")
        # union-find over the edges
        root = list(range(N + 1))

        def find(a):
            while root[a] != a:
                root[a] = root[root[a]]
                a = root[a]
            return a

        for s in self.simplexes:
            if len(s) == 2:
                root[find(s[0])] = find(s[1])
        if len({find(v) for v in range(1, N + 1)}) != 1:
            raise ValueError("complex is not connected")

    @property
    def dim(self) -> int:
        return max(len(s) for s in self.simplexes) - 1

    def simplices(self, d: int) -> list[Simplex]:
        return sorted(s for s in self.simplexes if len(s) == d + 1)

    def facets(self) -> list[Simplex]:
        out = []
        for s in sorted(self.simplexes):
            ss = set(s)
            if not any(len(t) > len(s) and ss <= set(t) for t in self.simplexes):
                out.append(s)
        return out

    def euler_characteristic(self) -> int:
        return sum((-1) ** (len(s) - 1) for s in self.simplexes)

    def __contains__(self, s) -> bool:
        return tuple(s) in self.simplexes

    def to_json(self) -> dict:
        return {"n_vertices": self.n_vertices, "facets": [list(f) for f in self.facets()]}

    @classmethod
    def from_json(cls, data: Mapping) -> "SimplicialComplex":
        return from_facets(int(data["n_vertices"]), data["facets"])


def from_facets(N: int, facets: Iterable[Iterable[int]]) -> SimplicialComplex:
    simplexes = set()
    for f in facets:
        f = tuple(sorted(set(int(v) for v in f)))
        if not f:
            raise ValueError("empty facet")
        if f[0] < 1 or f[-1] > N:
            raise ValueError(f"facet {f} has a vertex outside 1..{N}")
        for r in range(1, len(f) + 1):
            simplexes.update(combinations(f, r))
    return SimplicialComplex(N, frozenset(simplexes))


FIXTURES = ("interval", "triangle", "circle", "tetra", "torus", "rp2")


def load_fixture(name: str) -> SimplicialComplex:
    """One of the bundled complexes: see :data:`FIXTURES`."""
    text = resources.files("hdatopo.fixtures").joinpath(f"{name}.json").read_text()
    return SimplicialComplex.from_json(json.loads(text))


# -- subdivision -------------------------------------------------------------------

def _set_str(s: Iterable[int]) -> str:
    return "{" + ",".join(map(str, s)) + "}"


def pair_key(tau: Iterable[int], sigma: Iterable[int]) -> str:
    """Key of the cube ``(tau, sigma)``, e.g. ``({1},{1,2})``."""
    return f"({_set_str(sorted(tau))},{_set_str(sorted(sigma))})"


_PAIR = re.compile(r"^\(\{([\d,]*)\},\{([\d,]*)\}\)$")


def parse_pair_key(key: str) -> tuple[Simplex, Simplex]:
    m = _PAIR.match(key)
    if not m:
        raise ValueError(f"{key!r} is not a subdivision cube key")
    tau, sigma = (tuple(int(v) for v in g.split(",") if v) for g in m.groups())
    return tau, sigma


def cube_pairs(K: SimplicialComplex) -> list[tuple[Simplex, Simplex]]:
    out = []
    for sigma in K.simplexes:
        for r in range(1, len(sigma) + 1):
            for tau in combinations(sigma, r):
                out.append((tau, sigma))
    return sorted(out, key=lambda p: (len(p[1]) - len(p[0]), p))


def pair_faces(tau: Simplex, sigma: Simplex) -> list[tuple[tuple[Simplex, Simplex], tuple[Simplex, Simplex]]]:
    """``[(d^0_i, d^1_i)]`` of the cube ``(tau, sigma)`` as pairs of simplexes."""
    w = sorted(set(sigma) - set(tau))
    out = []
    for wi in w:
        lower = (tau, tuple(v for v in sigma if v != wi))
        upper = (tuple(sorted(tau + (wi,))), sigma)
        out.append((lower, upper))
    return out


def cubical_subdivision(K: SimplicialComplex) -> PrecubicalSet:
    """The precubical set of pairs ``tau ⊆ sigma``; the degree is ``|sigma - tau|``.

    With ``sigma - tau = {w_1 < ... < w_n}``, ``d^0_i`` removes ``w_i`` from
    ``sigma`` and ``d^1_i`` adds it to ``tau``.
    """
    cells = {}
    for tau, sigma in cube_pairs(K):
        cells[pair_key(tau, sigma)] = [
            (pair_key(*lo), pair_key(*hi)) for lo, hi in pair_faces(tau, sigma)
        ]
    return PrecubicalSet(cells)


def simplicial_chain_complex(K: SimplicialComplex) -> ChainComplex:
    basis = [K.simplices(d) for d in range(K.dim + 1)]
    index = [{s: i for i, s in enumerate(b)} for b in basis]
    boundary: dict[int, Sparse] = {}
    for d in range(1, K.dim + 1):
        mat: Sparse = {}
        for c, s in enumerate(basis[d]):
            mat[c] = {index[d - 1][s[:i] + s[i + 1:]]: (-1) ** i for i in range(len(s))}
        boundary[d] = mat
    C = ChainComplex(basis, boundary)
    if not C.check():
        raise AssertionError("simplicial boundary of boundary is not zero")
    return C
