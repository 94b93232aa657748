"""Finite precubical sets, their morphisms, and the basic constructions.

A cube is identified by a string key, unique across the whole set.  Each cube
stores its faces as a tuple of pairs ``((d0_1, d1_1), ..., (d0_n, d1_n))``
so the dimension of a cube is the length of that tuple; vertices store ``()``.
Face indices ``i`` are 1-based throughout, as in the usual notation ``d^k_i``.
"""
from __future__ import annotations

import json
from collections import Counter, defaultdict, deque
from dataclasses import dataclass, field
from itertools import permutations, product
from typing import Iterable, Iterator, Mapping, Sequence

FacePairs = tuple[tuple[str, str], ...]


class PrecubicalSet:
    """Immutable finite precubical set.

    ``cells`` maps every cube key to its face pairs.  The constructor checks
    that the face map is total and closed (every face is a registered cube of
    the right dimension); the precubical identities are *not* enforced here,
    use :func:`validate` for that.
    """

    __slots__ = ("_faces", "_by_dim", "_hash")

    def __init__(self, cells: Mapping[str, Sequence[Sequence[str]]]):
        faces: dict[str, FacePairs] = {}
        for key, pairs in cells.items():
            faces[str(key)] = tuple((str(a), str(b)) for a, b in pairs)
        for key, pairs in faces.items():
            n = len(pairs)
            for pair in pairs:
                for f in pair:
                    if f not in faces:
                        raise ValueError(f"face {f!r} of cube {key!r} is not a registered cube")
                    if len(faces[f]) != n - 1:
                        raise ValueError(
                            f"face {f!r} of {n}-cube {key!r} has dimension {len(faces[f])}"
                        )
        by_dim: dict[int, list[str]] = defaultdict(list)
        for key, pairs in faces.items():
            by_dim[len(pairs)].append(key)
        top = max(by_dim) if by_dim else -1
        self._faces = faces
        self._by_dim = tuple(tuple(sorted(by_dim.get(n, ()))) for n in range(top + 1))
        self._hash = None

    # -- access -----------------------------------------------------------------
    @property
    def max_dim(self) -> int:
        """Largest dimension carrying a cube, ``-1`` for the empty set."""
        for n in range(len(self._by_dim) - 1, -1, -1):
            if self._by_dim[n]:
                return n
        return -1

    def cubes(self, n: int) -> tuple[str, ...]:
        if 0 <= n < len(self._by_dim):
            return self._by_dim[n]
        return ()

    @property
    def vertices(self) -> tuple[str, ...]:
        return self.cubes(0)

    @property
    def edges(self) -> tuple[str, ...]:
        return self.cubes(1)

    def counts(self) -> tuple[int, ...]:
        return tuple(len(self.cubes(n)) for n in range(self.max_dim + 1))

    def dim(self, key: str) -> int:
        return len(self._faces[key])

    def faces(self, key: str) -> FacePairs:
        return self._faces[key]

    def d(self, key: str, i: int, k: int) -> str:
        """The face ``d^k_i`` of ``key`` (``i`` is 1-based)."""
        pairs = self._faces[key]
        if not 1 <= i <= len(pairs):
            raise IndexError(f"face index {i} out of range for {len(pairs)}-cube {key!r}")
        return pairs[i - 1][k]

    def source(self, edge: str) -> str:
        return self.d(edge, 1, 0)

    def target(self, edge: str) -> str:
        return self.d(edge, 1, 1)

    def items(self) -> Iterator[tuple[str, FacePairs]]:
        for key in self:
            yield key, self._faces[key]

    def cells(self) -> dict[str, FacePairs]:
        return dict(self._faces)

    def __iter__(self) -> Iterator[str]:
        for keys in self._by_dim:
            yield from keys

    def __len__(self) -> int:
        return len(self._faces)

    def __contains__(self, key) -> bool:
        return key in self._faces

    def __eq__(self, other) -> bool:
        if not isinstance(other, PrecubicalSet):
            return NotImplemented
        return self._faces == other._faces

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._faces.items()))
        return self._hash

    def __repr__(self) -> str:
        return f"PrecubicalSet(counts={self.counts()})"

    # -- serialization ------------------------------------------------------------
    def to_json(self) -> dict:
        cubes = [{"dim": self.dim(key), "key": key} for key in self]
        faces = []
        for key in sorted(self._faces):
            for i, pair in enumerate(self._faces[key], start=1):
                for k in (0, 1):
                    faces.append({"cube": key, "i": i, "k": k, "face": pair[k]})
        return {"cubes": cubes, "faces": faces}

    @classmethod
    def from_json(cls, data: Mapping) -> "PrecubicalSet":
        dims = {}
        for c in data["cubes"]:
            key = str(c["key"])
            if key in dims:
                raise ValueError(f"duplicate cube key {key!r}")
            dims[key] = int(c["dim"])
        table: dict[str, list[list]] = {key: [[None, None] for _ in range(n)] for key, n in dims.items()}
        for f in data["faces"]:
            key, i, k = str(f["cube"]), int(f["i"]), int(f["k"])
            if key not in table or not 1 <= i <= dims[key] or k not in (0, 1):
                raise ValueError(f"bad face record {f!r}")
            table[key][i - 1][k] = str(f["face"])
        for key, pairs in table.items():
            if any(v is None for pair in pairs for v in pair):
                raise ValueError(f"face map of {key!r} is not total")
        return cls(table)


def dumps(obj) -> str:
    """Byte-stable JSON used for every exported artifact."""
    return json.dumps(obj, sort_keys=True, indent=1, ensure_ascii=False) + "\n"


# -- validation ------------------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    cube: str
    i: int
    j: int
    k: int
    l: int
    lhs: str
    rhs: str

    def __str__(self):
        return (f"{self.cube}: d^{self.k}_{self.i} d^{self.l}_{self.j} = {self.lhs} "
                f"but d^{self.l}_{self.j - 1} d^{self.k}_{self.i} = {self.rhs}")


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()
    checked: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {"ok": self.ok, "checked": self.checked,
                "violations": [str(v) for v in self.violations]}


def validate(X: PrecubicalSet) -> ValidationReport:
    """Check every instance of ``d^k_i d^l_j = d^l_{j-1} d^k_i`` (i < j)."""
    bad = []
    checked = 0
    for n in range(2, X.max_dim + 1):
        for x in X.cubes(n):
            for j in range(2, n + 1):
                for i in range(1, j):
                    for k in (0, 1):
                        for l in (0, 1):
                            lhs = X.d(X.d(x, j, l), i, k)
                            rhs = X.d(X.d(x, i, k), j - 1, l)
                            checked += 1
                            if lhs != rhs:
                                bad.append(Violation(x, i, j, k, l, lhs, rhs))
    return ValidationReport(tuple(bad), checked)


# -- morphisms -------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class PcsMorphism:
    source: PrecubicalSet
    target: PrecubicalSet
    mapping: Mapping[str, str] = field(repr=False)

    def __call__(self, key: str) -> str:
        return self.mapping[key]

    def violations(self) -> list[str]:
        """Reasons this is not a morphism of precubical sets (empty if it is)."""
        out = []
        for x in self.source:
            if x not in self.mapping:
                out.append(f"{x!r} is not mapped")
                continue
            y = self.mapping[x]
            if y not in self.target:
                out.append(f"{x!r} -> {y!r} is not a cube of the target")
                continue
            if self.source.dim(x) != self.target.dim(y):
                out.append(f"{x!r} -> {y!r} changes dimension")
                continue
            for i, pair in enumerate(self.source.faces(x), start=1):
                for k in (0, 1):
                    img = self.mapping.get(pair[k])
                    if img != self.target.d(y, i, k):
                        out.append(f"d^{k}_{i} not preserved at {x!r}")
        return out

    def check(self) -> "PcsMorphism":
        problems = self.violations()
        if problems:
            raise ValueError("not a precubical morphism: " + "; ".join(problems[:5]))
        return self

    def is_injective(self) -> bool:
        images = [self.mapping[x] for x in self.source]
        return len(set(images)) == len(images)

    def compose(self, other: "PcsMorphism") -> "PcsMorphism":
        """``other ∘ self``."""
        return PcsMorphism(self.source, other.target,
                           {x: other.mapping[y] for x, y in self.mapping.items()})


def identity(X: PrecubicalSet) -> PcsMorphism:
    return PcsMorphism(X, X, {x: x for x in X})


def inclusion(X: PrecubicalSet, Y: PrecubicalSet) -> PcsMorphism:
    return PcsMorphism(X, Y, {x: x for x in X}).check()


# -- constructions -------------------------------------------------------------

def interval(p: int, q: int) -> PrecubicalSet:
    """The precubical interval with vertices ``p..q`` and edges ``[j-1,j]``."""
    if p > q:
        raise ValueError(f"interval needs p <= q, got {p} > {q}")
    cells: dict[str, list] = {str(j): [] for j in range(p, q + 1)}
    for j in range(p + 1, q + 1):
        cells[f"[{j - 1},{j}]"] = [(str(j - 1), str(j))]
    return PrecubicalSet(cells)


def point(label: int | str = 0) -> PrecubicalSet:
    return PrecubicalSet({str(label): []})


def pair_key(x: str, y: str) -> str:
    return f"<{x}|{y}>"


def tensor(X: PrecubicalSet, Y: PrecubicalSet) -> PrecubicalSet:
    cells = {}
    for x, fx in X.items():
        for y, fy in Y.items():
            pairs = [(pair_key(a, y), pair_key(b, y)) for a, b in fx]
            pairs += [(pair_key(x, a), pair_key(x, b)) for a, b in fy]
            cells[pair_key(x, y)] = pairs
    return PrecubicalSet(cells)


def truncate(X: PrecubicalSet, n: int) -> PrecubicalSet:
    if n < 0:
        raise ValueError("truncation degree must be non-negative")
    return PrecubicalSet({x: f for x, f in X.items() if len(f) <= n})


def subset(X: PrecubicalSet, keys: Iterable[str]) -> PrecubicalSet:
    """Smallest precubical subset of ``X`` containing ``keys``."""
    keep = set()
    todo = list(keys)
    while todo:
        x = todo.pop()
        if x in keep:
            continue
        keep.add(x)
        for pair in X.faces(x):
            todo.extend(pair)
    return PrecubicalSet({x: X.faces(x) for x in keep})


def disjoint_union(X: PrecubicalSet, Y: PrecubicalSet, tags=("L:", "R:")) -> PrecubicalSet:
    cells = {}
    for tag, Z in zip(tags, (X, Y)):
        for z, f in Z.items():
            cells[tag + z] = [(tag + a, tag + b) for a, b in f]
    return PrecubicalSet(cells)


def pushout(apex: PrecubicalSet, left: PcsMorphism, right: PcsMorphism,
            tag: str = "R:") -> tuple[PrecubicalSet, PcsMorphism, PcsMorphism]:
    """Glue ``right.target`` onto ``left.target`` along the span out of ``apex``.

    The right leg must be injective.  Cubes of ``left.target`` keep their keys;
    cubes of ``right.target`` outside the image of ``apex`` are renamed with
    ``tag`` prefixed.  Returns the glued set and the two cocone morphisms.
    """
    if left.source != apex or right.source != apex:
        raise ValueError("span legs must share the apex as source")
    left.check()
    right.check()
    if not right.is_injective():
        raise ValueError("pushout requires an injective right leg")
    L, R = left.target, right.target
    back = {right.mapping[a]: a for a in apex}

    def name(r: str) -> str:
        if r in back:
            return left.mapping[back[r]]
        return tag + r

    cells = dict(L.cells())
    for r, f in R.items():
        if r in back:
            continue
        key = tag + r
        if key in cells:
            raise ValueError(f"pushout key collision on {key!r}; choose another tag")
        cells[key] = [(name(a), name(b)) for a, b in f]
    P = PrecubicalSet(cells)
    inl = PcsMorphism(L, P, {x: x for x in L})
    inr = PcsMorphism(R, P, {r: name(r) for r in R})
    return P, inl, inr


def euler_characteristic(X: PrecubicalSet) -> int:
    return sum((-1) ** n * c for n, c in enumerate(X.counts()))


# -- isomorphism -----------------------------------------------------------------

def _edge_tables(X: PrecubicalSet, labels):
    between: dict[tuple[str, str], Counter] = defaultdict(Counter)
    out_nb: dict[str, set] = defaultdict(set)
    in_nb: dict[str, set] = defaultdict(set)
    sig_out: dict[str, Counter] = defaultdict(Counter)
    sig_in: dict[str, Counter] = defaultdict(Counter)
    for e in X.edges:
        s, t = X.source(e), X.target(e)
        lab = labels[e] if labels is not None else None
        between[s, t][lab] += 1
        out_nb[s].add(t)
        in_nb[t].add(s)
        sig_out[s][lab] += 1
        sig_in[t][lab] += 1
    sigs = {v: (frozenset(sig_out[v].items()), frozenset(sig_in[v].items())) for v in X.vertices}
    return between, out_nb, in_nb, sigs


def _vertex_assignments(X, Y, labels_X, labels_Y, initial_X, initial_Y):
    bx, out_x, in_x, sig_x = _edge_tables(X, labels_X)
    by, out_y, in_y, sig_y = _edge_tables(Y, labels_Y)
    if Counter(sig_x.values()) != Counter(sig_y.values()):
        return
    by_sig = defaultdict(list)
    for v in Y.vertices:
        by_sig[sig_y[v]].append(v)

    # BFS order over the underlying undirected graph, remembering one parent
    order: list[str] = []
    parent: dict[str, str | None] = {}
    sig_freq = Counter(sig_x.values())
    roots = sorted(X.vertices, key=lambda v: (v != initial_X, sig_freq[sig_x[v]], v))
    for r in roots:
        if r in parent:
            continue
        parent[r] = None
        queue = deque([r])
        while queue:
            v = queue.popleft()
            order.append(v)
            for u in sorted(out_x[v] | in_x[v]):
                if u not in parent:
                    parent[u] = v
                    queue.append(u)

    def candidates(v, phi, used):
        p = parent[v]
        if v == initial_X and initial_Y is not None:
            pool = [initial_Y]
        elif p is not None:
            q = phi[p]
            pool = sorted(out_y[q] | in_y[q])
        else:
            pool = by_sig[sig_x[v]]
        for w in pool:
            if w in used or sig_y[w] != sig_x[v]:
                continue
            if initial_Y is not None and (w == initial_Y) != (v == initial_X):
                continue
            if bx.get((v, v), Counter()) != by.get((w, w), Counter()):
                continue
            ok = True
            for u in (out_x[v] | in_x[v]):
                if u in phi and u != v:
                    if bx.get((v, u), Counter()) != by.get((w, phi[u]), Counter()):
                        ok = False
                        break
                    if bx.get((u, v), Counter()) != by.get((phi[u], w), Counter()):
                        ok = False
                        break
            if ok:
                yield w

    phi: dict[str, str] = {}
    used: set[str] = set()
    stack = [candidates(order[0], phi, used)] if order else []
    if not order:
        yield {}
        return
    while stack:
        depth = len(stack) - 1
        v = order[depth]
        if v in phi:
            used.discard(phi.pop(v))
        w = next(stack[-1], None)
        if w is None:
            stack.pop()
            continue
        phi[v] = w
        used.add(w)
        if depth + 1 == len(order):
            yield dict(phi)
        else:
            stack.append(candidates(order[depth + 1], phi, used))


def _extend_to_cubes(X, Y, phi, labels_X, labels_Y, n):
    if n > X.max_dim:
        return phi
    groups_x = defaultdict(list)
    groups_y = defaultdict(list)
    for x in X.cubes(n):
        sig = tuple((phi[a], phi[b]) for a, b in X.faces(x))
        lab = labels_X[x] if (n == 1 and labels_X is not None) else None
        groups_x[sig, lab].append(x)
    for y in Y.cubes(n):
        lab = labels_Y[y] if (n == 1 and labels_Y is not None) else None
        groups_y[Y.faces(y), lab].append(y)
    if set(groups_x) != set(groups_y):
        return None
    if any(len(groups_x[g]) != len(groups_y[g]) for g in groups_x):
        return None
    fixed = {}
    ambiguous = []
    for g, xs in sorted(groups_x.items(), key=lambda kv: kv[1]):
        if len(xs) == 1:
            fixed[xs[0]] = groups_y[g][0]
        else:
            ambiguous.append((xs, groups_y[g]))
    choices = [list(permutations(ys)) for _, ys in ambiguous]
    for pick in product(*choices):
        psi = dict(phi)
        psi.update(fixed)
        for (xs, _), ys in zip(ambiguous, pick):
            psi.update(zip(xs, ys))
        res = _extend_to_cubes(X, Y, psi, labels_X, labels_Y, n + 1)
        if res is not None:
            return res
    return None


def is_isomorphic(X: PrecubicalSet, Y: PrecubicalSet, labels_X: Mapping | None = None,
                  labels_Y: Mapping | None = None, initial_X: str | None = None,
                  initial_Y: str | None = None) -> PcsMorphism | None:
    """Search for an isomorphism ``X -> Y``; ``None`` certifies that none exists.

    With labelings, the isomorphism must carry each edge to an edge with an
    equal label (translate labels beforehand when the alphabets differ).  With
    initial vertices, it must carry one to the other.  The search backtracks
    over vertex assignments and then matches higher cubes by their images of
    faces, backtracking again only among cubes sharing a boundary.
    """
    if X.counts() != Y.counts():
        return None
    if (labels_X is None) != (labels_Y is None):
        raise ValueError("give labelings for both sides or for neither")
    for phi in _vertex_assignments(X, Y, labels_X, labels_Y, initial_X, initial_Y):
        full = _extend_to_cubes(X, Y, phi, labels_X, labels_Y, 1)
        if full is not None:
            return PcsMorphism(X, Y, full)
    return None
