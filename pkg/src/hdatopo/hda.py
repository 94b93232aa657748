"""Higher-dimensional automata: labeled pointed precubical sets."""
from __future__ import annotations

from collections import Counter, defaultdict, deque
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Hashable, Mapping, Sequence

from .precubical import PcsMorphism, PrecubicalSet, is_isomorphic, truncate, validate
from .simplicial import SimplicialComplex, cubical_subdivision, pair_key, parse_pair_key

Label = Hashable


def _freeze(v):
    if isinstance(v, list):
        return tuple(_freeze(a) for a in v)
    return v


def _thaw(v):
    if isinstance(v, tuple):
        return [_thaw(a) for a in v]
    return v


@dataclass(frozen=True, eq=False)
class Hda:
    """An HDA ``(pcs, initial, alphabet, labels)``.

    ``order`` lists the alphabet in its strict total order; labels are never
    compared directly, only through their position in ``order``, so mixed
    label types are fine.  Final states are not modelled.
    """

    pcs: PrecubicalSet
    initial: str
    labels: Mapping[str, Label] = field(repr=False)
    order: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "labels", dict(self.labels))
        object.__setattr__(self, "order", tuple(self.order))
        X = self.pcs
        if self.initial not in X or X.dim(self.initial) != 0:
            raise ValueError(f"initial state {self.initial!r} is not a vertex")
        if len(set(self.order)) != len(self.order):
            raise ValueError("label order has repeated entries")
        if set(self.labels) != set(X.edges):
            raise ValueError("labeling must be defined on exactly the edges")
        alphabet = set(self.order)
        stray = {lab for lab in self.labels.values() if lab not in alphabet}
        if stray:
            raise ValueError(f"labels {sorted(map(repr, stray))} are not in the alphabet")
        for x in X.cubes(2):
            for i in (1, 2):
                if self.labels[X.d(x, i, 0)] != self.labels[X.d(x, i, 1)]:
                    raise ValueError(f"opposite edges of square {x!r} in direction {3 - i} differ in label")

    @property
    def alphabet(self) -> frozenset:
        return frozenset(self.order)

    @cached_property
    def rank(self) -> dict:
        return {a: i for i, a in enumerate(self.order)}

    def less(self, a: Label, b: Label) -> bool:
        return self.rank[a] < self.rank[b]

    def source(self, e: str) -> str:
        return self.pcs.source(e)

    def target(self, e: str) -> str:
        return self.pcs.target(e)

    @cached_property
    def _out(self) -> dict[str, tuple[str, ...]]:
        out = defaultdict(list)
        for e in self.pcs.edges:
            out[self.source(e)].append(e)
        return {v: tuple(es) for v, es in out.items()}

    @cached_property
    def _in(self) -> dict[str, tuple[str, ...]]:
        into = defaultdict(list)
        for e in self.pcs.edges:
            into[self.target(e)].append(e)
        return {v: tuple(es) for v, es in into.items()}

    def out_edges(self, v: str) -> tuple[str, ...]:
        return self._out.get(v, ())

    def in_edges(self, v: str) -> tuple[str, ...]:
        return self._in.get(v, ())

    def with_pcs(self, pcs: PrecubicalSet) -> "Hda":
        return Hda(pcs, self.initial, self.labels, self.order)

    def with_initial(self, v: str) -> "Hda":
        return replace(self, initial=v)

    def truncate(self, n: int = 1) -> "Hda":
        return Hda(truncate(self.pcs, n), self.initial, self.labels, self.order)

    def same_as(self, other: "Hda") -> bool:
        return (self.pcs == other.pcs and self.initial == other.initial
                and self.labels == other.labels and self.order == other.order)

    def to_json(self) -> dict:
        data = self.pcs.to_json()
        data["initial"] = self.initial
        data["alphabet"] = [_thaw(a) for a in self.order]
        data["order"] = [_thaw(a) for a in self.order]
        data["labels"] = {e: _thaw(self.labels[e]) for e in sorted(self.labels)}
        return data

    @classmethod
    def from_json(cls, data: Mapping) -> "Hda":
        if "hda" in data:
            data = data["hda"]
        pcs = PrecubicalSet.from_json(data)
        order = [_freeze(a) for a in data.get("order") or data["alphabet"]]
        labels = {e: _freeze(a) for e, a in data["labels"].items()}
        return cls(pcs, str(data["initial"]), labels, tuple(order))


# -- predicates ----------------------------------------------------------------

@dataclass(frozen=True)
class HdaClassification:
    deterministic: bool
    codeterministic: bool
    extensional: bool
    accessible: bool

    @property
    def bideterministic(self) -> bool:
        return self.deterministic and self.codeterministic


def _distinct_labels(A: Hda, groups) -> bool:
    for es in groups:
        labs = [A.labels[e] for e in es]
        if len(set(labs)) != len(labs):
            return False
    return True


def is_deterministic(A: Hda) -> bool:
    return _distinct_labels(A, A._out.values())


def is_codeterministic(A: Hda) -> bool:
    return _distinct_labels(A, A._in.values())


def is_extensional(A: Hda) -> bool:
    seen = Counter((A.source(e), A.target(e), A.labels[e]) for e in A.pcs.edges)
    return all(c == 1 for c in seen.values())


def reachable(A: Hda) -> set[str]:
    """States reachable from the initial state along directed edges."""
    seen = {A.initial}
    queue = deque([A.initial])
    while queue:
        v = queue.popleft()
        for e in A.out_edges(v):
            w = A.target(e)
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return seen


def unreachable(A: Hda) -> list[str]:
    r = reachable(A)
    return [v for v in A.pcs.vertices if v not in r]


def is_connected(X: PrecubicalSet) -> bool:
    """Path-connectedness of the realization (connectivity of the 1-skeleton)."""
    vs = X.vertices
    if not vs:
        return False
    nb = defaultdict(set)
    for e in X.edges:
        s, t = X.source(e), X.target(e)
        nb[s].add(t)
        nb[t].add(s)
    seen = {vs[0]}
    stack = [vs[0]]
    while stack:
        for u in nb[stack.pop()]:
            if u not in seen:
                seen.add(u)
                stack.append(u)
    return len(seen) == len(vs)


def classify(A: Hda) -> HdaClassification:
    return HdaClassification(
        deterministic=is_deterministic(A),
        codeterministic=is_codeterministic(A),
        extensional=is_extensional(A),
        accessible=len(reachable(A)) == len(A.pcs.vertices),
    )


def to_transition_system(A: Hda) -> Hda:
    """The 1-skeleton of ``A``; rejects skeletons that are not extensional."""
    T = A.truncate(1)
    if not is_extensional(T):
        raise ValueError("1-skeleton is not extensional, so it is not a transition system")
    return T


def is_transition_system(A: Hda) -> bool:
    return A.pcs.max_dim <= 1 and is_extensional(A)


def direction_label(A: Hda, x: str, j: int) -> Label:
    """Label carried by direction ``j`` of the cube ``x``.

    Collapses every other direction through its lower face, from the top
    index down so the remaining indices stay valid.
    """
    X = A.pcs
    m = X.dim(x)
    if not 1 <= j <= m:
        raise IndexError(f"direction {j} out of range for {m}-cube")
    y = x
    for r in range(m, 0, -1):
        if r != j:
            y = X.d(y, r, 0)
    return A.labels[y]


def hda_P(K: SimplicialComplex) -> Hda:
    """The subdivision as an HDA: start at ``({1},{1})``, label ``(τ, τ+a)`` by ``a``."""
    P = cubical_subdivision(K)
    labels = {}
    for e in P.edges:
        tau, sigma = parse_pair_key(e)
        (a,) = set(sigma) - set(tau)
        labels[e] = a
    return Hda(P, pair_key((1,), (1,)), labels, tuple(range(1, K.n_vertices + 1)))


def hda_isomorphism(A: Hda, B: Hda, label_map: Mapping | None = None) -> PcsMorphism | None:
    """Isomorphism of HDAs ``A -> B`` preserving initial states and labels.

    ``label_map`` translates labels of ``A`` into labels of ``B``.
    """
    lab_a = A.labels if label_map is None else {e: label_map[a] for e, a in A.labels.items()}
    return is_isomorphic(A.pcs, B.pcs, lab_a, B.labels, A.initial, B.initial)


def hda_validate(A: Hda) -> list[str]:
    return [str(v) for v in validate(A.pcs).violations]
