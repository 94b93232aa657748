"""HDA model of a transition system relative to a label relation.

Squares are filled over *edge frames*: a vertex with two outgoing edges
``y2`` (direction 1, label ``a``) and ``y1`` (direction 2, label ``b``) with
``a R b``, closed by an edge labeled ``b`` out of the end of ``y2`` and an edge
labeled ``a`` out of the end of ``y1`` that meet in one vertex.  Cubes of
dimension ``m >= 3`` are filled wherever a complete, face-compatible boundary
of ``(m-1)``-cubes exists.  Each boundary is filled at most once.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Mapping

from .hda import Hda, Label, _freeze, _thaw, is_extensional, is_transition_system
from .precubical import PrecubicalSet

FaceTuple = tuple[tuple[str, str], ...]


@dataclass(frozen=True)
class LabelRelation:
    alphabet: frozenset
    pairs: frozenset

    def __post_init__(self):
        object.__setattr__(self, "alphabet", frozenset(self.alphabet))
        object.__setattr__(self, "pairs", frozenset(self.pairs))
        stray = [p for p in self.pairs if p[0] not in self.alphabet or p[1] not in self.alphabet]
        if stray:
            raise ValueError(f"pairs {stray[:3]} leave the alphabet")

    def __call__(self, a: Label, b: Label) -> bool:
        return (a, b) in self.pairs

    @classmethod
    def from_order(cls, order: Iterable[Label]) -> "LabelRelation":
        order = tuple(order)
        return cls(frozenset(order), frozenset(
            (order[i], order[j]) for i in range(len(order)) for j in range(i + 1, len(order))))

    def to_json(self) -> dict:
        return {"pairs": sorted(([_thaw(a), _thaw(b)] for a, b in self.pairs), key=repr)}

    @classmethod
    def from_json(cls, data: Mapping, alphabet: Iterable[Label] | None = None) -> "LabelRelation":
        if "order" in data:
            rel = cls.from_order(_freeze(a) for a in data["order"])
            if alphabet is not None:
                rel = cls(frozenset(alphabet) | rel.alphabet, rel.pairs)
            return rel
        pairs = frozenset((_freeze(a), _freeze(b)) for a, b in data["pairs"])
        alpha = set(alphabet or ())
        for a, b in pairs:
            alpha.update((a, b))
        return cls(frozenset(alpha), pairs)


# -- candidate enumeration -------------------------------------------------------

def _square_frames(X: PrecubicalSet, labels: Mapping, R: LabelRelation) -> list[FaceTuple]:
    out_by = defaultdict(list)  # (vertex, label) -> edges
    outs = defaultdict(list)
    for e in X.edges:
        s = X.source(e)
        out_by[s, labels[e]].append(e)
        outs[s].append(e)
    frames = []
    for v in X.vertices:
        for y2 in outs[v]:
            a = labels[y2]
            for y1 in outs[v]:
                b = labels[y1]
                if not R(a, b):
                    continue
                for y1p in out_by[X.target(y2), b]:
                    for y2p in out_by[X.target(y1), a]:
                        if X.target(y1p) == X.target(y2p):
                            frames.append(((y1, y1p), (y2, y2p)))
    return frames


def _cube_candidates(X: PrecubicalSet, m: int) -> list[FaceTuple]:
    """Face-compatible boundaries of would-be ``m``-cubes (``m >= 3``)."""
    lower = X.cubes(m - 1)
    by_last0 = defaultdict(list)  # d^0_{m-1} w -> [w]
    by_faces = defaultdict(list)
    for w in lower:
        by_last0[X.d(w, m - 1, 0)].append(w)
        by_faces[X.faces(w)].append(w)
    found = []
    for z in lower:  # z plays d^0_m
        slots = [(i, k) for i in range(1, m) for k in (0, 1)]
        chosen: dict[tuple[int, int], str] = {}

        def consistent(i, k, w):
            # identities among the faces d^k_i (i < m) chosen so far
            for (i2, k2), w2 in chosen.items():
                if i2 < i:  # d^{k2}_{i2} d^k_i = d^k_{i-1} d^{k2}_{i2}
                    if X.d(w, i2, k2) != X.d(w2, i - 1, k):
                        return False
                elif i < i2:
                    if X.d(w2, i, k) != X.d(w, i2 - 1, k2):
                        return False
            return True

        def extend(pos):
            if pos == len(slots):
                top = tuple((X.d(chosen[i, 0], m - 1, 1), X.d(chosen[i, 1], m - 1, 1))
                            for i in range(1, m))
                for z1 in by_faces.get(top, ()):
                    found.append(tuple((chosen[i, 0], chosen[i, 1]) for i in range(1, m)) + ((z, z1),))
                return
            i, k = slots[pos]
            for w in by_last0.get(X.d(z, i, k), ()):
                if consistent(i, k, w):
                    chosen[i, k] = w
                    extend(pos + 1)
                    del chosen[i, k]

        extend(0)
    return found


def fill_candidates(X: PrecubicalSet, labels: Mapping, R: LabelRelation, m: int) -> list[FaceTuple]:
    """Boundaries of admissible ``m``-cubes not yet filled in ``X``."""
    cands = _square_frames(X, labels, R) if m == 2 else _cube_candidates(X, m)
    have = {X.faces(x) for x in X.cubes(m)}
    seen = set()
    out = []
    for c in cands:
        if c not in have and c not in seen:
            seen.add(c)
            out.append(c)
    return sorted(out)


def hda_model(T: Hda, R: LabelRelation, max_dim: int | None = None) -> Hda:
    """Saturate the transition system ``T`` dimension by dimension."""
    if not is_transition_system(T):
        raise ValueError("input must be a 1-truncated extensional HDA")
    if not set(T.alphabet) <= set(R.alphabet):
        raise ValueError("relation alphabet does not cover the labels")
    cells = T.pcs.cells()
    X = T.pcs
    m = 2
    bound = len(T.alphabet)
    while True:
        new = fill_candidates(X, T.labels, R, m)
        if not new:
            break
        if m > bound or (max_dim is not None and m > max_dim):
            raise RuntimeError(f"filling reached dimension {m} beyond the guard "
                               f"({'alphabet size ' + str(bound) if m > bound else 'max_dim'})")
        for idx, faces in enumerate(new):
            cells[f"q{m}.{idx}"] = faces
        X = PrecubicalSet(cells)
        m += 1
    return Hda(X, T.initial, T.labels, T.order)


# -- verification ----------------------------------------------------------------

@dataclass
class HmReport:
    hm1: bool = True
    hm2: bool = True
    hm3: bool = True
    hm4: bool = True
    problems: list = None

    @property
    def ok(self) -> bool:
        return self.hm1 and self.hm2 and self.hm3 and self.hm4

    def to_json(self) -> dict:
        return {"HM1": self.hm1, "HM2": self.hm2, "HM3": self.hm3, "HM4": self.hm4,
                "problems": list(self.problems or [])}


def verify_hda_model(Q: Hda, T: Hda, R: LabelRelation) -> HmReport:
    rep = HmReport(problems=[])
    X = Q.pcs
    skel = Q.truncate(1)
    if not (skel.pcs == T.pcs and skel.initial == T.initial and skel.labels == T.labels):
        rep.hm1 = False
        rep.problems.append("HM1: 1-skeleton differs from the transition system")
    for x in X.cubes(2):
        a, b = Q.labels[X.d(x, 2, 0)], Q.labels[X.d(x, 1, 0)]
        if not R(a, b):
            rep.hm2 = False
            rep.problems.append(f"HM2: square {x!r} has labels {a!r}, {b!r} unrelated")
    for m in range(2, X.max_dim + 1):
        seen = {}
        for x in X.cubes(m):
            f = X.faces(x)
            if f in seen:
                rep.hm3 = False
                rep.problems.append(f"HM3: {x!r} and {seen[f]!r} share their boundary")
            seen[f] = x
    for m in range(2, X.max_dim + 2):
        missing = fill_candidates(X, Q.labels, R, m)
        if missing:
            rep.hm4 = False
            rep.problems.append(f"HM4: {len(missing)} admissible {m}-cube(s) not filled")
            break
    return rep
