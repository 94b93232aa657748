"""Shared-variable systems over program graphs and their HDA models."""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from itertools import product
from typing import Hashable, Mapping, Sequence

from .accessibility import make_accessible
from .coskeleton import LabelRelation, hda_model
from .hda import (Hda, _freeze, _thaw, classify, hda_isomorphism, hda_P, is_connected,
                  is_extensional)
from .homology import compare, homology, pcs_homology
from .precubical import PrecubicalSet, euler_characteristic
from .simplicial import SimplicialComplex, simplicial_chain_complex

Evaluation = tuple  # values in the order of SharedVariableSystem.variables


@dataclass(frozen=True)
class VariableSpec:
    name: str
    domain: tuple

    def __post_init__(self):
        if not self.domain:
            raise ValueError(f"variable {self.name!r} has an empty domain")


@dataclass(frozen=True, eq=False)
class Action:
    """An action stored extensionally as ``evaluation -> evaluation``."""

    name: str
    table: Mapping[Evaluation, Evaluation] = field(repr=False)

    def __call__(self, gamma: Evaluation) -> Evaluation:
        return self.table[gamma]


@dataclass(frozen=True, eq=False)
class ProgramGraph:
    locations: tuple
    actions: tuple[Action, ...]
    transitions: tuple[tuple[Hashable, str, Hashable], ...]  # (from, action name, to)
    guards: tuple[frozenset, ...]  # aligned with transitions
    initial: Hashable

    def __post_init__(self):
        names = [a.name for a in self.actions]
        if len(set(names)) != len(names):
            raise ValueError("action names must be unique within a graph")
        if len(self.guards) != len(self.transitions):
            raise ValueError("one guard per transition")
        locs = set(self.locations)
        if self.initial not in locs:
            raise ValueError(f"initial location {self.initial!r} is not a location")
        for l0, a, l1 in self.transitions:
            if l0 not in locs or l1 not in locs or a not in names:
                raise ValueError(f"transition {(l0, a, l1)!r} references unknown names")

    def action(self, name: str) -> Action:
        return next(a for a in self.actions if a.name == name)


@dataclass(frozen=True, eq=False)
class SharedVariableSystem:
    graphs: tuple[ProgramGraph, ...]
    variables: tuple[VariableSpec, ...]
    eta: Evaluation

    def __post_init__(self):
        evals = set(self.evaluations())
        if tuple(self.eta) not in evals:
            raise ValueError("initial evaluation is outside the product domain")
        for g in self.graphs:
            for a in g.actions:
                if set(a.table) != evals:
                    raise ValueError(f"action {a.name!r} is not total on the product domain")
                if not set(a.table.values()) <= evals:
                    raise ValueError(f"action {a.name!r} leaves the product domain")
            for guard in g.guards:
                if not guard <= evals:
                    raise ValueError("guard contains a value outside the product domain")

    def evaluations(self):
        return product(*(v.domain for v in self.variables))

    @property
    def initial_state(self):
        return tuple(g.initial for g in self.graphs), tuple(self.eta)

    # -- JSON --------------------------------------------------------------------
    def to_json(self) -> dict:
        def ev(g):
            return [_thaw(v) for v in g]

        graphs = []
        for g in self.graphs:
            graphs.append({
                "locations": [_thaw(l) for l in g.locations],
                "actions": [{"name": a.name,
                             "table": [[ev(k), ev(v)] for k, v in sorted(a.table.items(), key=repr)]}
                            for a in g.actions],
                "transitions": [{"from": _thaw(l0), "action": a, "to": _thaw(l1),
                                 "guard": [ev(x) for x in sorted(gd, key=repr)]}
                                for (l0, a, l1), gd in zip(g.transitions, g.guards)],
                "initial": _thaw(g.initial),
            })
        return {"variables": [{"name": v.name, "domain": [_thaw(x) for x in v.domain]}
                              for v in self.variables],
                "graphs": graphs,
                "eta": {v.name: _thaw(x) for v, x in zip(self.variables, self.eta)}}

    @classmethod
    def from_json(cls, data: Mapping) -> "SharedVariableSystem":
        if "svs" in data:
            data = data["svs"]
        variables = tuple(VariableSpec(v["name"], tuple(_freeze(x) for x in v["domain"]))
                          for v in data["variables"])

        def ev(x):
            return tuple(_freeze(v) for v in x)

        graphs = []
        for g in data["graphs"]:
            actions = tuple(Action(a["name"], {ev(k): ev(v) for k, v in a["table"]})
                            for a in g["actions"])
            trans = tuple((_freeze(t["from"]), t["action"], _freeze(t["to"])) for t in g["transitions"])
            guards = tuple(frozenset(ev(x) for x in t["guard"]) for t in g["transitions"])
            graphs.append(ProgramGraph(tuple(_freeze(l) for l in g["locations"]), actions, trans,
                                       guards, _freeze(g["initial"])))
        eta = tuple(_freeze(data["eta"][v.name]) for v in variables)
        return cls(tuple(graphs), variables, eta)


# -- semantics -------------------------------------------------------------------

def state_key(locs, gamma) -> str:
    return json.dumps([_thaw(list(locs)), _thaw(list(gamma))], separators=(",", ":"))


def edge_key(i: int, t_index: int, locs, gamma) -> str:
    return json.dumps([i, t_index, _thaw(list(locs)), _thaw(list(gamma))], separators=(",", ":"))


def _moves(S: SharedVariableSystem, locs, gamma):
    """Edges leaving the global state ``(locs, gamma)``, guards read on ``gamma``."""
    for i, g in enumerate(S.graphs):
        for t_index, ((l0, a, l1), guard) in enumerate(zip(g.transitions, g.guards)):
            if locs[i] == l0 and gamma in guard:
                new = locs[:i] + (l1,) + locs[i + 1:]
                yield i, t_index, a, new, g.action(a)(gamma)


def state_graph(S: SharedVariableSystem) -> PrecubicalSet:
    """All global states and all guarded transitions between them."""
    cells: dict[str, list] = {}
    for locs in product(*(g.locations for g in S.graphs)):
        for gamma in S.evaluations():
            cells[state_key(locs, gamma)] = []
    for locs in product(*(g.locations for g in S.graphs)):
        for gamma in S.evaluations():
            for i, t_index, _, new, out in _moves(S, locs, gamma):
                cells[edge_key(i, t_index, locs, gamma)] = [(state_key(locs, gamma), state_key(new, out))]
    return PrecubicalSet(cells)


def transition_system_model(S: SharedVariableSystem) -> Hda:
    """Reachable part of the state graph, edges labeled ``(process, action)``.

    Processes are numbered from 1.
    """
    locs0, eta = S.initial_state
    start = state_key(locs0, eta)
    cells: dict[str, list] = {start: []}
    labels = {}
    queue = deque([(locs0, eta)])
    while queue:
        locs, gamma = queue.popleft()
        src = state_key(locs, gamma)
        for i, t_index, a, new, out in _moves(S, locs, gamma):
            dst = state_key(new, out)
            if dst not in cells:
                cells[dst] = []
                queue.append((new, out))
            key = edge_key(i, t_index, locs, gamma)
            cells[key] = [(src, dst)]
            labels[key] = (i + 1, a)
    order = tuple((i + 1, a.name) for i, g in enumerate(S.graphs) for a in g.actions)
    T = Hda(PrecubicalSet(cells), start, labels, order)
    if not is_extensional(T):
        raise ValueError("reachable state graph is not extensional")
    return T


def process_relation(order: Sequence) -> LabelRelation:
    """``(i, a) R (j, b)`` iff ``i < j``."""
    return LabelRelation(frozenset(order),
                         frozenset((p, q) for p in order for q in order if p[0] < q[0]))


def hda_model_of_svs(S: SharedVariableSystem, max_dim: int | None = None) -> Hda:
    T = transition_system_model(S)
    return hda_model(T, process_relation(T.order), max_dim=max_dim)


def action_name(label) -> str:
    return f"bar({_thaw(label)})"


def svs_from_hda(B: Hda, order: Sequence | None = None) -> SharedVariableSystem:
    """One process per label, one shared variable ranging over the states of ``B``.

    Process ``i`` has a single location and a single self-loop whose action
    follows the ``a_i``-labeled edge out of the current state (identity where
    there is none), guarded by the sources of the ``a_i``-labeled edges.
    """
    order = tuple(order) if order is not None else B.order
    if set(order) != set(B.alphabet):
        raise ValueError("order must list exactly the alphabet")
    cls = classify(B)
    if not cls.deterministic:
        raise ValueError("HDA is not deterministic")
    if not cls.accessible:
        raise ValueError("HDA is not accessible")
    states = B.pcs.vertices
    var = VariableSpec("x", tuple(states))
    graphs = []
    for a in order:
        moves = {B.source(e): B.target(e) for e in B.pcs.edges if B.labels[e] == a}
        table = {(v,): (moves.get(v, v),) for v in states}
        name = action_name(a)
        graphs.append(ProgramGraph((0,), (Action(name, table),), ((0, name, 0),),
                                   (frozenset((v,) for v in moves),), 0))
    return SharedVariableSystem(tuple(graphs), (var,), (B.initial,))


# -- full pipeline -------------------------------------------------------------

@dataclass
class Realization:
    svs: SharedVariableSystem
    model: Hda
    accessible: Hda
    certificate: dict


def realize(K: SimplicialComplex, max_dim: int | None = None) -> Realization:
    """Build a shared-variable system whose HDA model has the homology of ``|K|``."""
    P = hda_P(K)
    B, surgery = make_accessible(P)
    S = svs_from_hda(B)
    A = hda_model_of_svs(S, max_dim=max_dim)
    label_map = {(i + 1, action_name(a)): a for i, a in enumerate(B.order)}
    iso = hda_isomorphism(A, B, label_map)
    HK = homology(simplicial_chain_complex(K)).trimmed()
    HA = pcs_homology(A.pcs).trimmed()
    HB = pcs_homology(B.pcs).trimmed()
    cert = {
        "complex": {"n_vertices": K.n_vertices, "n_simplexes": len(K.simplexes),
                    "euler": K.euler_characteristic()},
        "homology_K": HK.to_json(),
        "subdivision_counts": list(P.pcs.counts()),
        "surgery": surgery.to_json(),
        "surgery_ok": surgery.ok,
        "accessible_counts": list(B.pcs.counts()),
        "svs": {"processes": len(S.graphs), "domain_size": len(S.variables[0].domain)},
        "model_counts": list(A.pcs.counts()),
        "model_euler": euler_characteristic(A.pcs),
        "homology_model": HA.to_json(),
        "homology_accessible": HB.to_json(),
        "homology_match": compare(HA, HK),
        "model_connected": is_connected(A.pcs),
        "model_accessible": classify(A).accessible,
        "isomorphic": iso is not None,
        "isomorphism": {k: iso.mapping[k] for k in sorted(iso.mapping)} if iso else None,
    }
    return Realization(S, A, B, cert)
