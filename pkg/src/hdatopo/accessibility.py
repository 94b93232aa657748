"""Making an HDA accessible without changing its homotopy type.

One surgery step picks an edge ``e: v -> w`` from an unreachable state into a
reachable one.  If ``w`` is the initial state, the initial state simply moves
to ``v``.  Otherwise, with ``ω = (x_1..x_k)`` a shortest path from the initial
state to ``w`` and ``c`` a fresh label above every existing one:

* ``C`` glues the ladder ``[-1,0]⊗{1} ∪ [0,k]⊗[1,2]`` along its top rail onto
  ``ω`` and starts at the foot of the ladder;
* ``D`` glues ``[i,k+1]⊗[0,1]`` under the ladder so that ``v`` becomes
  reachable, ``i`` being the last rung of the ladder's bottom rail labeled
  like ``e``;
* ``B`` transposes the two directions of the new squares whose direction
  labels come in the wrong order, restoring the model property.

Both attachments are contractible and glued along contractible subspaces, so
homology never changes; :func:`make_accessible` records that per step.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .coskeleton import LabelRelation, verify_hda_model
from .hda import Hda, Label, classify, is_connected, reachable, unreachable
from .homology import pcs_homology
from .precubical import (PcsMorphism, PrecubicalSet, euler_characteristic, interval,
                         pair_key, pushout, subset, tensor, validate)


@dataclass
class SurgeryStep:
    number: int
    e: str
    v: str
    w: str
    a: Label
    c: Label
    omega: list[str]
    i_star: int | None = None
    xi: PcsMorphism | None = field(default=None, repr=False)
    nu: PcsMorphism | None = field(default=None, repr=False)
    chi: PcsMorphism | None = field(default=None, repr=False)
    C: Hda | None = field(default=None, repr=False)

    @property
    def k(self) -> int:
        return len(self.omega)


@dataclass(frozen=True)
class Reroot:
    e: str
    v: str


def find_boundary_edge(A: Hda) -> tuple[str, str, str]:
    """Smallest edge ``(source key, label rank, key)`` going from unreachable to reachable.

    Returns ``(e, v, w)``; ``w == A.initial`` means the step is a re-root.
    """
    if not is_connected(A.pcs):
        raise ValueError("HDA is not connected")
    r = reachable(A)
    if len(r) == len(A.pcs.vertices):
        raise ValueError("HDA is already accessible")
    cands = [e for e in A.pcs.edges if A.source(e) not in r and A.target(e) in r]
    if not cands:  # impossible for connected input
        raise AssertionError("no edge from an unreachable to a reachable state")
    e = min(cands, key=lambda e: (A.source(e), A.rank[A.labels[e]], e))
    return e, A.source(e), A.target(e)


def shortest_path(A: Hda, start: str, goal: str) -> list[str]:
    """BFS edge path; ties broken by edge key, so the result is deterministic."""
    parent: dict[str, str | None] = {start: None}
    queue = deque([start])
    while queue and goal not in parent:
        u = queue.popleft()
        for e in sorted(A.out_edges(u)):
            t = A.target(e)
            if t not in parent:
                parent[t] = e
                queue.append(t)
    if goal not in parent:
        raise ValueError(f"{goal!r} is not reachable from {start!r}")
    path = []
    v = goal
    while parent[v] is not None:
        e = parent[v]
        path.append(e)
        v = A.source(e)
    return path[::-1]


def _path_vertices(A: Hda, omega: list[str], start: str) -> list[str]:
    return [start] + [A.target(x) for x in omega]


def build_C(A: Hda, step: SurgeryStep) -> Hda:
    k = step.k
    if k < 1:
        raise ValueError("C needs a path of positive length (w differs from the initial state)")
    big = tensor(interval(-1, k), interval(1, 2))
    attach = subset(big, [pair_key("[-1,0]", "1")] +
                    [pair_key(f"[{j - 1},{j}]", "[1,2]") for j in range(1, k + 1)] +
                    [pair_key("0", "[1,2]")])
    apex = tensor(interval(0, k), interval(2, 2))
    verts = _path_vertices(A, step.omega, A.initial)
    omega_map = {pair_key(str(j), "2"): verts[j] for j in range(k + 1)}
    omega_map.update({pair_key(f"[{j - 1},{j}]", "2"): step.omega[j - 1] for j in range(1, k + 1)})
    left = PcsMorphism(apex, A.pcs, omega_map)
    right = PcsMorphism(apex, attach, {x: x for x in apex})
    P, _, xi = pushout(apex, left, right, tag=f"C{step.number}:")
    labels = dict(A.labels)
    for j in range(0, k + 1):
        labels[xi(pair_key(str(j), "[1,2]"))] = step.c
    for j in range(1, k + 1):
        labels[xi(pair_key(f"[{j - 1},{j}]", "1"))] = A.labels[step.omega[j - 1]]
    labels[xi(pair_key("[-1,0]", "1"))] = step.a
    step.xi = xi
    order = A.order + (step.c,)
    C = Hda(P, xi(pair_key("-1", "1")), labels, order)
    step.C = C
    return C


def build_D(C: Hda, step: SurgeryStep) -> Hda:
    k, xi = step.k, step.xi
    rung = [C.labels[xi(pair_key(f"[{j - 1},{j}]", "1"))] for j in range(0, k + 1)]
    i = max(j for j in range(0, k + 1) if rung[j] == step.a)
    if i >= k:
        raise AssertionError("last path edge carries the label of e; input is not codeterministic")
    step.i_star = i
    square = tensor(interval(i, k + 1), interval(0, 1))
    apex = subset(square, [pair_key(f"[{j - 1},{j}]", "1") for j in range(i + 1, k + 2)] +
                  [pair_key(str(i), "[0,1]"), pair_key(str(k + 1), "[0,1]")])
    nu = {pair_key(str(j), "1"): xi(pair_key(str(j), "1")) for j in range(i, k + 1)}
    nu[pair_key(str(k + 1), "1")] = step.w
    nu[pair_key(str(i), "0")] = xi(pair_key(str(i - 1), "1"))
    nu[pair_key(str(k + 1), "0")] = step.v
    for j in range(i + 1, k + 1):
        nu[pair_key(f"[{j - 1},{j}]", "1")] = xi(pair_key(f"[{j - 1},{j}]", "1"))
    nu[pair_key(f"[{k},{k + 1}]", "1")] = xi(pair_key(str(k), "[1,2]"))
    nu[pair_key(str(i), "[0,1]")] = xi(pair_key(f"[{i - 1},{i}]", "1"))
    nu[pair_key(str(k + 1), "[0,1]")] = step.e
    nu_m = PcsMorphism(apex, C.pcs, nu)
    if not nu_m.check().is_injective():
        raise AssertionError("attaching map of D is not injective")
    incl = PcsMorphism(apex, square, {x: x for x in apex})
    P, _, chi = pushout(apex, nu_m, incl, tag=f"D{step.number}:")
    labels = dict(C.labels)
    for j in range(i + 1, k + 1):
        labels[chi(pair_key(str(j), "[0,1]"))] = step.a
        labels[chi(pair_key(f"[{j - 1},{j}]", "0"))] = C.labels[step.omega[j - 1]]
    labels[chi(pair_key(f"[{k},{k + 1}]", "0"))] = step.c
    step.nu, step.chi = nu_m, chi
    return Hda(P, C.initial, labels, C.order)


def build_B(D: Hda, step: SurgeryStep) -> Hda:
    """Transpose the new squares whose direction labels are out of order."""
    X = D.pcs
    old = set(step.C.pcs.cubes(2))
    cells = X.cells()
    for x in X.cubes(2):
        if x in old:
            continue
        if D.less(D.labels[X.d(x, 1, 0)], D.labels[X.d(x, 2, 0)]):
            f1, f2 = cells[x]
            cells[x] = (f2, f1)
    P = PrecubicalSet(cells)
    report = validate(P)
    if not report.ok:
        raise AssertionError(f"transposition broke a precubical identity: {report.violations[0]}")
    return Hda(P, D.initial, D.labels, D.order)


# -- driver ----------------------------------------------------------------------

@dataclass
class Certificate:
    steps: list[dict] = field(default_factory=list)
    initial: dict = field(default_factory=dict)
    diagnostics: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"initial": self.initial, "steps": self.steps, "diagnostics": self.diagnostics}

    @property
    def ok(self) -> bool:
        if self.diagnostics:
            return False
        h0 = self.initial.get("homology")
        return all(s["homology"] == h0 and s["unreachable_after"] < s["unreachable_before"]
                   and s["bideterministic"] and s["hm_report"]["ok"] for s in self.steps)


def _snapshot(A: Hda) -> dict:
    H = pcs_homology(A.pcs).trimmed()
    return {"homology": H.to_json(), "betti": list(H.betti), "torsion": [list(t) for t in H.torsion],
            "euler": euler_characteristic(A.pcs), "counts": list(A.pcs.counts())}


def surgery_step(A: Hda, number: int) -> tuple[Hda, SurgeryStep | Reroot]:
    e, v, w = find_boundary_edge(A)
    if w == A.initial:
        return A.with_initial(v), Reroot(e, v)
    c = f"acc#{number}"
    while c in A.alphabet:
        c += "'"
    step = SurgeryStep(number, e, v, w, A.labels[e], c, shortest_path(A, A.initial, w))
    C = build_C(A, step)
    D = build_D(C, step)
    return build_B(D, step), step


def make_accessible(A: Hda, order: tuple | None = None, check_steps: bool = True) -> tuple[Hda, Certificate]:
    """Repeat surgery until every state is reachable.

    ``order`` (default ``A.order``) is the strict total order with respect to
    which ``A`` is the HDA model of its 1-skeleton; the output keeps that
    property for the order extended by the fresh labels.
    """
    if order is not None:
        A = Hda(A.pcs, A.initial, A.labels, tuple(order))
    if not is_connected(A.pcs):
        raise ValueError("HDA is not connected")
    cls = classify(A)
    if not cls.bideterministic:
        raise ValueError("HDA is not bideterministic")
    R = LabelRelation.from_order(A.order)
    pre = verify_hda_model(A, A.truncate(1), R)
    if not pre.ok:
        raise ValueError("HDA is not the model of its 1-skeleton: " + "; ".join(pre.problems))
    cert = Certificate(initial=dict(_snapshot(A), unreachable=len(unreachable(A))))
    reroots = 0
    number = 0
    while True:
        before = len(unreachable(A))
        if before == 0:
            break
        number += 1
        B, step = surgery_step(A, number)
        record = {"step": number, "edge": step.e, "v": step.v}
        if isinstance(step, Reroot):
            reroots += 1
            record.update(kind="reroot")
            if reroots > len(A.pcs.vertices):
                cert.diagnostics.append("re-root bound exceeded")
                raise RuntimeError("re-root bound exceeded")
        else:
            record.update(kind="surgery", w=step.w, k=step.k, i_star=step.i_star,
                          label=step.a, fresh_label=step.c)
        after = len(unreachable(B))
        record.update(unreachable_before=before, unreachable_after=after)
        if check_steps:
            cls = classify(B)
            rep = verify_hda_model(B, B.truncate(1), LabelRelation.from_order(B.order))
            record.update(_snapshot(B), bideterministic=cls.bideterministic,
                          hm_report=dict(rep.to_json(), ok=rep.ok))
        if after >= before:
            cert.diagnostics.append(f"step {number} did not reduce unreachable states")
            raise AssertionError(cert.diagnostics[-1])
        cert.steps.append(record)
        A = B
    return A, cert
