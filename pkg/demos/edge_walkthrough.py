"""
Walking one edge through the whole pipeline
===========================================

The smallest interesting input is a single edge {1, 2}.  Its cubical
subdivision is a path of two segments, but read as an HDA rooted at
({1}, {1}) one end of the path cannot be reached.  Surgery fixes that, and
the repaired automaton becomes a shared-variable program.
"""
from hdatopo.accessibility import make_accessible
from hdatopo.hda import classify, hda_P, unreachable
from hdatopo.homology import pcs_homology
from hdatopo.precubical import euler_characteristic
from hdatopo.simplicial import from_facets
from hdatopo.svs import hda_model_of_svs, state_graph, svs_from_hda

K = from_facets(2, [(1, 2)])

# %% the subdivided edge as an automaton
P = hda_P(K)
print("P counts (vertices, edges):", P.pcs.counts())
print("initial state:", P.initial)
print("unreachable:", sorted(unreachable(P)))
for e in P.pcs.edges:
    print(f"  {P.source(e)} --{P.labels[e]}--> {P.target(e)}")

# %% one surgery step glues in squares and a fresh label
B, cert = make_accessible(P)
step = cert.steps[0]
print("\nsurgery on edge", step["edge"], "fresh label", step["fresh_label"])
print("B counts:", B.pcs.counts(), "euler", euler_characteristic(B.pcs))
print("B homology:", pcs_homology(B.pcs).trimmed().to_json())
print("unreachable after:", sorted(unreachable(B)), "bideterministic:", classify(B).bideterministic)

# %% B as a program: one process per label, one shared variable
S = svs_from_hda(B)
print("\nprocesses:", len(S.graphs), "domain of x:", len(S.variables[0].domain))
for i, g in enumerate(S.graphs, 1):
    act = g.actions[0]
    print(f"  process {i}: {act.name} enabled on {sorted(v for (v,) in g.guards[0])}")

# %% running the program and filling squares recovers B
print("\nstate graph:", state_graph(S).counts())
print("model of the program:", hda_model_of_svs(S).pcs.counts())
