"""
Mutual exclusion as a cubical complex
=====================================

Peterson's two-process protocol, written as program graphs, has a reachable
state space with twenty states.  Filling the independent moves with squares
gives a 2-dimensional HDA whose holes count the ways the two processes can
dodge each other.
"""
import json
from pathlib import Path

from hdatopo.homology import pcs_homology
from hdatopo.svs import SharedVariableSystem, hda_model_of_svs, transition_system_model

here = Path(__file__).parent
if not (here / "peterson.json").exists():
    import runpy
    runpy.run_path(str(here / "make_peterson.py"))
S = SharedVariableSystem.from_json(json.loads((here / "peterson.json").read_text()))

# %% reachable transition system
T = transition_system_model(S)
print("states, moves:", T.pcs.counts())

# %% squares where the processes commute
A = hda_model_of_svs(S)
print("HDA model counts:", A.pcs.counts())
print("homology:", pcs_homology(A.pcs).trimmed().to_json())

# location 3 is the critical section; the guard keeps the processes out of it together
crit = [v for v in A.pcs.vertices if json.loads(v)[0] == [3, 3]]
print("states with both processes in the critical section:", crit)
