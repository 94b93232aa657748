"""Write the two-process Peterson mutual-exclusion system as program-graph JSON.

Variables are ``t, b0, b1``, all starting at 0.  Process ``i`` cycles through
four locations: raise ``b_i``, hand the turn to ``1-i``, wait for
``b_{1-i} = 0 or t = i`` and enter, then leave by lowering ``b_i``.
"""
import json
import sys
from itertools import product
from pathlib import Path

EVALS = list(product((0, 1), repeat=3))  # (t, b0, b1)


def table(f):
    return [[list(g), list(f(*g))] for g in EVALS]


def graph(i):
    def set_b(v):
        return lambda t, b0, b1: (t, v, b1) if i == 0 else (t, b0, v)

    actions = [
        {"name": f"b{i}:=1", "table": table(set_b(1))},
        {"name": f"t:={1 - i}", "table": table(lambda t, b0, b1: (1 - i, b0, b1))},
        {"name": "enter", "table": table(lambda *g: g)},
        {"name": f"b{i}:=0", "table": table(set_b(0))},
    ]
    every = [list(g) for g in EVALS]
    may_enter = [list(g) for g in EVALS if g[2 - i] == 0 or g[0] == i]
    transitions = [
        {"from": 0, "action": f"b{i}:=1", "to": 1, "guard": every},
        {"from": 1, "action": f"t:={1 - i}", "to": 2, "guard": every},
        {"from": 2, "action": "enter", "to": 3, "guard": may_enter},
        {"from": 3, "action": f"b{i}:=0", "to": 0, "guard": every},
    ]
    return {"locations": [0, 1, 2, 3], "actions": actions, "transitions": transitions, "initial": 0}


def peterson() -> dict:
    return {"variables": [{"name": n, "domain": [0, 1]} for n in ("t", "b0", "b1")],
            "graphs": [graph(0), graph(1)],
            "eta": {"t": 0, "b0": 0, "b1": 0}}


if __name__ == "__main__":
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).with_name("peterson.json")
    out.write_text(json.dumps(peterson(), indent=1) + "\n")
    print(f"wrote {out}")
