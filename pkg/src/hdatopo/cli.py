"""Command-line front end: ``hdatopo <command> INPUT [options]``.

Every command reads one JSON artifact and writes one JSON artifact (DOT for
``export-dot``) to stdout or ``--out``.  Exit codes: 0 ok, 1 rejected input or
failed check (an error/report JSON is still written), 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from . import geom
from .accessibility import make_accessible
from .coskeleton import LabelRelation, hda_model, verify_hda_model
from .hda import Hda, _thaw, hda_P, to_transition_system
from .homology import homology, pcs_homology
from .precubical import PrecubicalSet, dumps, validate
from .simplicial import SimplicialComplex, cube_pairs, cubical_subdivision, simplicial_chain_complex
from .svs import SharedVariableSystem, hda_model_of_svs, realize, svs_from_hda, transition_system_model


class Rejected(Exception):
    """Input was read but failed a check; ``payload`` is still emitted."""

    def __init__(self, payload: dict):
        super().__init__(payload.get("message", "rejected"))
        self.payload = payload


@dataclass
class PipelineConfig:
    command: str
    input: Path
    out: Path | None
    mode: str
    samples: int
    seed: int
    max_dim: int | None


# -- input detection -------------------------------------------------------------

def kind_of(data: dict) -> str:
    if "hda" in data or ("cubes" in data and "initial" in data):
        return "hda"
    if "cubes" in data:
        return "pcs"
    if "facets" in data:
        return "complex"
    if "svs" in data or "graphs" in data:
        return "svs"
    raise ValueError("unrecognized JSON artifact (expected a complex, precubical set, HDA or system)")


def load(path: Path):
    data = json.loads(Path(path).read_text())
    kind = kind_of(data)
    if kind == "complex":
        return kind, SimplicialComplex.from_json(data)
    if kind == "pcs":
        return kind, PrecubicalSet.from_json(data)
    if kind == "hda":
        return kind, Hda.from_json(data)
    return kind, SharedVariableSystem.from_json(data)


def expect(path: Path, *kinds: str):
    kind, obj = load(path)
    if kind not in kinds:
        raise ValueError(f"{path} holds a {kind}; this command needs {' or '.join(kinds)}")
    return kind, obj


def as_hda(kind, obj) -> Hda:
    return hda_P(obj) if kind == "complex" else obj


def load_relation(path: Path | None, T: Hda) -> LabelRelation:
    if path is None:
        return LabelRelation.from_order(T.order)
    return LabelRelation.from_json(json.loads(Path(path).read_text()), T.alphabet)


# -- commands --------------------------------------------------------------------

def cmd_validate(cfg, args):
    kind, obj = load(cfg.input)
    report = {"kind": kind}
    if kind == "complex":
        report.update(ok=True, counts=[len(obj.simplices(d)) for d in range(obj.dim + 1)])
    elif kind == "svs":
        T = transition_system_model(obj)
        report.update(ok=True, processes=len(obj.graphs), reachable_states=len(T.pcs.vertices))
    else:
        X = obj.pcs if kind == "hda" else obj
        report.update(validate(X).to_json(), counts=list(X.counts()))
    if not report["ok"]:
        raise Rejected(report)
    return report


def cmd_subdivide(cfg, args):
    _, K = expect(cfg.input, "complex")
    return cubical_subdivision(K).to_json()


def cmd_geom_check(cfg, args):
    _, K = expect(cfg.input, "complex")
    if cfg.samples <= 0 or cfg.seed < 0:
        raise ValueError("--samples must be positive and --seed non-negative")
    rt = geom.roundtrip_check(K, cfg.samples, cfg.seed, cfg.mode)
    worst, checks = 0.0, 0
    for tau, sigma in cube_pairs(K):
        for i in range(1, len(sigma) - len(tau) + 1):
            for k in (0, 1):
                r = geom.delta_compat_check((tau, sigma), i, k, args.delta_samples, cfg.seed,
                                            cfg.mode, K.n_vertices)
                worst = max(worst, r["max_error"])
                checks += 1
    report = {"roundtrip": rt,
              "delta_compat": {"max_error": worst, "faces": checks,
                               "samples": args.delta_samples, "seed": cfg.seed, "mode": cfg.mode},
              "max_error": max(rt["max_error"], worst, rt["max_cube_error"]),
              "samples": cfg.samples, "seed": cfg.seed, "mode": cfg.mode}
    report["ok"] = report["max_error"] < args.tol and rt["cube_mismatches"] == 0
    if not report["ok"]:
        raise Rejected(report)
    return report


def cmd_hda(cfg, args):
    _, K = expect(cfg.input, "complex")
    return hda_P(K).to_json()


def cmd_fill(cfg, args):
    _, T = expect(cfg.input, "hda")
    R = load_relation(args.relation, T)
    return hda_model(to_transition_system(T), R, max_dim=cfg.max_dim).to_json()


def cmd_verify_model(cfg, args):
    kind, Q = expect(cfg.input, "hda", "complex")
    Q = as_hda(kind, Q)
    T = Hda.from_json(json.loads(Path(args.ts).read_text())) if args.ts else Q.truncate(1)
    rep = verify_hda_model(Q, T, load_relation(args.relation, Q))
    out = dict(rep.to_json(), ok=rep.ok)
    if not rep.ok:
        raise Rejected(out)
    return out


def cmd_accessible(cfg, args):
    kind, A = expect(cfg.input, "hda", "complex")
    B, cert = make_accessible(as_hda(kind, A))
    out = {"hda": B.to_json(), "certificate": dict(cert.to_json(), ok=cert.ok)}
    if not cert.ok:
        raise Rejected(out)
    return out


def cmd_to_svs(cfg, args):
    _, B = expect(cfg.input, "hda")
    return svs_from_hda(B).to_json()


def cmd_statespace(cfg, args):
    _, S = expect(cfg.input, "svs")
    A = hda_model_of_svs(S, max_dim=cfg.max_dim) if args.fill else transition_system_model(S)
    return A.to_json()


def cmd_realize(cfg, args):
    _, K = expect(cfg.input, "complex")
    r = realize(K, max_dim=cfg.max_dim)
    c = r.certificate
    c["ok"] = bool(c["isomorphic"] and c["homology_match"] and c["surgery_ok"]
                   and c["model_connected"] and c["model_accessible"])
    c["betti"] = [d["betti"] for d in c["homology_model"]["degrees"]]
    out = {"certificate": c}
    if args.full:
        out.update(svs=r.svs.to_json(), hda=r.model.to_json())
    if not c["ok"]:
        raise Rejected(out)
    return out


def cmd_homology(cfg, args):
    kind, obj = load(cfg.input)
    if kind == "complex":
        H = homology(simplicial_chain_complex(obj))
    elif kind == "svs":
        H = pcs_homology(hda_model_of_svs(obj, max_dim=cfg.max_dim).pcs)
    else:
        H = pcs_homology(obj.pcs if kind == "hda" else obj)
    return H.trimmed().to_json()


def to_dot(X: PrecubicalSet, labels=None, initial=None) -> str:
    """2-skeleton as a digraph; each square becomes a shaded cluster of its corners."""
    q = json.dumps
    lines = ["digraph hda {", "  rankdir=LR;", "  node [shape=circle, label=\"\", width=0.15];"]
    for v in X.vertices:
        extra = ", style=filled, fillcolor=black" if v == initial else ""
        lines.append(f"  {q(v)} [tooltip={q(v)}{extra}];")
    for e in X.edges:
        lab = "" if labels is None else f" [label={q(json.dumps(_thaw(labels[e])))}]"
        lines.append(f"  {q(X.source(e))} -> {q(X.target(e))}{lab};")
    for n, x in enumerate(X.cubes(2)):
        (a, b), (c, d) = X.faces(x)
        corners = sorted({X.source(a), X.target(a), X.source(b), X.target(b),
                          X.source(c), X.target(c), X.source(d), X.target(d)})
        lines.append(f"  subgraph cluster_sq{n} {{ style=filled; color=lightgrey; "
                     f"tooltip={q(x)}; {' '.join(q(v) + ';' for v in corners)} }}")
    lines.append("}")
    return "\n".join(lines) + "\n"


def cmd_export_dot(cfg, args):
    kind, obj = load(cfg.input)
    if kind == "complex":
        obj, kind = hda_P(obj), "hda"
    if kind == "svs":
        obj, kind = transition_system_model(obj), "hda"
    if kind == "hda":
        return to_dot(obj.pcs, obj.labels, obj.initial)
    return to_dot(obj)


COMMANDS = {
    "validate": (cmd_validate, "check a complex, precubical set, HDA or system"),
    "subdivide": (cmd_subdivide, "complex -> cubical subdivision"),
    "geom-check": (cmd_geom_check, "sample the subdivision/polyhedron maps"),
    "hda": (cmd_hda, "complex -> subdivision HDA"),
    "fill": (cmd_fill, "transition system (+ relation) -> HDA model"),
    "verify-model": (cmd_verify_model, "check HM1-HM4 for an HDA"),
    "accessible": (cmd_accessible, "surgery to an accessible HDA, with certificate"),
    "to-svs": (cmd_to_svs, "accessible deterministic HDA -> shared-variable system"),
    "statespace": (cmd_statespace, "system -> transition system (or HDA model with --fill)"),
    "realize": (cmd_realize, "complex -> system whose HDA model has its homology"),
    "homology": (cmd_homology, "integer homology of any artifact"),
    "export-dot": (cmd_export_dot, "2-skeleton as Graphviz DOT"),
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hdatopo", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name, (_, help_) in COMMANDS.items():
        s = sub.add_parser(name, help=help_)
        s.add_argument("input", type=Path)
        s.add_argument("--out", type=Path)
        s.add_argument("--mode", choices=("rational", "float"), default="float")
        s.add_argument("--samples", type=int, default=1000)
        s.add_argument("--seed", type=int, default=0)
        s.add_argument("--max-dim", type=int)
        if name == "geom-check":
            s.add_argument("--delta-samples", type=int, default=20)
            s.add_argument("--tol", type=float, default=1e-9)
        if name in ("fill", "verify-model"):
            s.add_argument("--relation", type=Path, help="relation JSON (default: the HDA's label order)")
        if name == "verify-model":
            s.add_argument("--ts", type=Path, help="transition system (default: the 1-skeleton)")
        if name == "statespace":
            s.add_argument("--fill", action="store_true", help="emit the HDA model instead")
        if name == "realize":
            s.add_argument("--full", action="store_true", help="also emit the system and its HDA model")
    return p


def emit(result, out: Path | None) -> None:
    text = result if isinstance(result, str) else dumps(result)
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def run(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)  # exits 2 on usage errors
    cfg = PipelineConfig(args.command, args.input, args.out, args.mode, args.samples,
                         args.seed, args.max_dim)
    try:
        emit(COMMANDS[cfg.command][0](cfg, args), cfg.out)
        return 0
    except Rejected as r:
        emit(r.payload, cfg.out)
        return 1
    except (ValueError, RuntimeError, AssertionError, KeyError, OSError) as exc:
        emit({"ok": False, "error": type(exc).__name__, "message": str(exc),
              "command": cfg.command, "input": str(cfg.input)}, cfg.out)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
