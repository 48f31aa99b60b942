"""Command line front end.

Subcommands: check (full pipeline), orbits, spectrum, disprove, batch.
Exit codes: 0 certified / informational success, 1 disproved, 2 inconclusive,
3 bad input or usage.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .certify import DisproofParams, LineSearchFailed, TargetKind, find_disproof, verify_disproof
from .graphcore import (
    DisconnectedGraph,
    format_edge_list,
    Graph,
    MalformedGraph6,
    WeightVector,
    laplacian,
    parse_edge_list,
    parse_graph6,
)
from .pipeline import (
    CertificationReport,
    PipelineConfig,
    PipelineStatus,
    emit_report,
    run_pipeline,
)
from .spectra import cluster_eigenspace, eig_sym
from .symmetry import (
    CapExceeded,
    SearchBudgetExceeded,
    automorphism_generators,
    close_group,
    edge_orbits,
    generators_from_json,
    vertex_orbits,
)

_EXIT_OK = 0
_EXIT_DISPROVED = 1
_EXIT_INCONCLUSIVE = 2
_EXIT_USAGE = 3


class _UsageError(Exception):
    pass


def _load_graph(path: str) -> Graph:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise _UsageError(f"cannot read {path}: {exc}") from exc
    data_lines = [
        ln.strip() for ln in text.splitlines()
        if ln.strip() and not ln.strip().startswith("#")
    ]
    if not data_lines:
        raise _UsageError(f"{path}: no graph data")
    first = data_lines[0].split()
    name = Path(path).stem
    try:
        if len(first) >= 2 and all(t.lstrip("-").isdigit() for t in first[:2]):
            g = parse_edge_list(text)
        else:
            g = parse_graph6(data_lines[0])
        return Graph(g.n, g.edges, name=name)
    except (MalformedGraph6, DisconnectedGraph, ValueError) as exc:
        raise _UsageError(f"{path}: {exc}") from exc


def _resolve_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("RIGIDITY_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise _UsageError(f"RIGIDITY_SEED is not an integer: {env!r}") from exc
    return 0


def _group_config(spec: str, graph: Graph) -> tuple[str, object]:
    if spec == "auto":
        return "auto", None
    if spec.startswith("file:"):
        path = spec[len("file:"):]
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise _UsageError(f"cannot read generator file {path}: {exc}") from exc
        try:
            return "gens", generators_from_json(graph, text)
        except ValueError as exc:
            raise _UsageError(f"{path}: {exc}") from exc
    if spec.startswith("fix:"):
        try:
            fixed = tuple(int(t) for t in spec[len("fix:"):].split(",") if t)
        except ValueError as exc:
            raise _UsageError(f"bad fixed vertex list in {spec!r}") from exc
        return "fix", fixed
    raise _UsageError(f"bad --group value {spec!r}")


def _config(args, graph: Graph) -> PipelineConfig:
    mode, data = _group_config(args.group, graph)
    return PipelineConfig(
        sdp_tol=args.tol_sdp,
        seed=_resolve_seed(args),
        mode=args.mode,
        group_mode=mode,
        group_data=data,
    )


def _targets(spec: str) -> tuple[TargetKind, ...]:
    if spec == "lower":
        return (TargetKind.LOWER,)
    if spec == "upper":
        return (TargetKind.UPPER,)
    return (TargetKind.LOWER, TargetKind.UPPER)


def _verdict_exit(reports: list[CertificationReport]) -> int:
    statuses = {r.status for r in reports}
    if statuses & {PipelineStatus.CERTIFIED_EXACT, PipelineStatus.CERTIFIED_NUMERIC}:
        return _EXIT_OK
    if statuses == {PipelineStatus.DISPROVED}:
        return _EXIT_DISPROVED
    return _EXIT_INCONCLUSIVE


def _cmd_check(args) -> int:
    graph = _load_graph(args.graph)
    cfg = _config(args, graph)
    reports = [
        run_pipeline(graph, t, cfg, graph_id=graph.name) for t in _targets(args.target)
    ]
    if args.report:
        blob = b"".join(emit_report(r, "JSON") for r in reports)
        Path(args.report).write_bytes(blob)
    for r in reports:
        out = emit_report(r, "JSON" if args.json else "TEXT")
        sys.stdout.write(out.decode())
    return _verdict_exit(reports)


def _cmd_spectrum(args) -> int:
    graph = _load_graph(args.graph)
    dec = eig_sym(laplacian(graph, WeightVector.uniform(graph)))
    for lam in dec.eigenvalues:
        print(repr(float(lam)))
    lo = cluster_eigenspace(dec, TargetKind.LOWER.which)
    hi = cluster_eigenspace(dec, TargetKind.UPPER.which)
    print(f"lambda_2 = {float(lo.value)!r}  multiplicity {lo.basis.shape[1]}")
    print(f"lambda_max = {float(hi.value)!r}  multiplicity {hi.basis.shape[1]}")
    return _EXIT_OK


def _cmd_orbits(args) -> int:
    graph = _load_graph(args.graph)
    mode, data = _group_config(args.group, graph)
    try:
        if mode == "gens":
            gens = data
        elif mode == "fix":
            gens = automorphism_generators(graph, data)
        else:
            gens = automorphism_generators(graph)
    except SearchBudgetExceeded:
        print("automorphism search budget exceeded; using trivial group")
        from .symmetry import GroupGenerators

        gens = GroupGenerators(graph, ())
    try:
        closure = close_group(gens)
        print(f"group order {closure.size}")
    except CapExceeded as exc:
        print(f"group closure capped: {exc}")
    epart = edge_orbits(graph, gens)
    vpart = vertex_orbits(graph, gens)
    vsizes = tuple(len(o) for o in vpart.orbits)
    print(f"edge orbits: {epart.s} with sizes {tuple(epart.sizes)}")
    print(f"vertex orbits: {len(vpart.orbits)} with sizes {vsizes}")
    for o in range(epart.s):
        members = [graph.edges[i] for i in epart.members(o)]
        print(f"  orbit {o}: {members}")
    return _EXIT_OK


def _cmd_disprove(args) -> int:
    graph = _load_graph(args.graph)
    kind = TargetKind.LOWER if args.target == "lower" else TargetKind.UPPER
    mode, data = _group_config(args.group, graph)
    dec = eig_sym(laplacian(graph, WeightVector.uniform(graph)))
    cluster = cluster_eigenspace(dec, kind.which)
    if mode == "gens":
        gens = data
    elif mode == "fix":
        gens = automorphism_generators(graph, data)
    else:
        gens = automorphism_generators(graph)
    part = edge_orbits(graph, gens)
    params = DisproofParams(seed=_resolve_seed(args))
    try:
        d = find_disproof(graph, cluster, part, kind, params)
    except LineSearchFailed as exc:
        print(f"line search failed: {exc}")
        return _EXIT_INCONCLUSIVE
    if d is None or not verify_disproof(graph, d, kind):
        print("no verified disproof found")
        return _EXIT_INCONCLUSIVE
    print(f"baseline {d.baseline!r}  achieved {d.achieved!r}  margin {d.margin:.6g}")
    for (u, v), w in zip(graph.edges, d.w.values):
        print(f"  w[{u},{v}] = {float(w)!r}")
    if args.out:
        Path(args.out).write_text(format_edge_list(graph, d.w))
        print(f"witness weights written to {args.out}")
    return _EXIT_DISPROVED


def _cmd_batch(args) -> int:
    root = Path(args.dir)
    if not root.is_dir():
        raise _UsageError(f"{args.dir} is not a directory")
    paths = sorted(
        p for p in root.iterdir()
        if p.suffix in (".g6", ".graph6", ".txt") and p.is_file()
    )
    targets = _targets(args.target)
    summary: dict[str, int] = {}
    failures = 0
    for p in paths:
        try:
            graph = _load_graph(str(p))
        except _UsageError as exc:
            print(f"{p.name}: SKIPPED ({exc})")
            failures += 1
            continue
        cfg = _config(args, graph)
        for t in targets:
            rep = run_pipeline(graph, t, cfg, graph_id=graph.name)
            summary[rep.status.value] = summary.get(rep.status.value, 0) + 1
            print(f"{p.name} {t.value}: {rep.status.value}")
            if args.report_dir:
                out = Path(args.report_dir)
                out.mkdir(parents=True, exist_ok=True)
                fname = f"{p.stem}.{t.value.lower()}.json"
                (out / fname).write_bytes(emit_report(rep, "JSON"))
    print("summary:")
    for k in sorted(summary):
        print(f"  {k}: {summary[k]}")
    if failures:
        print(f"  skipped inputs: {failures}")
    return _EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="rigidity",
        description="Decide, certify, or disprove conformal rigidity of a graph.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, target_choices=("lower", "upper", "both")):
        p.add_argument("--target", choices=target_choices, default="both"
                       if "both" in target_choices else target_choices[0])
        p.add_argument("--group", default="auto",
                       help="auto | file:<generators.json> | fix:<v1,v2,...>")
        p.add_argument("--seed", type=int, default=None,
                       help="RNG seed (overrides RIGIDITY_SEED)")

    p = sub.add_parser("check", help="run the full certification pipeline")
    p.add_argument("graph")
    common(p)
    p.add_argument("--mode", choices=("exact", "numeric"), default="exact")
    p.add_argument("--tol-sdp", type=float, default=1e-9)
    p.add_argument("--report", help="write JSON report(s) to this file")
    p.add_argument("--json", action="store_true", help="print JSON to stdout")
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("spectrum", help="print the uniform Laplacian spectrum")
    p.add_argument("graph")
    p.set_defaults(func=_cmd_spectrum)

    p = sub.add_parser("orbits", help="print automorphism orbits of edges/vertices")
    p.add_argument("graph")
    common(p, target_choices=("lower", "upper", "both"))
    p.set_defaults(func=_cmd_orbits)

    p = sub.add_parser("disprove", help="search for witness weights only")
    p.add_argument("graph")
    common(p, target_choices=("lower", "upper"))
    p.add_argument("--out", help="write witness weights as an edge-list file")
    p.set_defaults(func=_cmd_disprove)

    p = sub.add_parser("batch", help="run the pipeline over a directory")
    p.add_argument("dir")
    common(p)
    p.add_argument("--mode", choices=("exact", "numeric"), default="exact")
    p.add_argument("--tol-sdp", type=float, default=1e-9)
    p.add_argument("--report-dir", help="write one JSON per graph/target here")
    p.set_defaults(func=_cmd_batch)

    return ap


def main(argv: list[str] | None = None) -> int:
    ap = _build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_USAGE
    except (MalformedGraph6, DisconnectedGraph) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
