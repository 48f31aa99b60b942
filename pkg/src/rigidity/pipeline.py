"""End-to-end certification pipeline and report machinery.

A run walks a fixed stage graph: spectrum -> cluster -> group -> orbits ->
(regular-bipartite shortcut | SDP feasibility) -> closure -> isotypics ->
multiplicity tests -> cone membership (exact first) or sub-cone, with the
disproof search on the infeasible branches. Every outcome is a structured
report; module errors become flags, never crashes.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

import numpy as np

from .certify import (
    ConeMode,
    ConicCertificate,
    Disproof,
    DisproofParams,
    LineSearchFailed,
    ResidualTooLarge,
    TargetKind,
    VerificationReport,
    assemble_certificate,
    bipartite_regular_upper_certificate,
    build_cone,
    find_disproof,
    solve_cone_membership,
    subcone_model,
    verify_certificate,
    verify_disproof,
)
from .graphcore import Graph, WeightVector, laplacian, to_graph6, parse_graph6
from .isotypics import (
    ClosureRequired,
    UnstableSplit,
    all_multiplicity_one,
    isotypic_decompose,
    multiplicity_bound_ok,
)
from .sdpfeas import SdpStatus, compress_operators, expand_gram, solve_feasibility
from .spectra import AmbiguousCluster, cluster_eigenspace, eig_sym
from .symmetry import (
    CapExceeded,
    GroupClosure,
    GroupGenerators,
    Permutation,
    SearchBudgetExceeded,
    automorphism_generators,
    close_group,
    edge_orbits,
)


class PipelineStatus(Enum):
    CERTIFIED_EXACT = "CERTIFIED_EXACT"
    CERTIFIED_NUMERIC = "CERTIFIED_NUMERIC"
    DISPROVED = "DISPROVED"
    INCONCLUSIVE_NO_RANK1 = "INCONCLUSIVE_NO_RANK1"
    INCONCLUSIVE_MULTIPLICITY = "INCONCLUSIVE_MULTIPLICITY"
    INCONCLUSIVE_SOLVER = "INCONCLUSIVE_SOLVER"


# Stage graph of the pipeline; every report route must be a path here.
TRANSITIONS: dict[str, tuple[str, ...]] = {
    "spectrum": ("cluster",),
    "cluster": ("group", PipelineStatus.INCONCLUSIVE_SOLVER.value),
    "group": ("orbits",),
    "orbits": ("bipartite_shortcut", "sdp"),
    "bipartite_shortcut": ("verify",),
    "sdp": (
        "closure",
        "disproof",
        PipelineStatus.INCONCLUSIVE_SOLVER.value,
    ),
    "disproof": (
        PipelineStatus.DISPROVED.value,
        PipelineStatus.INCONCLUSIVE_SOLVER.value,
    ),
    "closure": ("isotypics",),
    "isotypics": ("mult_bound", PipelineStatus.INCONCLUSIVE_SOLVER.value),
    "mult_bound": (
        "cone",
        "subcone",
        PipelineStatus.INCONCLUSIVE_NO_RANK1.value,
        PipelineStatus.CERTIFIED_NUMERIC.value,
    ),
    "cone": ("assemble", "disproof"),
    "subcone": ("assemble", PipelineStatus.INCONCLUSIVE_MULTIPLICITY.value),
    "assemble": ("verify", PipelineStatus.INCONCLUSIVE_SOLVER.value),
    "verify": (
        PipelineStatus.CERTIFIED_EXACT.value,
        PipelineStatus.CERTIFIED_NUMERIC.value,
        PipelineStatus.INCONCLUSIVE_SOLVER.value,
    ),
}


@dataclass(frozen=True)
class PipelineConfig:
    cluster_tol: float = 1e-8
    sdp_tol: float = 1e-9
    sdp_max_iter: int = 50_000
    verify_tol: float = 1e-8
    margin: float = 1e-7
    group_mode: str = "auto"  # auto | fix | gens | trivial
    group_data: object = None
    group_cap: int = 200_000
    search_budget: int = 200_000
    seed: int = 0
    mode: str = "exact"  # exact | numeric
    downgrade_no_rank1: bool = False

    def __post_init__(self):
        for name in ("cluster_tol", "sdp_tol", "verify_tol", "margin"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        for name in ("sdp_max_iter", "group_cap", "search_budget"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")
        if self.mode not in ("exact", "numeric"):
            raise ValueError("mode must be 'exact' or 'numeric'")
        if self.group_mode not in ("auto", "fix", "gens", "trivial"):
            raise ValueError("group_mode must be auto, fix, gens, or trivial")


@dataclass
class CertificationReport:
    graph: Graph
    graph_id: str
    target: TargetKind
    route: tuple[str, ...]
    status: PipelineStatus
    group_order: int
    orbit_of: tuple[int, ...]
    orbit_sizes: tuple[int, ...]
    isotypics: tuple[tuple[int, int, int], ...]
    lam: float | None
    certificate: ConicCertificate | None
    cert_vectors: tuple | None  # ((coeff, vector), ...) pairs for re-checks
    cert_per_edge: bool
    embedding_gram: np.ndarray | None
    disproof: Disproof | None
    verification: VerificationReport | None
    residuals: dict
    flags: tuple[str, ...]
    message: str
    timings: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        """Deterministic JSON payload; timings stay out on purpose."""
        cert = None
        if self.certificate is not None and self.cert_vectors is not None:
            cert = {
                "a": [
                    str(c) if isinstance(c, Fraction) else float(c)
                    for c, _ in self.cert_vectors
                ],
                "vectors": [[float(x) for x in v] for _, v in self.cert_vectors],
                "lambda": float(self.certificate.lam),
                "exact": self.certificate.exact,
                "per_edge": self.cert_per_edge,
                "eigen_residual": float(self.certificate.eigen_residual),
                "orbit_residual": float(self.certificate.orbit_residual),
                "flags": list(self.certificate.flags),
            }
        disp = None
        if self.disproof is not None:
            disp = {
                "w": [float(x) for x in self.disproof.w.values],
                "achieved": float(self.disproof.achieved),
                "baseline": float(self.disproof.baseline),
                "margin": float(self.disproof.margin),
            }
        emb = None
        if self.embedding_gram is not None:
            emb = [[float(x) for x in row] for row in self.embedding_gram]
        return {
            "schema": 1,
            "graph_id": self.graph_id,
            "graph6": to_graph6(self.graph),
            "n": self.graph.n,
            "m": self.graph.m,
            "target": self.target.value,
            "route": list(self.route),
            "status": self.status.value,
            "group_order": self.group_order,
            "orbit_of": list(self.orbit_of),
            "orbit_sizes": list(self.orbit_sizes),
            "isotypics": [list(t) for t in self.isotypics],
            "lambda": None if self.lam is None else float(self.lam),
            "certificate": cert,
            "embedding_gram": emb,
            "disproof": disp,
            "residuals": {k: float(v) for k, v in sorted(self.residuals.items())},
            "flags": list(self.flags),
            "message": self.message,
        }


def route_is_valid(route: tuple[str, ...]) -> bool:
    """Check a report route against the static stage graph."""
    if not route or route[0] != "spectrum":
        return False
    for a, b in zip(route, route[1:]):
        if b not in TRANSITIONS.get(a, ()):
            return False
    return route[-1] in {s.value for s in PipelineStatus}


class _Run:
    """Mutable state of one pipeline run; collapses to a report."""

    def __init__(self, graph: Graph, target: TargetKind, cfg: PipelineConfig,
                 graph_id: str):
        self.graph = graph
        self.target = target
        self.cfg = cfg
        self.graph_id = graph_id
        self.route: list[str] = []
        self.flags: list[str] = []
        self.residuals: dict = {}
        self.timings: dict = {}
        self.group_order = 0
        self.orbit_of: tuple[int, ...] = ()
        self.orbit_sizes: tuple[int, ...] = ()
        self.isotypics: tuple = ()
        self.lam: float | None = None
        self._t0 = time.perf_counter()

    def stage(self, name: str):
        self.route.append(name)
        now = time.perf_counter()
        self.timings[name] = now - self._t0
        self._t0 = now

    def finish(
        self,
        status: PipelineStatus,
        message: str = "",
        certificate: ConicCertificate | None = None,
        cert_vectors=None,
        cert_per_edge: bool = False,
        embedding_gram: np.ndarray | None = None,
        disproof: Disproof | None = None,
        verification: VerificationReport | None = None,
    ) -> CertificationReport:
        self.route.append(status.value)
        return CertificationReport(
            graph=self.graph,
            graph_id=self.graph_id,
            target=self.target,
            route=tuple(self.route),
            status=status,
            group_order=self.group_order,
            orbit_of=self.orbit_of,
            orbit_sizes=self.orbit_sizes,
            isotypics=self.isotypics,
            lam=self.lam,
            certificate=certificate,
            cert_vectors=tuple(cert_vectors) if cert_vectors else None,
            cert_per_edge=cert_per_edge,
            embedding_gram=embedding_gram,
            disproof=disproof,
            verification=verification,
            residuals=self.residuals,
            flags=tuple(self.flags),
            message=message,
            timings=self.timings,
        )


def _acquire_group(graph: Graph, cfg: PipelineConfig, run: _Run) -> GroupGenerators:
    try:
        if cfg.group_mode == "gens":
            gens = cfg.group_data
            if not isinstance(gens, GroupGenerators):
                raise TypeError("group_data must be GroupGenerators in 'gens' mode")
            return gens
        if cfg.group_mode == "trivial":
            return GroupGenerators(graph, ())
        if cfg.group_mode == "fix":
            fixed = tuple(cfg.group_data or ())
            return automorphism_generators(graph, fixed, cfg.search_budget)
        return automorphism_generators(graph, (), cfg.search_budget)
    except SearchBudgetExceeded:
        run.flags.append("GROUP_SEARCH_BUDGET_EXCEEDED")
        return GroupGenerators(graph, ())


def _trivial_partition(graph: Graph):
    return edge_orbits(graph, GroupGenerators(graph, ()))


def run_pipeline(
    graph: Graph,
    target: TargetKind,
    cfg: PipelineConfig = PipelineConfig(),
    graph_id: str | None = None,
) -> CertificationReport:
    """Run the full certification flow for one graph and one target."""
    run = _Run(graph, target, cfg, graph_id or graph.name or "graph")
    uniform = WeightVector.uniform(graph)

    run.stage("spectrum")
    dec = eig_sym(laplacian(graph, uniform))

    run.stage("cluster")
    cluster = None
    for tol in (cfg.cluster_tol, cfg.cluster_tol / 100.0):
        try:
            cluster = cluster_eigenspace(dec, target.which, tol)
            break
        except AmbiguousCluster:
            continue
    if cluster is None:
        run.flags.append("AMBIGUOUS_CLUSTER")
        return run.finish(
            PipelineStatus.INCONCLUSIVE_SOLVER,
            "no clean spectral gap around the target eigenvalue",
        )
    run.lam = float(cluster.value)

    run.stage("group")
    gens = _acquire_group(graph, cfg, run)
    try:
        closure = close_group(gens, cfg.group_cap)
    except CapExceeded:
        run.flags.append("GROUP_CAP_EXCEEDED")
        gens = GroupGenerators(graph, ())
        closure = close_group(gens, cfg.group_cap)
    run.group_order = closure.size

    run.stage("orbits")
    part = edge_orbits(graph, gens)
    run.orbit_of = part.orbit_of
    run.orbit_sizes = part.sizes

    if target is TargetKind.UPPER:
        cert = bipartite_regular_upper_certificate(graph)
        if cert is not None:
            run.stage("bipartite_shortcut")
            run.stage("verify")
            per_edge = _trivial_partition(graph)
            vectors = [(cert.coeffs[0], cert.phi)]
            ver = verify_certificate(
                graph, per_edge, vectors, cert.lam, target, cfg.verify_tol
            )
            run.residuals["certificate_orbit"] = ver.details.get("orbit_residual", 0.0)
            if ver.ok:
                return run.finish(
                    PipelineStatus.CERTIFIED_EXACT,
                    "regular bipartite: alternating vector certifies the upper target",
                    certificate=cert,
                    cert_vectors=vectors,
                    cert_per_edge=True,
                    verification=ver,
                )
            run.flags.append("VERIFY_FAILED")
            return run.finish(
                PipelineStatus.INCONCLUSIVE_SOLVER,
                f"shortcut certificate failed verification at {ver.failing_clause}",
                verification=ver,
            )

    run.stage("sdp")
    co = compress_operators(cluster, graph, part)
    sdp = solve_feasibility(co, cfg.sdp_tol, cfg.sdp_max_iter)
    run.residuals["sdp"] = sdp.max_residual
    run.residuals["sdp_iterations"] = float(sdp.iterations)

    if sdp.status is SdpStatus.LIKELY_INFEASIBLE:
        return _disproof_stage(run, cluster, part, "embedding SDP likely infeasible")
    if sdp.status is SdpStatus.ITERATION_LIMIT:
        run.flags.append("SDP_ITERATION_LIMIT")
        return run.finish(
            PipelineStatus.INCONCLUSIVE_SOLVER,
            "SDP hit its iteration limit without a verdict",
        )

    run.stage("closure")
    run.stage("isotypics")
    try:
        iso = isotypic_decompose(cluster, closure, cfg.seed)
    except (UnstableSplit, ClosureRequired) as exc:
        run.flags.append("ISOTYPIC_FAILURE")
        return run.finish(PipelineStatus.INCONCLUSIVE_SOLVER, str(exc))
    run.isotypics = tuple((c.irr_dim, c.mult, c.endo_dim) for c in iso.components)
    run.residuals["isotypic"] = iso.residual
    if any(c.endo_dim == 4 for c in iso.components):
        run.flags.append("QUATERNIONIC_COMPONENT_UNTESTED")

    run.stage("mult_bound")
    gram = expand_gram(co, sdp.Z) if sdp.Z is not None else None
    if not multiplicity_bound_ok(iso):
        if cfg.downgrade_no_rank1 and gram is not None:
            run.flags.append("NUMERIC_EMBEDDING_ONLY")
            return run.finish(
                PipelineStatus.CERTIFIED_NUMERIC,
                "feasible embedding found; rank-1 certificate not guaranteed",
                embedding_gram=gram,
            )
        return run.finish(
            PipelineStatus.INCONCLUSIVE_NO_RANK1,
            "multiplicity bound fails: no single-eigenvector certificate guaranteed",
            embedding_gram=gram,
        )

    if all_multiplicity_one(iso):
        run.stage("cone")
        cone = build_cone(iso, part, cfg.seed)
        mode = ConeMode.EXACT_RATIONAL if cfg.mode == "exact" else ConeMode.NUMERIC
        sol = solve_cone_membership(cone, mode)
        run.residuals["cone"] = sol.residual if np.isfinite(sol.residual) else -1.0
        if sol.exact_unavailable:
            run.flags.append("EXACT_UNAVAILABLE")
        if not sol.feasible:
            if sol.exact:
                run.flags.append("EXACT_CONE_INFEASIBLE")
                msg = ("orbit-size vector provably outside the certificate cone; "
                       "target is not conformally rigid")
            else:
                run.flags.append("NUMERIC_CONE_INFEASIBLE")
                msg = "certificate cone membership failed numerically"
            return _disproof_stage(run, cluster, part, msg)
        return _assemble_stage(run, cone, sol, cluster)

    run.stage("subcone")
    cone = subcone_model(iso, part, cfg.seed)
    mode = ConeMode.EXACT_RATIONAL if cfg.mode == "exact" else ConeMode.NUMERIC
    sol = solve_cone_membership(cone, mode)
    run.residuals["cone"] = sol.residual if np.isfinite(sol.residual) else -1.0
    if sol.exact_unavailable:
        run.flags.append("EXACT_UNAVAILABLE")
    if sol.feasible:
        return _assemble_stage(run, cone, sol, cluster)
    return run.finish(
        PipelineStatus.INCONCLUSIVE_MULTIPLICITY,
        "multiplicities above one and the representative sub-cone missed the "
        "target; exact route unavailable",
    )


def _disproof_stage(run: _Run, cluster, part, reason: str) -> CertificationReport:
    run.stage("disproof")
    cfg = run.cfg
    params = DisproofParams(margin=cfg.margin, seed=cfg.seed)
    try:
        d = find_disproof(run.graph, cluster, part, run.target, params)
    except LineSearchFailed as exc:
        run.flags.append("LINE_SEARCH_FAILED")
        return run.finish(
            PipelineStatus.INCONCLUSIVE_SOLVER, f"{reason}; {exc}"
        )
    if d is not None and verify_disproof(run.graph, d, run.target, cfg.margin):
        if run.target is TargetKind.LOWER:
            run.residuals["disproof_lambda2"] = d.achieved
        else:
            run.residuals["disproof_lambda_max"] = d.achieved
        return run.finish(
            PipelineStatus.DISPROVED,
            f"{reason}; witness weights beat the uniform spectrum by {d.margin:.6g}",
            disproof=d,
        )
    if d is not None:
        run.flags.append("DISPROOF_VERIFY_FAILED")
    return run.finish(
        PipelineStatus.INCONCLUSIVE_SOLVER,
        f"{reason}; no verified witness weights found",
    )


def _assemble_stage(run: _Run, cone, sol, cluster) -> CertificationReport:
    run.stage("assemble")
    try:
        cert = assemble_certificate(cone, sol, cluster, run.target, run.cfg.verify_tol)
    except (ResidualTooLarge, ValueError) as exc:
        run.flags.append("ASSEMBLY_FAILED")
        return run.finish(PipelineStatus.INCONCLUSIVE_SOLVER, str(exc))
    run.stage("verify")
    vectors = list(zip(cert.coeffs, cone.reps))
    ver = verify_certificate(
        run.graph, cone.part, vectors, cert.lam, run.target, run.cfg.verify_tol
    )
    run.residuals["certificate_orbit"] = cert.orbit_residual
    run.residuals["certificate_eigen"] = cert.eigen_residual
    if not ver.ok:
        run.flags.append("VERIFY_FAILED")
        return run.finish(
            PipelineStatus.INCONCLUSIVE_SOLVER,
            f"assembled certificate failed verification at {ver.failing_clause}",
            verification=ver,
        )
    status = (
        PipelineStatus.CERTIFIED_EXACT if cert.exact
        else PipelineStatus.CERTIFIED_NUMERIC
    )
    return run.finish(
        status,
        "single-eigenvector certificate verified",
        certificate=cert,
        cert_vectors=vectors,
        verification=ver,
    )


# ---------------------------------------------------------------------------
# Batch, serialization, re-verification
# ---------------------------------------------------------------------------

def run_batch(
    graphs: list[tuple[str, Graph]],
    targets: tuple[TargetKind, ...],
    cfg: PipelineConfig = PipelineConfig(),
) -> tuple[list[CertificationReport], dict]:
    """Independent runs over (id, graph) pairs; returns reports + counts."""
    reports = []
    summary: dict[str, int] = {}
    for gid, graph in graphs:
        for target in targets:
            rep = run_pipeline(graph, target, cfg, graph_id=gid)
            reports.append(rep)
            summary[rep.status.value] = summary.get(rep.status.value, 0) + 1
    return reports, summary


def emit_report(report: CertificationReport, format: str = "JSON") -> bytes:
    """Serialize a report; JSON is deterministic, TEXT includes timings."""
    if format.upper() == "JSON":
        return (
            json.dumps(report.to_json_dict(), sort_keys=True, indent=2) + "\n"
        ).encode()
    if format.upper() != "TEXT":
        raise ValueError("format must be JSON or TEXT")
    d = report.to_json_dict()
    lines = [
        f"graph {d['graph_id']}  (n={d['n']}, m={d['m']})",
        f"target {d['target']}   status {d['status']}",
        f"route: {' -> '.join(d['route'])}",
        f"group order {d['group_order']}; orbit sizes {tuple(d['orbit_sizes'])}",
    ]
    if d["isotypics"]:
        iso = ", ".join(f"(d={a}, m={b}, endo={c})" for a, b, c in d["isotypics"])
        lines.append(f"isotypics: {iso}")
    if d["lambda"] is not None:
        lines.append(f"target eigenvalue {d['lambda']!r}")
    if d["certificate"]:
        c = d["certificate"]
        lines.append(
            f"certificate: a = {c['a']}, exact = {c['exact']}, "
            f"orbit residual {c['orbit_residual']:.3e}"
        )
        for k, vec in enumerate(c["vectors"]):
            lines.append(f"  phi_{k}: {vec!r}")
    if d["disproof"]:
        w = d["disproof"]
        lines.append(
            f"disproof: achieved {w['achieved']!r} vs baseline {w['baseline']!r} "
            f"(margin {w['margin']:.6g})"
        )
        lines.append(f"  weights: {w['w']!r}")
    if d["flags"]:
        lines.append(f"flags: {', '.join(d['flags'])}")
    if report.timings:
        t = ", ".join(f"{k} {v * 1000:.1f}ms" for k, v in report.timings.items())
        lines.append(f"timings: {t}")
    lines.append(d["message"])
    return ("\n".join(lines) + "\n").encode()


def _partition_from_orbit_of(graph: Graph, orbit_of):
    from .symmetry import EdgeOrbitPartition

    orbit_of = tuple(int(x) for x in orbit_of)
    s = max(orbit_of) + 1 if orbit_of else 0
    sizes = [0] * s
    for o in orbit_of:
        sizes[o] += 1
    return EdgeOrbitPartition(graph, orbit_of, tuple(sizes))


def report_from_json(payload: dict) -> CertificationReport:
    """Rebuild a report object from its JSON payload (timings do not persist)."""
    if payload.get("schema") != 1:
        raise ValueError(f"unsupported report schema {payload.get('schema')!r}")
    graph = parse_graph6(payload["graph6"])
    graph = Graph(graph.n, graph.edges, name=payload["graph_id"])
    cert = payload.get("certificate")
    certificate = None
    cert_vectors = None
    cert_per_edge = False
    if cert is not None:
        coeffs = tuple(
            Fraction(a) if isinstance(a, str) else float(a) for a in cert["a"]
        )
        vecs = [np.asarray(v, dtype=np.float64) for v in cert["vectors"]]
        cert_vectors = tuple(zip(coeffs, vecs))
        cert_per_edge = bool(cert["per_edge"])
        phi = sum(
            np.sqrt(max(float(a), 0.0)) * v for a, v in cert_vectors
        )
        certificate = ConicCertificate(
            coeffs=coeffs,
            phi=np.asarray(phi, dtype=np.float64),
            lam=float(cert["lambda"]),
            target_kind=TargetKind(payload["target"]),
            eigen_residual=float(cert["eigen_residual"]),
            orbit_residual=float(cert["orbit_residual"]),
            nonneg_slack=0.0,
            exact=bool(cert["exact"]),
            flags=tuple(cert["flags"]),
        )
    disp = payload.get("disproof")
    disproof = None
    if disp is not None:
        disproof = Disproof(
            WeightVector(np.asarray(disp["w"], dtype=np.float64), normalized=True),
            float(disp["achieved"]),
            float(disp["baseline"]),
            float(disp["margin"]),
        )
    emb = payload.get("embedding_gram")
    return CertificationReport(
        graph=graph,
        graph_id=payload["graph_id"],
        target=TargetKind(payload["target"]),
        route=tuple(payload["route"]),
        status=PipelineStatus(payload["status"]),
        group_order=int(payload["group_order"]),
        orbit_of=tuple(int(x) for x in payload["orbit_of"]),
        orbit_sizes=tuple(int(x) for x in payload["orbit_sizes"]),
        isotypics=tuple(tuple(int(x) for x in t) for t in payload["isotypics"]),
        lam=None if payload["lambda"] is None else float(payload["lambda"]),
        certificate=certificate,
        cert_vectors=cert_vectors,
        cert_per_edge=cert_per_edge,
        embedding_gram=None if emb is None else np.asarray(emb, dtype=np.float64),
        disproof=disproof,
        verification=None,
        residuals=dict(payload["residuals"]),
        flags=tuple(payload["flags"]),
        message=payload["message"],
    )


def reverify_report(payload: dict) -> bool:
    """Re-check a loaded report's embedded certificate or disproof."""
    graph = parse_graph6(payload["graph6"])
    kind = TargetKind(payload["target"])
    status = payload["status"]
    if status in ("CERTIFIED_EXACT", "CERTIFIED_NUMERIC"):
        cert = payload.get("certificate")
        if cert is not None:
            if cert["per_edge"]:
                part = _trivial_partition(graph)
            else:
                part = _partition_from_orbit_of(graph, payload["orbit_of"])
            vectors = []
            for a, vec in zip(cert["a"], cert["vectors"]):
                coef = Fraction(a) if isinstance(a, str) else float(a)
                vectors.append((coef, np.asarray(vec, dtype=np.float64)))
            return verify_certificate(
                graph, part, vectors, cert["lambda"], kind
            ).ok
        emb = payload.get("embedding_gram")
        if emb is None:
            return False
        Phi = np.asarray(emb, dtype=np.float64)
        L = laplacian(graph, WeightVector.uniform(graph))
        lam = payload["lambda"]
        if np.linalg.norm(L @ Phi - lam * Phi) > 1e-6 * max(1.0, lam):
            return False
        if float(np.linalg.eigvalsh(0.5 * (Phi + Phi.T))[0]) < -1e-8:
            return False
        part = _partition_from_orbit_of(graph, payload["orbit_of"])
        for o in range(part.s):
            idx = [i for i, x in enumerate(part.orbit_of) if x == o]
            tot = 0.0
            for i in idx:
                u, v = graph.edges[i]
                tot += Phi[u, u] + Phi[v, v] - 2 * Phi[u, v]
            if abs(tot - part.sizes[o]) > 1e-6 * max(1.0, part.sizes[o]):
                return False
        return True
    if status == "DISPROVED":
        disp = payload.get("disproof")
        if disp is None:
            return False
        d = Disproof(
            WeightVector(np.asarray(disp["w"], dtype=np.float64), normalized=True),
            disp["achieved"],
            disp["baseline"],
            disp["margin"],
        )
        return verify_disproof(graph, d, kind)
    return True
