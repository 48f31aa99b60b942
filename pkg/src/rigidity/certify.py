"""Certificates and disproofs of conformal rigidity.

The exact route: when every isotypic of the eigenspace has multiplicity one,
the orbit energies of the eigenspace form a polyhedral cone spanned by the
orbit-energy vectors of one representative per isotypic; membership of the
orbit-size vector in that cone is a rational LP whenever the generators are
rational. The negative route: a separating perturbation direction found by
cutting planes, turned into explicit witness weights by a line search.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.optimize import linprog, nnls

from .graphcore import Graph, WeightVector, edge_energy, laplacian
from .isotypics import IsotypicDecomposition, representative_vector
from .sdpfeas import orbit_laplacian
from .spectra import (
    AmbiguousCluster,
    EigenspaceCluster,
    Which,
    cluster_eigenspace,
    eig_sym,
)
from .symmetry import EdgeOrbitPartition, orbit_energy


class TargetKind(Enum):
    LOWER = "LOWER"
    UPPER = "UPPER"

    @property
    def which(self) -> Which:
        return Which.SECOND if self is TargetKind.LOWER else Which.LARGEST


class ConeMode(Enum):
    EXACT_RATIONAL = "EXACT_RATIONAL"
    NUMERIC = "NUMERIC"


class MultiplicityObstruction(ValueError):
    """Cone construction needs all isotypic multiplicities equal to one."""


class RationalizationFailed(ValueError):
    """Generator entries do not round to safe rationals."""


class ResidualTooLarge(RuntimeError):
    """Assembled certificate violates its own defining identity."""


class LineSearchFailed(RuntimeError):
    """A strict ascent direction exists but no step size realizes it."""


@dataclass(frozen=True)
class ConeModel:
    """Polyhedral cone of eigenspace orbit energies.

    generators[j] is the orbit-energy vector of reps[j], one representative
    per multiplicity-one isotypic, scaled to squared norm n/2; target is the
    orbit-size vector O.
    """

    generators: tuple[np.ndarray, ...]
    reps: tuple[np.ndarray, ...]
    target: np.ndarray
    graph: Graph
    part: EdgeOrbitPartition


@dataclass(frozen=True)
class ConeSolution:
    feasible: bool
    coeffs: tuple
    exact: bool
    exact_unavailable: bool
    residual: float
    mode_used: ConeMode


@dataclass(frozen=True)
class ConicCertificate:
    """A subdifferential certificate: sum of a_j l_Psi(phi_j) = O, a >= 0."""

    coeffs: tuple
    phi: np.ndarray
    lam: float
    target_kind: TargetKind
    eigen_residual: float
    orbit_residual: float
    nonneg_slack: float
    exact: bool
    flags: tuple[str, ...] = ()


@dataclass(frozen=True)
class Disproof:
    """Witness weights beating the uniform spectrum for one target."""

    w: WeightVector
    achieved: float
    baseline: float
    margin: float


@dataclass(frozen=True)
class VerificationReport:
    ok: bool
    c: float
    failing_clause: str | None
    details: dict = field(compare=False, default_factory=dict)


@dataclass(frozen=True)
class DisproofParams:
    eps: float = 1e-8
    margin: float = 1e-7
    max_cuts: int = 100
    max_rounds: int = 60
    delta_max: float = 0.5
    delta_min: float = 1e-6
    seed: int = 0


# ---------------------------------------------------------------------------
# Rationalization (two-tier gate)
# ---------------------------------------------------------------------------

MAX_DENOMINATOR = 10**4
RATIONAL_LOOSE = 1e-9
RATIONAL_TIGHT = 1e-12


def rationalize(x: float) -> Fraction | None:
    """Best rational with denominator <= 1e4, or None beyond 1e-9 error."""
    f = Fraction(x).limit_denominator(MAX_DENOMINATOR)
    if abs(float(f) - x) > RATIONAL_LOOSE:
        return None
    return f


def rationalize_tight(x: float) -> Fraction | None:
    """Rationalization accepted only when the error is at roundoff scale.

    With denominators capped at 1e4 a quadratic irrational's best approximant
    sits at least ~1e-9 away, while a genuine small rational read from a float
    lands within a few ulps; the 1e-12 relative gate separates the two. A
    larger cap would let continued-fraction convergents of irrationals sneak
    under the gate and produce bogus 'exact' claims.
    """
    f = rationalize(x)
    if f is None:
        return None
    if abs(float(f) - x) > RATIONAL_TIGHT * max(1.0, abs(x)):
        return None
    return f


# ---------------------------------------------------------------------------
# Exact phase-1 simplex over Fractions
# ---------------------------------------------------------------------------

def exact_nonneg_solve(
    A: Sequence[Sequence[Fraction]], b: Sequence[Fraction]
) -> list[Fraction] | None:
    """Find a >= 0 with A a = b exactly, or prove there is none (None).

    Phase-1 simplex with Bland's rule over exact rationals; dimensions here
    are tiny (rows = orbit count, cols = isotypic count).
    """
    s = len(b)
    h = len(A[0]) if A else 0
    rows = [[Fraction(x) for x in row] for row in A]
    rhs = [Fraction(x) for x in b]
    for i in range(s):
        if rhs[i] < 0:
            rows[i] = [-x for x in rows[i]]
            rhs[i] = -rhs[i]
    ncols = h + s
    # Tableau: originals then artificials (identity); basis = artificials.
    T = [rows[i] + [Fraction(int(i == j)) for j in range(s)] for i in range(s)]
    basis = list(range(h, h + s))
    cost = [Fraction(0)] * h + [Fraction(1)] * s

    def reduced_costs() -> list[Fraction]:
        r = list(cost)
        for i, bi in enumerate(basis):
            cb = cost[bi]
            if cb:
                for j in range(ncols):
                    r[j] -= cb * T[i][j]
        return r

    while True:
        r = reduced_costs()
        enter = next((j for j in range(ncols) if r[j] < 0), None)
        if enter is None:
            break
        leave = None
        best = None
        for i in range(s):
            if T[i][enter] > 0:
                ratio = rhs[i] / T[i][enter]
                if best is None or ratio < best or (
                    ratio == best and basis[i] < basis[leave]
                ):
                    best, leave = ratio, i
        if leave is None:
            break  # unbounded cannot happen in phase 1; cautious exit
        piv = T[leave][enter]
        T[leave] = [x / piv for x in T[leave]]
        rhs[leave] /= piv
        for i in range(s):
            if i != leave and T[i][enter]:
                f = T[i][enter]
                T[i] = [a - f * bb for a, bb in zip(T[i], T[leave])]
                rhs[i] -= f * rhs[leave]
        basis[leave] = enter

    value = sum(cost[bi] * rhs[i] for i, bi in enumerate(basis))
    if value != 0:
        return None
    out = [Fraction(0)] * h
    for i, bi in enumerate(basis):
        if bi < h:
            out[bi] = rhs[i]
    return out


# ---------------------------------------------------------------------------
# Cone construction and membership
# ---------------------------------------------------------------------------

def build_cone(
    dec: IsotypicDecomposition,
    part: EdgeOrbitPartition,
    seed: int = 0,
) -> ConeModel:
    """One representative per isotypic; generators are their orbit energies.

    Representatives are scaled to squared norm n/2, the normalization under
    which a cosine character vector on a circulant has integer orbit
    energies. Requires every multiplicity to be one.
    """
    bad = [c for c in dec.components if c.mult != 1]
    if bad:
        raise MultiplicityObstruction(
            f"{len(bad)} isotypic component(s) have multiplicity > 1"
        )
    graph = dec.components[0].graph
    scale = np.sqrt(graph.n / 2.0)
    reps = []
    gens = []
    for k, comp in enumerate(dec.components):
        phi = representative_vector(comp, seed + k) * scale
        reps.append(phi)
        g = orbit_energy(graph, part, phi).values
        if np.max(g) <= 0:
            raise ValueError("zero orbit-energy generator; eigenvector is constant")
        gens.append(g)
    return ConeModel(tuple(gens), tuple(reps), part.size_vector.copy(), graph, part)


def subcone_model(
    dec: IsotypicDecomposition,
    part: EdgeOrbitPartition,
    seed: int = 0,
) -> ConeModel:
    """Opportunistic sub-cone for decompositions with multiplicities > 1.

    One random unit vector per component; the resulting cone is contained in
    the full orbit-energy image, so membership still yields a certificate,
    but failure proves nothing.
    """
    graph = dec.components[0].graph
    rng = np.random.default_rng(seed)
    scale = np.sqrt(graph.n / 2.0)
    reps = []
    gens = []
    for comp in dec.components:
        if comp.mult == 1:
            phi = representative_vector(comp, seed)
        else:
            x = rng.standard_normal(comp.basis.shape[1])
            phi = comp.basis @ x
            phi = phi / np.linalg.norm(phi)
        phi = phi * scale
        reps.append(phi)
        gens.append(orbit_energy(graph, part, phi).values)
    return ConeModel(tuple(gens), tuple(reps), part.size_vector.copy(), graph, part)


def solve_cone_membership(
    cone: ConeModel,
    mode: ConeMode = ConeMode.EXACT_RATIONAL,
) -> ConeSolution:
    """Decide whether the orbit-size vector lies in the generator cone.

    EXACT_RATIONAL rationalizes all generator entries behind a two-tier gate
    and runs exact phase-1 simplex: a returned solution (or infeasibility
    verdict) is then a theorem about the rationalized data. When entries do
    not rationalize safely, falls back to nonnegative least squares with the
    tightened residual 1e-8 -> 1e-10 and the EXACT_UNAVAILABLE condition.
    """
    G = np.column_stack(cone.generators)
    target = cone.target
    if mode is ConeMode.EXACT_RATIONAL:
        rows = []
        ok = True
        for i in range(G.shape[0]):
            row = []
            for j in range(G.shape[1]):
                f = rationalize_tight(G[i, j])
                if f is None:
                    ok = False
                    break
                row.append(f)
            if not ok:
                break
            rows.append(row)
        if ok:
            b = [Fraction(x).limit_denominator(MAX_DENOMINATOR) for x in target]
            sol = exact_nonneg_solve(rows, b)
            if sol is None:
                return ConeSolution(False, (), True, False, float("inf"),
                                    ConeMode.EXACT_RATIONAL)
            resid = float(
                np.max(np.abs(G @ np.array([float(a) for a in sol]) - target))
            )
            return ConeSolution(True, tuple(sol), True, False, resid,
                                ConeMode.EXACT_RATIONAL)
        # fall through to numeric with the tightened acceptance
        a, _ = nnls(G, target)
        resid = float(np.max(np.abs(G @ a - target)))
        tol = 1e-10 * float(np.max(np.abs(target)))
        if resid <= tol:
            return ConeSolution(True, tuple(float(x) for x in a), False, True,
                                resid, ConeMode.NUMERIC)
        return ConeSolution(False, (), False, True, resid, ConeMode.NUMERIC)

    a, _ = nnls(G, target)
    resid = float(np.max(np.abs(G @ a - target)))
    tol = 1e-8 * float(np.max(np.abs(target)))
    if resid <= tol:
        return ConeSolution(True, tuple(float(x) for x in a), False, False,
                            resid, ConeMode.NUMERIC)
    return ConeSolution(False, (), False, False, resid, ConeMode.NUMERIC)


def assemble_certificate(
    cone: ConeModel,
    solution: ConeSolution,
    cluster: EigenspaceCluster,
    kind: TargetKind,
    rel_tol: float = 1e-8,
) -> ConicCertificate:
    """Combine representatives into phi = sum sqrt(a_j) phi_j.

    Orbit energies add across isotypics, so l_Psi(phi) must equal the
    orbit-size vector; ResidualTooLarge flags solver/decomposition mismatch.
    """
    coeffs = solution.coeffs
    phi = np.zeros(cone.graph.n)
    for a, rep in zip(coeffs, cone.reps):
        af = float(a)
        if af < 0:
            raise ValueError("negative cone coefficient")
        if af > 0:
            phi = phi + np.sqrt(af) * rep
    en = orbit_energy(cone.graph, cone.part, phi).values
    target = cone.target
    orbit_residual = float(np.max(np.abs(en - target)))
    scale = float(np.max(np.abs(target)))
    if orbit_residual > rel_tol * max(1.0, scale):
        raise ResidualTooLarge(
            f"assembled orbit energies miss the target by {orbit_residual:.3e}"
        )
    L = laplacian(cone.graph, WeightVector.uniform(cone.graph))
    eigen_residual = float(np.linalg.norm(L @ phi - cluster.value * phi))
    nonneg_slack = float(min((float(a) for a in coeffs), default=0.0))
    flags = ("EXACT_UNAVAILABLE",) if solution.exact_unavailable else ()
    return ConicCertificate(
        coeffs=tuple(coeffs),
        phi=phi,
        lam=float(cluster.value),
        target_kind=kind,
        eigen_residual=eigen_residual,
        orbit_residual=orbit_residual,
        nonneg_slack=nonneg_slack,
        exact=solution.exact,
        flags=flags,
    )


def bipartite_regular_upper_certificate(graph: Graph) -> ConicCertificate | None:
    """Shortcut for regular bipartite graphs: the alternating +/-1 vector.

    It is a (2 deg)-eigenvector whose edge energies are all exactly 4, which
    is a per-edge certificate that uniform weights minimize the largest
    eigenvalue. Returns None when the graph is not regular bipartite.
    """
    if not graph.is_regular():
        return None
    phi = graph.bipartition()
    if phi is None:
        return None
    deg = graph.degrees[0]
    lam = float(2 * deg)
    en = edge_energy(graph, phi).values
    if not np.all(en == 4.0):
        return None
    L = laplacian(graph, WeightVector.uniform(graph))
    eigen_residual = float(np.linalg.norm(L @ phi - lam * phi))
    # Per-edge form: l(phi/2) = 1 on every edge, matching target O = 1.
    return ConicCertificate(
        coeffs=(Fraction(1, 4),),
        phi=phi,
        lam=lam,
        target_kind=TargetKind.UPPER,
        eigen_residual=eigen_residual,
        orbit_residual=0.0,
        nonneg_slack=0.25,
        exact=True,
        flags=("REGULAR_BIPARTITE",),
    )


# ---------------------------------------------------------------------------
# Independent verification
# ---------------------------------------------------------------------------

def _orbit_sums(part: EdgeOrbitPartition, edge_vals: np.ndarray) -> np.ndarray:
    out = np.zeros(part.s)
    np.add.at(out, np.asarray(part.orbit_of), edge_vals)
    return out


def verify_certificate(
    graph: Graph,
    part: EdgeOrbitPartition,
    vectors: Sequence[tuple[float, np.ndarray]],
    lam: float,
    kind: TargetKind,
    tol: float = 1e-8,
) -> VerificationReport:
    """Re-check a certificate from scratch, using nothing downstream.

    Clauses: (i) every phi_j is a lam-eigenvector of the uniform Laplacian;
    (ii) lam is the second-smallest (LOWER) or largest (UPPER) eigenvalue;
    (iii) sum a_j l_Psi(phi_j) = c * O for a fitted c > 0; (iv) all a_j >= 0.
    Per-edge certificates pass through as the all-singleton-orbit case.
    """
    L = laplacian(graph, WeightVector.uniform(graph))
    dec = eig_sym(L)
    lam_all = dec.eigenvalues
    scale = max(1.0, float(lam_all[-1]))
    details: dict = {}

    for j, (_, phi) in enumerate(vectors):
        phi = np.asarray(phi, dtype=np.float64)
        r = float(np.linalg.norm(L @ phi - lam * phi))
        details[f"eigen_residual_{j}"] = r
        if r > tol * scale * max(1.0, float(np.linalg.norm(phi))):
            return VerificationReport(False, 0.0, "eigenvector", details)

    ref = float(lam_all[1]) if kind is TargetKind.LOWER else float(lam_all[-1])
    details["lambda_reference"] = ref
    if abs(lam - ref) > tol * scale:
        return VerificationReport(False, 0.0, "eigenvalue_position", details)

    combo = np.zeros(part.s)
    for a, phi in vectors:
        af = float(a)
        if af < -tol:
            return VerificationReport(False, 0.0, "nonnegative_coefficients", details)
        combo += af * _orbit_sums(part, edge_energy(graph, np.asarray(phi)).values)
    target = part.size_vector
    c = float(combo @ target) / float(target @ target)
    details["c"] = c
    resid = float(np.max(np.abs(combo - c * target)))
    details["orbit_residual"] = resid
    if c <= 0:
        return VerificationReport(False, c, "positive_scale", details)
    if resid > tol * max(1.0, abs(c) * float(np.max(target))):
        return VerificationReport(False, c, "orbit_identity", details)
    return VerificationReport(True, c, None, details)


def verify_disproof(graph: Graph, d: Disproof, kind: TargetKind,
                    margin: float = 1e-7) -> bool:
    """Recompute spectra from scratch and check the strict improvement."""
    w = d.w.values
    if np.any(w < 0):
        return False
    if abs(float(w.sum()) - graph.m) > 1e-9 * graph.m:
        return False
    lam_w = eig_sym(laplacian(graph, w)).eigenvalues
    lam_u = eig_sym(laplacian(graph, WeightVector.uniform(graph))).eigenvalues
    if kind is TargetKind.LOWER:
        return float(lam_w[1]) > float(lam_u[1]) + margin
    return float(lam_w[-1]) < float(lam_u[-1]) - margin


def quadratic_system_residual(
    cluster: EigenspaceCluster,
    part: EdgeOrbitPartition,
    x,
) -> np.ndarray:
    """Evaluate the orbit-isometry quadratic system at coefficient vector x.

    Component i is <Bx, L^i Bx> - |O_i|. This only evaluates; solving the
    system is out of scope, so externally found exact solutions can be
    checked here.
    """
    x = np.asarray(x, dtype=np.float64)
    phi = cluster.basis @ x
    graph = part.graph
    en = _orbit_sums(part, edge_energy(graph, phi).values)
    return en - part.size_vector


# ---------------------------------------------------------------------------
# Disproof search: cutting planes + line search
# ---------------------------------------------------------------------------

def _eigenspace_at(graph: Graph, w: np.ndarray, kind: TargetKind,
                   tol: float = 1e-8) -> tuple[float, np.ndarray]:
    dec = eig_sym(laplacian(graph, w))
    try:
        cl = cluster_eigenspace(dec, kind.which, tol)
        return cl.value, cl.basis
    except AmbiguousCluster:
        # Fall back to the single extreme eigenvector.
        idx = 1 if kind is TargetKind.LOWER else -1
        return float(dec.eigenvalues[idx]), dec.eigenvectors[:, [idx]]


def _cutting_plane_direction(
    graph: Graph,
    part: EdgeOrbitPartition,
    basis: np.ndarray,
    kind: TargetKind,
    params: DisproofParams,
    rng: np.random.Generator,
) -> tuple[np.ndarray, float]:
    """Best perturbation direction y in orbit space and its guarantee t.

    Solves max t s.t. <y, l_Psi(phi)> >= t for all unit eigenspace phi
    (reversed sign for UPPER), <y, O> = 0, |y|_inf <= 1, generating the
    worst-case phi by an eigenvector oracle on the compressed perturbation
    operator sum_i y_i L~^i.
    """
    s = part.s
    d = basis.shape[1]
    ops = [basis.T @ orbit_laplacian(graph, part, o) @ basis for o in range(s)]
    sign = 1.0 if kind is TargetKind.LOWER else -1.0

    def orbit_vec(x: np.ndarray) -> np.ndarray:
        phi = basis @ x
        return _orbit_sums(part, edge_energy(graph, phi).values)

    cuts = [orbit_vec(np.eye(d)[:, j]) for j in range(d)]
    if d > 1:
        for _ in range(2):
            x = rng.standard_normal(d)
            cuts.append(orbit_vec(x / np.linalg.norm(x)))

    y = np.zeros(s)
    t = 0.0
    for _ in range(params.max_cuts):
        A_ub = np.column_stack([-sign * np.stack(cuts), np.ones(len(cuts))])
        res = linprog(
            c=np.concatenate([np.zeros(s), [-1.0]]),
            A_ub=A_ub,
            b_ub=np.zeros(len(cuts)),
            A_eq=np.concatenate([part.size_vector, [0.0]])[None, :],
            b_eq=[0.0],
            bounds=[(-1.0, 1.0)] * s + [(None, None)],
            method="highs",
        )
        if not res.success:
            return np.zeros(s), 0.0
        y = res.x[:s]
        t = float(res.x[s])
        if t <= params.eps:
            return y, t
        M = sum(float(y[o]) * ops[o] for o in range(s))
        lam, V = np.linalg.eigh(M)
        if kind is TargetKind.LOWER:
            worst, xw = float(lam[0]), V[:, 0]
        else:
            worst, xw = float(-lam[-1]), V[:, -1]
        if worst >= t - 1e-9 * max(1.0, abs(t)):
            return y, t
        cuts.append(orbit_vec(xw))
    return y, t


def _expand_orbit_weights(part: EdgeOrbitPartition, w_orbit: np.ndarray) -> np.ndarray:
    return w_orbit[np.asarray(part.orbit_of)]


def find_disproof(
    graph: Graph,
    cluster: EigenspaceCluster,
    part: EdgeOrbitPartition,
    kind: TargetKind,
    params: DisproofParams = DisproofParams(),
) -> Disproof | None:
    """Search for witness weights violating rigidity of the given target.

    Alternates cutting-plane directions with halving line searches, staying
    inside orbit-constant weights (symmetrization cannot hurt the objective,
    so nothing is lost). Returns None when no strict direction exists at
    uniform weights; raises LineSearchFailed when a direction exists there
    but no step size realizes an improvement.
    """
    rng = np.random.default_rng(params.seed)
    m = graph.m
    uniform = np.ones(m)
    lam_base, _ = _eigenspace_at(graph, uniform, kind)
    better = (lambda a, b: a > b) if kind is TargetKind.LOWER else (lambda a, b: a < b)

    w = uniform.copy()
    lam_cur = lam_base
    basis = cluster.basis
    best: tuple[float, np.ndarray] | None = None

    for round_no in range(params.max_rounds):
        y, t = _cutting_plane_direction(graph, part, basis, kind, params, rng)
        if t <= params.eps:
            break
        dy = _expand_orbit_weights(part, y)
        accepted = None
        delta = params.delta_max
        while delta >= params.delta_min:
            cand = np.clip(w + delta * dy, 0.0, None)
            ssum = float(cand.sum())
            if ssum <= 0:
                delta *= 0.5
                continue
            cand *= m / ssum
            lam_c, _ = _eigenspace_at(graph, cand, kind)
            if better(lam_c, lam_cur + (params.margin if kind is TargetKind.LOWER
                                        else -params.margin)):
                accepted = (cand, lam_c)
                break
            delta *= 0.5
        if accepted is None:
            if round_no == 0:
                raise LineSearchFailed(
                    f"direction with guarantee t={t:.3e} found, but no step "
                    f"improved the objective"
                )
            break
        w, lam_cur = accepted
        if best is None or better(lam_cur, best[0]):
            best = (lam_cur, w.copy())
        lam_cur, basis = _eigenspace_at(graph, w, kind)

    if best is None:
        return None
    achieved, w_best = best
    margin = achieved - lam_base if kind is TargetKind.LOWER else lam_base - achieved
    if margin <= params.margin:
        return None
    wv = WeightVector(w_best * (m / float(w_best.sum())), normalized=True)
    return Disproof(wv, achieved, lam_base, margin)
