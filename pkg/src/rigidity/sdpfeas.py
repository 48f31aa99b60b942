"""Semidefinite feasibility for isometric spectral embeddings.

The question "is there an eigenspace embedding whose edge (or orbit) energies
hit prescribed targets" is a small SDP feasibility problem in the Gram matrix
Z of the embedding coordinates. It is solved with Dykstra-corrected
alternating projections between the PSD cone and the affine constraint set;
no external solver is involved.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .graphcore import Graph, edge_laplacian
from .spectra import EigenspaceCluster
from .symmetry import EdgeOrbitPartition


class SdpStatus(Enum):
    FEASIBLE = "FEASIBLE"
    LIKELY_INFEASIBLE = "LIKELY_INFEASIBLE"
    ITERATION_LIMIT = "ITERATION_LIMIT"


@dataclass(frozen=True)
class CompressedOperators:
    """Eigenspace-compressed constraint operators and their targets."""

    ops: tuple[np.ndarray, ...]
    targets: np.ndarray
    basis: np.ndarray
    graph: Graph
    part: EdgeOrbitPartition | None

    @property
    def d(self) -> int:
        return self.basis.shape[1]


@dataclass(frozen=True)
class SdpResult:
    Z: np.ndarray | None
    status: SdpStatus
    max_residual: float
    iterations: int
    rank_estimate: int


def orbit_laplacian(graph: Graph, part: EdgeOrbitPartition, orbit_id: int) -> np.ndarray:
    """Laplacian of the subgraph formed by one edge orbit."""
    L = np.zeros((graph.n, graph.n))
    for i, o in enumerate(part.orbit_of):
        if o == orbit_id:
            L += edge_laplacian(graph, i)
    return L


def compress_operators(
    cluster: EigenspaceCluster,
    graph: Graph,
    part: EdgeOrbitPartition | None = None,
) -> CompressedOperators:
    """Compress constraint Laplacians into the eigenspace: B^T L^i B.

    With part=None one operator per edge is produced (target 1 each);
    otherwise one per orbit (target = orbit size).
    """
    B = cluster.basis
    ops = []
    if part is None:
        for i in range(graph.m):
            ops.append(B.T @ edge_laplacian(graph, i) @ B)
        targets = np.ones(graph.m)
    else:
        for o in range(part.s):
            ops.append(B.T @ orbit_laplacian(graph, part, o) @ B)
        targets = part.size_vector.copy()
    return CompressedOperators(tuple(ops), targets, B, graph, part)


def rank_estimate(Z: np.ndarray, rel_tol: float = 1e-6) -> int:
    """Number of eigenvalues above rel_tol times the largest one."""
    lam = np.linalg.eigvalsh(0.5 * (Z + Z.T))
    top = float(lam[-1])
    if top <= 0:
        return 0
    return int(np.sum(lam > rel_tol * top))


def _psd_clip(Z: np.ndarray) -> np.ndarray:
    lam, V = np.linalg.eigh(0.5 * (Z + Z.T))
    lam = np.clip(lam, 0.0, None)
    return (V * lam) @ V.T


def _block_psd_clip(block_slices: list[slice]):
    def clip(Z: np.ndarray) -> np.ndarray:
        out = np.zeros_like(Z)
        for sl in block_slices:
            out[sl, sl] = _psd_clip(Z[sl, sl])
        return out

    return clip


def _dykstra(
    ops: np.ndarray,
    targets: np.ndarray,
    d: int,
    tol: float,
    max_iter: int,
    psd_project,
    z0: np.ndarray,
) -> SdpResult:
    """Dykstra alternating projections between the PSD cone and an affine set.

    ops is (k, d*d) with row i = vec of the i-th constraint operator. The
    affine projection is the least-norm correction through the Gram
    pseudo-inverse. FEASIBLE once a projected iterate satisfies both
    membership tests to tol; LIKELY_INFEASIBLE when the inter-set distance
    plateaus (relative drop < 1e-3 over 200 iterations) above 10*tol, or
    right away when the linear system itself is inconsistent.
    """
    gram = ops @ ops.T
    gram_pinv = np.linalg.pinv(gram, rcond=1e-13)

    # An inconsistent affine system has no solution at all, PSD or not.
    if ops.size:
        z_ls = ops.T @ (gram_pinv @ targets)
        r0 = float(np.max(np.abs(ops @ z_ls - targets)))
        if r0 > 10.0 * tol:
            return SdpResult(None, SdpStatus.LIKELY_INFEASIBLE, r0, 0, 0)

    def affine_project(Z: np.ndarray) -> np.ndarray:
        z = Z.reshape(-1)
        corr = gram_pinv @ (targets - ops @ z)
        return (z + ops.T @ corr).reshape(d, d)

    x = z0.copy()
    p = np.zeros((d, d))
    q = np.zeros((d, d))
    dist_hist: list[float] = []
    for it in range(1, max_iter + 1):
        y = psd_project(x + p)
        p = x + p - y
        x = affine_project(y + q)
        q = y + q - x

        aff_res_y = float(np.max(np.abs(ops @ y.reshape(-1) - targets))) if ops.size else 0.0
        if aff_res_y <= tol:
            return SdpResult(y, SdpStatus.FEASIBLE, aff_res_y, it, rank_estimate(y))
        aff_res_x = float(np.max(np.abs(ops @ x.reshape(-1) - targets))) if ops.size else 0.0
        min_eig_x = float(np.linalg.eigvalsh(0.5 * (x + x.T))[0])
        if min_eig_x >= -tol and aff_res_x <= tol:
            return SdpResult(
                x, SdpStatus.FEASIBLE, max(aff_res_x, -min_eig_x, 0.0), it,
                rank_estimate(x),
            )

        dist = float(np.linalg.norm(y - x))
        dist_hist.append(dist)
        if it >= 400 and dist > 10.0 * tol:
            prev = dist_hist[-201]
            if prev - dist < 1e-3 * dist:
                return SdpResult(None, SdpStatus.LIKELY_INFEASIBLE, dist, it, 0)

    last = dist_hist[-1] if dist_hist else float("inf")
    return SdpResult(None, SdpStatus.ITERATION_LIMIT, last, max_iter, 0)


def _vec_ops(ops) -> np.ndarray:
    return np.stack([op.reshape(-1) for op in ops])


def _init_scale(ops, targets: np.ndarray, d: int) -> np.ndarray:
    tr = sum(float(np.trace(op)) for op in ops)
    c = float(np.sum(targets)) / tr if tr > 0 else 1.0
    return c * np.eye(d)


def solve_feasibility(
    co: CompressedOperators,
    tol: float = 1e-9,
    max_iter: int = 50_000,
) -> SdpResult:
    """Decide feasibility of Z >= 0 with <L~^i, Z> = target_i."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    d = co.d
    return _dykstra(
        _vec_ops(co.ops),
        co.targets,
        d,
        tol,
        max_iter,
        _psd_clip,
        _init_scale(co.ops, co.targets, d),
    )


def block_diagonal_feasibility(
    co: CompressedOperators,
    decomposition,
    tol: float = 1e-9,
    max_iter: int = 50_000,
) -> SdpResult:
    """Same feasibility problem with Z block-diagonal per isotypic component.

    The constraint operators commute with the group action, so their
    off-diagonal blocks between distinct isotypics vanish and the feasible
    set is unchanged; the projections just act blockwise.
    """
    comps = decomposition.components
    U = np.column_stack([c.coords for c in comps])
    d = co.d
    if U.shape != (d, d):
        raise ValueError("decomposition does not span the compressed space")
    slices = []
    start = 0
    for c in comps:
        w = c.coords.shape[1]
        slices.append(slice(start, start + w))
        start += w
    rotated = []
    for op in co.ops:
        R = U.T @ op @ U
        masked = np.zeros_like(R)
        for sl in slices:
            masked[sl, sl] = R[sl, sl]
        rotated.append(masked)
    res = _dykstra(
        _vec_ops(rotated),
        co.targets,
        d,
        tol,
        max_iter,
        _block_psd_clip(slices),
        _init_scale(rotated, co.targets, d),
    )
    if res.Z is None:
        return res
    Z = U @ res.Z @ U.T
    return SdpResult(Z, res.status, res.max_residual, res.iterations, res.rank_estimate)


def expand_gram(co: CompressedOperators, Z: np.ndarray) -> np.ndarray:
    """Re-expand a compressed Gram matrix to vertex space: Phi = B Z B^T."""
    B = co.basis
    return B @ Z @ B.T
