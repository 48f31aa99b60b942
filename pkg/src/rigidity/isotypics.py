"""Isotypic decomposition of Laplacian eigenspaces under a symmetry group.

The decomposition drives both the multiplicity-bound test (which guarantees a
rank-1 certificate exists if the numerical problem is feasible) and the
polyhedral-cone exact route (which needs every isotypic to have multiplicity
one). Splitting is done by averaging random symmetric operators over the
group, which by Schur's lemma acts as a scalar on every irreducible summand.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .graphcore import Graph
from .spectra import EigenspaceCluster
from .symmetry import (
    EdgeOrbitPartition,
    GroupClosure,
    edge_orbits,
    orbit_energy,
    permute_vector,
)


class ClosureRequired(TypeError):
    """A full GroupClosure is needed (generator lists are not enough)."""


class UnstableSplit(RuntimeError):
    """Random-averaging refinement failed to stabilize."""


class MultiplicityNotOne(ValueError):
    """Operation requires an isotypic component of multiplicity one."""


@dataclass(frozen=True)
class IsotypicComponent:
    """One isotypic component of an eigenspace.

    basis holds vertex-space coordinates (n x d*m), coords the same columns
    expressed in the eigenspace basis (dim x d*m). irr_dim is the real
    dimension of the underlying irreducible, mult its multiplicity, endo_dim
    the dimension of its endomorphism field (1, 2, 4 for R, C, H).
    """

    basis: np.ndarray
    coords: np.ndarray
    irr_dim: int
    mult: int
    endo_dim: int
    graph: Graph
    part: EdgeOrbitPartition

    @property
    def dim(self) -> int:
        return self.basis.shape[1]


@dataclass(frozen=True)
class IsotypicDecomposition:
    components: tuple[IsotypicComponent, ...]
    eigenspace: EigenspaceCluster
    residual: float


def _compressed_action(cluster: EigenspaceCluster, closure: GroupClosure) -> list[np.ndarray]:
    """R(sigma) = B^T rho(sigma) B for every group element; checks invariance."""
    B = cluster.basis
    n, d = B.shape
    mats = []
    for k, sigma in enumerate(closure.elements):
        PB = np.empty_like(B)
        PB[list(sigma.image), :] = B
        R = B.T @ PB
        # Invariance check only on generators would do, but elements are few.
        if k < 1 + len(closure.generators.gens):
            resid = float(np.linalg.norm(PB - B @ R))
            if resid > 1e-8 * max(1.0, np.sqrt(d)):
                raise ValueError(
                    f"eigenspace is not invariant under the group (residual {resid:.3e})"
                )
        mats.append(R)
    return mats


def _averaged(mats: Sequence[np.ndarray], X: np.ndarray) -> np.ndarray:
    acc = np.zeros_like(X)
    for R in mats:
        acc += R.T @ X @ R
    return acc / len(mats)


def _split_by_eigenvalues(M: np.ndarray, tol: float = 1e-7) -> list[np.ndarray]:
    lam, V = np.linalg.eigh(M)
    scale = max(1.0, float(np.max(np.abs(lam))))
    blocks = []
    start = 0
    for k in range(1, lam.size + 1):
        if k == lam.size or lam[k] - lam[k - 1] > tol * scale:
            blocks.append(V[:, start:k])
            start = k
    return blocks


def isotypic_decompose(
    cluster: EigenspaceCluster,
    closure: GroupClosure,
    seed: int = 0,
) -> IsotypicDecomposition:
    """Decompose an eigenspace into isotypic components.

    Random symmetric matrices are averaged over the group; eigenspaces of the
    averaged operator are invariant subspaces, and repeating with fresh draws
    refines them to irreducible summands. Summands are merged into isotypics
    when an averaged cross-map between them is nonzero, and the endomorphism
    dimension is read off one summand per isotypic. Raises UnstableSplit when
    refinement keeps changing, ClosureRequired when no full closure is given.
    """
    if not isinstance(closure, GroupClosure):
        raise ClosureRequired("isotypic decomposition averages over a full GroupClosure")
    B = cluster.basis
    d = B.shape[1]
    graph = closure.graph
    part = edge_orbits(graph, closure.generators)
    rng = np.random.default_rng(seed)
    mats = _compressed_action(cluster, closure)

    def fresh_avg() -> np.ndarray:
        X = rng.standard_normal((d, d))
        return _averaged(mats, 0.5 * (X + X.T))

    # Round 0 splits, then refine until five consecutive draws change nothing.
    subspaces: list[np.ndarray] = [np.eye(d)]
    stable = 0
    rounds = 0
    while stable < 5:
        rounds += 1
        if rounds > 12:
            raise UnstableSplit("averaging refinement did not stabilize")
        M = fresh_avg()
        new_subspaces: list[np.ndarray] = []
        changed = False
        for Q in subspaces:
            if Q.shape[1] == 1:
                new_subspaces.append(Q)
                continue
            blocks = _split_by_eigenvalues(Q.T @ M @ Q)
            if len(blocks) > 1:
                changed = True
            new_subspaces.extend(Q @ blk for blk in blocks)
        subspaces = new_subspaces
        if changed:
            if rounds > 6:
                raise UnstableSplit("subspaces still splitting after six rounds")
            stable = 0
        else:
            stable += 1

    # Merge isomorphic summands via averaged cross-maps (Schur's lemma).
    k = len(subspaces)
    parent = list(range(k))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for a in range(k):
        for b in range(a + 1, k):
            Qa, Qb = subspaces[a], subspaces[b]
            if Qa.shape[1] != Qb.shape[1]:
                continue
            if find(a) == find(b):
                continue
            X = rng.standard_normal((d, d))
            H = _averaged(mats, Qb @ Qb.T @ X @ Qa @ Qa.T)
            T = Qb.T @ H @ Qa
            if np.linalg.norm(T) > 1e-6 * d:
                parent[max(find(a), find(b))] = min(find(a), find(b))

    groups: dict[int, list[int]] = {}
    for i in range(k):
        groups.setdefault(find(i), []).append(i)

    gen_mats = []
    for sigma in closure.generators.gens:
        PB = np.empty_like(B)
        PB[list(sigma.image), :] = B
        gen_mats.append(B.T @ PB)

    components = []
    for members in groups.values():
        dims = {subspaces[i].shape[1] for i in members}
        if len(dims) != 1:
            raise UnstableSplit("isomorphic summands of unequal dimension")
        irr_dim = dims.pop()
        Q = np.column_stack([subspaces[i] for i in members])
        endo = _endo_dim(gen_mats, subspaces[members[0]])
        if endo not in (1, 2, 4):
            raise UnstableSplit(
                f"endomorphism dimension {endo} is not 1, 2, or 4; summand is reducible"
            )
        components.append(
            IsotypicComponent(
                basis=B @ Q,
                coords=Q,
                irr_dim=irr_dim,
                mult=len(members),
                endo_dim=endo,
                graph=graph,
                part=part,
            )
        )

    components.sort(
        key=lambda c: (c.irr_dim, c.mult, np.round(c.basis @ c.basis.T, 9).tobytes())
    )
    proj_sum = sum(c.coords @ c.coords.T for c in components)
    residual = float(np.linalg.norm(proj_sum - np.eye(d)))
    return IsotypicDecomposition(tuple(components), cluster, residual)


def _endo_dim(gen_mats: Sequence[np.ndarray], Q: np.ndarray) -> int:
    """Nullity of the stacked commutation system on one summand.

    Commuting with the generators is equivalent to commuting with the whole
    group, so only generator blocks are stacked.
    """
    kdim = Q.shape[1]
    if not gen_mats:
        # Trivial group: the commutant is the full matrix algebra.
        return kdim * kdim
    rows = []
    eye = np.eye(kdim)
    for R in gen_mats:
        Ru = Q.T @ R @ Q
        rows.append(np.kron(eye, Ru) - np.kron(Ru.T, eye))
    A = np.vstack(rows)
    s = np.linalg.svd(A, compute_uv=False)
    smax = float(s[0]) if s.size else 0.0
    return int(np.sum(s <= 1e-8 * max(1.0, smax)))


def multiplicity_bound_ok(dec: IsotypicDecomposition) -> bool:
    """True iff every component satisfies mult <= irr_dim / endo_dim.

    This is the convex-image condition: when it holds, the orbit energies of
    the eigenspace form a convex cone, so a feasible isometric embedding can
    be rounded to a single-eigenvector certificate.
    """
    return all(c.mult <= c.irr_dim // c.endo_dim for c in dec.components)


def all_multiplicity_one(dec: IsotypicDecomposition) -> bool:
    """Gate for the polyhedral-cone exact route: every multiplicity is 1."""
    return all(c.mult == 1 for c in dec.components)


def representative_vector(component: IsotypicComponent, seed: int = 0) -> np.ndarray:
    """A unit vector of a multiplicity-one component.

    For such components the orbit-energy vector depends only on the norm, so
    any unit representative carries the same energies; a second draw is
    checked against the first to 1e-9 before returning.
    """
    if component.mult != 1:
        raise MultiplicityNotOne(
            f"component has multiplicity {component.mult}; representative needs 1"
        )
    rng = np.random.default_rng(seed)
    Bc = component.basis

    def draw() -> np.ndarray:
        x = rng.standard_normal(Bc.shape[1])
        v = Bc @ x
        return v / np.linalg.norm(v)

    phi = draw()
    other = draw()
    e1 = orbit_energy(component.graph, component.part, phi).values
    e2 = orbit_energy(component.graph, component.part, other).values
    scale = max(1.0, float(np.max(np.abs(e1))))
    if np.max(np.abs(e1 - e2)) > 1e-9 * scale:
        raise UnstableSplit(
            "orbit energy varies across representatives; component is not "
            "a multiplicity-one isotypic for this group"
        )
    return phi
