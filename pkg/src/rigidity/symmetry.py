"""Graph automorphisms, orbit structure, and symmetrization.

Automorphism generators come from an equitable-partition refinement search
with individualization backtracking; callers with big graphs can supply
generators externally (JSON) and skip the search. Orbits of edges and
vertices, orbit-energy vectors, and weight/embedding symmetrization all live
here.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .graphcore import DimensionMismatch, Graph, WeightVector, edge_energy, laplacian

SEARCH_BUDGET_DEFAULT = 200_000
CLOSURE_CAP_DEFAULT = 200_000


class SearchBudgetExceeded(RuntimeError):
    """Automorphism search ran past its node budget."""


class CapExceeded(RuntimeError):
    """Group closure grew past the configured cap."""

    def __init__(self, msg: str, partial_count: int):
        super().__init__(msg)
        self.partial_count = partial_count


@dataclass(frozen=True)
class Permutation:
    """A bijection on 0..n-1, stored as image[v] = sigma(v)."""

    image: tuple[int, ...]

    def __post_init__(self):
        img = tuple(int(x) for x in self.image)
        n = len(img)
        if sorted(img) != list(range(n)):
            raise ValueError("image is not a bijection on 0..n-1")
        object.__setattr__(self, "image", img)

    @property
    def n(self) -> int:
        return len(self.image)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(n)))

    def is_identity(self) -> bool:
        return all(i == v for i, v in enumerate(self.image))

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.image)
        for v, iv in enumerate(self.image):
            inv[iv] = v
        return Permutation(tuple(inv))

    def compose(self, other: "Permutation") -> "Permutation":
        """self after other: (self * other)(v) = self(other(v))."""
        return Permutation(tuple(self.image[other.image[v]] for v in range(self.n)))

    def __call__(self, v: int) -> int:
        return self.image[v]


@dataclass(frozen=True)
class GroupGenerators:
    """Verified automorphism generators bound to their graph."""

    graph: Graph
    gens: tuple[Permutation, ...]

    def __post_init__(self):
        for g in self.gens:
            if not verify_automorphism(self.graph, g):
                raise ValueError("generator is not an automorphism of the bound graph")


@dataclass(frozen=True)
class GroupClosure:
    """A fully enumerated subgroup of Aut(G)."""

    graph: Graph
    elements: tuple[Permutation, ...]
    generators: GroupGenerators = field(compare=False)

    @property
    def size(self) -> int:
        return len(self.elements)


@dataclass(frozen=True)
class EdgeOrbitPartition:
    """Edge orbit labels plus the orbit-size vector O.

    Orbit ids are assigned in order of the smallest edge index each orbit
    contains, so reports are stable across runs.
    """

    graph: Graph
    orbit_of: tuple[int, ...]
    sizes: tuple[int, ...]

    @property
    def s(self) -> int:
        return len(self.sizes)

    @property
    def size_vector(self) -> np.ndarray:
        return np.asarray(self.sizes, dtype=np.float64)

    def members(self, orbit_id: int) -> tuple[int, ...]:
        return tuple(i for i, o in enumerate(self.orbit_of) if o == orbit_id)


@dataclass(frozen=True)
class VertexOrbitPartition:
    orbit_of: tuple[int, ...]
    orbits: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class OrbitEnergyVector:
    """Per-orbit sums of edge energy for one vertex function."""

    values: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=np.float64).copy()
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    def __len__(self) -> int:
        return self.values.size


def verify_automorphism(graph: Graph, sigma: Permutation) -> bool:
    """True iff sigma maps the edge set onto itself."""
    if sigma.n != graph.n:
        return False
    img = sigma.image
    idx = graph.edge_index
    for u, v in graph.edges:
        a, b = img[u], img[v]
        if ((a, b) if a < b else (b, a)) not in idx:
            return False
    return True


# ---------------------------------------------------------------------------
# Equitable-partition refinement search
# ---------------------------------------------------------------------------

def _refine(neighbors: Sequence[Sequence[int]], cells: list[list[int]]) -> list[list[int]]:
    """Equitable refinement: split cells by neighbor counts into every cell.

    Sub-cells replace their parent in place, ordered by ascending count key,
    which keeps the cell order isomorphism-invariant.
    """
    nsets = [set(a) for a in neighbors]
    changed = True
    while changed:
        changed = False
        for s in range(len(cells)):
            splitter = set(cells[s])
            c = 0
            while c < len(cells):
                cell = cells[c]
                if len(cell) > 1:
                    groups: dict[int, list[int]] = {}
                    for v in cell:
                        k = len(nsets[v] & splitter)
                        groups.setdefault(k, []).append(v)
                    if len(groups) > 1:
                        parts = [groups[k] for k in sorted(groups)]
                        cells[c:c + 1] = parts
                        changed = True
                        c += len(parts) - 1
                c += 1
            if changed:
                break
    return cells


def _target_cell(cells: list[list[int]]) -> int:
    best = -1
    best_size = None
    for i, cell in enumerate(cells):
        if len(cell) > 1 and (best_size is None or len(cell) < best_size):
            best, best_size = i, len(cell)
    return best


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)

    def same(self, a: int, b: int) -> bool:
        return self.find(a) == self.find(b)


def automorphism_generators(
    graph: Graph,
    fixed: Iterable[int] = (),
    budget: int = SEARCH_BUDGET_DEFAULT,
) -> GroupGenerators:
    """Generators of the subgroup of Aut(G) pointwise-fixing `fixed`.

    Individualization-refinement backtracking: the first discrete leaf is the
    base labeling, every other leaf with a matching refinement trace yields a
    candidate permutation that is kept if it verifies. Vertices already in
    the orbit of an explored branch are skipped at the root. Raises
    SearchBudgetExceeded when more than `budget` refinement nodes are
    expanded; supply generators externally in that case.
    """
    n = graph.n
    fixed = [int(v) for v in fixed]
    if any(v < 0 or v >= n for v in fixed):
        raise ValueError("fixed vertices out of range")
    nbrs = graph.neighbors
    rest = [v for v in range(n) if v not in set(fixed)]
    seed: list[list[int]] = [[v] for v in fixed]
    if rest:
        seed.append(rest)

    state = {
        "nodes": 0,
        "first_leaf": None,
        "trace": [],
        "gens": [],
    }
    orbits = _UnionFind(n)

    def explore(cells: list[list[int]], depth: int) -> None:
        state["nodes"] += 1
        if state["nodes"] > budget:
            raise SearchBudgetExceeded(
                f"automorphism search exceeded {budget} refinement nodes"
            )
        cells = _refine(nbrs, [list(c) for c in cells])
        shape = tuple(len(c) for c in cells)
        if state["first_leaf"] is None:
            state["trace"].append(shape)
        else:
            if depth >= len(state["trace"]) or shape != state["trace"][depth]:
                return
        if all(len(c) == 1 for c in cells):
            leaf = tuple(c[0] for c in cells)
            if state["first_leaf"] is None:
                state["first_leaf"] = leaf
                return
            base = state["first_leaf"]
            image = [0] * n
            for k in range(n):
                image[base[k]] = leaf[k]
            sigma = Permutation(tuple(image))
            if not sigma.is_identity() and verify_automorphism(graph, sigma):
                state["gens"].append(sigma)
                for v in range(n):
                    orbits.union(v, sigma.image[v])
            return
        t = _target_cell(cells)
        tried: list[int] = []
        for v in sorted(cells[t]):
            if depth == 0 and any(orbits.same(v, u) for u in tried):
                continue
            tried.append(v)
            child = cells[:t] + [[v], [u for u in cells[t] if u != v]] + cells[t + 1:]
            explore(child, depth + 1)

    explore(seed, 0)

    # Deduplicate by image; keep discovery order.
    seen: set[tuple[int, ...]] = set()
    gens = []
    for g in state["gens"]:
        if g.image not in seen:
            seen.add(g.image)
            gens.append(g)
    return GroupGenerators(graph, tuple(gens))


def close_group(gens: GroupGenerators, cap: int = CLOSURE_CAP_DEFAULT) -> GroupClosure:
    """Breadth-first closure of the generated subgroup.

    Raises CapExceeded (carrying the partial count) when the subgroup grows
    past `cap`; callers should fall back to a smaller generating set.
    """
    if cap < 1:
        raise ValueError("cap must be positive")
    n = gens.graph.n
    ident = Permutation.identity(n)
    elements = [ident]
    seen = {ident.image}
    frontier = [ident]
    while frontier:
        nxt = []
        for e in frontier:
            for g in gens.gens:
                h = g.compose(e)
                if h.image not in seen:
                    if len(elements) + 1 > cap:
                        raise CapExceeded(
                            f"group closure exceeded cap {cap}", len(elements)
                        )
                    seen.add(h.image)
                    elements.append(h)
                    nxt.append(h)
        frontier = nxt
    return GroupClosure(gens.graph, tuple(elements), gens)


def edge_permutation(graph: Graph, sigma: Permutation) -> np.ndarray:
    """Index map of the edge action: entry i is the index of sigma(e_i)."""
    idx = graph.edge_index
    out = np.empty(graph.m, dtype=np.int64)
    img = sigma.image
    for i, (u, v) in enumerate(graph.edges):
        a, b = img[u], img[v]
        out[i] = idx[(a, b) if a < b else (b, a)]
    return out


def edge_orbits(graph: Graph, gens: GroupGenerators) -> EdgeOrbitPartition:
    """Edge orbits under generator action (no full closure needed)."""
    uf = _UnionFind(graph.m)
    for g in gens.gens:
        ep = edge_permutation(graph, g)
        for i in range(graph.m):
            uf.union(i, int(ep[i]))
    roots = [uf.find(i) for i in range(graph.m)]
    order: dict[int, int] = {}
    for i, r in enumerate(roots):
        if r not in order:
            order[r] = len(order)
    orbit_of = tuple(order[r] for r in roots)
    sizes = [0] * len(order)
    for o in orbit_of:
        sizes[o] += 1
    return EdgeOrbitPartition(graph, orbit_of, tuple(sizes))


def vertex_orbits(graph: Graph, gens: GroupGenerators) -> VertexOrbitPartition:
    uf = _UnionFind(graph.n)
    for g in gens.gens:
        for v in range(graph.n):
            uf.union(v, g.image[v])
    roots = [uf.find(v) for v in range(graph.n)]
    order: dict[int, int] = {}
    for r in roots:
        if r not in order:
            order[r] = len(order)
    orbit_of = tuple(order[r] for r in roots)
    groups: list[list[int]] = [[] for _ in range(len(order))]
    for v, o in enumerate(orbit_of):
        groups[o].append(v)
    return VertexOrbitPartition(orbit_of, tuple(tuple(g) for g in groups))


def is_vertex_transitive(graph: Graph, gens: GroupGenerators) -> bool:
    return len(vertex_orbits(graph, gens).orbits) == 1


def orbit_energy(graph: Graph, part: EdgeOrbitPartition, phi) -> OrbitEnergyVector:
    """Per-orbit sums of (phi(u) - phi(v))^2."""
    en = edge_energy(graph, phi).values
    out = np.zeros(part.s)
    np.add.at(out, np.asarray(part.orbit_of), en)
    return OrbitEnergyVector(out)


def symmetrize_weights(w: WeightVector, closure: GroupClosure) -> WeightVector:
    """Group average (1/|Psi|) sum of tau . w; constant on each edge orbit.

    Averaging over the full subgroup hits every edge of an orbit equally
    often, so this equals the per-orbit mean, which is how it is computed.
    """
    graph = closure.graph
    if len(w) != graph.m:
        raise DimensionMismatch("weight vector does not match the bound graph")
    part = edge_orbits(graph, closure.generators)
    vals = w.values
    means = np.zeros(part.s)
    np.add.at(means, np.asarray(part.orbit_of), vals)
    means /= part.size_vector
    out = means[np.asarray(part.orbit_of)]
    return WeightVector(out, normalized=w.normalized)


def permute_vector(sigma: Permutation, phi) -> np.ndarray:
    """(sigma . phi)(u) = phi(sigma^{-1}(u))."""
    vec = np.asarray(phi, dtype=np.float64)
    if vec.shape != (sigma.n,):
        raise DimensionMismatch("vector length does not match permutation degree")
    out = np.empty_like(vec)
    out[list(sigma.image)] = vec
    return out


def symmetrized_embedding(
    P: np.ndarray,
    closure: GroupClosure,
    cluster=None,
    residual_tol: float = 1e-8,
) -> np.ndarray:
    """Columns {sigma . phi_i} over the whole subgroup, an n x (r|Psi|) matrix.

    The columns of P must lie in a single Laplacian eigenspace; this is
    checked against `cluster.value` when a cluster is given, else against the
    Rayleigh quotient of the first column.
    """
    P = np.atleast_2d(np.asarray(P, dtype=np.float64))
    if P.shape[0] != closure.graph.n:
        raise DimensionMismatch("embedding rows must match vertex count")
    L = laplacian(closure.graph, WeightVector.uniform(closure.graph))
    if cluster is not None:
        lam = float(cluster.value)
    else:
        c0 = P[:, 0]
        lam = float(c0 @ L @ c0) / float(c0 @ c0)
    resid = np.linalg.norm(L @ P - lam * P)
    if resid > residual_tol * max(1.0, float(np.linalg.norm(L)) * float(np.linalg.norm(P))):
        raise ValueError(
            f"embedding columns stray from the eigenspace (residual {resid:.3e})"
        )
    cols = []
    for sigma in closure.elements:
        for j in range(P.shape[1]):
            cols.append(permute_vector(sigma, P[:, j]))
    return np.column_stack(cols)


# ---------------------------------------------------------------------------
# External generator files
# ---------------------------------------------------------------------------

def generators_from_json(graph: Graph, text: str) -> GroupGenerators:
    """Parse a JSON array of permutation image arrays and verify each."""
    data = json.loads(text)
    if not isinstance(data, list):
        raise ValueError("generator file must be a JSON array of image arrays")
    gens = []
    for entry in data:
        if not isinstance(entry, list) or len(entry) != graph.n:
            raise ValueError(
                f"each generator must be an image array of length {graph.n}"
            )
        sigma = Permutation(tuple(int(x) for x in entry))
        if not verify_automorphism(graph, sigma):
            raise ValueError(f"permutation {entry} is not an automorphism")
        gens.append(sigma)
    return GroupGenerators(graph, tuple(gens))


def generators_to_json(gens: GroupGenerators) -> str:
    return json.dumps([list(g.image) for g in gens.gens])
