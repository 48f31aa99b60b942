"""Graph representation, ingestion, and edge-energy primitives.

A Graph is an immutable, simple, connected, undirected graph with a canonical
edge ordering: edges are stored as (u, v) pairs with u < v, sorted
lexicographically. Every per-edge vector in this package (weights, energies)
is indexed by that ordering.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np


class MalformedGraph6(ValueError):
    """Input is not a valid graph6 byte string."""


class DisconnectedGraph(ValueError):
    """The graph (or requested construction) is not connected."""


class DimensionMismatch(ValueError):
    """A per-edge or per-vertex vector has the wrong length."""


def _normalize_edges(n: int, edges: Iterable[Sequence[int]]) -> tuple[tuple[int, int], ...]:
    out = []
    seen = set()
    for e in edges:
        u, v = int(e[0]), int(e[1])
        if u == v:
            raise ValueError(f"self-loop at vertex {u}")
        if not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"edge ({u},{v}) out of range for n={n}")
        if u > v:
            u, v = v, u
        if (u, v) in seen:
            raise ValueError(f"duplicate edge ({u},{v})")
        seen.add((u, v))
        out.append((u, v))
    out.sort()
    return tuple(out)


@dataclass(frozen=True)
class Graph:
    """Immutable simple connected graph with stable edge indexing.

    edges are (u, v) with u < v, sorted lexicographically; the i-th pair is
    edge i everywhere in the package.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("graph needs at least 2 vertices")
        object.__setattr__(self, "edges", _normalize_edges(self.n, self.edges))
        if not self._is_connected():
            raise DisconnectedGraph(f"graph on {self.n} vertices is not connected")

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def neighbors(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return tuple(tuple(sorted(a)) for a in adj)

    @cached_property
    def edge_index(self) -> dict[tuple[int, int], int]:
        return {e: i for i, e in enumerate(self.edges)}

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(len(a) for a in self.neighbors)

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edge_index

    def _is_connected(self) -> bool:
        if self.n == 0:
            return False
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        seen = [False] * self.n
        stack = [0]
        seen[0] = True
        count = 1
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if not seen[y]:
                    seen[y] = True
                    count += 1
                    stack.append(y)
        return count == self.n

    def is_regular(self) -> bool:
        degs = self.degrees
        return min(degs) == max(degs)

    def bipartition(self) -> np.ndarray | None:
        """2-coloring as a +/-1 vector, or None if the graph is odd-cyclic."""
        color = np.zeros(self.n, dtype=np.int64)
        color[0] = 1
        stack = [0]
        while stack:
            x = stack.pop()
            for y in self.neighbors[x]:
                if color[y] == 0:
                    color[y] = -color[x]
                    stack.append(y)
                elif color[y] == color[x]:
                    return None
        return color.astype(np.float64)

    def __repr__(self) -> str:
        tag = f" {self.name!r}" if self.name else ""
        return f"Graph(n={self.n}, m={self.m}{tag})"


@dataclass(frozen=True)
class WeightVector:
    """Per-edge nonnegative weights; normalized means they sum to |E|."""

    values: np.ndarray
    normalized: bool = False

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=np.float64).copy()
        if arr.ndim != 1:
            raise DimensionMismatch("weights must be a flat vector")
        if np.any(arr < 0):
            raise ValueError("weights must be nonnegative")
        m = arr.size
        if self.normalized and m > 0 and abs(arr.sum() - m) > 1e-12 * m:
            raise ValueError(f"normalized weights must sum to {m}, got {arr.sum()!r}")
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    @classmethod
    def uniform(cls, graph: Graph) -> "WeightVector":
        return cls(np.ones(graph.m), normalized=True)

    def normalize(self) -> "WeightVector":
        s = float(self.values.sum())
        if s <= 0:
            raise ValueError("cannot normalize a zero weight vector")
        return WeightVector(self.values * (self.values.size / s), normalized=True)

    def __len__(self) -> int:
        return self.values.size


@dataclass(frozen=True)
class EdgeEnergyVector:
    """Per-edge squared differences of a vertex function."""

    values: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=np.float64).copy()
        if arr.ndim != 1:
            raise DimensionMismatch("energies must be a flat vector")
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    def __len__(self) -> int:
        return self.values.size


# ---------------------------------------------------------------------------
# graph6 (McKay encoding): N(n) header, then the upper triangle x_{ij} (i<j)
# in column order j=1..n-1, i=0..j-1, packed big-endian 6 bits per byte,
# each byte offset by 63.
# ---------------------------------------------------------------------------

_G6_HEADER = ">>graph6<<"


def _g6_decode_n(data: str) -> tuple[int, int]:
    """Return (n, chars consumed)."""
    if not data:
        raise MalformedGraph6("empty graph6 string")
    c0 = ord(data[0])
    if c0 == 126:  # '~'
        if len(data) >= 2 and ord(data[1]) == 126:
            if len(data) < 8:
                raise MalformedGraph6("truncated 8-byte vertex count")
            vals = [ord(c) - 63 for c in data[2:8]]
            if any(v < 0 or v > 63 for v in vals):
                raise MalformedGraph6("bad character in vertex count")
            n = 0
            for v in vals:
                n = (n << 6) | v
            return n, 8
        if len(data) < 4:
            raise MalformedGraph6("truncated 4-byte vertex count")
        vals = [ord(c) - 63 for c in data[1:4]]
        if any(v < 0 or v > 63 for v in vals):
            raise MalformedGraph6("bad character in vertex count")
        n = (vals[0] << 12) | (vals[1] << 6) | vals[2]
        return n, 4
    n = c0 - 63
    if n < 0 or n > 62:
        raise MalformedGraph6(f"bad vertex-count byte {data[0]!r}")
    return n, 1


def _g6_encode_n(n: int) -> str:
    if n <= 62:
        return chr(n + 63)
    if n <= 258047:
        return "~" + "".join(chr(((n >> s) & 63) + 63) for s in (12, 6, 0))
    return "~~" + "".join(chr(((n >> s) & 63) + 63) for s in (30, 24, 18, 12, 6, 0))


def parse_graph6(text: str) -> Graph:
    """Decode a graph6 string into a Graph.

    Raises MalformedGraph6 on encoding errors and DisconnectedGraph when the
    decoded graph is not connected.
    """
    data = text.strip()
    if data.startswith(_G6_HEADER):
        data = data[len(_G6_HEADER):]
    n, used = _g6_decode_n(data)
    if n < 1:
        raise MalformedGraph6("graph6 vertex count must be positive")
    body = data[used:]
    nbits = n * (n - 1) // 2
    nbytes = (nbits + 5) // 6
    if len(body) != nbytes:
        raise MalformedGraph6(
            f"expected {nbytes} adjacency bytes for n={n}, got {len(body)}"
        )
    bits = []
    for ch in body:
        val = ord(ch) - 63
        if val < 0 or val > 63:
            raise MalformedGraph6(f"bad adjacency byte {ch!r}")
        bits.extend((val >> s) & 1 for s in (5, 4, 3, 2, 1, 0))
    if any(bits[nbits:]):
        raise MalformedGraph6("nonzero padding bits")
    edges = []
    k = 0
    for j in range(1, n):
        for i in range(j):
            if bits[k]:
                edges.append((i, j))
            k += 1
    return Graph(n, edges)


def to_graph6(graph: Graph) -> str:
    """Encode a Graph as a canonical graph6 string."""
    n = graph.n
    bits = []
    for j in range(1, n):
        for i in range(j):
            bits.append(1 if graph.has_edge(i, j) else 0)
    while len(bits) % 6:
        bits.append(0)
    chars = []
    for k in range(0, len(bits), 6):
        val = 0
        for b in bits[k:k + 6]:
            val = (val << 1) | b
        chars.append(chr(val + 63))
    return _g6_encode_n(n) + "".join(chars)


def parse_edge_list(text: str) -> Graph:
    """Parse the alternate ingestion format: one 0-indexed "u v" pair per line.

    Blank lines and lines starting with '#' are skipped; the vertex count is
    one past the largest index seen.
    """
    edges = []
    top = -1
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected 'u v', got {raw!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError as exc:
            raise ValueError(f"line {lineno}: non-integer vertex in {raw!r}") from exc
        if u < 0 or v < 0:
            raise ValueError(f"line {lineno}: negative vertex index")
        top = max(top, u, v)
        edges.append((u, v))
    if not edges:
        raise ValueError("edge list is empty")
    return Graph(top + 1, edges)


def format_edge_list(graph: Graph, weights: WeightVector | None = None) -> str:
    """Render the graph (optionally with per-edge weights) as edge-list text."""
    lines = []
    for i, (u, v) in enumerate(graph.edges):
        if weights is None:
            lines.append(f"{u} {v}")
        else:
            lines.append(f"{u} {v} {float(weights.values[i])!r}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Constructions
# ---------------------------------------------------------------------------

def circulant(n: int, shifts: Iterable[int]) -> Graph:
    """Circulant graph: vertex i adjacent to i +/- s mod n for each shift s."""
    if n < 3:
        raise ValueError("circulant needs n >= 3")
    S = sorted(set(int(s) for s in shifts))
    if not S:
        raise ValueError("shift set must be nonempty")
    if any(s < 1 or s > n // 2 for s in S):
        raise ValueError(f"shifts must lie in 1..{n // 2}")
    g = n
    for s in S:
        g = np.gcd(g, s)
    if g != 1:
        raise DisconnectedGraph(f"gcd of shifts and n is {g}; graph splits")
    edges = set()
    for i in range(n):
        for s in S:
            j = (i + s) % n
            edges.add((min(i, j), max(i, j)))
    return Graph(n, sorted(edges), name=f"circulant({n},{{{','.join(map(str, S))}}})")


def cartesian_product(g1: Graph, g2: Graph) -> Graph:
    """Cartesian product: (a,b) ~ (a',b') iff a=a', b~b' or b=b', a~a'.

    Vertex (a, b) maps to index a * g2.n + b.
    """
    n2 = g2.n
    edges = []
    for a in range(g1.n):
        for (b, bp) in g2.edges:
            edges.append((a * n2 + b, a * n2 + bp))
    for (a, ap) in g1.edges:
        for b in range(n2):
            edges.append((a * n2 + b, ap * n2 + b))
    return Graph(g1.n * n2, edges)


# ---------------------------------------------------------------------------
# Laplacians and energies
# ---------------------------------------------------------------------------

def _weight_values(graph: Graph, w) -> np.ndarray:
    if isinstance(w, WeightVector):
        arr = w.values
    else:
        arr = np.asarray(w, dtype=np.float64)
    if arr.shape != (graph.m,):
        raise DimensionMismatch(
            f"weight vector has length {arr.shape}, graph has {graph.m} edges"
        )
    return arr


def laplacian(graph: Graph, w) -> np.ndarray:
    """Weighted Laplacian L(w) = D(w) - A(w)."""
    arr = _weight_values(graph, w)
    L = np.zeros((graph.n, graph.n))
    for i, (u, v) in enumerate(graph.edges):
        wi = arr[i]
        L[u, v] -= wi
        L[v, u] -= wi
        L[u, u] += wi
        L[v, v] += wi
    return L


def edge_laplacian(graph: Graph, edge_idx: int) -> np.ndarray:
    """Laplacian of the single-edge subgraph for edge edge_idx."""
    u, v = graph.edges[edge_idx]
    L = np.zeros((graph.n, graph.n))
    L[u, u] = L[v, v] = 1.0
    L[u, v] = L[v, u] = -1.0
    return L


def edge_energy(graph: Graph, phi) -> EdgeEnergyVector:
    """Edge-energy vector: value (phi(u) - phi(v))^2 at each edge (u, v)."""
    vec = np.asarray(phi, dtype=np.float64)
    if vec.shape != (graph.n,):
        raise DimensionMismatch(
            f"vertex function has shape {vec.shape}, graph has {graph.n} vertices"
        )
    us = np.fromiter((e[0] for e in graph.edges), dtype=np.int64, count=graph.m)
    vs = np.fromiter((e[1] for e in graph.edges), dtype=np.int64, count=graph.m)
    return EdgeEnergyVector((vec[us] - vec[vs]) ** 2)


def scale_energy_identity_check(graph: Graph, phi, c: float) -> bool:
    """Self-test hook: edge_energy(c * phi) equals c^2 * edge_energy(phi)."""
    base = edge_energy(graph, phi).values
    scaled = edge_energy(graph, np.asarray(phi, dtype=np.float64) * c).values
    ref = c * c * base
    scale = max(1.0, float(np.max(np.abs(ref))))
    return bool(np.max(np.abs(scaled - ref)) <= 1e-12 * scale)
