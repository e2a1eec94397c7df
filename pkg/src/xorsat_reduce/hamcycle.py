"""Hamiltonian cycles via reduction to a 2-in-degree occupation instance.

Each edge becomes a boolean variable and each node a clause requiring
exactly two of its incident edges to be selected. Solutions of that
instance are disjoint unions of cycles covering every node; an extra
connectivity filter keeps only single cycles. For a connected graph the
parity system has rank n_nodes - 1, which pins the reduced-space size.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import gf2
from .bits import bit_block
from .errors import GenerationError, GuardExceeded, ParseError
from .instances import Clause, Instance, Literal, clause_tables, eval_batch
from .reduction import XorInfeasible, expand_batch, reduce_instance

SOLVE_MAX_FREE = 30
BRUTE_FORCE_MAX_NODES = 12
_GENERATOR_ATTEMPTS = 2000


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph; edges are stored as sorted (u, v) pairs."""

    n_nodes: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        seen = set()
        normalized = []
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop at node {u}")
            if not (0 <= u < self.n_nodes and 0 <= v < self.n_nodes):
                raise ValueError(f"edge ({u}, {v}) out of range for {self.n_nodes} nodes")
            pair = (min(u, v), max(u, v))
            if pair in seen:
                raise ValueError(f"duplicate edge {pair}")
            seen.add(pair)
            normalized.append(pair)
        object.__setattr__(self, "edges", tuple(normalized))

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def degrees(self) -> np.ndarray:
        out = np.zeros(self.n_nodes, dtype=np.int64)
        for u, v in self.edges:
            out[u] += 1
            out[v] += 1
        return out

    def incident_edges(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.n_nodes)]
        for e, (u, v) in enumerate(self.edges):
            out[u].append(e)
            out[v].append(e)
        return out


def connected_component_count(graph: Graph) -> int:
    if graph.n_nodes == 0:
        return 0
    adjacency: list[list[int]] = [[] for _ in range(graph.n_nodes)]
    for u, v in graph.edges:
        adjacency[u].append(v)
        adjacency[v].append(u)
    seen = [False] * graph.n_nodes
    components = 0
    for start in range(graph.n_nodes):
        if seen[start]:
            continue
        components += 1
        stack = [start]
        seen[start] = True
        while stack:
            node = stack.pop()
            for nb in adjacency[node]:
                if not seen[nb]:
                    seen[nb] = True
                    stack.append(nb)
    return components


def is_connected(graph: Graph) -> bool:
    return connected_component_count(graph) <= 1


def incidence_matrix(graph: Graph) -> np.ndarray:
    """Node-edge incidence matrix over GF(2): (n_nodes, n_edges)."""
    out = np.zeros((graph.n_nodes, graph.n_edges), dtype=np.uint8)
    for e, (u, v) in enumerate(graph.edges):
        out[u, e] = 1
        out[v, e] = 1
    return out


def hc_to_occupation(graph: Graph) -> Instance:
    """2-in-degree instance over edge variables: one q=2 clause per node.

    Nodes of degree one still emit their (structurally unsatisfiable)
    clause; a graph with an isolated node cannot reference it through
    any edge variable, so it maps to a one-variable unsatisfiable marker
    instance instead.
    """
    degrees = graph.degrees()
    if graph.n_nodes and degrees.min() == 0:
        return Instance(max(graph.n_edges, 1), (Clause((Literal(0),), 2),))
    clauses = tuple(
        Clause(tuple(Literal(e) for e in incident), 2)
        for incident in graph.incident_edges()
    )
    return Instance(graph.n_edges, clauses)


def hc_rank_check(graph: Graph) -> int:
    """GF(2) rank of the incidence matrix: n_nodes minus the component count."""
    return gf2.rank(incidence_matrix(graph))


def is_hamiltonian_cycle(graph: Graph, edge_values) -> bool:
    """True iff the selected edges form one cycle through every node."""
    values = np.asarray(edge_values, dtype=np.uint8)
    if values.size != graph.n_edges:
        raise ValueError(f"edge assignment length {values.size} != {graph.n_edges}")
    if graph.n_nodes < 3:
        return False
    selected = [graph.edges[e] for e in np.nonzero(values)[0]]
    degree = np.zeros(graph.n_nodes, dtype=np.int64)
    adjacency: list[list[int]] = [[] for _ in range(graph.n_nodes)]
    for u, v in selected:
        degree[u] += 1
        degree[v] += 1
        adjacency[u].append(v)
        adjacency[v].append(u)
    if degree.min() != 2 or degree.max() != 2:
        return False
    # Degree 2 everywhere means a disjoint union of cycles; one traversal
    # reaching every node means it is a single cycle.
    seen = [False] * graph.n_nodes
    stack = [0]
    seen[0] = True
    reached = 1
    while stack:
        node = stack.pop()
        for nb in adjacency[node]:
            if not seen[nb]:
                seen[nb] = True
                reached += 1
                stack.append(nb)
    return reached == graph.n_nodes


def solve_hc(graph: Graph) -> np.ndarray | None:
    """One Hamiltonian cycle as an edge assignment, or None (certified).

    Enumerates the reduced space of the 2-in-degree instance and filters
    with the connectivity check; guarded to k <= 30 free dimensions.
    """
    instance = hc_to_occupation(graph)
    outcome = reduce_instance(instance)
    if isinstance(outcome, XorInfeasible):
        return None
    k = outcome.free_count
    if k > SOLVE_MAX_FREE:
        raise GuardExceeded("reduced-space dimension k", k, SOLVE_MAX_FREE)
    tables = clause_tables(instance)
    total = 1 << k
    block_size = 1 << 16
    for start in range(0, total, block_size):
        block = bit_block(start, min(start + block_size, total), k)
        candidates = expand_batch(outcome, block)
        degree_ok = eval_batch(instance, candidates, tables)
        for i in np.nonzero(degree_ok)[0]:
            if is_hamiltonian_cycle(graph, candidates[i]):
                return candidates[i].copy()
    return None


def hc_cost_exponent(graph: Graph) -> float:
    """k/2 with k = n_edges - (n_nodes - 1); n/4 + 1/2 for 3-regular graphs."""
    if not is_connected(graph):
        raise ValueError("cost exponent is defined for connected graphs")
    return (graph.n_edges - (graph.n_nodes - 1)) / 2


def brute_force_hc(graph: Graph) -> int:
    """Number of distinct undirected Hamiltonian cycles, by path enumeration.

    Rotations and reflections are identified (K4 has 3). Guarded to
    n_nodes <= 12.
    """
    n = graph.n_nodes
    if n > BRUTE_FORCE_MAX_NODES:
        raise GuardExceeded("node count", n, BRUTE_FORCE_MAX_NODES)
    if n < 3:
        return 0
    adjacency: list[set[int]] = [set() for _ in range(n)]
    for u, v in graph.edges:
        adjacency[u].add(v)
        adjacency[v].add(u)
    visited = [False] * n
    visited[0] = True

    def extend(node: int, length: int) -> int:
        if length == n:
            return 1 if 0 in adjacency[node] else 0
        total = 0
        for nb in adjacency[node]:
            if not visited[nb]:
                visited[nb] = True
                total += extend(nb, length + 1)
                visited[nb] = False
        return total

    directed = extend(0, 1)
    return directed // 2


def cycle_graph(n: int) -> Graph:
    return Graph(n, tuple((i, (i + 1) % n) for i in range(n)))


def complete_graph(n: int) -> Graph:
    return Graph(n, tuple((i, j) for i in range(n) for j in range(i + 1, n)))


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph(10, tuple(outer + spokes + inner))


def random_regular_graph(
    n: int, degree: int = 3, seed: int | np.random.Generator = 0, connected: bool = True
) -> Graph:
    """Random simple `degree`-regular graph via stub pairing with rejection."""
    if n * degree % 2 or degree >= n:
        raise ValueError(f"no {degree}-regular graph on {n} nodes")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    stubs = np.repeat(np.arange(n), degree)
    for _ in range(_GENERATOR_ATTEMPTS):
        order = rng.permutation(stubs)
        pairs = order.reshape(-1, 2)
        edges = set()
        simple = True
        for u, v in pairs:
            u, v = int(u), int(v)
            if u == v or (min(u, v), max(u, v)) in edges:
                simple = False
                break
            edges.add((min(u, v), max(u, v)))
        if not simple:
            continue
        graph = Graph(n, tuple(sorted(edges)))
        if not connected or is_connected(graph):
            return graph
    raise GenerationError(f"no simple {degree}-regular graph found for n={n}")


def random_bipartite_regular_graph(
    half: int, degree: int = 3, seed: int | np.random.Generator = 0, connected: bool = True
) -> Graph:
    """Random (degree, degree)-regular bipartite graph as a union of perfect matchings."""
    if degree > half:
        raise ValueError(f"degree {degree} exceeds side size {half}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    for _ in range(_GENERATOR_ATTEMPTS):
        edges = set()
        simple = True
        for _ in range(degree):
            matching = rng.permutation(half)
            for i in range(half):
                edge = (i, half + int(matching[i]))
                if edge in edges:
                    simple = False
                    break
                edges.add(edge)
            if not simple:
                break
        if not simple:
            continue
        graph = Graph(2 * half, tuple(sorted(edges)))
        if not connected or is_connected(graph):
            return graph
    raise GenerationError(f"no simple ({degree},{degree})-bipartite graph for half={half}")


def parse_graph(text: str) -> Graph:
    """Parse the DIMACS-style edge format; inverse of emit_graph."""
    n = None
    m_declared = 0
    edges: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        fields = line.split()
        if fields[0] == "p":
            if n is not None:
                raise ParseError(lineno, "duplicate header")
            if len(fields) != 4 or fields[1] != "edge":
                raise ParseError(lineno, f"malformed header {line!r}, expected 'p edge <n> <m>'")
            try:
                n, m_declared = int(fields[2]), int(fields[3])
            except ValueError:
                raise ParseError(lineno, f"non-integer header field in {line!r}") from None
            if n < 0 or m_declared < 0:
                raise ParseError(lineno, f"header values out of range: n={n} m={m_declared}")
            continue
        if fields[0] == "e":
            if n is None:
                raise ParseError(lineno, "edge line before header")
            if len(fields) != 3:
                raise ParseError(lineno, f"malformed edge line {line!r}")
            try:
                u, v = int(fields[1]), int(fields[2])
            except ValueError:
                raise ParseError(lineno, f"non-integer endpoint in {line!r}") from None
            if not (1 <= u <= n and 1 <= v <= n):
                raise ParseError(lineno, f"endpoint out of range in {line!r} (n = {n})")
            if u == v:
                raise ParseError(lineno, f"self-loop at node {u}")
            pair = (min(u, v) - 1, max(u, v) - 1)
            if pair in edges:
                raise ParseError(lineno, f"duplicate edge {u} {v}")
            edges.append(pair)
            continue
        raise ParseError(lineno, f"unrecognized line {line!r}")
    last_line = max(1, len(text.splitlines()))
    if n is None:
        raise ParseError(last_line, "missing 'p edge' header")
    if len(edges) != m_declared:
        raise ParseError(last_line, f"header declares {m_declared} edges, found {len(edges)}")
    return Graph(n, tuple(edges))


def emit_graph(graph: Graph) -> str:
    """Serialize to the DIMACS-style edge format (1-based endpoints)."""
    lines = [f"p edge {graph.n_nodes} {graph.n_edges}"]
    lines.extend(f"e {u + 1} {v + 1}" for u, v in graph.edges)
    return "\n".join(lines) + "\n"
