"""DSR graphs: construction, cycle enumeration and classification.

Vertices are integers: S-vertex ``i`` is ``i`` and R-vertex ``j`` is
``n_s + j``.  Every edge joins an S-vertex to an R-vertex and is either an
undirected edge (a merged pair of same-signed antiparallel arcs) or a single
arc.  Between a given S/R pair there is at most one arc in each direction,
so cycles are determined by their vertex sequence.
"""

from __future__ import annotations

import enum
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence, Union

import networkx as nx

from .linalg import (
    DimensionError,
    RationalMatrix,
    SignPattern,
    is_p0,
    qclass_membership,
)

__all__ = [
    "Orientation",
    "Symbol",
    "Label",
    "INF",
    "DsrEdge",
    "DsrGraph",
    "graph_from_arcs",
    "build_dsr",
    "build_sr",
    "SStatus",
    "CycleRecord",
    "classify_cycle",
    "enumerate_cycles",
    "enumerate_cycles_bruteforce",
    "odd_intersection",
    "GraphClassification",
    "classify_graph",
    "Walk",
    "is_closed_s_walk",
    "HypothesisError",
    "SteadyP0Certificate",
    "steady_qclass_p0",
]

INF = math.inf


@dataclass(frozen=True, order=True)
class Symbol:
    """Formal positive magnitude of a sign-pattern entry, e.g. ``|A[i,j]|``."""

    name: str

    def __str__(self) -> str:
        return self.name


Label = Union[Fraction, float, Symbol]


def label_str(label: Label) -> str:
    if label == INF:
        return "inf"
    return str(label)


class Orientation(str, enum.Enum):
    S_TO_R = "s->r"
    R_TO_S = "r->s"
    UNDIRECTED = "undirected"


@dataclass(frozen=True)
class DsrEdge:
    s: int
    r: int
    sign: int
    orientation: Orientation
    label: Label

    @property
    def directed(self) -> bool:
        return self.orientation is not Orientation.UNDIRECTED


class HypothesisError(ValueError):
    """A theorem's hypothesis does not hold for the given input."""


@dataclass(frozen=True)
class DsrGraph:
    n_s: int
    n_r: int
    edges: tuple[DsrEdge, ...]
    s_names: tuple[str, ...]
    r_names: tuple[str, ...]
    # arc (u, v) -> edge index; filled in __post_init__
    arcs: dict = field(default=None, compare=False, repr=False)
    # (s, r, orientation) -> edge index
    index: dict = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        arcs = {}
        index = {}
        for e, edge in enumerate(self.edges):
            index[(edge.s, edge.r, edge.orientation)] = e
            s, r = edge.s, self.n_s + edge.r
            if edge.orientation is not Orientation.R_TO_S:
                arcs[(s, r)] = e
            if edge.orientation is not Orientation.S_TO_R:
                arcs[(r, s)] = e
        object.__setattr__(self, "arcs", arcs)
        object.__setattr__(self, "index", index)

    @property
    def n_vertices(self) -> int:
        return self.n_s + self.n_r

    def is_s(self, v: int) -> bool:
        return v < self.n_s

    def s_vertex(self, i: int) -> int:
        return i

    def r_vertex(self, j: int) -> int:
        return self.n_s + j

    def name(self, v: int) -> str:
        return self.s_names[v] if v < self.n_s else self.r_names[v - self.n_s]

    def degree(self, v: int) -> int:
        if v < self.n_s:
            return sum(1 for e in self.edges if e.s == v)
        return sum(1 for e in self.edges if e.r == v - self.n_s)

    def endpoints(self, e: int) -> tuple[int, int]:
        edge = self.edges[e]
        return edge.s, self.n_s + edge.r

    def digraph(self) -> nx.DiGraph:
        D = nx.DiGraph()
        D.add_nodes_from(range(self.n_vertices))
        for (u, v), e in self.arcs.items():
            D.add_edge(u, v, edge=e)
        return D

    def underlying(self) -> nx.MultiGraph:
        """Underlying undirected multigraph, one edge per DSR edge or arc."""
        U = nx.MultiGraph()
        U.add_nodes_from(range(self.n_vertices))
        for e, edge in enumerate(self.edges):
            U.add_edge(edge.s, self.n_s + edge.r, key=e)
        return U

    def edge_between(self, s: int, r: int, orientation: Orientation) -> int | None:
        return self.index.get((s, r, orientation))


def graph_from_arcs(
    n_s: int,
    n_r: int,
    r_to_s: dict[tuple[int, int], tuple[int, Label]],
    s_to_r: dict[tuple[int, int], int],
    s_names: Sequence[str],
    r_names: Sequence[str],
) -> DsrGraph:
    """Merge arc data into a DSR graph.

    ``r_to_s[(s, r)] = (sign, label)`` and ``s_to_r[(s, r)] = sign``.  Arcs
    from S to R carry an infinite label.
    """
    edges = []
    for s, r in sorted(set(r_to_s) | set(s_to_r)):
        a = r_to_s.get((s, r))
        b = s_to_r.get((s, r))
        if a is not None and b is not None and a[0] == b:
            edges.append(DsrEdge(s, r, b, Orientation.UNDIRECTED, a[1]))
            continue
        if a is not None:
            edges.append(DsrEdge(s, r, a[0], Orientation.R_TO_S, a[1]))
        if b is not None:
            edges.append(DsrEdge(s, r, b, Orientation.S_TO_R, INF))
    return DsrGraph(n_s, n_r, tuple(edges), tuple(s_names), tuple(r_names))


def _entry(M, i: int, j: int) -> tuple[int, Label] | None:
    """(sign, magnitude label) of an entry, or None when it is zero."""
    if isinstance(M, SignPattern):
        s = M[i, j]
        return (s, Symbol(f"|a{i + 1},{j + 1}|")) if s else None
    x = M[i, j]
    if not x:
        return None
    return (1 if x > 0 else -1, abs(x))


def _sign_of(M, i: int, j: int) -> int:
    if isinstance(M, SignPattern):
        return M[i, j]
    x = M[i, j]
    return (x > 0) - (x < 0)


def build_dsr(A: RationalMatrix | SignPattern, B: RationalMatrix | SignPattern) -> DsrGraph:
    """The DSR graph of the pair (A, B), A n x m and B m x n.

    For a sign-pattern A the finite labels are independent symbols.
    """
    n, m = A.shape
    if B.shape != (m, n):
        raise DimensionError(f"B must be {m}x{n} for A of shape {A.shape}, got {B.shape}")
    r_to_s = {}
    s_to_r = {}
    for i in range(n):
        for j in range(m):
            ent = _entry(A, i, j)
            if ent is not None:
                r_to_s[(i, j)] = ent
            b = _sign_of(B, j, i)
            if b:
                s_to_r[(i, j)] = b
    return graph_from_arcs(
        n, m, r_to_s, s_to_r,
        [f"S{i + 1}" for i in range(n)],
        [f"R{j + 1}" for j in range(m)],
    )


def build_sr(A: RationalMatrix | SignPattern) -> DsrGraph:
    """The SR graph, i.e. the DSR graph of (A, A^t); every edge is undirected."""
    return build_dsr(A, A.T)


# --- cycles ----------------------------------------------------------------

class SStatus(str, enum.Enum):
    YES = "yes"
    NO = "no"
    INFINITE = "infinite"


def _product(labels: Iterable[Label]) -> tuple[int, int, Counter | None] | None:
    """(numerator, denominator, symbol counts) of a label product; None if infinite."""
    num, den = 1, 1
    syms = None
    for lab in labels:
        kind = type(lab)
        if kind is Fraction or kind is int:
            num *= lab.numerator
            den *= lab.denominator
        elif kind is Symbol:
            if syms is None:
                syms = Counter()
            syms[lab] += 1
        elif lab == INF:
            return None
        else:
            num *= lab.numerator
            den *= lab.denominator
    return num, den, syms


def _alternating_status(labels: Sequence[Label]) -> SStatus:
    odd = _product(labels[0::2])
    even = _product(labels[1::2])
    if odd is None or even is None:
        return SStatus.INFINITE
    # cross-multiplied integers avoid normalising a Fraction per factor
    same = odd[0] * even[1] == even[0] * odd[1] and (odd[2] or None) == (even[2] or None)
    return SStatus.YES if same else SStatus.NO


@dataclass(frozen=True)
class CycleRecord:
    """A simple cycle stored in canonical orientation.

    ``vertices[t] -> vertices[t+1]`` is traversed along ``edges[t]``; the
    closing vertex is not repeated.
    """

    vertices: tuple[int, ...]
    edges: tuple[int, ...]
    sign: int
    parity: int
    s_status: SStatus
    orientations: int

    @property
    def length(self) -> int:
        return len(self.edges)

    @property
    def is_e_cycle(self) -> bool:
        return self.parity == 1

    @property
    def is_s_cycle(self) -> bool:
        return self.s_status is SStatus.YES

    def names(self, G: DsrGraph) -> tuple[str, ...]:
        return tuple(G.name(v) for v in self.vertices + self.vertices[:1])

    def arcs(self) -> list[tuple[int, int]]:
        L = len(self.vertices)
        return [(self.vertices[t], self.vertices[(t + 1) % L]) for t in range(L)]

    def labels(self, G: DsrGraph) -> tuple[Label, ...]:
        return tuple(G.edges[e].label for e in self.edges)

    def as_walk(self) -> "Walk":
        return Walk(self.vertices + self.vertices[:1], self.edges)


def classify_cycle(G: DsrGraph, vertices: Sequence[int], edges: Sequence[int]) -> CycleRecord:
    """Record a cycle, computing sign, parity and s-cycle status."""
    sign = 1
    for e in edges:
        sign *= G.edges[e].sign
    length = len(edges)
    parity = sign * (-1 if (length // 2) % 2 else 1)
    status = _alternating_status([G.edges[e].label for e in edges])
    both = all(not G.edges[e].directed for e in edges) and length > 2
    return CycleRecord(tuple(vertices), tuple(edges), sign, parity, status, 2 if both else 1)


def _canonical(G: DsrGraph, cyc: Sequence[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Rotate/reflect a vertex cycle into canonical form and attach edges."""
    L = len(cyc)
    start = cyc.index(min(cyc))
    fwd = tuple(cyc[(start + t) % L] for t in range(L))
    choices = [fwd]
    if L > 2:
        back = (fwd[0],) + tuple(reversed(fwd[1:]))
        if all((back[t], back[(t + 1) % L]) in G.arcs for t in range(L)):
            choices.append(back)
    best = min(choices, key=lambda c: c[1])
    edges = tuple(G.arcs[(best[t], best[(t + 1) % L])] for t in range(L))
    return best, edges


def _finish(G: DsrGraph, raw: Iterable[Sequence[int]]) -> list[CycleRecord]:
    seen = set()
    out = []
    for cyc in raw:
        verts, edges = _canonical(G, cyc)
        if len(verts) == 2 and edges[0] == edges[1]:
            continue  # one undirected edge walked there and back
        key = frozenset(edges)
        if key in seen:
            continue
        seen.add(key)
        out.append(classify_cycle(G, verts, edges))
    out.sort(key=lambda c: (tuple(sorted(c.vertices)), c.vertices))
    return out


def enumerate_cycles(G: DsrGraph, max_len: int | None = None) -> list[CycleRecord]:
    """All simple cycles of G, each reported once, in deterministic order.

    Uses Johnson's algorithm (via networkx) on the arc digraph; undirected
    edges contribute both arcs and the resulting duplicates are merged.
    """
    D = G.digraph()
    return _finish(G, nx.simple_cycles(D, length_bound=max_len))


def enumerate_cycles_bruteforce(G: DsrGraph, max_len: int | None = None) -> list[CycleRecord]:
    """Reference enumeration by plain depth-first search.

    Each cycle is grown from its smallest vertex through larger vertices
    only.  Slow, but independent of the library routine.
    """
    succ: dict[int, list[int]] = {v: [] for v in range(G.n_vertices)}
    for u, v in G.arcs:
        succ[u].append(v)
    limit = max_len if max_len is not None else G.n_vertices
    raw = []

    def dfs(root: int, path: list[int], on_path: set[int]):
        u = path[-1]
        for v in succ[u]:
            if v == root:
                raw.append(list(path))
            elif v > root and v not in on_path and len(path) < limit:
                path.append(v)
                on_path.add(v)
                dfs(root, path, on_path)
                on_path.discard(v)
                path.pop()

    for root in range(G.n_vertices):
        dfs(root, [root], {root})
    return _finish(G, raw)


# --- odd intersection and graph classes ------------------------------------

def _directions(G: DsrGraph, c: CycleRecord) -> dict[int, tuple[int, int]]:
    return {e: arc for e, arc in zip(c.edges, c.arcs())}


def odd_intersection(c1: CycleRecord, c2: CycleRecord, G: DsrGraph) -> bool:
    """Whether two distinct cycles have odd intersection.

    They must admit orientations agreeing on every shared edge, and each
    connected component of the shared edges must have an odd number of
    edges.  An empty intersection does not count.
    """
    shared = set(c1.edges) & set(c2.edges)
    if not shared or set(c1.edges) == set(c2.edges):
        return False
    d1 = _directions(G, c1)
    d2 = _directions(G, c2)
    same = all(d1[e] == d2[e] for e in shared)
    opposite = all(d1[e] == d2[e][::-1] for e in shared)
    compatible = same or (opposite and (c1.orientations == 2 or c2.orientations == 2))
    if not compatible:
        return False
    H = nx.MultiGraph()
    for e in shared:
        H.add_edge(*G.endpoints(e), key=e)
    return all(
        H.subgraph(comp).number_of_edges() % 2 == 1
        for comp in nx.connected_components(H)
    )


@dataclass(frozen=True)
class GraphClassification:
    odd: bool
    odd_star: bool
    steady: bool
    cycles: tuple[CycleRecord, ...]
    odd_witness: CycleRecord | None = None
    steady_witness: CycleRecord | None = None
    # e-cycles that are not s-cycles
    non_s_e_cycles: tuple[CycleRecord, ...] = ()
    # pairs of e-cycles with odd intersection
    odd_pairs: tuple[tuple[CycleRecord, CycleRecord], ...] = ()
    degree_shortcut: bool = False

    @property
    def odd_star_witness(self):
        if self.non_s_e_cycles:
            return ("not-s-cycle", self.non_s_e_cycles[0])
        if self.odd_pairs:
            return ("odd-intersection", self.odd_pairs[0])
        return None

    @property
    def e_cycles(self) -> tuple[CycleRecord, ...]:
        return tuple(c for c in self.cycles if c.is_e_cycle)


def _odd_intersection_possible(G: DsrGraph) -> bool:
    """Odd intersections need an S-vertex and an R-vertex of degree >= 3."""
    deg = Counter()
    for edge in G.edges:
        deg[edge.s] += 1
        deg[G.n_s + edge.r] += 1
    s_ok = any(deg[v] >= 3 for v in range(G.n_s))
    r_ok = any(deg[v] >= 3 for v in range(G.n_s, G.n_vertices))
    return s_ok and r_ok


def classify_graph(
    G: DsrGraph,
    cycles: Sequence[CycleRecord] | None = None,
    all_witnesses: bool = False,
) -> GraphClassification:
    """Decide whether G is odd, odd* and steady.

    With ``all_witnesses`` every failing e-cycle and every odd-intersecting
    pair is collected; otherwise the scan stops at the first of each.
    """
    if cycles is None:
        cycles = enumerate_cycles(G)
    cycles = tuple(cycles)
    e_cycles = [c for c in cycles if c.is_e_cycle]
    odd_w = e_cycles[0] if e_cycles else None
    steady_w = next((c for c in cycles if not c.is_s_cycle), None)

    non_s = tuple(c for c in e_cycles if not c.is_s_cycle)
    if non_s and not all_witnesses:
        non_s = non_s[:1]
    shortcut = not _odd_intersection_possible(G)
    pairs: list[tuple[CycleRecord, CycleRecord]] = []
    if not shortcut and (all_witnesses or not non_s):
        for c1, c2 in combinations(e_cycles, 2):
            if odd_intersection(c1, c2, G):
                pairs.append((c1, c2))
                if not all_witnesses:
                    break
    return GraphClassification(
        odd=odd_w is None,
        odd_star=not non_s and not pairs,
        steady=steady_w is None,
        cycles=cycles,
        odd_witness=odd_w,
        steady_witness=steady_w,
        non_s_e_cycles=non_s,
        odd_pairs=tuple(pairs),
        degree_shortcut=shortcut,
    )


# --- walks -------------------------------------------------------------------

@dataclass(frozen=True)
class Walk:
    """Alternating vertex/edge sequence; ``vertices`` has one more entry
    than ``edges`` unless the walk is empty, in which case it may hold a
    single vertex or nothing."""

    vertices: tuple[int, ...]
    edges: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.edges)

    @property
    def is_empty(self) -> bool:
        return not self.edges

    @property
    def is_closed(self) -> bool:
        return self.is_empty or self.vertices[0] == self.vertices[-1]

    def sign(self, G: DsrGraph) -> int:
        s = 1
        for e in self.edges:
            s *= G.edges[e].sign
        return s

    def parity(self, G: DsrGraph) -> int:
        return self.sign(G) * (-1 if (self.length // 2) % 2 else 1)

    def names(self, G: DsrGraph) -> tuple[str, ...]:
        return tuple(G.name(v) for v in self.vertices)

    def is_valid(self, G: DsrGraph) -> bool:
        """Consecutive vertices are joined by the stated edge, respecting direction."""
        if self.is_empty:
            return len(self.vertices) <= 1
        if len(self.vertices) != len(self.edges) + 1:
            return False
        return all(
            G.arcs.get((u, v)) == e
            for u, v, e in zip(self.vertices, self.vertices[1:], self.edges)
        )


def is_closed_s_walk(G: DsrGraph, walk: Walk) -> bool:
    """Closed walk whose alternating label products are equal and finite."""
    if not walk.is_closed or walk.length % 2:
        return False
    return _alternating_status([G.edges[e].label for e in walk.edges]) is SStatus.YES


# --- steady qualitative classes ------------------------------------------------

@dataclass(frozen=True)
class SteadyP0Certificate:
    route: str  # "members" or "pattern"
    product_is_p0: bool


def steady_qclass_p0(M: SignPattern, A: RationalMatrix, B: RationalMatrix) -> SteadyP0Certificate:
    """Certify that AB is P0 when A and B^t lie in a class with steady SR graphs.

    When A and B^t are both in Q(M) their own SR graphs are checked with
    exact labels.  Otherwise the pattern's SR graph must be steady with
    independent symbolic labels, which covers the whole of Q0(M).  The
    certificate is cross-checked by exact principal-minor enumeration.
    """
    if not qclass_membership(A, M, closed=True):
        raise HypothesisError("A is not in Q0(M)")
    if not qclass_membership(B.T, M, closed=True):
        raise HypothesisError("B^t is not in Q0(M)")
    if (
        qclass_membership(A, M)
        and qclass_membership(B.T, M)
        and classify_graph(build_sr(A)).steady
        and classify_graph(build_sr(B.T)).steady
    ):
        route = "members"
    elif classify_graph(build_sr(M)).steady:
        route = "pattern"
    else:
        raise HypothesisError("SR graphs are not steady over the class")
    return SteadyP0Certificate(route, bool(is_p0(A @ B)))
