"""DSR² graphs and the projection of their cycles onto the DSR graph.

S-vertex ``ij`` of the DSR² graph is the pair (i, j), i < j, at its
lexicographic rank; R-vertex ``k^l`` sits at index ``k*n + l``.  An edge
(ij, k^l) can only exist when l is one of i, j.  It projects onto the base
edge (S_x, R_k), where x is the other index of the pair, keeping direction
and label; its sign flips when l is the larger index.
"""

from __future__ import annotations

import enum
import functools
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from .compounds import pair_name, pair_rank, pairs
from .dsr import (
    CycleRecord,
    DsrGraph,
    Walk,
    _canonical,
    _entry,
    _sign_of,
    build_dsr,
    classify_cycle,
    enumerate_cycles,
    graph_from_arcs,
    is_closed_s_walk,
)
from .linalg import DimensionError, LinalgError, RationalMatrix, SignPattern

__all__ = [
    "Dsr2Graph",
    "build_dsr2",
    "project_edge",
    "Kind",
    "ProjectionResult",
    "project_cycle",
    "count_inversions",
    "inversion_pairs",
    "parity_relation_check",
    "s_cycle_projection_check",
    "external_liftings",
    "Liftings",
    "liftings_of",
    "remove_pendant_r",
    "pendant_columns",
    "prune_acyclic",
]


@functools.lru_cache(maxsize=None)
def _pair_table(n: int) -> tuple[tuple[int, int], ...]:
    return tuple(pairs(n))


@dataclass(frozen=True)
class Dsr2Graph:
    graph: DsrGraph
    base: DsrGraph
    n: int
    m: int

    def s_pair(self, v: int) -> tuple[int, int]:
        """Index pair of an S-vertex."""
        return _pair_table(self.n)[v]

    def r_pair(self, v: int) -> tuple[int, int]:
        """(k, l) of an R-vertex given as a graph vertex id."""
        return divmod(v - self.graph.n_s, self.n)

    def name(self, v: int) -> str:
        return self.graph.name(v)

    @functools.cached_property
    def edge_splits(self) -> tuple[tuple[int, int, int], ...]:
        """(x, k, l) per edge (ij, k^l), x being the index of ij other than l."""
        out = []
        for edge in self.graph.edges:
            i, j = self.s_pair(edge.s)
            k, l = divmod(edge.r, self.n)
            out.append(((j if l == i else i), k, l))
        return tuple(out)

    @functools.cached_property
    def edge_images(self) -> tuple[int, ...]:
        """Base edge each edge projects onto."""
        out = []
        for edge, (x, k, _) in zip(self.graph.edges, self.edge_splits):
            base_e = self.base.edge_between(x, k, edge.orientation)
            if base_e is None:  # cannot happen for graphs built by build_dsr2
                raise LinalgError(f"edge ({x}, {k}) has no image in the base graph")
            out.append(base_e)
        return tuple(out)


def build_dsr2(A: RationalMatrix | SignPattern, B: RationalMatrix | SignPattern) -> Dsr2Graph:
    """DSR² graph of (A, B), built entry by entry from A and B.

    Labels are shared with the base DSR graph, so symbolic labels of a sign
    pattern carry over unchanged.  For numeric input the result has the
    same edges as ``build_dsr(lbar(A), lunder(B))``.
    """
    n, m = A.shape
    if B.shape != (m, n):
        raise DimensionError(f"B must be {m}x{n} for A of shape {A.shape}, got {B.shape}")
    if n < 2:
        raise DimensionError("DSR² graph needs n >= 2")
    r_to_s = {}
    s_to_r = {}
    for s, (i, j) in enumerate(pairs(n)):
        for k in range(m):
            ri, rj = k * n + i, k * n + j
            # R-vertex k^i: lbar entry A[j,k], lunder entry B[k,j]
            ent = _entry(A, j, k)
            if ent is not None:
                r_to_s[(s, ri)] = ent
            b = _sign_of(B, k, j)
            if b:
                s_to_r[(s, ri)] = b
            # R-vertex k^j: lbar entry -A[i,k], lunder entry -B[k,i]
            ent = _entry(A, i, k)
            if ent is not None:
                r_to_s[(s, rj)] = (-ent[0], ent[1])
            b = _sign_of(B, k, i)
            if b:
                s_to_r[(s, rj)] = -b
    graph = graph_from_arcs(
        len(pairs(n)), m * n, r_to_s, s_to_r,
        [pair_name(i, j) for i, j in pairs(n)],
        [f"{k + 1}^{l + 1}" for k in range(m) for l in range(n)],
    )
    return Dsr2Graph(graph, build_dsr(A, B), n, m)


def _split_edge(G2: Dsr2Graph, e: int) -> tuple[int, int, int]:
    """(x, k, l) for edge (ij, k^l): x is the index of ij other than l."""
    return G2.edge_splits[e]


def project_edge(G2: Dsr2Graph, e: int) -> int:
    """Index of the base edge that DSR² edge ``e`` projects onto."""
    return G2.edge_images[e]


class Kind(str, enum.Enum):
    DIRECT = "direct"
    TWISTED = "twisted"


@dataclass(frozen=True)
class ProjectionResult:
    kind: Kind
    w1: Walk  # starts at S_i for the first S-vertex ij, i < j
    w2: Walk  # starts at S_j
    inversions: int

    @property
    def walk(self) -> Walk | None:
        """The single closed walk pi(C), when there is one.

        Twisted cycles give w1 followed by w2.  A direct cycle with one empty
        side gives the nonempty side.  Otherwise None.
        """
        if self.kind is Kind.TWISTED:
            return Walk(self.w1.vertices + self.w2.vertices[1:], self.w1.edges + self.w2.edges)
        if self.w1.is_empty:
            return self.w2
        if self.w2.is_empty:
            return self.w1
        return None

    def walks(self) -> tuple[Walk, ...]:
        if self.kind is Kind.TWISTED:
            return (self.walk,)
        return (self.w1, self.w2)

    def edge_multiset(self) -> Counter:
        return Counter(self.w1.edges + self.w2.edges)


def project_cycle(G2: Dsr2Graph, C: CycleRecord, start: int = 0) -> ProjectionResult:
    """Project a DSR² cycle by the inductive two-walk construction.

    Each S -> R -> S step of C maps to a two-edge base walk from S_x to S_y
    (x, y the indices not shared with the R-vertex) and is appended to
    whichever of the two walks currently ends at S_x.  ``start`` picks the
    position of the S-vertex the construction begins from.
    """
    G = G2.graph
    verts = C.vertices
    if not G.is_s(verts[start % len(verts)]):
        raise ValueError("projection must start at an S-vertex")
    L = len(verts)
    order = [(start + t) % L for t in range(L)]
    vs = [verts[t] for t in order]
    es = [C.edges[t] for t in order]

    i0, j0 = G2.s_pair(vs[0])
    walks = {0: ([i0], []), 1: ([j0], [])}  # vertex ids, edge ids
    inversions = 0
    for step in range(0, L, 2):
        e_in, e_out = es[step], es[step + 1]
        x, k, l = _split_edge(G2, e_in)
        y, k2, l2 = _split_edge(G2, e_out)
        assert (k, l) == (k2, l2)
        if (l - x) * (l - y) < 0:
            inversions += 1
        side = 0 if walks[0][0][-1] == x else 1
        wv, we = walks[side]
        assert wv[-1] == x
        wv += [G2.base.r_vertex(k), y]
        we += [project_edge(G2, e_in), project_edge(G2, e_out)]

    def as_walk(side: int) -> Walk:
        wv, we = walks[side]
        return Walk(tuple(wv), tuple(we))

    w1, w2 = as_walk(0), as_walk(1)
    closed = w1.vertices[-1] == i0 and w2.vertices[-1] == j0
    kind = Kind.DIRECT if closed else Kind.TWISTED
    return ProjectionResult(kind, w1, w2, inversions)


def _inversion_positions(G2: Dsr2Graph, C: CycleRecord) -> list[int]:
    """Positions t of R-vertices of C whose neighbouring S-vertices form an inversion."""
    G, splits = G2.graph, G2.edge_splits
    out = []
    for t, v in enumerate(C.vertices):
        if G.is_s(v):
            continue
        x, _, l = splits[C.edges[t - 1]]
        y = splits[C.edges[t]][0]
        if (l - x) * (l - y) < 0:
            out.append(t)
    return out


def inversion_pairs(G2: Dsr2Graph, C: CycleRecord) -> list[tuple[str, str]]:
    """Consecutive S-vertex pairs of C that form inversions, by name."""
    G, L = G2.graph, len(C.vertices)
    return [(G.name(C.vertices[t - 1]), G.name(C.vertices[(t + 1) % L]))
            for t in _inversion_positions(G2, C)]


def count_inversions(G2: Dsr2Graph, C: CycleRecord) -> int:
    return len(_inversion_positions(G2, C))


def parity_relation_check(G2: Dsr2Graph, C: CycleRecord, proj: ProjectionResult | None = None) -> bool:
    """P(C) = P(W')P(W'') for direct cycles and -P(pi(C)) for twisted ones."""
    proj = proj or project_cycle(G2, C)
    base = G2.base
    if proj.kind is Kind.DIRECT:
        return C.parity == proj.w1.parity(base) * proj.w2.parity(base)
    return C.parity == -proj.walk.parity(base)


def s_cycle_projection_check(G2: Dsr2Graph, C: CycleRecord, proj: ProjectionResult | None = None) -> bool:
    """Twisted: C is an s-cycle iff pi(C) is an s-walk.
    Direct: both sides s-walks implies C is an s-cycle."""
    proj = proj or project_cycle(G2, C)
    base = G2.base
    if proj.kind is Kind.TWISTED:
        return C.is_s_cycle == is_closed_s_walk(base, proj.walk)
    sides = is_closed_s_walk(base, proj.w1) and is_closed_s_walk(base, proj.w2)
    return C.is_s_cycle or not sides


def _s_indices(G: DsrGraph, W: CycleRecord) -> list[int]:
    return [v for v in W.vertices if G.is_s(v)]


def external_liftings(W: CycleRecord, G2: Dsr2Graph) -> list[CycleRecord]:
    """Cycles (i1p, j1^p, ..., iNp, jN^p) of G2 lying over the base cycle W."""
    G, base, n = G2.graph, G2.base, G2.n
    used = set(_s_indices(base, W))
    out = []
    for p in range(n):
        if p in used:
            continue
        lifted = []
        for v in W.vertices:
            if base.is_s(v):
                lifted.append(pair_rank(v, p, n))
            else:
                lifted.append(G.n_s + (v - base.n_s) * n + p)
        L = len(lifted)
        if all((lifted[t], lifted[(t + 1) % L]) in G.arcs for t in range(L)):
            verts, edges = _canonical(G, lifted)
            out.append(classify_cycle(G, verts, edges))
    return out


@dataclass(frozen=True)
class Liftings:
    external: tuple[CycleRecord, ...]
    internal: tuple[CycleRecord, ...]


def _projects_to(proj: ProjectionResult, W: CycleRecord) -> bool:
    walk = proj.walk
    if walk is None or walk.length != W.length:
        return False
    return Counter(walk.edges) == Counter(W.edges)


def liftings_of(
    W: CycleRecord, G2: Dsr2Graph, cycles: Sequence[CycleRecord] | None = None
) -> Liftings:
    """All cycles of G2 projecting onto W, split into external and internal."""
    if cycles is None:
        cycles = enumerate_cycles(G2.graph, max_len=2 * G2.graph.n_s)
    ext, inn = [], []
    for C in cycles:
        proj = project_cycle(G2, C)
        if not _projects_to(proj, W):
            continue
        (inn if proj.kind is Kind.TWISTED else ext).append(C)
    return Liftings(tuple(ext), tuple(inn))


def pendant_columns(A: RationalMatrix | SignPattern) -> list[int]:
    """Columns with exactly one nonzero entry (R-vertices of degree one)."""
    n, m = A.shape
    return [k for k in range(m) if sum(1 for i in range(n) if A[i, k]) == 1]


def remove_pendant_r(A: RationalMatrix | SignPattern, col: int):
    """Delete a column holding a single nonzero entry."""
    n, m = A.shape
    if not 0 <= col < m:
        raise DimensionError(f"column {col} out of range")
    if sum(1 for i in range(n) if A[i, col]) != 1:
        raise LinalgError(f"column {col} does not have exactly one nonzero entry")
    if m < 2:
        raise LinalgError("cannot remove the only column")
    keep = [k for k in range(m) if k != col]
    return A.submatrix(range(n), keep)


def prune_acyclic(G: DsrGraph) -> DsrGraph:
    """Subgraph of edges lying on some cycle, without isolated vertices.

    For display only; vertices keep their names but are renumbered.
    """
    on_cycle = set()
    for c in enumerate_cycles(G):
        on_cycle.update(c.edges)
    kept = [G.edges[e] for e in sorted(on_cycle)]
    s_keep = sorted({e.s for e in kept})
    r_keep = sorted({e.r for e in kept})
    s_map = {s: t for t, s in enumerate(s_keep)}
    r_map = {r: t for t, r in enumerate(r_keep)}
    edges = tuple(
        type(e)(s_map[e.s], r_map[e.r], e.sign, e.orientation, e.label) for e in kept
    )
    return DsrGraph(
        len(s_keep), len(r_keep), edges,
        tuple(G.s_names[s] for s in s_keep),
        tuple(G.r_names[r] for r in r_keep),
    )
