"""Finite oriented multigraphs with loops: statistics, matchings, and the
edge-count bound |EX| <= 2 M(X) + 9 T(X).

Conventions that the bound's source never states but the computations
need: a loop counts twice toward the valence of its vertex, and a loop
is admissible in a matching (the pairwise no-shared-endpoint condition
is vacuous for a single loop) while conflicting with every other edge at
its vertex.  Maximum matchings run through networkx's blossom
implementation after rewriting each loop as a pendant edge to a fresh
vertex, a transformation that preserves the conflict structure exactly;
an exhaustive search provides the independent oracle.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator

import networkx as nx


class GraphError(ValueError):
    """Malformed graph data or violated precondition."""


@dataclass(frozen=True)
class Graph:
    """Oriented multigraph: vertex ids plus (edge id, d0, d1) triples."""

    vertices: tuple
    edges: tuple

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple((e, u, v) for e, u, v in self.edges))
        if not self.vertices:
            raise GraphError("graph needs at least one vertex")
        if len(set(self.vertices)) != len(self.vertices):
            raise GraphError("duplicate vertex ids")
        vset = set(self.vertices)
        seen = set()
        for e, u, v in self.edges:
            if e in seen:
                raise GraphError(f"duplicate edge id {e!r}")
            seen.add(e)
            if u not in vset or v not in vset:
                raise GraphError(f"edge {e!r} references a missing vertex")

    def is_loop(self, eid) -> bool:
        for e, u, v in self.edges:
            if e == eid:
                return u == v
        raise GraphError(f"no edge {eid!r}")

    def edge_count(self) -> int:
        return len(self.edges)

    def to_json(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "edges": [[e, u, v] for e, u, v in self.edges],
        }


@dataclass(frozen=True)
class GraphStats:
    valences: dict
    leaves: int
    euler_char: int
    connected: bool


def graph_stats(g: Graph) -> GraphStats:
    """Valences (loops count twice), leaf count, Euler characteristic,
    connectivity ignoring orientation."""
    val = {v: 0 for v in g.vertices}
    for _, u, v in g.edges:
        val[u] += 1
        val[v] += 1
    parent = {v: v for v in g.vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for _, u, v in g.edges:
        parent[find(u)] = find(v)
    roots = {find(v) for v in g.vertices}
    return GraphStats(
        valences=val,
        leaves=sum(1 for v in g.vertices if val[v] == 1),
        euler_char=len(g.vertices) - len(g.edges),
        connected=len(roots) == 1,
    )


def maximum_matching(g: Graph) -> tuple:
    """Maximum-cardinality conflict-free edge set (edge ids).

    Loops become pendant edges to fresh vertices; parallel edges collapse
    to one representative (a matching cannot use two of them anyway).
    """
    nxg = nx.Graph()
    nxg.add_nodes_from(("v", v) for v in g.vertices)
    rep: dict = {}
    for e, u, v in g.edges:
        if u == v:
            aux = ("loopend", e)
            nxg.add_edge(("v", u), aux)
            rep[frozenset((("v", u), aux))] = e
        else:
            key = frozenset((("v", u), ("v", v)))
            if key not in rep:
                rep[key] = e
                nxg.add_edge(("v", u), ("v", v))
    mates = nx.max_weight_matching(nxg, maxcardinality=True)
    chosen = [rep[frozenset(pair)] for pair in mates]
    return tuple(sorted(chosen, key=str))


def matching_bruteforce(g: Graph) -> tuple:
    """Exhaustive maximum conflict-free edge set; oracle for the blossom
    route.  Limited to 20 edges."""
    if len(g.edges) > 20:
        raise GraphError("too large for brute force")
    edges = list(g.edges)
    best: list = []

    def rec(i: int, used: set, chosen: list):
        nonlocal best
        if len(chosen) + (len(edges) - i) <= len(best):
            return
        if i == len(edges):
            if len(chosen) > len(best):
                best = list(chosen)
            return
        e, u, v = edges[i]
        if u not in used and v not in used:
            rec(i + 1, used | {u, v}, chosen + [e])
        rec(i + 1, used, chosen)

    rec(0, set(), [])
    return tuple(sorted(best, key=str))


@dataclass(frozen=True)
class CountingReport:
    edge_count: int
    matching_size: int
    leaves: int
    euler_char: int
    t_value: int
    bound: int
    holds: bool
    exceptional: bool
    graph: Graph

    def to_json(self) -> dict:
        return {
            "edges": self.edge_count,
            "matching": self.matching_size,
            "leaves": self.leaves,
            "euler_char": self.euler_char,
            "t_value": self.t_value,
            "bound": self.bound,
            "holds": self.holds,
            "exceptional": self.exceptional,
            "graph": self.graph.to_json(),
        }


def counting_report(g: Graph) -> CountingReport:
    """Edge-count bound evaluation.  ``exceptional`` marks the families
    where the bound's segment decomposition degenerates: disconnected,
    edgeless, or every vertex of valence exactly 2."""
    stats = graph_stats(g)
    m = len(maximum_matching(g))
    t = stats.leaves - stats.euler_char
    bound = 2 * m + 9 * t
    exceptional = (
        not stats.connected
        or not g.edges
        or all(val == 2 for val in stats.valences.values())
    )
    return CountingReport(
        edge_count=len(g.edges),
        matching_size=m,
        leaves=stats.leaves,
        euler_char=stats.euler_char,
        t_value=t,
        bound=bound,
        holds=len(g.edges) <= bound,
        exceptional=exceptional,
        graph=g,
    )


def valence_two_segment_bound(g: Graph) -> int:
    """Sum of floor(|ES_i| / 2) over components S_i of the subgraph
    spanned by valence-2 vertices (a lower bound for M(X) on the
    non-exceptional family)."""
    stats = graph_stats(g)
    two = {v for v in g.vertices if stats.valences[v] == 2}
    parent = {v: v for v in two}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    comp_edges: dict = {}
    inner = [(e, u, v) for e, u, v in g.edges if u in two and v in two]
    for _, u, v in inner:
        parent[find(u)] = find(v)
    for _, u, v in inner:
        comp_edges[find(u)] = comp_edges.get(find(u), 0) + 1
    return sum(k // 2 for k in comp_edges.values())


def suppressed_graph(g: Graph) -> Graph:
    """Smooth every maximal valence-2 chain into a single edge.

    Requires at least one vertex of valence != 2; loops arising from
    chains that return to their start are retained.
    """
    stats = graph_stats(g)
    keep = [v for v in g.vertices if stats.valences[v] != 2]
    if not keep:
        raise GraphError("all valences are 2; suppression undefined")
    slots: dict = {v: [] for v in g.vertices}
    for e, u, v in g.edges:
        slots[u].append((e, 0))
        slots[v].append((e, 1))
    endpoint = {}
    for e, u, v in g.edges:
        endpoint[(e, 0)] = u
        endpoint[(e, 1)] = v
    keep_set = set(keep)
    used: set = set()
    new_edges = []
    counter = 0
    for v in keep:
        for slot in slots[v]:
            if slot in used:
                continue
            used.add(slot)
            e, k = slot
            other = (e, 1 - k)
            w = endpoint[other]
            while w not in keep_set:
                used.add(other)
                nxt = [s for s in slots[w] if s != other]
                assert len(nxt) == 1, "valence-2 vertex must have exactly one other slot"
                used.add(nxt[0])
                e2, k2 = nxt[0]
                other = (e2, 1 - k2)
                w = endpoint[other]
            used.add(other)
            new_edges.append((f"y{counter}", v, w))
            counter += 1
    for vid in g.vertices:
        if vid not in keep_set and any(s not in used for s in slots[vid]):
            raise GraphError("valence-2 cycle component detached from the rest")
    return Graph(tuple(keep), tuple(new_edges))


# -- canonical labeling and isomorph-free enumeration ---------------------


def _refine(n: int, adj, loops, colors):
    """Iterated neighborhood refinement; permutation-invariant colors."""
    while True:
        sigs = []
        for v in range(n):
            neigh = tuple(sorted((adj[v][w], colors[w]) for w in range(n) if adj[v][w]))
            sigs.append((colors[v], loops[v], neigh))
        palette = sorted(set(sigs))
        new = tuple(palette.index(s) for s in sigs)
        if new == colors:
            return colors
        colors = new


def _leaf_key(n: int, adj, loops, colors):
    order = sorted(range(n), key=lambda v: colors[v])
    pos = {v: i for i, v in enumerate(order)}
    edges = []
    for u in range(n):
        for v in range(u + 1, n):
            if adj[u][v]:
                a, b = sorted((pos[u], pos[v]))
                edges.append((a, b, adj[u][v]))
    edges.sort()
    loop_t = tuple(loops[v] for v in order)
    return (n, loop_t, tuple(edges))


def _canon_key(n: int, adj, loops, colors=None):
    """Canonical form by individualisation-refinement (min over leaves)."""
    colors = _refine(n, adj, loops, colors or tuple([0] * n))
    counts: dict = {}
    for c in colors:
        counts[c] = counts.get(c, 0) + 1
    target = None
    for c in sorted(counts):
        if counts[c] > 1:
            target = c
            break
    if target is None:
        return _leaf_key(n, adj, loops, colors)
    best = None
    fresh = max(colors) + 1
    for v in range(n):
        if colors[v] != target:
            continue
        branched = tuple(fresh if u == v else colors[u] for u in range(n))
        key = _canon_key(n, adj, loops, branched)
        if best is None or key < best:
            best = key
    return best


def _color_preserving_perms(n: int, colors) -> Iterator[tuple]:
    classes: dict = {}
    for v, c in enumerate(colors):
        classes.setdefault(c, []).append(v)
    blocks = [classes[c] for c in sorted(classes)]
    total = 1
    for b in blocks:
        f = 1
        for i in range(2, len(b) + 1):
            f *= i
        total *= f
    if total > 2_000_000:
        raise GraphError("automorphism scan too large")
    for perm_parts in itertools.product(*(itertools.permutations(b) for b in blocks)):
        perm = [0] * n
        for block, images in zip(blocks, perm_parts):
            for src, dst in zip(block, images):
                perm[src] = dst
        yield tuple(perm)


def _automorphisms(n: int, adj, loops) -> list[tuple]:
    colors = _refine(n, adj, loops, tuple([0] * n))
    auts = []
    for perm in _color_preserving_perms(n, colors):
        ok = all(loops[perm[v]] == loops[v] for v in range(n))
        if ok:
            for u in range(n):
                for v in range(u, n):
                    if adj[u][v] != adj[perm[u]][perm[v]]:
                        ok = False
                        break
                if not ok:
                    break
        if ok:
            auts.append(perm)
    return auts


def canonical_form(g: Graph):
    """Hashable canonical key; equal exactly for isomorphic multigraphs."""
    idx = {v: i for i, v in enumerate(g.vertices)}
    n = len(g.vertices)
    adj = [[0] * n for _ in range(n)]
    loops = [0] * n
    for _, u, v in g.edges:
        if u == v:
            loops[idx[u]] += 1
        else:
            a, b = idx[u], idx[v]
            adj[a][b] += 1
            adj[b][a] += 1
    return _canon_key(n, adj, tuple(loops))


def _connected_simple_graphs(max_edges: int, max_vertices: int):
    """Connected loopless simple graphs up to isomorphism, as canonical
    (n, edge tuple) states, grouped by edge count."""
    levels: list[set] = [{(1, ())}]
    for m in range(1, max_edges + 1):
        nxt: set = set()
        for n, edges in levels[m - 1]:
            present = set(edges)
            adj = [[0] * (n + 1) for _ in range(n + 1)]
            for u, v in edges:
                adj[u][v] = adj[v][u] = 1
            for u in range(n):
                for v in range(u + 1, n):
                    if (u, v) not in present:
                        key = _canon_key(
                            n,
                            [row[:n] for row in _with_edge(adj, u, v, n)],
                            tuple([0] * n),
                        )
                        nxt.add((key[0], tuple((a, b) for a, b, _ in key[2])))
            if n < max_vertices:
                for u in range(n):
                    key = _canon_key(
                        n + 1,
                        _with_edge(adj, u, n, n + 1),
                        tuple([0] * (n + 1)),
                    )
                    nxt.add((key[0], tuple((a, b) for a, b, _ in key[2])))
        levels.append(nxt)
    return levels


def _with_edge(adj, u, v, n):
    new = [row[:n] for row in adj[:n]]
    while len(new) < n:
        new.append([0] * n)
    new[u][v] += 1
    new[v][u] += 1
    return new


def _compositions(total: int, parts: int, minimum: int) -> Iterator[tuple]:
    """All tuples of length ``parts`` with entries >= minimum summing to total."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(minimum, total - minimum * (parts - 1) + 1):
        for rest in _compositions(total - first, parts - 1, minimum):
            yield (first,) + rest


def enumerate_connected_multigraphs(max_edges: int, max_vertices: int) -> Iterator[Graph]:
    """All connected multigraphs with loops, up to isomorphism.

    Realised as isomorph-free connected simple graphs decorated with edge
    multiplicities and per-vertex loop counts, deduplicated by
    automorphism orbits of the decorations.
    """
    if max_edges > 8:
        raise GraphError("exhaustive enumeration capped at 8 edges")
    if max_vertices < 1:
        raise GraphError("need at least one vertex")
    levels = _connected_simple_graphs(max_edges, max_vertices)
    for k in range(0, max_edges + 1):
        for n, edges in sorted(levels[k]):
            if n > max_vertices:
                continue
            adj = [[0] * n for _ in range(n)]
            for u, v in edges:
                adj[u][v] = adj[v][u] = 1
            auts = _automorphisms(n, adj, tuple([0] * n))
            edge_list = sorted(edges)
            edge_index = {e: i for i, e in enumerate(edge_list)}
            for total in range(k, max_edges + 1):
                for mults in _compositions(total, k, 1) if k else ([()] if total == 0 else []):
                    loop_budget = max_edges - total
                    for loop_total in range(0, loop_budget + 1):
                        for loops in _compositions(loop_total, n, 0):
                            if not _decoration_is_canonical(auts, edge_list, edge_index, mults, loops):
                                continue
                            yield _build_decorated(n, edge_list, mults, loops)


def _decoration_is_canonical(auts, edge_list, edge_index, mults, loops) -> bool:
    key = (mults, loops)
    for perm in auts:
        p_m = [0] * len(edge_list)
        for i, (u, v) in enumerate(edge_list):
            a, b = sorted((perm[u], perm[v]))
            p_m[edge_index[(a, b)]] = mults[i]
        p_l = [0] * len(loops)
        for v, c in enumerate(loops):
            p_l[perm[v]] = c
        if (tuple(p_m), tuple(p_l)) < key:
            return False
    return True


def _build_decorated(n, edge_list, mults, loops) -> Graph:
    edges = []
    eid = 0
    for (u, v), m in zip(edge_list, mults):
        for _ in range(m):
            edges.append((eid, u, v))
            eid += 1
    for v, c in enumerate(loops):
        for _ in range(c):
            edges.append((eid, v, v))
            eid += 1
    return Graph(tuple(range(n)), tuple(edges))


def random_multigraph(rng, max_edges: int, max_vertices: int = 8) -> Graph:
    n = rng.randint(1, max_vertices)
    m = rng.randint(0, max_edges)
    edges = []
    for i in range(m):
        edges.append((i, rng.randrange(n), rng.randrange(n)))
    return Graph(tuple(range(n)), tuple(edges))


@dataclass
class CountingVerification:
    total: int = 0
    violations: list = field(default_factory=list)
    exceptional_findings: list = field(default_factory=list)
    intermediate_failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations and not self.intermediate_failures

    def to_json(self) -> dict:
        return {
            "graphs_checked": self.total,
            "violations": [r.to_json() for r in self.violations],
            "exceptional_findings": [r.to_json() for r in self.exceptional_findings],
            "intermediate_failures": [r.to_json() for r in self.intermediate_failures],
            "ok": self.ok,
        }


def verify_counting_lemma(max_edges: int, max_vertices: int | None = None) -> CountingVerification:
    """Exhaustively evaluate the bound on connected multigraphs.

    Violations inside the exceptional family (odd cycles and friends) are
    findings, not failures; the proof intermediates M(X) >= sum
    floor(|ES_i|/2) and |EY| <= 3 T(Y) are asserted on the
    non-exceptional graphs with at least one edge.
    """
    if max_vertices is None:
        max_vertices = max_edges + 1
    out = CountingVerification()
    for g in enumerate_connected_multigraphs(max_edges, max_vertices):
        rep = counting_report(g)
        out.total += 1
        if not rep.holds:
            if rep.exceptional:
                out.exceptional_findings.append(rep)
            else:
                out.violations.append(rep)
        if not rep.exceptional and g.edges:
            if rep.matching_size < valence_two_segment_bound(g):
                out.intermediate_failures.append(rep)
            y = suppressed_graph(g)
            ys = graph_stats(y)
            t_y = ys.leaves - ys.euler_char
            if len(y.edges) > 3 * t_y:
                out.intermediate_failures.append(rep)
    return out
