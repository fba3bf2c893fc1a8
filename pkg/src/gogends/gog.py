"""Graphs of finite p-groups.

Covers structural validation (reduced/connected), collapsing of
isomorphism edges, the fundamental-group presentation over a BFS
spanning tree, the mod-p first Betti number b1 = dim Hom(G, F_p), and
the search for a finite p-group quotient in which every vertex group
injects (the finite-level properness certificate).

b1 is computed from the abelianised relator matrix mod p.  Vertex-group
relators are the generator rows of the multiplication table,
s * word(x) * word(sx)^-1, a guaranteed-valid (if redundant) finite
presentation for any table group.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .fpcore import (
    FiniteGroup,
    GroupHom,
    ImagesInconsistent,
    catalog_groups,
    hom_from_images,
    is_injective,
    subgroup_as_group,
    subgroup_generated,
)
from .fplinalg import FpMatrix, rank
from .graphs import Graph, graph_stats


class GogError(ValueError):
    """Structural violation in a graph of groups."""


class NotFoundWithinBound(GogError):
    """No proper quotient witness exists within the order bound."""


class NonIntegral(GogError):
    """Euler-characteristic rank formula failed to produce an integer."""


@dataclass
class GraphOfGroups:
    graph: Graph
    prime: int
    vertex_groups: dict
    edge_groups: dict
    inj0: dict
    inj1: dict

    def __post_init__(self):
        vset = set(self.graph.vertices)
        if set(self.vertex_groups) != vset:
            raise GogError("vertex groups must cover exactly the vertex set")
        eset = {e for e, _, _ in self.graph.edges}
        for name, mapping in (("edge_groups", self.edge_groups), ("inj0", self.inj0), ("inj1", self.inj1)):
            if set(mapping) != eset:
                raise GogError(f"{name} must cover exactly the edge set")
        for grp in list(self.vertex_groups.values()) + list(self.edge_groups.values()):
            if grp.prime != self.prime:
                raise GogError("all groups must share the prime")
        for eid, u, v in self.graph.edges:
            for inj, target in ((self.inj0[eid], u), (self.inj1[eid], v)):
                if inj.source != self.edge_groups[eid]:
                    raise GogError(f"edge {eid!r}: map source is not the edge group")
                if inj.target != self.vertex_groups[target]:
                    raise GogError(f"edge {eid!r}: map target is not the endpoint group")
                if not is_injective(inj):
                    raise GogError(f"edge {eid!r}: edge map is not injective")

    def endpoints(self, eid):
        for e, u, v in self.graph.edges:
            if e == eid:
                return u, v
        raise GogError(f"no edge {eid!r}")


@dataclass(frozen=True)
class ValidationReport:
    reduced: bool
    connected: bool

    def to_json(self) -> dict:
        return {"reduced": self.reduced, "connected": self.connected}


def validate(gog: GraphOfGroups) -> ValidationReport:
    """Reduced means no non-loop edge map is bijective."""
    reduced = True
    for eid, u, v in gog.graph.edges:
        if u == v:
            continue
        ge = gog.edge_groups[eid]
        if ge.order == gog.vertex_groups[u].order or ge.order == gog.vertex_groups[v].order:
            reduced = False
    return ValidationReport(reduced=reduced, connected=graph_stats(gog.graph).connected)


def _inverse_hom(hom: GroupHom) -> GroupHom:
    if len(set(hom.image)) != hom.target.order or hom.source.order != hom.target.order:
        raise GogError("homomorphism is not bijective")
    inverse = [0] * hom.target.order
    for x, y in enumerate(hom.image):
        inverse[y] = x
    return GroupHom(hom.target, hom.source, tuple(inverse))


def collapse_iso_edge(gog: GraphOfGroups, eid) -> GraphOfGroups:
    """Contract a non-loop edge whose map to one endpoint is bijective,
    rerouting the neighbouring edge maps through the isomorphism."""
    u, v = gog.endpoints(eid)
    if u == v:
        raise GogError("cannot collapse a loop")
    ge = gog.edge_groups[eid]
    if ge.order == gog.vertex_groups[v].order:
        gone, keep = v, u
        into_keep = gog.inj0[eid].compose(_inverse_hom(gog.inj1[eid]))
    elif ge.order == gog.vertex_groups[u].order:
        gone, keep = u, v
        into_keep = gog.inj1[eid].compose(_inverse_hom(gog.inj0[eid]))
    else:
        raise GogError("neither edge map is an isomorphism")

    new_vertices = tuple(x for x in gog.graph.vertices if x != gone)
    new_edges = []
    inj0, inj1 = {}, {}
    for e, a, b in gog.graph.edges:
        if e == eid:
            continue
        h0, h1 = gog.inj0[e], gog.inj1[e]
        if a == gone:
            a, h0 = keep, into_keep.compose(h0)
        if b == gone:
            b, h1 = keep, into_keep.compose(h1)
        new_edges.append((e, a, b))
        inj0[e], inj1[e] = h0, h1
    return GraphOfGroups(
        graph=Graph(new_vertices, tuple(new_edges)),
        prime=gog.prime,
        vertex_groups={x: g for x, g in gog.vertex_groups.items() if x != gone},
        edge_groups={e: g for e, g in gog.edge_groups.items() if e != eid},
        inj0=inj0,
        inj1=inj1,
    )


def reduce_gog(gog: GraphOfGroups) -> GraphOfGroups:
    """Collapse isomorphism edges until the graph of groups is reduced."""
    while True:
        for eid, u, v in gog.graph.edges:
            if u == v:
                continue
            ge = gog.edge_groups[eid]
            if ge.order in (gog.vertex_groups[u].order, gog.vertex_groups[v].order):
                gog = collapse_iso_edge(gog, eid)
                break
        else:
            return gog


def _bfs_tree(graph: Graph):
    """Deterministic spanning tree: (vertex order, tree edge triples,
    non-tree edge ids).  Tree triples are (eid, parent, child)."""
    adjacency: dict = {v: [] for v in graph.vertices}
    for e, u, v in graph.edges:
        adjacency[u].append((e, v))
        if u != v:
            adjacency[v].append((e, u))
    root = graph.vertices[0]
    order = [root]
    seen = {root}
    tree = []
    tree_ids = set()
    queue = [root]
    while queue:
        x = queue.pop(0)
        for e, w in adjacency[x]:
            if w not in seen:
                seen.add(w)
                order.append(w)
                tree.append((e, x, w))
                tree_ids.add(e)
                queue.append(w)
    if len(seen) != len(graph.vertices):
        raise GogError("graph is not connected")
    nontree = [e for e, _, _ in graph.edges if e not in tree_ids]
    return order, tree, nontree


def _free_reduce(word):
    out = []
    for sym, exp in word:
        if out and out[-1][0] == sym and out[-1][1] == -exp:
            out.pop()
        else:
            out.append((sym, exp))
    return tuple(out)


def _invert_word(word):
    return tuple((sym, -exp) for sym, exp in reversed(word))


@dataclass(frozen=True)
class Presentation:
    symbols: tuple
    kinds: dict
    relators: tuple
    tree: tuple

    def generator_count(self) -> int:
        return len(self.symbols)


def vertex_symbol(vid, gen_idx) -> str:
    return f"g:{vid}:{gen_idx}"


def stable_symbol(eid) -> str:
    return f"t:{eid}"


def presentation(gog: GraphOfGroups) -> Presentation:
    """Generators: vertex-group generators plus one stable letter per
    edge; relators: vertex table relators, edge conjugation relators,
    and killers for the spanning-tree letters."""
    _, tree, _ = _bfs_tree(gog.graph)
    tree_ids = tuple(e for e, _, _ in tree)
    symbols = []
    kinds: dict = {}
    for vid in gog.graph.vertices:
        for gi in range(len(gog.vertex_groups[vid].generators)):
            sym = vertex_symbol(vid, gi)
            symbols.append(sym)
            kinds[sym] = ("v", vid, gi)
    for eid, _, _ in gog.graph.edges:
        sym = stable_symbol(eid)
        symbols.append(sym)
        kinds[sym] = ("t", eid)

    def group_word(vid, element):
        grp = gog.vertex_groups[vid]
        return tuple((vertex_symbol(vid, gi), 1) for gi in grp.words[element])

    relators = []
    for vid in gog.graph.vertices:
        grp = gog.vertex_groups[vid]
        for gi, g in enumerate(grp.generators):
            for x in grp.elements():
                sx = int(grp.mult[g, x])
                word = ((vertex_symbol(vid, gi), 1),) + group_word(vid, x) + _invert_word(group_word(vid, sx))
                word = _free_reduce(word)
                if word:
                    relators.append(word)
    for eid, u, v in gog.graph.edges:
        ge = gog.edge_groups[eid]
        t = stable_symbol(eid)
        for g in ge.generators:
            a = group_word(u, gog.inj0[eid].image[g])
            b = group_word(v, gog.inj1[eid].image[g])
            word = _free_reduce(a + ((t, 1),) + _invert_word(b) + ((t, -1),))
            if word:
                relators.append(word)
    for eid in tree_ids:
        relators.append(((stable_symbol(eid), 1),))
    return Presentation(tuple(symbols), kinds, tuple(relators), tree_ids)


def b1(gog: GraphOfGroups) -> int:
    """dim_{F_p} Hom(fundamental group, F_p): generator count minus the
    mod-p rank of the abelianised relator matrix."""
    pres = presentation(gog)
    index = {sym: i for i, sym in enumerate(pres.symbols)}
    rows = np.zeros((len(pres.relators), len(pres.symbols)), dtype=np.int64)
    for ri, word in enumerate(pres.relators):
        for sym, exp in word:
            rows[ri, index[sym]] += exp
    mat = FpMatrix(rows % gog.prime, gog.prime)
    return len(pres.symbols) - rank(mat)


def leaf_bound(gog: GraphOfGroups) -> int:
    """#leaves + 1 - Euler characteristic; a lower bound for b1."""
    stats = graph_stats(gog.graph)
    if not stats.connected:
        raise GogError("graph is not connected")
    return stats.leaves + 1 - stats.euler_char


@dataclass
class ProperWitness:
    """Finite quotient level: injective vertex maps + stable letter images."""

    quotient: FiniteGroup
    vertex_maps: dict
    stable_images: dict

    def verify(self, gog: GraphOfGroups):
        P = self.quotient
        for vid in gog.graph.vertices:
            hom = self.vertex_maps[vid]
            if hom.source != gog.vertex_groups[vid] or hom.target != P:
                raise GogError(f"vertex {vid!r}: witness map endpoints wrong")
            if not is_injective(hom):
                raise GogError(f"vertex {vid!r}: witness map not injective")
        _, tree, _ = _bfs_tree(gog.graph)
        tree_ids = {e for e, _, _ in tree}
        for eid, u, v in gog.graph.edges:
            t = self.stable_images[eid]
            if eid in tree_ids and t != 0:
                raise GogError(f"tree edge {eid!r} must carry the identity")
            ge = gog.edge_groups[eid]
            pu, pv = self.vertex_maps[u], self.vertex_maps[v]
            for g in ge.elements():
                lhs = pu.image[gog.inj0[eid].image[g]]
                rhs = int(P.mult[int(P.mult[t, pv.image[gog.inj1[eid].image[g]]]), P.inv(t)])
                if lhs != rhs:
                    raise GogError(f"edge {eid!r}: conjugation relator fails at {g}")

    def is_surjective(self, gog: GraphOfGroups) -> bool:
        gens: set = set(self.stable_images.values())
        for vid in gog.graph.vertices:
            gens.update(self.vertex_maps[vid].image)
        return subgroup_generated(self.quotient, sorted(gens)).order == self.quotient.order

    def to_json(self, gog: GraphOfGroups) -> dict:
        return {
            "quotient": {
                "name": self.quotient.name,
                "order": self.quotient.order,
                "table": self.quotient.mult.tolist(),
                "generators": list(self.quotient.generators),
            },
            "vertex_maps": {str(v): list(self.vertex_maps[v].image) for v in gog.graph.vertices},
            "stable_images": {str(e): self.stable_images[e] for e, _, _ in gog.graph.edges},
        }


def injective_homs(src: FiniteGroup, dst: FiniteGroup, constraints=()):
    """All injective homomorphisms src -> dst, optionally constrained to
    send given source elements to given targets.  Candidate generator
    images are pruned by element-order divisibility."""
    if dst.order % src.order != 0:
        return
    cand = []
    for g in src.generators:
        og = src.element_order(g)
        cand.append([y for y in dst.elements() if og % dst.element_order(y) == 0])

    def rec(i, images):
        if i == len(cand):
            try:
                hom = hom_from_images(src, dst, images)
            except ImagesInconsistent:
                return
            if not is_injective(hom):
                return
            for x, y in constraints:
                if hom.image[x] != y:
                    return
            yield hom
            return
        for y in cand[i]:
            yield from rec(i + 1, images + [y])

    yield from rec(0, [])


def proper_quotient_search(gog: GraphOfGroups, order_bound: int, exact_order: int | None = None) -> ProperWitness:
    """Backtracking search over catalog quotients, ascending by order.

    The returned witness is normalised to a surjective one by shrinking
    the quotient to the subgroup its images generate, then re-verified
    from scratch.
    """
    order_vs, tree, nontree = _bfs_tree(gog.graph)
    parent_edge = {child: (eid, par) for eid, par, child in tree}
    candidates = [
        P
        for P in catalog_groups(gog.prime, order_bound)
        if all(P.order % grp.order == 0 for grp in gog.vertex_groups.values())
    ]
    if exact_order is not None:
        candidates = [P for P in candidates if P.order == exact_order]

    for P in candidates:
        assignment = _assign_vertices(gog, P, order_vs, parent_edge, 0, {})
        if assignment is None:
            continue
        stable = {e: 0 for e, _, _ in tree}
        ok = True
        for eid in nontree:
            u, v = gog.endpoints(eid)
            ge = gog.edge_groups[eid]
            pu, pv = assignment[u], assignment[v]
            tau = None
            for t in P.elements():
                if all(
                    pu.image[gog.inj0[eid].image[g]]
                    == int(P.mult[int(P.mult[t, pv.image[gog.inj1[eid].image[g]]]), P.inv(t)])
                    for g in ge.generators
                ):
                    tau = t
                    break
            if tau is None:
                ok = False
                break
            stable[eid] = tau
        if not ok:
            continue
        witness = ProperWitness(P, dict(assignment), stable)
        witness = _shrink_to_image(gog, witness)
        witness.verify(gog)
        return witness
    raise NotFoundWithinBound(f"no witness with order <= {order_bound}")


def _assign_vertices(gog, P, order_vs, parent_edge, i, assigned):
    if i == len(order_vs):
        return dict(assigned)
    vid = order_vs[i]
    grp = gog.vertex_groups[vid]
    constraints = []
    if vid in parent_edge:
        eid, par = parent_edge[vid]
        u, v = gog.endpoints(eid)
        ge = gog.edge_groups[eid]
        ph = assigned[par]
        # tree edge carries the identity: psi_u(inj0 g) = psi_v(inj1 g)
        if vid == v:
            constraints = [
                (gog.inj1[eid].image[g], ph.image[gog.inj0[eid].image[g]]) for g in ge.generators
            ]
        else:
            constraints = [
                (gog.inj0[eid].image[g], ph.image[gog.inj1[eid].image[g]]) for g in ge.generators
            ]
    for hom in injective_homs(grp, P, constraints):
        assigned[vid] = hom
        result = _assign_vertices(gog, P, order_vs, parent_edge, i + 1, assigned)
        if result is not None:
            return result
        del assigned[vid]
    return None


def _shrink_to_image(gog: GraphOfGroups, witness: ProperWitness) -> ProperWitness:
    P = witness.quotient
    gens: set = set(witness.stable_images.values())
    for vid in gog.graph.vertices:
        gens.update(witness.vertex_maps[vid].image)
    sub = subgroup_generated(P, sorted(gens))
    if sub.order == P.order:
        return witness
    H, incl = subgroup_as_group(sub)
    local = {parent: i for i, parent in enumerate(incl.image)}
    vertex_maps = {
        vid: GroupHom(hom.source, H, tuple(local[x] for x in hom.image))
        for vid, hom in witness.vertex_maps.items()
    }
    stable = {e: local[t] for e, t in witness.stable_images.items()}
    return ProperWitness(H, vertex_maps, stable)


def free_kernel_rank(gog: GraphOfGroups, witness: ProperWitness) -> int:
    """Rank of the free kernel of the witness quotient map, via the Euler
    characteristic of the graph of groups."""
    if not witness.is_surjective(gog):
        raise GogError("witness image must generate the whole quotient")
    chi = Fraction(0)
    for grp in gog.vertex_groups.values():
        chi += Fraction(1, grp.order)
    for grp in gog.edge_groups.values():
        chi -= Fraction(1, grp.order)
    value = 1 - witness.quotient.order * chi
    if value.denominator != 1 or value < 0:
        raise NonIntegral(f"rank formula produced {value}")
    return int(value)
