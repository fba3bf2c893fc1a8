"""Graph-of-groups structure: validation, collapse, presentation, b1,
witness search, free kernel rank."""

from fractions import Fraction

import pytest

from gogends.fpcore import (
    cyclic,
    dihedral8,
    hom_from_images,
    identity_hom,
    is_injective,
    quaternion8,
    trivial,
)
from gogends.gog import (
    GogError,
    GraphOfGroups,
    NonIntegral,
    NotFoundWithinBound,
    ProperWitness,
    b1,
    collapse_iso_edge,
    free_kernel_rank,
    leaf_bound,
    presentation,
    proper_quotient_search,
    reduce_gog,
    validate,
)
from gogends.graphs import Graph


def triv_hom(dst, prime=2):
    return hom_from_images(trivial(prime), dst, [])


def mk(vertices, edges, vg, eg, i0, i1, prime=2):
    return GraphOfGroups(Graph(vertices, edges), prime, vg, eg, i0, i1)


def bouquet(r, prime=2):
    t = trivial(prime)
    return mk(
        ("v",),
        tuple((f"e{i}", "v", "v") for i in range(r)),
        {"v": t},
        {f"e{i}": t for i in range(r)},
        {f"e{i}": triv_hom(t, prime) for i in range(r)},
        {f"e{i}": triv_hom(t, prime) for i in range(r)},
        prime,
    )


def c2_star_c2():
    c2 = cyclic(2, 1)
    t = trivial(2)
    return mk(
        ("u", "w"),
        (("e", "u", "w"),),
        {"u": c2, "w": c2},
        {"e": t},
        {"e": triv_hom(c2)},
        {"e": triv_hom(c2)},
    )


def c4_amalgam():
    c2, c4 = cyclic(2, 1), cyclic(2, 2)
    inc = hom_from_images(c2, c4, [2])
    return mk(
        ("u", "w"), (("e", "u", "w"),), {"u": c4, "w": c4}, {"e": c2}, {"e": inc}, {"e": inc}
    )


def test_validate_loop_is_exempt():
    t = trivial(2)
    g = mk(("v",), (("e", "v", "v"),), {"v": t}, {"e": t}, {"e": triv_hom(t)}, {"e": triv_hom(t)})
    rep = validate(g)
    assert rep.reduced and rep.connected


def test_validate_identity_edge_not_reduced():
    c2 = cyclic(2, 1)
    h = identity_hom(c2)
    g = mk(("u", "w"), (("e", "u", "w"),), {"u": c2, "w": c2}, {"e": c2}, {"e": h}, {"e": h})
    assert not validate(g).reduced


def test_validate_proper_inclusion_reduced():
    assert validate(c4_amalgam()).reduced


def test_structural_rejects_noninjective_edge_map():
    c2, c4 = cyclic(2, 1), cyclic(2, 2)
    collapse = hom_from_images(c4, c2, [1])
    with pytest.raises(GogError):
        mk(("u", "w"), (("e", "u", "w"),), {"u": c2, "w": c2}, {"e": c4},
           {"e": collapse}, {"e": collapse})


def test_collapse_identity_edge():
    c2 = cyclic(2, 1)
    h = identity_hom(c2)
    g = mk(("u", "w"), (("e", "u", "w"), ("f", "w", "w")),
           {"u": c2, "w": c2}, {"e": c2, "f": c2},
           {"e": h, "f": h}, {"e": h, "f": h})
    out = collapse_iso_edge(g, "e")
    assert out.graph.vertices == ("u",)
    assert [e for e, _, _ in out.graph.edges] == ["f"]
    (eid, a, b) = out.graph.edges[0]
    assert a == b == "u"  # loop rerouted to the kept vertex


def test_collapse_preserves_b1():
    c2, c4 = cyclic(2, 1), cyclic(2, 2)
    inc = hom_from_images(c2, c4, [2])
    iso = identity_hom(c2)
    # chain u -(iso)- w -(proper)- x plus a loop at x
    t = trivial(2)
    chain = mk(
        ("u", "w", "x"),
        (("e", "u", "w"), ("f", "w", "x"), ("l", "x", "x")),
        {"u": c2, "w": c2, "x": c4},
        {"e": c2, "f": c2, "l": t},
        {"e": iso, "f": iso, "l": triv_hom(c4)},
        {"e": iso, "f": inc, "l": triv_hom(c4)},
    )
    collapsed = collapse_iso_edge(chain, "e")
    assert b1(chain) == b1(collapsed)
    assert len(collapsed.graph.vertices) == 2


def test_reduce_gog_reaches_fixpoint():
    c2 = cyclic(2, 1)
    iso = identity_hom(c2)
    g = mk(("a", "b", "c"), (("e0", "a", "b"), ("e1", "b", "c")),
           {"a": c2, "b": c2, "c": c2}, {"e0": c2, "e1": c2},
           {"e0": iso, "e1": iso}, {"e0": iso, "e1": iso})
    out = reduce_gog(g)
    assert validate(out).reduced
    assert b1(out) == b1(g)


def test_collapse_rejects_loop_and_non_iso():
    g = c4_amalgam()
    with pytest.raises(GogError):
        collapse_iso_edge(g, "e")  # C2 -> C4 is not bijective
    t = trivial(2)
    loop = mk(("v",), (("e", "v", "v"),), {"v": t}, {"e": t},
              {"e": triv_hom(t)}, {"e": triv_hom(t)})
    with pytest.raises(GogError):
        collapse_iso_edge(loop, "e")


def test_presentation_bouquet_is_free():
    pres = presentation(bouquet(3))
    assert pres.symbols == ("t:e0", "t:e1", "t:e2")
    assert pres.relators == ()
    assert pres.tree == ()


def test_presentation_c2_star_c2():
    pres = presentation(c2_star_c2())
    assert len(pres.symbols) == 3  # a, b, t_e
    assert pres.tree == ("e",)
    words = set(pres.relators)
    assert (("g:u:0", 1), ("g:u:0", 1)) in words  # a^2
    assert (("g:w:0", 1), ("g:w:0", 1)) in words  # b^2
    assert (("t:e", 1),) in words  # killed tree letter


def test_presentation_loop_at_c2():
    c2 = cyclic(2, 1)
    t = trivial(2)
    g = mk(("v",), (("e", "v", "v"),), {"v": c2}, {"e": t},
           {"e": triv_hom(c2)}, {"e": triv_hom(c2)})
    pres = presentation(g)
    assert set(pres.symbols) == {"g:v:0", "t:e"}
    assert (("g:v:0", 1), ("g:v:0", 1)) in set(pres.relators)
    assert pres.tree == ()


def test_presentation_generator_and_tree_counts():
    for g in (c2_star_c2(), c4_amalgam(), bouquet(2)):
        pres = presentation(g)
        expected_gens = sum(len(grp.generators) for grp in g.vertex_groups.values()) + len(
            g.graph.edges
        )
        assert len(pres.symbols) == expected_gens
        assert len(pres.tree) == len(g.graph.vertices) - 1


def test_b1_examples():
    assert b1(bouquet(1)) == 1
    assert b1(bouquet(2)) == 2
    assert b1(bouquet(3)) == 3
    assert b1(c2_star_c2()) == 2
    single_c4 = mk(("v",), (), {"v": cyclic(2, 2)}, {}, {}, {})
    assert b1(single_c4) == 1  # dim Hom(C4, F_2)


def test_leaf_bound_examples():
    single = mk(("v",), (), {"v": trivial(2)}, {}, {}, {})
    assert leaf_bound(single) == 0
    c4 = cyclic(2, 2)
    c2 = cyclic(2, 1)
    inc = hom_from_images(c2, c4, [2])
    path = mk(("a", "b", "c"), (("e0", "a", "b"), ("e1", "b", "c")),
              {"a": c4, "b": c4, "c": c4}, {"e0": c2, "e1": c2},
              {"e0": inc, "e1": inc}, {"e0": inc, "e1": inc})
    assert leaf_bound(path) == 2
    assert leaf_bound(bouquet(2)) == 2
    assert b1(path) >= leaf_bound(path)


def test_witness_search_c2_star_c2():
    g = c2_star_c2()
    w = proper_quotient_search(g, 16)
    w.verify(g)
    assert w.is_surjective(g)
    assert all(is_injective(h) for h in w.vertex_maps.values())


def test_witness_search_amalgam_minimal():
    g = c4_amalgam()
    w = proper_quotient_search(g, 16)
    assert w.quotient.order == 4  # both C4s inject into C4 itself
    w.verify(g)


def test_witness_search_exact_order():
    g = c4_amalgam()
    w = proper_quotient_search(g, 16, exact_order=8)
    assert w.quotient.order in (4, 8)  # may shrink to the generated image
    w.verify(g)


def test_witness_search_loop_trivial():
    g = bouquet(1)
    w = proper_quotient_search(g, 4)
    w.verify(g)
    assert w.quotient.order == 1  # trivial quotient is a valid minimal witness


def test_witness_not_found_within_bound():
    q8 = quaternion8()
    c4 = cyclic(2, 2)
    inc = hom_from_images(c4, q8, [2])
    g = mk(("u", "w"), (("e", "u", "w"),), {"u": q8, "w": q8}, {"e": c4},
           {"e": inc}, {"e": inc})
    with pytest.raises(NotFoundWithinBound):
        proper_quotient_search(g, 4)


def test_witness_verify_rejects_broken_relator():
    g = c4_amalgam()
    c4 = g.vertex_groups["u"]
    P = cyclic(2, 2)
    bad = ProperWitness(
        P,
        {"u": hom_from_images(c4, P, [1]), "w": hom_from_images(c4, P, [1])},
        {"e": 1},  # tree edge must carry the identity
    )
    with pytest.raises(GogError):
        bad.verify(g)


def test_free_kernel_rank_examples():
    g = bouquet(3)
    w = ProperWitness(trivial(2), {"v": identity_hom(trivial(2))}, {f"e{i}": 0 for i in range(3)})
    assert free_kernel_rank(g, w) == 3

    cc = c2_star_c2()
    w = proper_quotient_search(cc, 16)
    assert free_kernel_rank(cc, w) == 1
    # the coordinate-inclusion witness at order 4 gives the same rank
    from gogends.fpcore import elementary_abelian

    P = elementary_abelian(2, 2)
    c2 = cc.vertex_groups["u"]
    w4 = ProperWitness(
        P, {"u": hom_from_images(c2, P, [1]), "w": hom_from_images(c2, P, [2])}, {"e": 0}
    )
    w4.verify(cc)
    assert free_kernel_rank(cc, w4) == 1

    amal = c4_amalgam()
    w = proper_quotient_search(amal, 16)
    assert free_kernel_rank(amal, w) == 1


def test_free_kernel_rank_requires_surjective_witness():
    cc = c2_star_c2()
    P = dihedral8()
    c2 = cc.vertex_groups["u"]
    # both maps land in the centre: image is a proper subgroup of D8
    w = ProperWitness(
        P, {"u": hom_from_images(c2, P, [4]), "w": hom_from_images(c2, P, [4])}, {"e": 0}
    )
    w.verify(cc)
    with pytest.raises(GogError):
        free_kernel_rank(cc, w)
