import itertools

import pytest
from hypothesis import given, settings, strategies as st

from conftest import finite_catalog, perm_compose
from zariski_groups.abelian import FgAbelianGroup, GroupError
from zariski_groups.constructions import involutive_automorphisms, product_lemma_construct, semidirect_involution
from zariski_groups.direct_sum import NATURALS, direct_sum, summand_intersection
from zariski_groups.groups import (
    FiniteGroup,
    abelian_finite,
    cyclic,
    dihedral,
    direct_product,
    from_cayley,
    quaternion,
    relabel_isomorphic,
    symmetric,
)
from zariski_groups.subgroups import (
    all_subgroups,
    as_subgroup,
    center,
    centralizer,
    derived_subgroup,
    enumerate_elements,
    group_arithmetic,
    index,
    is_normal,
    is_super_normal,
    subgroup_generated,
)

D4 = dihedral(4)
S3 = symmetric(3)
Q8 = quaternion()
Z12 = cyclic(12)


def el(G, label):
    return G.parse_element(label)


def parse_cycles(label: str, n: int) -> tuple:
    """Permutation of range(n) from cycle notation, independent of the library."""
    img = list(range(n))
    for cyc in label.strip("()").split(")("):
        if label == "e":
            break
        pts = [int(c) - 1 for c in cyc]
        for a, b in zip(pts, pts[1:] + pts[:1]):
            img[a] = b
    return tuple(img)


# -- arithmetic ---------------------------------------------------------------


def test_arithmetic_examples():
    assert group_arithmetic(D4, el(D4, "r"), el(D4, "r")) == el(D4, "r2")
    assert group_arithmetic(Z12, 5, op="invert") == 7
    assert group_arithmetic(S3, el(S3, "(12)"), el(S3, "(123)")) == el(S3, "(23)")
    assert group_arithmetic(S3, op="identity") == S3.identity


def test_s3_table_matches_permutation_oracle():
    for a, b in itertools.product(S3.elements(), repeat=2):
        pa, pb = parse_cycles(S3.label(a), 3), parse_cycles(S3.label(b), 3)
        assert parse_cycles(S3.label(S3.op(a, b)), 3) == perm_compose(pa, pb)


def test_enumeration_examples():
    assert enumerate_elements(cyclic(3)) == [0, 1, 2]
    assert len(enumerate_elements(S3)) == 6
    assert len(enumerate_elements(D4)) == 8


@pytest.mark.parametrize(
    "table",
    [
        [[0, 1], [1, 1]],  # row not a permutation
        [[0, 1, 2], [1, 2, 0], [2, 1, 0]],  # column clash
    ],
)
def test_invalid_cayley_tables_rejected(table):
    with pytest.raises(GroupError):
        from_cayley(table)


def test_nonassociative_latin_square_rejected():
    # a loop of order 5 that is not a group
    table = [
        [0, 1, 2, 3, 4],
        [1, 0, 3, 4, 2],
        [2, 4, 0, 1, 3],
        [3, 2, 4, 0, 1],
        [4, 3, 1, 2, 0],
    ]
    with pytest.raises(GroupError):
        from_cayley(table)


@pytest.mark.parametrize("name,G", sorted(finite_catalog(12).items()))
def test_catalog_tables_are_groups(name, G):
    e = G.identity
    for a in G.elements():
        assert G.op(a, G.inv(a)) == e == G.op(G.inv(a), a)
        assert G.op(e, a) == a
    for a, b, c in itertools.product(G.elements(), repeat=3):
        assert G.op(G.op(a, b), c) == G.op(a, G.op(b, c))


# -- subgroups -----------------------------------------------------------------


def test_subgroup_generated_examples():
    assert subgroup_generated(S3, [el(S3, "(12)"), el(S3, "(123)")]).order == 6
    assert subgroup_generated(D4, []).elements == frozenset({D4.identity})
    assert subgroup_generated(Z12, [4]).elements == frozenset({0, 4, 8})


def test_subgroup_generated_fuel_partial():
    H = subgroup_generated(cyclic(24), [1], fuel=3)
    assert not H.stabilized
    assert H.order is None


@given(st.sampled_from(sorted(finite_catalog(16))), st.data())
@settings(max_examples=60, deadline=None)
def test_closure_is_idempotent(name, data):
    G = finite_catalog(16)[name]
    gens = data.draw(st.lists(st.sampled_from(G.elements()), max_size=3))
    H = subgroup_generated(G, gens)
    assert subgroup_generated(G, H.elements).elements == H.elements
    assert G.order % len(H.elements) == 0


def test_centralizer_examples():
    r = subgroup_generated(D4, [el(D4, "r")])
    assert centralizer(D4, r).elements == r.elements
    assert centralizer(D4, subgroup_generated(D4, [])).order == 8
    assert centralizer(Q8, center(Q8)).order == 8


def test_center_and_derived():
    assert {Q8.label(x) for x in center(Q8).elements} == {"e", "-1"}
    assert derived_subgroup(S3).order == 3
    assert derived_subgroup(cyclic(6)).order == 1


def test_normality_examples():
    assert is_normal(D4, subgroup_generated(D4, [el(D4, "r")]))
    assert not is_normal(D4, subgroup_generated(D4, [el(D4, "s")]))
    for H in all_subgroups(abelian_finite([2, 4])):
        assert is_normal(abelian_finite([2, 4]), H)


def test_index_examples():
    assert index(D4, subgroup_generated(D4, [el(D4, "r")])) == 2
    assert index(S3, subgroup_generated(S3, [])) == 6
    assert index(S3, subgroup_generated(S3, [el(S3, "(123)")])) == 2


def test_as_subgroup_rejects_non_subgroup():
    with pytest.raises(GroupError):
        as_subgroup(S3, [S3.identity, el(S3, "(12)"), el(S3, "(13)")])


def test_subgroup_counts():
    assert len(all_subgroups(symmetric(4))) == 30
    assert len(all_subgroups(D4)) == 10
    assert len(all_subgroups(Q8)) == 6


# -- super-normality -----------------------------------------------------------


def test_super_normal_examples():
    assert is_super_normal(Q8, center(Q8)).holds
    G = direct_product(S3, cyclic(2))
    factor = subgroup_generated(G, [x for x in G.elements() if G.label(x).endswith(",0)")])
    assert is_super_normal(G, factor).holds
    res = is_super_normal(D4, subgroup_generated(D4, [el(D4, "r")]))
    assert not res.holds and D4.label(res.failing) == "s"


def test_super_normal_needs_normal():
    with pytest.raises(GroupError):
        is_super_normal(D4, subgroup_generated(D4, [el(D4, "s")]))


def test_super_normal_witness_is_valid():
    res = is_super_normal(Q8, center(Q8))
    H = center(Q8).elements
    for x, y in res.witness.items():
        for h in H:
            assert Q8.op(Q8.op(Q8.inv(x), h), x) == Q8.op(Q8.op(Q8.inv(y), h), y)


@pytest.mark.parametrize("name", ["S3", "D4", "Q8", "A4", "Z2xS3", "D6"])
def test_super_normal_implies_normal(name):
    G = finite_catalog(24)[name]
    for H in all_subgroups(G):
        if is_super_normal(G, H, require_normal=False).holds:
            assert is_normal(G, H)


# -- direct sums ---------------------------------------------------------------


def test_direct_sum_examples():
    Z2, Z4 = FgAbelianGroup(0, (2,)), FgAbelianGroup(0, (4,))
    assert direct_sum([Z2] * 3).order == 8
    G = direct_sum(Z4, NATURALS)
    g = G.make({0: (1,)})
    h = G.make({1: (3,)})
    assert len(G.support(g)) == 1
    assert G.op(g, h) == G.make({0: (1,), 1: (3,)})
    assert G.op(g, G.inv(g)) == G.identity


def test_direct_sum_text_round_trip():
    G = direct_sum(FgAbelianGroup(0, (4,)), NATURALS)
    g = G.parse_element("{0:1,7:3}")
    assert G.format_element(g) == "{0:1,7:3}"
    assert G.parse_element("e") == G.identity


def test_summand_intersection_examples():
    Z2 = FgAbelianGroup(0, (2,))
    G = direct_sum([Z2, Z2])
    diag = subgroup_generated(G, [G.make({0: (1,), 1: (1,)})])
    assert summand_intersection(G, diag, {0}).elements == frozenset({G.identity})
    assert summand_intersection(G, diag, {0, 1}).elements == diag.elements
    first = subgroup_generated(G, [G.make({0: (1,)})])
    assert summand_intersection(G, first, {0, 1}).elements == first.elements


# -- semidirect products and the product lemma ------------------------------------


def test_semidirect_examples():
    V = abelian_finite([2, 2])
    swap = [V.parse_element(V.format_element(x)[::-1].replace(")", "#").replace("(", ")").replace("#", "(")) for x in V.elements()]
    G = semidirect_involution(V, swap)
    assert G.order == 8 and not G.is_abelian
    same = semidirect_involution(V, list(V.elements()))
    assert same.is_abelian and same.order == 8
    neg = semidirect_involution(cyclic(3), [0, 2, 1])
    assert relabel_isomorphic(neg, S3) is not None


def test_semidirect_rejects_bad_maps():
    with pytest.raises(GroupError):
        semidirect_involution(cyclic(4), [0, 2, 1, 3])  # not a homomorphism
    with pytest.raises(GroupError):
        semidirect_involution(cyclic(5), [0, 2, 4, 1, 3])  # order 4, not an involution


def test_involution_count_klein():
    # Aut(V4) = S3 has 4 elements with f o f = id
    assert len(involutive_automorphisms(abelian_finite([2, 2]))) == 4


def test_product_lemma_examples():
    Z2, Z4 = cyclic(2), cyclic(4)
    N = direct_product(Z2, Z2)
    swap = [N.parse_element("(" + N.label(x)[3] + "," + N.label(x)[1] + ")") for x in N.elements()]
    res = product_lemma_construct(Z2, Z2, swap)
    assert res.passed
    assert res.report["order_H"] == 8 and res.report["index_H_Gstar"] == 2
    assert relabel_isomorphic(_as_group(res), abelian_finite([2, 2])) is not None
    ident = product_lemma_construct(Z2, Z2, list(N.elements()))
    assert ident.passed
    N24 = direct_product(Z2, Z4)
    neg = [N24.inv(x) for x in N24.elements()]
    assert product_lemma_construct(Z2, Z4, neg).passed


def _as_group(res) -> FiniteGroup:
    """G* as a standalone Cayley table."""
    G = res.G
    elems = sorted(res.Gstar.elements, key=G.sort_key)
    pos = {x: i for i, x in enumerate(elems)}
    return from_cayley([[pos[G.op(a, b)] for b in elems] for a in elems])
