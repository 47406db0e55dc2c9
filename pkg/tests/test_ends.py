from __future__ import annotations

import pytest

from groupzero.cayley import ball, components_outside
from groupzero.ends import EndsClass, Side, end_descriptor, ends_estimate
from groupzero.groups import NotVirtuallyCyclic, make_group

VC = ["Z", "Dinf", "ZxC2", "ZxC6"]


@pytest.mark.parametrize("spec", VC)
def test_virtually_cyclic_groups_have_two_ends(spec):
    rep = ends_estimate(make_group(spec))
    assert rep.classification is EndsClass.TWO_ENDS
    assert rep.stabilized_count == 2


def test_classification_rules():
    assert ends_estimate(make_group("Z^2")).classification is EndsClass.ONE_END
    rep = ends_estimate(make_group("Sym5"))
    assert rep.classification is EndsClass.ZERO_ENDS and rep.saturated
    f2 = ends_estimate(make_group("F2"), r_max=5)
    assert f2.classification is EndsClass.MANY_ENDS_GROWING
    assert f2.stabilized_count is None
    assert f2.notes  # outer radius capped by the budget


def test_stabilized_count_tracks_window():
    rep = ends_estimate(make_group("Z^2"), r_max=8, window=3)
    tail = [rep.counts_by_radius[r] for r in range(6, 9)]
    assert (rep.stabilized_count is not None) == (len(set(tail)) == 1)


def test_descriptor_of_z():
    Z = make_group("Z")
    K = end_descriptor(Z, Side.POSITIVE)
    assert K.axis == (1,) and K.transversal == ((0,),)
    assert [k for k in range(-5, 6) if (k,) in K] == [1, 2, 3, 4, 5]


def test_descriptor_of_z_times_c2():
    G = make_group("ZxC2")
    K = end_descriptor(G, Side.POSITIVE)
    assert K.transversal == ((0, 0), (0, 1))
    for g in ball(G, 10).elements:
        assert (g in K) == (g[0] >= 1)


def test_dihedral_end_matches_a_component():
    D = make_group("Dinf")
    K = end_descriptor(D, Side.NEGATIVE)
    assert set(K.transversal) == {(0, 0), (0, 1)}
    comps = [c for c in components_outside(D, 3, 12) if c.touches_outer]
    assert len(comps) == 2
    tail = {g for g in ball(D, 12).elements if g in K and D.word_length(g) > 3}
    assert tail in [c.elements for c in comps]


@pytest.mark.parametrize("spec", VC)
@pytest.mark.parametrize("side", list(Side))
def test_ends_are_right_almost_invariant(spec, side):
    G = make_group(spec)
    K = end_descriptor(G, side)
    z = G.power(K.axis, side.value)
    b = ball(G, 14)
    assert all(G.mul(z, g) in K for g in b.elements if g in K)
    for s in G.gens:
        sizes = []
        for R in (8, 10, 12):
            inner = [g for g in b.elements if G.word_length(g) <= R]
            sizes.append(sum(1 for g in inner if (g in K) != (G.mul(g, G.inv(s)) in K)))
        assert len(set(sizes)) == 1


@pytest.mark.parametrize("spec", VC)
def test_two_ends_cover_all_but_finitely_many(spec):
    G = make_group(spec)
    plus, minus = end_descriptor(G, Side.POSITIVE), end_descriptor(G, Side.NEGATIVE)
    missing = []
    for R in (6, 10, 14):
        missing.append(sum(1 for g in ball(G, R).elements if g not in plus and g not in minus))
    assert len(set(missing)) == 1


def test_descriptor_requires_virtually_cyclic():
    with pytest.raises(NotVirtuallyCyclic):
        end_descriptor(make_group("Z^2"), Side.POSITIVE)
