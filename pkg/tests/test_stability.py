from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from groupzero.cayley import window
from groupzero.ends import Side, end_descriptor
from groupzero.groups import ChainError, make_group, parse_element
from groupzero.stability import (
    SizeClass,
    classify_almost_stable,
    finite_set,
    length_parity,
    naturals,
    parse_subset,
    stable_partition_locally_finite,
    symdiff_profile,
    translate_identity_holds,
    translate_intersection_profile,
)

Z = make_group("Z")


def test_naturals_shifted_by_three():
    prof = symdiff_profile(Z, naturals(), (3,), 12)
    assert prof.verdict == "BoundedAtScale" and prof.bound == 3
    assert all(prof.by_radius[r] == 3 for r in range(3, 10))


def test_evens_shifted_by_one_grow():
    prof = symdiff_profile(Z, parse_subset("even", Z), (1,), 20)
    assert prof.verdict == "GrowingAtScale"
    assert prof.slope == pytest.approx(2.0, abs=0.1)


@settings(max_examples=40, deadline=None)
@given(st.sets(st.integers(-6, 6), max_size=6), st.integers(-4, 4))
def test_finite_sets_are_bounded(points, shift):
    A = finite_set([(k,) for k in points])
    # the window must reach past max|p| + |shift| plus the constant tail
    prof = symdiff_profile(Z, A, (shift,), 22)
    assert prof.bounded and prof.bound <= 2 * len(points)


def test_profiles_are_monotone():
    G = make_group("Z^2")
    prof = symdiff_profile(G, parse_subset("halfplane:m>=0", G), (1, 0), 12)
    values = [prof.by_radius[r] for r in sorted(prof.by_radius)]
    assert values == sorted(values)


def test_half_plane_is_not_almost_stable():
    G = make_group("Z^2")
    v = classify_almost_stable(G, parse_subset("halfplane:m>=0", G), 12)
    assert not v.almost_stable
    assert not v.profiles[("right", (1, 0))].bounded
    assert v.size is SizeClass.PROPER


def test_naturals_are_almost_stable_and_proper():
    v = classify_almost_stable(Z, naturals(), 12, sides=("right", "left"))
    assert v.almost_stable and v.size is SizeClass.PROPER


def test_verdicts_never_flip_back():
    G = make_group("Z^2")
    A = parse_subset("halfplane:m>=0", G)
    labels = [classify_almost_stable(G, A, r).almost_stable for r in (6, 9, 12)]
    assert labels == [False, False, False]


@pytest.mark.parametrize("spec,A,x", [("Z", "nat", "2"), ("Z^2", "halfplane:n<3", "(1,1)"), ("F2", "even", "a*b")])
def test_translate_identity(spec, A, x):
    G = make_group(spec)
    assert translate_identity_holds(G, parse_subset(A, G), parse_element(x, G), 6)


def test_subset_literals():
    G = make_group("Z^2")
    assert (0, 5) in parse_subset("halfplane:m>=0", G)
    assert (-1, 5) not in parse_subset("halfplane:m>=0", G)
    assert (3,) in parse_subset("cofinite:[1,2]", Z) and (2,) not in parse_subset("cofinite:[1,2]", Z)
    assert (2,) in parse_subset("finite:[1,2]", Z)
    K = parse_subset("end:-", make_group("Dinf"))
    assert (-2, 1) in K and (2, 0) not in K
    odd = length_parity(G, 1)
    assert (1, 0) in odd and (1, 1) not in odd
    with pytest.raises(ChainError):
        parse_subset("prop10", Z)


def test_membership_agrees_with_end_tag():
    G = make_group("ZxC6")
    K = end_descriptor(G, Side.POSITIVE)
    S = parse_subset("end:+", G)
    assert all((g in S) == (g in K) for g in window(G, 10))


def test_stable_partition_counts():
    G = make_group("DirSumC2")
    part = stable_partition_locally_finite(G)
    G4 = G.chain_members(4)
    A4 = {g for g in G4 if g in part.A}
    assert len(A4) == 6 and len(G4) - len(A4) == 10
    assert A4 == set(G.chain_members(1)) | (set(G.chain_members(3)) - set(G.chain_members(2)))
    assert G.identity in part.A
    x = parse_element("e1", G)
    prof = translate_intersection_profile(G, part.A, part.B, x, 8)
    assert [prof[R] for R in range(2, 9)] == [2] * 7


def test_stable_partition_intersections_settle():
    G = make_group("DirSumC2")
    part = stable_partition_locally_finite(G)
    for x in G.chain_members(4):
        prof = translate_intersection_profile(G, part.A, part.B, x, 8)
        assert len({prof[R] for R in range(G.chain_level(x) + 1, 9)}) == 1
    v = classify_almost_stable(G, part.A, 10)
    assert v.almost_stable and v.size is SizeClass.PROPER


def test_finitary_symmetric_transversals():
    G = make_group("FinSym", 6)
    part = stable_partition_locally_finite(G)
    assert [len(part.transversals[n]) for n in range(6)] == [n + 1 for n in range(6)]
    for n in range(4):
        members = G.chain_members(n)
        assert all((g in part.A) != (g in part.B) for g in members)


def test_stable_partition_needs_a_chain():
    with pytest.raises(ChainError):
        stable_partition_locally_finite(Z)
    with pytest.raises(ValueError):
        stable_partition_locally_finite(make_group("DirSumC2"), depth=3)
