from __future__ import annotations

import pytest

from groupzero.cayley import window
from groupzero.electoral import (
    CertificateError,
    Flag,
    NotFoundAtScale,
    Partition,
    PartitionError,
    WitnessCertificate,
    WitnessSide,
    certify,
    check_partition,
    flexibility_consistency,
    random_partitions,
    witness_search,
    witness_via_cyclic,
)
from groupzero.groups import make_group
from groupzero.stability import (
    finite_set,
    halfspace,
    naturals,
    parse_subset,
    stable_partition_locally_finite,
)

Z, Z2 = make_group("Z"), make_group("Z^2")


def halfplane(expr="halfplane:m>=0"):
    A = parse_subset(expr, Z2)
    return A, A.complement()


def test_parity_shift():
    A = parse_subset("even", Z)
    cert = witness_search(Z, A, A.complement(), 12, 10)
    assert isinstance(cert, WitnessCertificate)
    assert cert.x == (-1,)  # |x| = 1, and -1 precedes 1 in tuple order
    assert set(cert.I) == {g for g in window(Z, 12) if g[0] % 2 == 0}


def test_half_plane_scale_sensitivity():
    A, B = halfplane()
    small = witness_search(Z2, A, B, 10, 15)
    big = witness_search(Z2, A, B, 25, 15)
    assert isinstance(big, WitnessCertificate)
    assert big.size >= 15 and not big.failures(Z2, A, B)
    assert isinstance(small, WitnessCertificate) and small.x == (-1, 0)


def test_certificates_persist_at_larger_radii():
    A = halfspace((1, 1), 1)
    B = A.complement()
    sizes = []
    for r in (8, 12, 16):
        cert = witness_search(Z2, A, B, r, 5)
        assert isinstance(cert, WitnessCertificate)
        sizes.append(cert.size)
    assert sizes == sorted(sizes)


def test_prop10_partition_has_no_scaling_certificate():
    G = make_group("DirSumC2")
    part = stable_partition_locally_finite(G)
    check = check_partition(G, Partition("prop10", part.A, part.B), 8, 20)
    assert check.flag is Flag.CONSISTENT
    assert not check.scaling_x
    assert check.max_bounded_size < len(G.chain_members(8))


def test_certify_rejects_bad_witness():
    A = parse_subset("even", Z)
    with pytest.raises(CertificateError):
        certify(Z, [(0,), (1,)], (1,), WitnessSide.RIGHT, A, A.complement())


def test_overlapping_parts_rejected():
    with pytest.raises(PartitionError):
        witness_search(Z, naturals(), parse_subset("even", Z), 5)


def test_cyclic_branch_ii():
    A, B = halfplane()
    rep = witness_via_cyclic(Z2, (0, 1), A, B, 25)
    assert rep.branch == "ii" and rep.j_plus == rep.j_minus == 0
    assert rep.detail["a"] == (0, 0) and rep.detail["b"] == (-1, 0)
    cert = rep.certificate
    assert cert.side is WitnessSide.LEFT and cert.x == (-1, 0) and cert.size >= 20
    assert not cert.failures(Z2, A, B)
    # x.I is exactly the part of the line through b inside the window
    image = {Z2.mul(cert.x, a) for a in cert.I}
    assert image == {g for g in window(Z2, 26) if g[0] == -1 and abs(g[1]) <= 25}
    assert image <= {g for g in image if g in B}


def test_cyclic_branch_i():
    A = parse_subset("even", Z)
    rep = witness_via_cyclic(Z, (1,), A, A.complement(), 12, 5)
    assert rep.branch == "i"
    assert set(rep.certificate.I) == {g for g in window(Z, 12) if g in A and Z.mul(g, (1,)) not in A}
    A, B = halfplane("halfplane:n>=0")
    rep = witness_via_cyclic(Z2, (0, 1), A, B, 20)
    assert rep.branch == "i" and rep.certificate.x == (0, -1)


def test_cyclic_needs_infinite_order():
    G = make_group("ZxC2")
    A = parse_subset("end:+", G)
    with pytest.raises(ValueError):
        witness_via_cyclic(G, (0, 1), A, A.complement(), 8)


def test_partitions_are_seeded():
    a = [p.name for p in random_partitions(Z2, 10, seed=3)]
    b = [p.name for p in random_partitions(Z2, 10, seed=3)]
    assert a == b


def test_naturals_are_consistent_with_stable_z():
    A = naturals()
    check = check_partition(Z, Partition("nat", A, A.complement()), 12, 20)
    assert check.flag is Flag.CONSISTENT and check.almost_stable
    # translating by x = -k moves exactly k naturals out of A
    for k in (1, 3, 5):
        I = [a for a in window(Z, 12) if a in A and Z.mul(a, (-k,)) not in A]
        assert len(I) == k


def test_bounded_part_is_rejected():
    A = finite_set([(0,), (1,)])
    check = check_partition(Z, Partition("finite", A, A.complement()), 10, 5)
    assert check.flag is Flag.REJECTED


def test_not_found_report():
    A = naturals()
    res = witness_search(Z, A, A.complement(), 6, 50)
    assert isinstance(res, NotFoundAtScale) and res.best_size == 6


def test_consistency_on_z2_small():
    rep = flexibility_consistency(Z2, random_partitions(Z2, 10, seed=1), 20, 20)
    assert rep.inconsistent == 0
