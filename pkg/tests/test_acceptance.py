"""Acceptance criteria; each test prints one PASS/FAIL line."""
from __future__ import annotations

import time

import pytest

from groupzero.cli import run
from groupzero.electoral import (
    Flag,
    Partition,
    WitnessSide,
    flexibility_consistency,
    random_partitions,
    witness_via_cyclic,
)
from groupzero.ends import EndsClass, Side, ends_estimate
from groupzero.groups import make_group
from groupzero.stability import (
    SizeClass,
    classify_almost_stable,
    naturals,
    parse_subset,
    stable_partition_locally_finite,
    symdiff_profile,
    translate_intersection_profile,
)
from groupzero.topology import (
    Status,
    compact_neighbourhood_stability,
    enumerate_Z_topologies,
    end_topology_bundle,
)


@pytest.fixture
def report(capsys):
    def emit(number: int, ok: bool, detail: str) -> None:
        with capsys.disabled():
            print(f"\nCRITERION {number}: {'PASS' if ok else 'FAIL'} - {detail}")
        assert ok, detail

    return emit


def test_criterion_1_end_census(report):
    start = time.perf_counter()
    expected = {
        "Z": EndsClass.TWO_ENDS,
        "Dinf": EndsClass.TWO_ENDS,
        "ZxC2": EndsClass.TWO_ENDS,
        "ZxC6": EndsClass.TWO_ENDS,
        "Z^2": EndsClass.ONE_END,
        "Z^3": EndsClass.ONE_END,
        "C12": EndsClass.ZERO_ENDS,
        "Sym5": EndsClass.ZERO_ENDS,
    }
    got = {spec: ends_estimate(make_group(spec)).classification for spec in expected}
    f2 = ends_estimate(make_group("F2"), r_max=5)
    f2_counts = [f2.counts_by_radius[r] for r in range(1, 6)]
    elapsed = time.perf_counter() - start
    ok = (
        got == expected
        and f2.classification is EndsClass.MANY_ENDS_GROWING
        and f2_counts == [4 * 3 ** (r - 1) for r in range(1, 6)]
        and elapsed < 30
    )
    mismatches = {k: v.value for k, v in got.items() if v is not expected[k]}
    report(1, ok, f"mismatches={mismatches} F2 counts={f2_counts} time={elapsed:.1f}s")


def test_criterion_2_z_topology_census(report):
    problems = []
    for R in (20, 50):
        census = enumerate_Z_topologies(R)
        if census.classes != ["Discrete", "Compact", "Neither", "Neither"]:
            problems.append(f"R={R} classes {census.classes}")
        for row in census.rows:
            for key in ("hausdorff", "shift_continuous", "locally_compact"):
                if row[key].status is not Status.PROVEN:
                    problems.append(f"R={R} {row['name']} {key}")
        if census.semigroup_count != 3:
            problems.append(f"R={R} semigroup count {census.semigroup_count}")
        cof = census.rows[1]["semigroup"]
        pair = cof.counterexample or {}
        Z = census.specs[1].group
        if cof.status is not Status.REFUTED or Z.mul(pair.get("v"), pair.get("w")) == Z.identity:
            problems.append(f"R={R} cofinite semigroup verdict {cof.status.value}")
    report(2, not problems, f"problems={problems}")


def test_criterion_3_end_topology_bundle(report):
    results = {}
    for spec in ("ZxC2", "Dinf"):
        for side in Side:
            bundle = end_topology_bundle(make_group(spec), side, 30)
            failing = [k for k, v in bundle.items() if (v.status is not Status.REFUTED) == (k == "compact")]
            results[f"{spec}{'+' if side is Side.POSITIVE else '-'}"] = failing
    ok = all(not failing for failing in results.values())
    report(3, ok, f"failing verdicts per base={results}")


def test_criterion_4_locally_finite_partition(report):
    G = make_group("DirSumC2", 8)
    part = stable_partition_locally_finite(G, 8)
    partitions = all(
        all((g in part.A) != (g in part.B) for g in G.chain_members(n)) for n in range(9)
    )
    G4 = G.chain_members(4)
    a4 = sum(1 for g in G4 if g in part.A)
    b4 = sum(1 for g in G4 if g in part.B)
    constant = True
    for x in G4:
        prof = translate_intersection_profile(G, part.A, part.B, x, 8)
        constant &= len({prof[R] for R in range(G.chain_level(x) + 1, 9)}) == 1
    verdict = classify_almost_stable(G, part.A, 10)
    ok = (
        partitions
        and (a4, b4) == (6, 10)
        and constant
        and verdict.almost_stable
        and verdict.size is SizeClass.PROPER
    )
    report(4, ok, f"|A n G4|={a4} |B n G4|={b4} constant={constant} {verdict.label}/{verdict.size.value}")


def test_criterion_5_cyclic_witness(report):
    G = make_group("Z^2")
    A = parse_subset("halfplane:m>=0", G)
    B = A.complement()
    start = time.perf_counter()
    rep = witness_via_cyclic(G, (0, 1), A, B, 25)
    elapsed = time.perf_counter() - start
    cert = rep.certificate
    failures = None
    if cert is not None:
        failures = sum(1 for a in cert.I if a not in A or G.mul(cert.x, a) not in B)
    ok = (
        rep.branch == "ii"
        and cert is not None
        and cert.side is WitnessSide.LEFT
        and cert.size >= 20
        and failures == 0
        and elapsed < 10
    )
    size = None if cert is None else cert.size
    report(5, ok, f"branch={rep.branch} |I|={size} failures={failures} time={elapsed:.2f}s")


def test_criterion_6_flexibility_property_suite(report):
    seed = 7
    summary = {}
    flexible_ok = True
    for spec, r in (("Z^2", 25), ("F2", 6)):
        G = make_group(spec)
        rep = flexibility_consistency(G, random_partitions(G, 50, seed), r, 20)
        sizes = [c.best_size for c in rep.checks]
        flexible_ok &= len(rep.checks) == 50 and min(sizes) >= 20 and rep.inconsistent == 0
        summary[spec] = {"min_size": min(sizes), "inconsistent": rep.inconsistent}

    G = make_group("DirSumC2", 8)
    parts = random_partitions(G, 20, seed)
    prop = stable_partition_locally_finite(G, 8)
    parts.append(Partition("prop10", prop.A, prop.B))
    rep = flexibility_consistency(G, parts, 8, 20)
    scaling = sum(len(c.scaling_x) for c in rep.checks)
    stable_ok = (
        len(rep.checks) == 21
        and rep.inconsistent == 0
        and scaling == 0
        and all(c.flag is Flag.CONSISTENT for c in rep.checks)
    )
    bound = max(c.max_bounded_size for c in rep.checks)
    summary["DirSumC2"] = {"scaling_translates": scaling, "max_bounded_size": bound, "inconsistent": rep.inconsistent}
    report(6, flexible_ok and stable_ok, f"{summary}")


def test_criterion_7_almost_stability_anchors(report):
    Z = make_group("Z")
    nat = symdiff_profile(Z, naturals(), (3,), 12)
    even = symdiff_profile(Z, parse_subset("even", Z), (1,), 20)
    bridge = all(
        compact_neighbourhood_stability(spec, 14).almost_stable
        for spec in enumerate_Z_topologies(20).specs
    )
    ok = (
        nat.verdict == "BoundedAtScale"
        and nat.bound == 3
        and even.verdict == "GrowingAtScale"
        and abs(even.slope - 2) <= 0.1
        and bridge
    )
    report(7, ok, f"nat bound={nat.bound} even slope={even.slope:.3f} bridge={bridge}")


def test_criterion_8_scale_limited_labels(report):
    census, _ = run(["census", "--R", "20"])
    consistency, _ = run(["consistency", "--group", "Z^2", "--count", "3", "--r", "15"])
    labels = [census["result"]["evidence"], consistency["result"]["evidence"]]
    ok = all("scale-limited" in label for label in labels)
    report(8, ok, f"labels={labels}")
