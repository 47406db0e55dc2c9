"""Command-line experiment runner emitting JSON reports."""
from __future__ import annotations

import argparse
import enum
import json
import sys
import time
from pathlib import Path

from . import __version__
from .cayley import MAX_ELEMENTS_ENV, ResourceCapExceeded, memory_cap
from .electoral import (
    DEFAULT_M,
    Flag,
    NotFoundAtScale,
    Partition,
    WitnessCertificate,
    WitnessSide,
    flexibility_consistency,
    random_partitions,
    witness_search,
    witness_search_either,
    witness_via_cyclic,
)
from .ends import ends_estimate
from .groups import ChainError, Group, NotVirtuallyCyclic, ParseError, make_group, parse_element
from .stability import (
    classify_almost_stable,
    parse_subset,
    stable_partition_locally_finite,
    symdiff_profile,
    translate_intersection_profile,
)
from .topology import (
    PreconditionError,
    Verdict,
    check_semigroup_continuity,
    classify_dichotomy,
    enumerate_Z_topologies,
    is_compact,
    parse_topology,
    preconditions,
    zero_ideal_check,
)

SCALE_LIMITED = "scale-limited evidence"


def _fmt(group: Group, obj):
    """Recursively render elements and enums as JSON-friendly values."""
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, dict):
        return {str(_fmt(group, k)): _fmt(group, v) for k, v in obj.items()}
    if isinstance(obj, tuple):
        try:
            group.validate(obj)
            return group.format(obj)
        except Exception:
            return [_fmt(group, v) for v in obj]
    if isinstance(obj, list):
        return [_fmt(group, v) for v in obj]
    if isinstance(obj, Verdict):
        return verdict_doc(group, obj)
    if obj is None or isinstance(obj, (bool, int, float, str)):
        return obj
    return str(obj)


def verdict_doc(group: Group, v: Verdict, claim: str | None = None) -> dict:
    doc = {"status": v.status.value, "scale": v.scale}
    if v.witness is not None:
        doc["witness"] = _fmt(group, v.witness)
    if v.counterexample is not None:
        doc["counterexample"] = _fmt(group, v.counterexample)
    if v.note:
        doc["note"] = v.note
    if claim:
        doc["claim"] = claim
    return doc


def certificate_doc(group: Group, result) -> dict:
    if isinstance(result, WitnessCertificate):
        return {
            "status": "Found",
            "side": result.side.value,
            "x": group.format(result.x),
            "size": result.size,
            "I_sample": [group.format(a) for a in result.I[:10]],
        }
    if isinstance(result, NotFoundAtScale):
        return {
            "status": "NotFoundAtScale",
            "r": result.r,
            "m": result.m,
            "best_size": result.best_size,
            "best_x": None if result.best_x is None else group.format(result.best_x),
        }
    return {"status": "None"}


def _parts(args, group: Group):
    A = parse_subset(args.A, group)
    B = parse_subset(args.B, group) if args.B else A.complement()
    return A, B


# ---------------------------------------------------------------------------
# commands; each returns (report body, violation flag)


def cmd_ends(args, group):
    rep = ends_estimate(group, args.rmax, args.window)
    return {
        "classification": rep.classification.value,
        "counts_by_radius": rep.counts_by_radius,
        "outer_radius": rep.outer_radius,
        "stabilized_count": rep.stabilized_count,
        "saturated": rep.saturated,
        "notes": rep.notes,
        "claim": "two-ends-iff-infinite-virtually-cyclic",
        "evidence": SCALE_LIMITED,
    }, False


def cmd_stability(args, group):
    A = parse_subset(args.A, group)
    body = {"A": A.name}
    if args.x:
        x = parse_element(args.x, group)
        prof = symdiff_profile(group, A, x, args.rmax, args.side if args.side != "either" else "right")
        body["profile"] = {
            "x": group.format(x),
            "verdict": prof.verdict,
            "bound": prof.bound,
            "slope": prof.slope,
            "by_radius": prof.by_radius,
        }
    sides = ("right", "left") if args.side == "either" else (args.side,)
    verdict = classify_almost_stable(group, A, args.rmax, sides)
    body["classification"] = {"verdict": verdict.label, "size": verdict.size.value, "sides": list(sides)}
    body["claim"] = "almost-stable-iff-finite-symmetric-difference"
    body["evidence"] = SCALE_LIMITED
    return body, False


def cmd_witness(args, group):
    A, B = _parts(args, group)
    if args.side == "either":
        result = witness_search_either(group, A, B, args.r, args.m)
    else:
        result = witness_search(group, A, B, args.r, args.m, WitnessSide[args.side.upper()])
    return {
        "A": A.name,
        "B": B.name,
        "certificate": certificate_doc(group, result),
        "claim": "flexible-groups-admit-translation-witnesses",
        "evidence": SCALE_LIMITED,
    }, False


def cmd_witness_cyclic(args, group):
    A, B = _parts(args, group)
    z = parse_element(args.z, group)
    rep = witness_via_cyclic(group, z, A, B, args.r, args.m)
    body = {
        "A": A.name,
        "B": B.name,
        "z": group.format(z),
        "branch": rep.branch,
        "j_plus": rep.j_plus,
        "j_minus": rep.j_minus,
        "orbit_size": rep.orbit_size,
        "detail": _fmt(group, rep.detail),
        "certificate": certificate_doc(group, rep.certificate),
        "claim": "infinite-order-element-yields-witness",
    }
    if rep.certificate is not None:
        body["reverification_failures"] = len(rep.certificate.failures(group, A, B))
    return body, False


def cmd_prop10(args, group):
    part = stable_partition_locally_finite(group, args.depth)
    G4 = group.chain_members(4)
    profiles = {}
    constant = True
    for x in G4:
        prof = translate_intersection_profile(group, part.A, part.B, x, args.depth)
        tail = [prof[R] for R in range(group.chain_level(x) + 1, args.depth + 1)]
        constant &= len(set(tail)) <= 1
        profiles[group.format(x)] = tail
    # generator profiles need two spare levels above the deepest generator
    verdict = classify_almost_stable(group, part.A, args.depth + 2)
    return {
        "depth": args.depth,
        "A_in_G4": sum(1 for g in G4 if g in part.A),
        "B_in_G4": sum(1 for g in G4 if g in part.B),
        "transversal_sizes": {n: len(t) for n, t in part.transversals.items()},
        "intersection_profiles_constant": constant,
        "intersection_profiles": profiles,
        "almost_stable": verdict.label,
        "size": verdict.size.value,
        "claim": "locally-finite-groups-are-stable",
        "evidence": SCALE_LIMITED,
    }, False


def _topology_doc(group, spec, R):
    doc = {"spec": spec.name}
    for name, v in preconditions(spec, R).items():
        doc[name] = verdict_doc(group, v)
    doc["compact"] = verdict_doc(group, is_compact(spec, R))
    violation = False
    try:
        dich = classify_dichotomy(spec, R)
        doc["class"] = dich.cls.value
        doc["flag"] = dich.flag
        violation = not dich.consistent
        doc["semigroup"] = verdict_doc(group, check_semigroup_continuity(spec, R))
    except PreconditionError as exc:
        doc["class"] = None
        doc["flag"] = "PRECONDITION"
        doc["precondition"] = str(exc)
    doc["claim"] = "lc-shift-continuous-zero-topology-discrete-or-compact"
    return doc, violation


def cmd_topology(args, group):
    spec = parse_topology(args.topology, group)
    doc, violation = _topology_doc(group, spec, args.R)
    doc["zero_ideal"] = verdict_doc(group, zero_ideal_check(group, min(args.R, 10)))
    return doc, violation


def cmd_census(args, group):
    census = enumerate_Z_topologies(args.R)
    rows = []
    for spec, row in zip(census.specs, census.rows):
        doc = {k: verdict_doc(spec.group, v) for k, v in row.items() if isinstance(v, Verdict)}
        doc.update(name=row["name"], **{"class": row["class"], "flag": row["flag"]})
        rows.append(doc)
    return {
        "R": census.R,
        "topologies": rows,
        "classification": census.classes,
        "semigroup_count": census.semigroup_count,
        "pairwise_distinct": census.pairwise_distinct,
        "claim": "four-lc-shift-continuous-topologies-on-Z0",
        "evidence": census.caveat,
    }, any(row["flag"] == "VIOLATION" for row in census.rows)


def cmd_consistency(args, group):
    parts = random_partitions(group, args.count, args.seed)
    if group.has_chain:
        prop = stable_partition_locally_finite(group)
        parts.append(Partition("prop10", prop.A, prop.B))
    rep = flexibility_consistency(group, parts, args.r, args.m)
    checks = [
        {
            "name": c.name,
            "flag": c.flag.value,
            "certificate": certificate_doc(group, c.result),
            "almost_stable": c.almost_stable,
            "size": None if c.size is None else c.size.value,
            "scaling_x": [group.format(x) for x in c.scaling_x],
            "max_bounded_size": c.max_bounded_size,
            "reasons": c.reasons,
        }
        for c in rep.checks
    ]
    return {
        "flexibility": rep.flexibility.value,
        "partitions": len(checks),
        "inconsistent": rep.inconsistent,
        "rejected": sum(c.flag is Flag.REJECTED for c in rep.checks),
        "checks": checks,
        "claim": "flexible-iff-no-proper-almost-stable-subset",
        "evidence": SCALE_LIMITED,
    }, rep.inconsistent > 0


COMMANDS = {
    "ends": cmd_ends,
    "stability": cmd_stability,
    "witness": cmd_witness,
    "witness-cyclic": cmd_witness_cyclic,
    "prop10": cmd_prop10,
    "topology": cmd_topology,
    "census": cmd_census,
    "consistency": cmd_consistency,
}

DEFAULT_GROUPS = {"prop10": "DirSumC2", "census": "Z"}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="groupzero", description=__doc__)
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--group", default=DEFAULT_GROUPS.get(name, "Z"))
        sp.add_argument("--depth", type=int, default=8, help="chain depth for locally finite groups")
        sp.add_argument("--json", type=Path, help="also write the report to this path")
        return sp

    sp = add("ends", "estimate the number of ends")
    sp.add_argument("--rmax", type=int, default=12)
    sp.add_argument("--window", type=int, default=4)

    sp = add("stability", "symmetric-difference profiles of a subset")
    sp.add_argument("--A", required=True)
    sp.add_argument("--x")
    sp.add_argument("--rmax", type=int, default=12)
    sp.add_argument("--side", choices=["right", "left", "either"], default="right")

    for name in ("witness", "witness-cyclic"):
        sp = add(name, "search for a witness I, x with I.x inside B")
        sp.add_argument("--A", required=True)
        sp.add_argument("--B")
        sp.add_argument("--r", type=int, default=20)
        sp.add_argument("--m", type=int, default=DEFAULT_M)
        if name == "witness":
            sp.add_argument("--side", choices=["right", "left", "either"], default="right")
        else:
            sp.add_argument("--z", required=True)

    add("prop10", "the stable partition of a locally finite chain")

    sp = add("topology", "verdicts for a topology on G with zero")
    sp.add_argument("--topology", required=True)
    sp.add_argument("--R", type=int, default=20)

    sp = add("census", "the four topologies on Z with zero")
    sp.add_argument("--R", type=int, default=50)

    sp = add("consistency", "witness search versus almost-stability on seeded partitions")
    sp.add_argument("--count", type=int, default=50)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--r", type=int, default=20)
    sp.add_argument("--m", type=int, default=DEFAULT_M)
    return p


def run(argv: list[str] | None = None) -> tuple[dict, int]:
    args = build_parser().parse_args(argv)
    config = {k: (str(v) if isinstance(v, Path) else v) for k, v in vars(args).items()}
    report = {
        "version": __version__,
        "command": args.command,
        "config": config,
        "seed": getattr(args, "seed", None),
        "max_ball": memory_cap(),
        "max_ball_env": MAX_ELEMENTS_ENV,
    }
    start = time.perf_counter()
    code = 0
    try:
        group = make_group(args.group, args.depth)
        body, violation = COMMANDS[args.command](args, group)
        report["group"] = group.name
        report["result"] = _fmt(group, body)
        code = 1 if violation else 0
    except (ParseError, ChainError, NotVirtuallyCyclic, ResourceCapExceeded, ValueError, OSError) as exc:
        report["error"] = {"type": type(exc).__name__, "message": str(exc)}
        code = 2
    report["seconds"] = round(time.perf_counter() - start, 3)
    report["exit_code"] = code
    if args.json:
        args.json.write_text(json.dumps(report, indent=2) + "\n")
    return report, code


def main(argv: list[str] | None = None) -> int:
    report, code = run(argv)
    json.dump(report, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return code


if __name__ == "__main__":
    raise SystemExit(main())
