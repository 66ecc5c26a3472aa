"""Command-line front end.

Subcommands: `classify` (link regimes and role assignments), `region` (half-
space/vertex export of any region), `verify` (redundancy, region-equality and
reduction-step reports, optionally over seeded config sweeps), `simulate`
(Monte Carlo error rates), and `figure2` (the built-in symmetric example, end
to end). All output is JSON with floats at 17 significant digits so documents
round-trip bit-exactly. Exit codes: 0 success, 1 verification failure, 2
usage or config error.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from .channel import (
    USERS,
    ChannelConfig,
    ChannelConfigError,
    MixedAssignment,
    Strength,
    classify_link,
    find_mixed_assignments,
    parse_config,
)
from .region import (
    RegimeError,
    all_strong_outer_bound,
    capacity_region,
    constraint_is_redundant,
    enumerate_vertices,
    inner_region,
    mac_region,
    outer_bound,
    regions_equal,
    region_to_dict,
    retained_maximum,
    verify_reduction,
)
from .sim import SimParams, estimate_error_rate

GAIN_RANGE = (0.5, 2.0)
POWER_RANGE = (0.5, 20.0)


# ---------------------------------------------------------------------------
# JSON output with full-precision floats


def _render(obj, out: list[str]) -> None:
    if isinstance(obj, float):
        out.append(format(obj, ".17g"))
    elif isinstance(obj, bool):
        out.append("true" if obj else "false")
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif obj is None:
        out.append("null")
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, dict):
        out.append("{")
        for i, (key, value) in enumerate(obj.items()):
            if i:
                out.append(", ")
            out.append(json.dumps(str(key)))
            out.append(": ")
            _render(value, out)
        out.append("}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        out.append("[")
        for i, value in enumerate(obj):
            if i:
                out.append(", ")
            _render(value, out)
        out.append("]")
    elif isinstance(obj, np.floating):
        out.append(format(float(obj), ".17g"))
    else:
        raise TypeError(f"cannot serialize {type(obj)!r}")


def dumps17(obj) -> str:
    """JSON text with every float at 17 significant digits (lossless)."""
    out: list[str] = []
    _render(obj, out)
    return "".join(out)


# ---------------------------------------------------------------------------
# Deterministic config sampler for verification sweeps


def _sample_one(rng: np.random.Generator, mode: str) -> ChannelConfig:
    diag = rng.uniform(*GAIN_RANGE, 3)
    P = rng.uniform(*POWER_RANGE, 3)
    roles = []
    for r in USERS:
        a, b = (t for t in USERS if t != r)
        roles.append((a, b) if rng.integers(2) == 0 else (b, a))
    h = np.diag(diag).tolist()
    # Strong gains first: relative to the interfering transmitter's own gain.
    for r, (_, j2) in zip(USERS, roles):
        h[j2 - 1][r - 1] = (1.0 + rng.uniform()) * abs(diag[j2 - 1])
    # Very strong gains sit above the decode-first threshold by construction.
    for r, (j1, j2) in zip(USERS, roles):
        threshold = diag[j1 - 1] ** 2 * (
            1.0 + diag[r - 1] ** 2 * P[r - 1] + h[j2 - 1][r - 1] ** 2 * P[j2 - 1])
        h[j1 - 1][r - 1] = (1.0 + rng.uniform()) * math.sqrt(threshold)
    if mode == "violate":
        # Pull one very strong gain below its threshold, but keep it strong
        # and low enough that the pair bound it would have made droppable is
        # visibly needed (the two alternative caps on that pair stay higher).
        r = int(rng.integers(3)) + 1
        j1, j2 = roles[r - 1]
        own2 = diag[j1 - 1] ** 2
        via_caps = own2 * (1.0 + diag[r - 1] ** 2 * P[r - 1])
        via_mirror = own2 + P[r - 1] * (h[r - 1][j1 - 1] ** 2 - diag[r - 1] ** 2) / P[j1 - 1]
        top = min(via_caps, via_mirror)
        w = rng.uniform(0.1, 0.9)
        h[j1 - 1][r - 1] = math.sqrt(own2 + w * (top - own2))
    return ChannelConfig(h=h, P=P)


def sample_configs(mode: str, count: int, seed: int) -> list[ChannelConfig]:
    """Seeded channel sampler.

    `satisfy` draws channels where every receiver has one strong and one very
    strong interferer by construction; `violate` additionally shrinks one very
    strong gain below its threshold (staying strong). Deterministic in
    (mode, count, seed).
    """
    if mode not in ("satisfy", "violate"):
        raise ValueError(f"mode must be 'satisfy' or 'violate', got {mode!r}")
    if count < 1:
        raise ValueError("count must be at least 1")
    rng = np.random.default_rng(seed)
    return [_sample_one(rng, mode) for _ in range(count)]


def figure2_config() -> ChannelConfig:
    """The built-in symmetric example: common power 5, direct gains 1, strong
    cross gains 1.1, very strong cross gains 4."""
    h = [[1.0, 4.0, 1.1],
         [1.1, 1.0, 4.0],
         [4.0, 1.1, 1.0]]
    return ChannelConfig(h=h, P=[5.0, 5.0, 5.0])


# ---------------------------------------------------------------------------
# Helpers


class _UsageError(Exception):
    pass


def _load_config(path: str) -> ChannelConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise _UsageError(f"cannot read config file: {exc}") from exc
    return parse_config(text)


def _parse_roles(text: str) -> MixedAssignment:
    try:
        j1s = tuple(int(p) for p in text.split(","))
    except ValueError as exc:
        raise _UsageError(f"bad --roles value {text!r}: {exc}") from exc
    if len(j1s) != 3:
        raise _UsageError("--roles needs three first-decoded indices, e.g. 3,1,2")
    try:
        j2s = tuple(next(u for u in USERS if u not in (r, j1s[r - 1])) for r in USERS)
        return MixedAssignment(very_strong=j1s, strong=j2s)
    except (StopIteration, ValueError) as exc:
        raise _UsageError(f"bad --roles value {text!r}: {exc}") from exc


def _canonical_assignment(cfg: ChannelConfig) -> MixedAssignment:
    assignments = find_mixed_assignments(cfg)
    if not assignments:
        raise RegimeError(
            "no mixed strong / very strong assignment exists for this channel")
    return assignments[0]


def _assignment_for(cfg: ChannelConfig, roles: str | None) -> MixedAssignment:
    if roles is not None:
        return _parse_roles(roles)
    return _canonical_assignment(cfg)


def _emit(doc: dict) -> None:
    sys.stdout.write(dumps17(doc) + "\n")


# ---------------------------------------------------------------------------
# Subcommand implementations


def _cmd_classify(args) -> int:
    cfg = _load_config(args.config)
    links = []
    for tx, rx in ((t, r) for t in USERS for r in USERS if t != r):
        other = next(u for u in USERS if u not in (tx, rx))
        regime = classify_link(cfg, tx, rx, other)
        links.append({"tx": tx, "rx": rx, "regime": regime.strength.value,
                      "margin": regime.margin})
    assignments = [a.to_dict() for a in find_mixed_assignments(cfg)]
    _emit({"links": links, "assignments": assignments})
    return 0


def _parse_subset(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(p) for p in text.split(","))
    except ValueError as exc:
        raise _UsageError(f"bad --subset value {text!r}: {exc}") from exc


def _cmd_region(args) -> int:
    cfg = _load_config(args.config)
    if args.which == "mac":
        if args.subset is None or args.receiver is None:
            raise _UsageError("--which mac requires --subset and --receiver")
        poly = mac_region(cfg, _parse_subset(args.subset), args.receiver)
    elif args.which == "outer":
        poly = outer_bound(cfg)
    elif args.which == "strong-outer":
        poly = all_strong_outer_bound(cfg)
    elif args.which == "capacity":
        poly = capacity_region(cfg, _assignment_for(cfg, args.roles))
    else:
        poly = inner_region(cfg, _assignment_for(cfg, args.roles))
    vertices = enumerate_vertices(poly) if args.vertices else None
    _emit(region_to_dict(poly, vertices))
    return 0


def _verify_one_redundancy(cfg: ChannelConfig) -> tuple[dict, bool]:
    """Redundancy status of every outer-bound constraint; flags any bound the
    mixed-regime reduction claims droppable that is not."""
    poly = outer_bound(cfg)
    constraints = [{"index": k, "tag": hs.tag,
                    "redundant": constraint_is_redundant(poly, k)}
                   for k, hs in enumerate(poly.halfspaces)]
    violations = []
    for asg in find_mixed_assignments(cfg):
        for r in USERS:
            dropped = f"MAC({{{asg.j1(r)},{r}}},{r}) "
            for entry in constraints:
                if entry["tag"].startswith(dropped) and not entry["redundant"]:
                    violations.append({"assignment": asg.to_dict(), **entry})
    report = {"constraints": constraints, "claimed_droppable_violations": violations}
    return report, not violations


def _certificate(cfg: ChannelConfig) -> dict | None:
    """A would-be-dropped pair bound that is provably needed: some strong but
    not very strong interferer whose pair MAC sum constraint, removed from the
    outer bound, lets the pair rate rise."""
    poly = outer_bound(cfg)
    for r in USERS:
        for j1 in USERS:
            if j1 == r:
                continue
            j2 = next(u for u in USERS if u not in (r, j1))
            first = classify_link(cfg, j1, r, j2)
            if first.strength is not Strength.STRONG:
                continue
            if classify_link(cfg, j2, r, j1).strength is Strength.NOT_STRONG:
                continue
            tag = f"MAC({{{j1},{r}}},{r}) sum"
            k = next(i for i, hs in enumerate(poly.halfspaces) if hs.tag == tag)
            if not constraint_is_redundant(poly, k):
                return {"receiver": r, "first_decoded": j1, "tag": tag,
                        "bound": poly.halfspaces[k].b,
                        "retained_max": retained_maximum(poly, k)}
    return None


def _cmd_verify(args) -> int:
    if args.config is not None:
        configs = [_load_config(args.config)]
        source = {"config": args.config}
    else:
        configs = sample_configs(args.sample_mode, args.samples, args.seed)
        source = {"samples": args.samples, "seed": args.seed,
                  "sample_mode": args.sample_mode}

    ok = True
    if args.mode == "redundancy":
        reports = []
        for cfg in configs:
            report, clean = _verify_one_redundancy(cfg)
            ok &= clean
            reports.append(report)
        doc = {**source, "mode": args.mode, "ok": ok}
        if len(reports) == 1:
            doc["report"] = reports[0]
        else:
            doc["violation_count"] = sum(len(r["claimed_droppable_violations"])
                                         for r in reports)
    elif args.mode == "theorem":
        applicable = equal_outer = equal_inner = 0
        failures = []
        for i, cfg in enumerate(configs):
            assignments = find_mixed_assignments(cfg)
            if not assignments:
                continue
            applicable += 1
            for asg in assignments:
                cap = capacity_region(cfg, asg)
                outer_ok = regions_equal(outer_bound(cfg), cap)
                inner_ok = regions_equal(inner_region(cfg, asg), cap)
                equal_outer += outer_ok
                equal_inner += inner_ok
                if not (outer_ok and inner_ok):
                    ok = False
                    failures.append({"config_index": i, "assignment": asg.to_dict(),
                                     "outer_equals_capacity": outer_ok,
                                     "inner_equals_capacity": inner_ok})
        doc = {**source, "mode": args.mode, "checked": len(configs),
               "applicable": applicable, "outer_matches": equal_outer,
               "inner_matches": equal_inner, "failures": failures, "ok": ok}
    else:  # appendix-b
        applicable = steps_hold = 0
        step_failures = []
        certificates = 0
        eligible = 0
        examples = []
        for i, cfg in enumerate(configs):
            assignments = find_mixed_assignments(cfg)
            if assignments:
                applicable += 1
                for asg in assignments:
                    report = verify_reduction(cfg, asg)
                    if report.all_hold:
                        steps_hold += 1
                    else:
                        ok = False
                        step_failures.append({"config_index": i,
                                              "assignment": asg.to_dict(),
                                              "report": report.to_dict()})
            else:
                eligible += 1
                cert = _certificate(cfg)
                if cert is not None:
                    certificates += 1
                    if len(examples) < 3:
                        examples.append({"config_index": i, **cert})
        doc = {**source, "mode": args.mode, "checked": len(configs),
               "applicable": applicable, "reductions_hold": steps_hold,
               "step_failures": step_failures,
               "certificates": {"eligible": eligible, "found": certificates,
                                "examples": examples},
               "ok": ok}
        if len(configs) == 1 and find_mixed_assignments(configs[0]):
            doc["report"] = verify_reduction(
                configs[0], find_mixed_assignments(configs[0])[0]).to_dict()
    _emit(doc)
    return 0 if ok else 1


def _cmd_simulate(args) -> int:
    cfg = _load_config(args.config)
    asg = _assignment_for(cfg, args.roles)
    try:
        rates = tuple(float(p) for p in args.rates.split(","))
    except ValueError as exc:
        raise _UsageError(f"bad --rates value {args.rates!r}: {exc}") from exc
    if len(rates) != 3:
        raise _UsageError("--rates needs three comma-separated values")
    params = SimParams(n=args.n, rates=rates, trials=args.trials,
                       master_seed=args.seed)
    report = estimate_error_rate(cfg, asg, params, workers=args.workers)
    _emit(report.to_dict())
    return 0


def _cmd_figure2(args) -> int:
    cfg = figure2_config()
    assignments = find_mixed_assignments(cfg)
    doc: dict = {"config": cfg.to_dict(),
                 "assignments": [a.to_dict() for a in assignments]}
    if len(assignments) != 1:
        doc["ok"] = False
        _emit(doc)
        return 1
    asg = assignments[0]
    cap = capacity_region(cfg, asg)
    vertices = enumerate_vertices(cap)
    outer_ok = regions_equal(outer_bound(cfg), cap)
    inner_ok = regions_equal(inner_region(cfg, asg), cap)
    sums = {hs.tag: hs.b for hs in cap.halfspaces if hs.tag.endswith("sum")}
    sym = max((v for v in vertices if abs(v[0] - v[1]) < 1e-12 and abs(v[1] - v[2]) < 1e-12),
              key=lambda v: float(v.sum()), default=None)
    doc.update({
        "capacity_region": region_to_dict(cap, vertices),
        "max_single_user_rates": [float(vertices[:, i].max()) for i in range(3)],
        "pair_sum_bounds": sums,
        "symmetric_vertex": None if sym is None else [float(x) for x in sym],
        "max_sum_rate": float((vertices.sum(axis=1)).max()),
        "outer_equals_capacity": outer_ok,
        "inner_equals_capacity": inner_ok,
        "ok": outer_ok and inner_ok,
    })
    _emit(doc)
    return 0 if doc["ok"] else 1


# ---------------------------------------------------------------------------
# Argument parsing and dispatch


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gicmix",
        description="Rate regions and decode-order simulation for the 3-user "
                    "Gaussian interference channel.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="link regimes and role assignments")
    p.add_argument("--config", required=True, help="channel JSON file")
    p.add_argument("--format", choices=["json"], default="json")

    p = sub.add_parser("region", help="export a rate region")
    p.add_argument("--which", required=True,
                   choices=["mac", "outer", "strong-outer", "capacity", "inner"])
    p.add_argument("--config", required=True, help="channel JSON file")
    p.add_argument("--subset", help="transmitters for --which mac, e.g. 1,2")
    p.add_argument("--receiver", type=int, help="receiver for --which mac")
    p.add_argument("--roles", help="first-decoded interferer per receiver, e.g. 3,1,2")
    p.add_argument("--vertices", action="store_true", help="include vertex enumeration")
    p.add_argument("--format", choices=["json"], default="json")

    p = sub.add_parser("verify", help="redundancy / equality / reduction reports")
    p.add_argument("--mode", required=True,
                   choices=["redundancy", "theorem", "appendix-b"])
    p.add_argument("--config", help="check one channel JSON file")
    p.add_argument("--samples", type=int, default=100,
                   help="number of sampled channels when no --config is given")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--sample-mode", choices=["satisfy", "violate"], default="satisfy")
    p.add_argument("--format", choices=["json"], default="json")

    p = sub.add_parser("simulate", help="Monte Carlo decode-order simulation")
    p.add_argument("--config", required=True, help="channel JSON file")
    p.add_argument("--rates", required=True, help="bits per channel use, e.g. 0.25,0.25,0.25")
    p.add_argument("--n", required=True, type=int, help="blocklength")
    p.add_argument("--trials", required=True, type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--roles", help="override the canonical role assignment")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--format", choices=["json"], default="json")

    p = sub.add_parser("figure2", help="run the built-in symmetric example end to end")
    p.add_argument("--format", choices=["json"], default="json")

    return parser


_COMMANDS = {
    "classify": _cmd_classify,
    "region": _cmd_region,
    "verify": _cmd_verify,
    "simulate": _cmd_simulate,
    "figure2": _cmd_figure2,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        return _COMMANDS[args.command](args)
    except (_UsageError, ChannelConfigError, RegimeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def console_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_entry()
