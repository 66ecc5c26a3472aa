"""Acceptance checklist: one test per criterion, each printing a PASS/FAIL
line. Run `pytest tests/test_acceptance.py -v -s` to see the lines while the
suite runs; the heavy sweeps are seeded and deterministic.
"""
import json
import math
import time

import numpy as np
import pytest

from gicmix import (
    ChannelConfig,
    JointSearchBudgetError,
    SimParams,
    Strength,
    all_strong_outer_bound,
    capacity_region,
    classify_link,
    constraint_is_redundant,
    contains_point,
    enumerate_vertices,
    estimate_error_rate,
    find_mixed_assignments,
    inner_region,
    outer_bound,
    regions_equal,
    retained_maximum,
    verify_reduction,
)
from gicmix.channel import tolerant_geq
from gicmix.cli import figure2_config, main, sample_configs

# Independent oracle values for the built-in symmetric example, evaluated
# straight from the bound formula at its parameters (gains 1 / 1.1 / 4,
# common power 5).
CAP = 0.5 * math.log2(1 + 5.0)                      # 1.292481250360578
PAIR = 0.5 * math.log2(1 + 1.1 ** 2 * 5 + 5.0)      # 1.7954806206712997
SYM = PAIR / 2                                      # 0.8977403103356498
CEX_SUM = 0.5 * math.log2(1 + 1.05 ** 2 * 5 + 5.0)  # 1.7625646256019865

# The same targets as printed in the acceptance checklist at six decimals;
# those figures carry about 4e-6 of rounding slop relative to the formula.
PRINTED = {"cap": 1.292481, "pair": 1.795484, "sym": 0.897742,
           "cex_sum": 1.762569}
PRINT_TOL = 5e-6

SEED_SATISFY = 20240601
SEED_VIOLATE = 20240602
SIM_SEED = 20240801


def _report(name: str, ok: bool, detail: str = "") -> None:
    line = f"ACCEPTANCE {name}: {'PASS' if ok else 'FAIL'}"
    if detail:
        line += f"  [{detail}]"
    print(line)


@pytest.fixture(scope="module")
def satisfy_pool():
    return sample_configs("satisfy", 1000, SEED_SATISFY)


@pytest.fixture(scope="module")
def violate_pool():
    return sample_configs("violate", 1000, SEED_VIOLATE)


# ---------------------------------------------------------------------------


def test_criterion_1_figure2_reproduction(capsys):
    t0 = time.perf_counter()
    code = main(["figure2"])
    elapsed = time.perf_counter() - t0
    doc = json.loads(capsys.readouterr().out)

    problems = []
    if code != 0:
        problems.append(f"exit code {code}")
    if doc["assignments"] != [{"very_strong": [3, 1, 2], "strong": [2, 3, 1]}]:
        problems.append(f"assignment not unique/canonical: {doc['assignments']}")
    for value in doc["max_single_user_rates"]:
        if abs(value - CAP) > 1e-9 or abs(value - PRINTED["cap"]) > PRINT_TOL:
            problems.append(f"per-user max rate {value}")
    sums = list(doc["pair_sum_bounds"].values())
    if len(sums) != 3:
        problems.append(f"expected 3 pair sum bounds, got {len(sums)}")
    for value in sums:
        if abs(value - PAIR) > 1e-9 or abs(value - PRINTED["pair"]) > PRINT_TOL:
            problems.append(f"pair sum bound {value}")
    sym = doc["symmetric_vertex"]
    if sym is None or any(abs(v - SYM) > 1e-9 for v in sym) \
            or any(abs(v - PRINTED["sym"]) > PRINT_TOL for v in sym):
        problems.append(f"symmetric vertex {sym}")
    if not doc["inner_equals_capacity"] or not doc["outer_equals_capacity"]:
        problems.append("region equalities do not hold")
    if elapsed >= 1.0:
        problems.append(f"took {elapsed:.2f}s (limit 1s)")

    with capsys.disabled():
        _report("1 figure2 reproduction", not problems,
                f"{elapsed*1000:.0f} ms")
    assert not problems, "; ".join(problems)


def test_criterion_2_equality_sweep(satisfy_pool):
    t0 = time.perf_counter()
    failures = []
    for i, cfg in enumerate(satisfy_pool):
        assignments = find_mixed_assignments(cfg)
        if not assignments:
            failures.append(f"config {i}: no assignment")
            continue
        for asg in assignments:
            cap = capacity_region(cfg, asg)
            if not regions_equal(outer_bound(cfg), cap, 1e-9):
                failures.append(f"config {i}: outer != capacity")
            if not regions_equal(inner_region(cfg, asg), cap, 1e-9):
                failures.append(f"config {i}: inner != capacity")
    elapsed = time.perf_counter() - t0
    if elapsed >= 30.0:
        failures.append(f"took {elapsed:.1f}s (limit 30s)")

    _report("2 equality sweep 1000/1000", not failures,
            f"{elapsed:.1f} s")
    assert not failures, failures[:5]


def _certificate_for(cfg: ChannelConfig):
    """A would-be-dropped pair sum bound that vertex enumeration certifies as
    non-redundant, or None."""
    poly = outer_bound(cfg)
    for rx in (1, 2, 3):
        for tx in (1, 2, 3):
            if tx == rx:
                continue
            other = next(u for u in (1, 2, 3) if u not in (tx, rx))
            if classify_link(cfg, tx, rx, other).strength is not Strength.STRONG:
                continue
            if classify_link(cfg, other, rx, tx).strength is Strength.NOT_STRONG:
                continue
            tag = f"MAC({{{tx},{rx}}},{rx}) sum"
            k = next(i for i, hs in enumerate(poly.halfspaces) if hs.tag == tag)
            if not constraint_is_redundant(poly, k):
                return tag
    return None


def test_criterion_3_reduction_verifier(satisfy_pool, violate_pool):
    failures = []

    hold = 0
    for i, cfg in enumerate(satisfy_pool):
        assignments = find_mixed_assignments(cfg)
        if assignments and all(verify_reduction(cfg, a).all_hold for a in assignments):
            hold += 1
        else:
            failures.append(f"satisfy config {i}: reduction steps do not all hold")
    if hold != len(satisfy_pool):
        failures.append(f"only {hold}/1000 satisfy configs pass the reduction steps")

    certified = sum(1 for cfg in violate_pool if _certificate_for(cfg) is not None)
    if certified < 0.95 * len(violate_pool):
        failures.append(f"only {certified}/1000 violate configs exhibit a "
                        "non-redundant dropped bound")

    # the specific counterexample: the symmetric example with the very strong
    # gain into receiver 1 lowered to 1.05
    cex = ChannelConfig(h=[[1.0, 4.0, 1.1], [1.1, 1.0, 4.0], [1.05, 1.1, 1.0]],
                        P=[5.0, 5.0, 5.0])
    poly = outer_bound(cex)
    k = next(i for i, hs in enumerate(poly.halfspaces)
             if hs.tag == "MAC({3,1},1) sum")
    bound = poly.halfspaces[k].b
    retained = retained_maximum(poly, k)
    if constraint_is_redundant(poly, k):
        failures.append("counterexample sum bound reported redundant")
    if abs(bound - CEX_SUM) > 1e-9 or abs(bound - PRINTED["cex_sum"]) > PRINT_TOL:
        failures.append(f"counterexample bound {bound}")
    if abs(retained - PAIR) > 1e-9 or abs(retained - PRINTED["pair"]) > PRINT_TOL:
        failures.append(f"counterexample retained max {retained}")
    if not retained > bound:
        failures.append("retained max does not exceed the dropped bound")

    _report("3 reduction verifier", not failures,
            f"certificates {certified}/1000")
    assert not failures, failures[:5]


def test_criterion_4_redundancy_oracle_agreement():
    configs = sample_configs("satisfy", 250, 314) + sample_configs("violate", 250, 159)
    checked = 0
    disagreements = []
    for i, cfg in enumerate(configs):
        regions = [outer_bound(cfg), all_strong_outer_bound(cfg)]
        assignments = find_mixed_assignments(cfg)
        if assignments:
            regions.append(capacity_region(cfg, assignments[0]))
            regions.append(inner_region(cfg, assignments[0]))
        for poly in regions:
            for k in range(len(poly)):
                checked += 1
                direct = constraint_is_redundant(poly, k)
                oracle = regions_equal(poly, poly.without(k), 1e-9)
                if direct != oracle:
                    disagreements.append((i, poly.halfspaces[k].tag, direct, oracle))

    _report("4 redundancy oracle agreement", not disagreements,
            f"{checked} constraints checked")
    assert not disagreements, disagreements[:5]


def test_criterion_5_grid_membership_oracle():
    cfg = figure2_config()
    asg = find_mixed_assignments(cfg)[0]
    poly = capacity_region(cfg, asg)

    # independent re-implementation of the nine pair-MAC inequalities
    h = cfg.h
    P = cfg.P
    bounds = []
    for r, j2 in zip((1, 2, 3), asg.strong):
        own = h[r - 1, r - 1] ** 2 * P[r - 1]
        cross = h[j2 - 1, r - 1] ** 2 * P[j2 - 1]
        e_r = np.eye(3)[r - 1]
        e_j2 = np.eye(3)[j2 - 1]
        bounds.append((e_r, 0.5 * math.log2(1 + own)))
        bounds.append((e_j2, 0.5 * math.log2(1 + cross)))
        bounds.append((e_r + e_j2, 0.5 * math.log2(1 + own + cross)))
    A = np.array([a for a, _ in bounds])
    b = np.array([v for _, v in bounds])

    top = 1.1 * max(hs.b for hs in poly.halfspaces)
    axis = np.linspace(0.0, top, 50)
    grid = np.array(np.meshgrid(axis, axis, axis, indexing="ij")).reshape(3, -1).T
    direct = (A @ grid.T <= b[:, None] + 1e-9).all(axis=0)  # grid is nonnegative

    mismatches = 0
    for point, expected in zip(grid, direct):
        if contains_point(poly, point, 1e-9) != bool(expected):
            mismatches += 1

    _report("5 grid membership oracle", mismatches == 0,
            f"{len(grid)} points, {int(direct.sum())} inside")
    assert mismatches == 0


def test_criterion_6_simulator_separation():
    cfg = figure2_config()
    asg = find_mixed_assignments(cfg)[0]
    t0 = time.perf_counter()
    problems = []

    inside = tuple(0.6 * SYM for _ in range(3))
    ber_in = {}
    for n in (4, 8, 12):
        params = SimParams(n=n, rates=inside, trials=2000, master_seed=SIM_SEED)
        ber_in[n] = estimate_error_rate(cfg, asg, params).block_error_rate
    if not (ber_in[4] >= ber_in[8] >= ber_in[12]):
        problems.append(f"inside-rate error not non-increasing: {ber_in}")
    if not ber_in[12] < 0.1:
        problems.append(f"inside-rate error at n=12 is {ber_in[12]} (>= 0.1)")

    outside = tuple(1.3 * SYM for _ in range(3))
    ber_out = {}
    for n in (4, 8, 12):
        try:
            params = SimParams(n=n, rates=outside, trials=2000, master_seed=SIM_SEED)
        except JointSearchBudgetError as exc:
            # The n=12 point at 1.3x the symmetric vertex needs a 2^28 joint
            # search, beyond the simulator's enforced 2^24 desk-scale budget
            # (and hours of compute on this hardware); recorded as a failure
            # rather than silently shrinking the sweep.
            problems.append(f"outside-rate point n={n} cannot run: {exc}")
            continue
        ber_out[n] = estimate_error_rate(cfg, asg, params).block_error_rate
        if not ber_out[n] > 0.5:
            problems.append(f"outside-rate error at n={n} is {ber_out[n]} (<= 0.5)")

    elapsed = time.perf_counter() - t0
    if elapsed >= 300.0:
        problems.append(f"took {elapsed:.0f}s (limit 300s)")

    _report("6 simulator separation", not problems,
            f"inside {sorted(ber_in.items())}, outside {sorted(ber_out.items())}, "
            f"{elapsed:.0f} s")
    assert not problems, "; ".join(problems)


def test_criterion_7_invariance_suite():
    problems = []

    # scale invariance of classifications and region bounds
    configs = [figure2_config()] + sample_configs("satisfy", 5, 7) \
        + sample_configs("violate", 5, 8)
    for c in (0.25, 4.0, 100.0):
        for cfg in configs:
            scaled = ChannelConfig(h=cfg.h / math.sqrt(c), P=cfg.P * c)
            for tx in (1, 2, 3):
                for rx in (1, 2, 3):
                    if tx == rx:
                        continue
                    other = next(u for u in (1, 2, 3) if u not in (tx, rx))
                    if (classify_link(cfg, tx, rx, other).strength
                            is not classify_link(scaled, tx, rx, other).strength):
                        problems.append(f"classification changed under c={c}")
            for hs_a, hs_b in zip(outer_bound(cfg).halfspaces,
                                  outer_bound(scaled).halfspaces):
                if hs_a.tag != hs_b.tag or abs(hs_a.b - hs_b.b) > 1e-12:
                    problems.append(
                        f"bound {hs_a.tag} moved by {abs(hs_a.b - hs_b.b)} under c={c}")

    # zero power collapses every region to the origin
    zero = ChannelConfig(h=figure2_config().h, P=[0.0, 0.0, 0.0])
    polys = [outer_bound(zero)]
    for asg in find_mixed_assignments(zero):
        polys += [capacity_region(zero, asg), inner_region(zero, asg)]
    for poly in polys:
        verts = enumerate_vertices(poly)
        if verts.shape != (1, 3) or not np.all(verts == 0.0):
            problems.append(f"zero-power region has vertices {verts}")

    # very strong implies strong over 10^4 random links
    rng = np.random.default_rng(4242)
    links = 0
    while links < 10_000:
        h = rng.uniform(-4.0, 4.0, (3, 3))
        h[np.diag_indices(3)] = rng.uniform(0.2, 3.0, 3) * rng.choice([-1.0, 1.0], 3)
        cfg = ChannelConfig(h=h, P=rng.uniform(0.0, 30.0, 3))
        for tx in (1, 2, 3):
            for rx in (1, 2, 3):
                if tx == rx:
                    continue
                other = next(u for u in (1, 2, 3) if u not in (tx, rx))
                regime = classify_link(cfg, tx, rx, other)
                links += 1
                if regime.strength is Strength.VERY_STRONG:
                    if not tolerant_geq(cfg.gain(tx, rx) ** 2, cfg.gain(tx, tx) ** 2):
                        problems.append(f"very strong without strong: {cfg.h}")

    _report("7 invariance suite", not problems, f"{links} links checked")
    assert not problems, problems[:5]
