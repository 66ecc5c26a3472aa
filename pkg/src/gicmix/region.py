"""Rate regions of the 3-user Gaussian IC as half-space polytopes.

Every region here is an intersection of constraints sum_{i in T} R_i <= b
with T a subset of users, plus implicit nonnegativity, so coefficient
vectors live in {0,1}^3 and the polytopes are small enough that vertex
enumeration over all plane triples is exact and cheap. All logarithms are
base 2; bounds are bits per channel use.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .channel import (
    USERS,
    ChannelConfig,
    MixedAssignment,
    Strength,
    classify_link,
    tolerant_geq,
)

# Absolute tolerance for geometric comparisons (membership, dedup,
# redundancy). Gains and powers are O(1)-O(1e2), so doubles leave
# several orders of headroom below this.
GEOM_TOL = 1e-9


class UnboundedRegionError(ValueError):
    """Vertex enumeration was asked for a polytope with a free direction."""


class RegimeError(ValueError):
    """A region formula was requested outside the regime where it holds."""


def rate_bound(received_power: float) -> float:
    """Gaussian rate bound 0.5 * log2(1 + x) in bits per channel use."""
    return 0.5 * math.log2(1.0 + received_power)


def constraint_load(a, point) -> float:
    """Left-hand side a . R accumulated in index order.

    Shared by membership and slack evaluation so both produce bit-identical
    floats and can be compared at zero tolerance.
    """
    total = 0.0
    for coeff, value in zip(a, point):
        if coeff:
            total += value
    return total


@dataclass(frozen=True)
class HalfSpace:
    """One constraint a . (R1,R2,R3) <= b with a in {0,1}^3."""

    a: tuple[int, int, int]
    b: float
    tag: str

    def __post_init__(self):
        if len(self.a) != 3 or any(c not in (0, 1) for c in self.a):
            raise ValueError(f"coefficients must be three 0/1 entries, got {self.a!r}")
        if not any(self.a):
            raise ValueError("coefficient vector must not be all zero")


@dataclass(frozen=True)
class RatePolytope:
    """Intersection of half-spaces with implicit nonnegativity R_i >= 0."""

    halfspaces: tuple[HalfSpace, ...]

    def __len__(self) -> int:
        return len(self.halfspaces)

    def matrix(self) -> tuple[np.ndarray, np.ndarray]:
        A = np.array([hs.a for hs in self.halfspaces], dtype=float)
        b = np.array([hs.b for hs in self.halfspaces], dtype=float)
        return A, b

    def without(self, k: int) -> "RatePolytope":
        hs = self.halfspaces
        if not 0 <= k < len(hs):
            raise IndexError(f"constraint index {k} out of range")
        return RatePolytope(hs[:k] + hs[k + 1:])

    def is_bounded(self) -> bool:
        # 0/1 coefficients with R >= 0: bounded iff every coordinate
        # appears in some constraint.
        return all(any(hs.a[i] for hs in self.halfspaces) for i in range(3))


def _subset_tag(members: tuple[int, ...], subset: tuple[int, ...], receiver: int) -> str:
    inside = ",".join(str(i) for i in members)
    if len(subset) == 1:
        suffix = f"R{subset[0]}"
    elif len(subset) == len(members):
        suffix = "sum"
    else:
        suffix = "+".join(f"R{i}" for i in subset)
    return f"MAC({{{inside}}},{receiver}) {suffix}"


def mac_region(cfg: ChannelConfig, members, receiver: int) -> RatePolytope:
    """Multiple-access capacity region at `receiver` for the transmitters in
    `members`: one bound per nonempty subset T,
    sum_{i in T} R_i <= 0.5 log2(1 + sum_{i in T} h_i,rx^2 P_i).

    Users outside `members` are unconstrained, so the region is a cylinder in
    rate space. The order of `members` is kept in the constraint tags.
    """
    members = tuple(members)
    if not members:
        raise ValueError("members must be a nonempty subset of users")
    if len(set(members)) != len(members) or any(m not in USERS for m in members):
        raise ValueError(f"members must be distinct users from {USERS}, got {members}")
    if receiver not in USERS:
        raise ValueError(f"receiver must be 1, 2 or 3, got {receiver!r}")
    halfspaces = []
    for size in range(1, len(members) + 1):
        for subset in itertools.combinations(members, size):
            load = sum(cfg.gain(i, receiver) ** 2 * cfg.power(i) for i in subset)
            a = tuple(1 if u in subset else 0 for u in USERS)
            halfspaces.append(HalfSpace(a, rate_bound(load), _subset_tag(members, subset, receiver)))
    return RatePolytope(tuple(halfspaces))


def _single_user_bounds(cfg: ChannelConfig) -> list[HalfSpace]:
    out = []
    for i in USERS:
        a = tuple(1 if u == i else 0 for u in USERS)
        out.append(HalfSpace(a, rate_bound(cfg.gain(i, i) ** 2 * cfg.power(i)),
                             f"single-user {i}"))
    return out


def _third(tx: int, rx: int) -> int:
    return next(u for u in USERS if u not in (tx, rx))


def outer_bound(cfg: ChannelConfig) -> RatePolytope:
    """Capacity outer bound: the three single-user bounds plus, for every
    strong link i -> j, the pair MAC region over {i, j} at receiver j.

    When i interferes strongly at receiver j, that receiver can reconstruct
    a less noisy copy of receiver i's observation, so (R_i, R_j) cannot leave
    the MAC region of the two signals at receiver j. Duplicate bounds arising
    from symmetric gains are kept, with distinct tags.
    """
    halfspaces = _single_user_bounds(cfg)
    for i, j in itertools.permutations(USERS, 2):
        if classify_link(cfg, i, j, _third(i, j)).strength is not Strength.NOT_STRONG:
            halfspaces.extend(mac_region(cfg, (i, j), j).halfspaces)
    return RatePolytope(tuple(halfspaces))


def all_strong_outer_bound(cfg: ChannelConfig) -> RatePolytope:
    """Outer bound when every cross link is strong: the six pair MAC regions.

    Single-user bounds are omitted because each receiver's own MAC region
    already carries them. Raises RegimeError when some link is not strong.
    """
    halfspaces = []
    for i, j in itertools.permutations(USERS, 2):
        if classify_link(cfg, i, j, _third(i, j)).strength is Strength.NOT_STRONG:
            raise RegimeError(f"link {i} -> {j} is not strong")
        halfspaces.extend(mac_region(cfg, (i, j), j).halfspaces)
    return RatePolytope(tuple(halfspaces))


def check_mixed_hypotheses(cfg: ChannelConfig, asg: MixedAssignment) -> None:
    """Raise RegimeError unless `asg` gives every receiver a very strong
    first-decoded interferer and a strong jointly-decoded one."""
    for r in USERS:
        j1, j2 = asg.j1(r), asg.j2(r)
        if classify_link(cfg, j1, r, j2).strength is not Strength.VERY_STRONG:
            raise RegimeError(
                f"transmitter {j1} is not a very strong interferer at receiver {r}")
        if classify_link(cfg, j2, r, j1).strength is Strength.NOT_STRONG:
            raise RegimeError(
                f"transmitter {j2} is not a strong interferer at receiver {r}")


def capacity_region(cfg: ChannelConfig, asg: MixedAssignment) -> RatePolytope:
    """Capacity region under mixed strong / very strong interference: for each
    receiver j, (R_j, R_j2) lies in the MAC region over {j, j2} at receiver j.

    The characterization is only valid when the mixed conditions hold for
    `asg`, so this refuses (RegimeError) rather than return a region that is
    not known to be capacity.
    """
    check_mixed_hypotheses(cfg, asg)
    halfspaces = []
    for r in USERS:
        halfspaces.extend(mac_region(cfg, (r, asg.j2(r)), r).halfspaces)
    return RatePolytope(tuple(halfspaces))


def inner_region(cfg: ChannelConfig, asg: MixedAssignment) -> RatePolytope:
    """Achievable region of the decode-first-then-MAC scheme for role split
    `asg`: per receiver, a treat-as-noise bound on the first-decoded
    interferer's rate plus the two-user MAC constraints after subtraction.

    Achievable for any channel and any role split; no regime condition is
    required and no simplification is performed (12 half-spaces).
    """
    halfspaces = []
    for r in USERS:
        j1, j2 = asg.j1(r), asg.j2(r)
        denom = (1.0 + cfg.gain(r, r) ** 2 * cfg.power(r)
                 + cfg.gain(j2, r) ** 2 * cfg.power(j2))
        sinr = cfg.gain(j1, r) ** 2 * cfg.power(j1) / denom
        a = tuple(1 if u == j1 else 0 for u in USERS)
        halfspaces.append(HalfSpace(a, rate_bound(sinr), f"TIN receiver {r}"))
    for r in USERS:
        halfspaces.extend(mac_region(cfg, (r, asg.j2(r)), r).halfspaces)
    return RatePolytope(tuple(halfspaces))


@lru_cache(maxsize=64)
def _combo_index(n_planes: int) -> np.ndarray:
    return np.array(list(itertools.combinations(range(n_planes), 3)), dtype=np.intp)


def _det3(m: np.ndarray) -> np.ndarray:
    # Plane normals are 0/1 vectors, so these determinants are exact
    # small integers and a half-unit threshold separates singular triples.
    return (m[:, 0, 0] * (m[:, 1, 1] * m[:, 2, 2] - m[:, 1, 2] * m[:, 2, 1])
            - m[:, 0, 1] * (m[:, 1, 0] * m[:, 2, 2] - m[:, 1, 2] * m[:, 2, 0])
            + m[:, 0, 2] * (m[:, 1, 0] * m[:, 2, 1] - m[:, 1, 1] * m[:, 2, 0]))


@lru_cache(maxsize=4096)
def _vertices_cached(poly: RatePolytope, tol: float) -> np.ndarray:
    A, b = poly.matrix()
    planes_a = np.vstack([A, np.eye(3)])
    planes_b = np.concatenate([b, np.zeros(3)])
    idx = _combo_index(len(planes_b))
    mats = planes_a[idx]
    keep = np.abs(_det3(mats)) > 0.5
    rhs = planes_b[idx[keep]][:, :, None]
    candidates = np.linalg.solve(mats[keep], rhs)[:, :, 0]
    feasible = ((A @ candidates.T <= b[:, None] + tol).all(axis=0)
                & (candidates >= -tol).all(axis=1))
    candidates = candidates[feasible]
    if candidates.size == 0:
        empty = np.zeros((0, 3))
        empty.flags.writeable = False
        return empty
    candidates[np.abs(candidates) < 1e-12] = 0.0
    # Collapse near-identical solutions cheaply, then finish with an exact
    # tolerance pass over the handful that remain.
    _, first = np.unique(np.round(candidates, 12), axis=0, return_index=True)
    candidates = candidates[np.sort(first)]
    order = np.lexsort((candidates[:, 2], candidates[:, 1], candidates[:, 0]))
    candidates = candidates[order]
    kept: list[np.ndarray] = []
    for v in candidates:
        if all(np.linalg.norm(v - u) > tol for u in kept):
            kept.append(v)
    vertices = np.array(kept)
    vertices.flags.writeable = False
    return vertices


def enumerate_vertices(poly: RatePolytope, tol: float = GEOM_TOL) -> np.ndarray:
    """Exact vertex set of a bounded polytope, lexicographically sorted.

    Brute force over all triples of planes (constraints plus the three
    nonnegativity facets): solve, keep intersections satisfying every
    constraint within `tol`, and deduplicate at Euclidean distance `tol`.
    """
    if not poly.is_bounded():
        raise UnboundedRegionError(
            "polytope has an unconstrained coordinate direction")
    return _vertices_cached(poly, float(tol))


def contains_point(poly: RatePolytope, point, tol: float = GEOM_TOL) -> bool:
    """Closed membership test: R >= 0 and a . R <= b + tol for every constraint."""
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    R = [float(x) for x in point]
    if len(R) != 3:
        raise ValueError("point must be a 3-vector of rates")
    if any(r < -tol for r in R):
        return False
    return all(constraint_load(hs.a, R) <= hs.b + tol for hs in poly.halfspaces)


def constraint_is_redundant(poly: RatePolytope, k: int) -> bool:
    """Whether dropping constraint k leaves the region unchanged.

    Decided exactly by maximizing the constraint's left-hand side over the
    vertices of the reduced polytope. If the reduced polytope is unbounded the
    constraint bounds a direction nothing else does, hence not redundant.
    """
    target = poly.halfspaces[k]
    reduced = poly.without(k)
    if not reduced.is_bounded():
        return False
    vertices = enumerate_vertices(reduced)
    if vertices.size == 0:
        return True
    best = float((vertices @ np.array(target.a, dtype=float)).max())
    return best <= target.b + GEOM_TOL


def retained_maximum(poly: RatePolytope, k: int) -> float:
    """Max of constraint k's left-hand side over the polytope without it."""
    target = poly.halfspaces[k]
    reduced = poly.without(k)
    vertices = enumerate_vertices(reduced)
    if vertices.size == 0:
        return 0.0
    return float((vertices @ np.array(target.a, dtype=float)).max())


def _all_inside(poly: RatePolytope, points: np.ndarray, tol: float) -> bool:
    if len(points) == 0:
        return True
    A, b = poly.matrix()
    return bool((points >= -tol).all()
                and (A @ points.T <= b[:, None] + tol).all())


def regions_equal(a: RatePolytope, b: RatePolytope, tol: float = GEOM_TOL) -> bool:
    """Point-set equality of two bounded polytopes by mutual vertex containment."""
    va = enumerate_vertices(a, tol=GEOM_TOL)
    vb = enumerate_vertices(b, tol=GEOM_TOL)
    return _all_inside(b, va, tol) and _all_inside(a, vb, tol)


@dataclass(frozen=True)
class BoundComparison:
    """One dominance check, in bits: holds when lhs <= rhs within tolerance."""

    lhs: float
    rhs: float

    @property
    def margin(self) -> float:
        return self.rhs - self.lhs

    @property
    def holds(self) -> bool:
        return tolerant_geq(self.rhs, self.lhs)

    def to_dict(self) -> dict:
        return {"lhs": self.lhs, "rhs": self.rhs,
                "margin": self.margin, "holds": self.holds}


@dataclass(frozen=True)
class ReceiverReduction:
    """Why the first-decoded interferer's MAC region at one receiver is
    implied by the bounds that are kept."""

    receiver: int
    first_decoded: int
    joint_partner: int
    interferer_bound: BoundComparison
    own_bound: BoundComparison
    sum_bound: BoundComparison

    @property
    def all_hold(self) -> bool:
        return (self.interferer_bound.holds and self.own_bound.holds
                and self.sum_bound.holds)

    def to_dict(self) -> dict:
        return {
            "receiver": self.receiver,
            "first_decoded": self.first_decoded,
            "joint_partner": self.joint_partner,
            "interferer_rate_bound": self.interferer_bound.to_dict(),
            "own_rate_bound": self.own_bound.to_dict(),
            "pair_sum_bound": self.sum_bound.to_dict(),
        }


@dataclass(frozen=True)
class ReductionReport:
    receivers: tuple[ReceiverReduction, ReceiverReduction, ReceiverReduction]

    @property
    def all_hold(self) -> bool:
        return all(r.all_hold for r in self.receivers)

    def to_dict(self) -> dict:
        return {"receivers": [r.to_dict() for r in self.receivers],
                "all_hold": self.all_hold}


def verify_reduction(cfg: ChannelConfig, asg: MixedAssignment) -> ReductionReport:
    """Evaluate, per receiver, the three closed-form dominance comparisons that
    make the first-decoded interferer's MAC region droppable.

    With j1 the first-decoded interferer at receiver j and caps
    c_i = 0.5 log2(1 + h_ii^2 P_i):

    - interferer bound: c_j1 <= 0.5 log2(1 + h_j1,j^2 P_j1), true whenever the
      link j1 -> j is at least strong;
    - own bound: the dropped cap on R_j equals the retained single-user cap,
      so it holds with margin zero by construction;
    - sum bound: c_j1 + c_j <= 0.5 log2(1 + h_j1,j^2 P_j1 + h_jj^2 P_j),
      which the very strong condition guarantees.

    Works on any channel and any role split; the report says which steps hold.
    The mixed conditions imply all nine comparisons hold, not conversely.
    """
    rows = []
    for r in USERS:
        j1, j2 = asg.j1(r), asg.j2(r)
        cap_j1 = rate_bound(cfg.gain(j1, j1) ** 2 * cfg.power(j1))
        cap_r = rate_bound(cfg.gain(r, r) ** 2 * cfg.power(r))
        cross = cfg.gain(j1, r) ** 2 * cfg.power(j1)
        own = cfg.gain(r, r) ** 2 * cfg.power(r)
        rows.append(ReceiverReduction(
            receiver=r,
            first_decoded=j1,
            joint_partner=j2,
            interferer_bound=BoundComparison(cap_j1, rate_bound(cross)),
            own_bound=BoundComparison(cap_r, rate_bound(own)),
            sum_bound=BoundComparison(cap_j1 + cap_r, rate_bound(cross + own)),
        ))
    return ReductionReport(receivers=tuple(rows))


def region_to_dict(poly: RatePolytope, vertices: np.ndarray | None = None) -> dict:
    """JSON-ready export: half-spaces and, optionally, the vertex list."""
    doc = {"halfspaces": [{"a": list(hs.a), "b": hs.b, "tag": hs.tag}
                          for hs in poly.halfspaces]}
    if vertices is not None:
        doc["vertices"] = [list(map(float, v)) for v in vertices]
    return doc


def region_from_dict(doc: dict) -> RatePolytope:
    """Inverse of region_to_dict (vertices, if present, are ignored)."""
    halfspaces = tuple(
        HalfSpace(tuple(int(c) for c in item["a"]), float(item["b"]), str(item["tag"]))
        for item in doc["halfspaces"])
    return RatePolytope(halfspaces)
