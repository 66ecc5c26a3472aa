"""Channel model and interference-regime classification for the 3-user Gaussian IC.

Receiver j observes y_j = sum_i h[i][j] * x_i + z_j with z_j ~ N(0, 1).
Gains are real, powers are average-power constraints in linear scale, and
all regime tests reduce to comparisons between squared gains and received
interference-plus-signal powers.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from enum import Enum

import numpy as np

USERS = (1, 2, 3)

# Relative slack for the non-strict regime inequalities, to absorb
# floating-point noise without changing any decision at honest margins.
REL_TOL = 1e-9


class ChannelConfigError(ValueError):
    """Malformed or unsupported channel configuration."""


def tolerant_geq(lhs: float, rhs: float) -> bool:
    """lhs >= rhs up to a relative slack of REL_TOL."""
    return lhs >= rhs - REL_TOL * max(1.0, abs(lhs), abs(rhs))


@dataclass(frozen=True, eq=False)
class ChannelConfig:
    """Gains and powers of a 3-user Gaussian interference channel.

    h[i][j] is the gain from transmitter i+1 to receiver j+1 (transmitter-major);
    P[i] is the power of transmitter i+1. Noise variance is fixed at 1.0 and any
    other value is rejected so that rate formulas stay directly comparable.
    """

    h: np.ndarray
    P: np.ndarray
    noise_var: float = 1.0

    def __post_init__(self):
        try:
            h = np.asarray(self.h, dtype=float).copy()
            P = np.asarray(self.P, dtype=float).copy()
        except (TypeError, ValueError) as exc:
            raise ChannelConfigError(f"non-numeric channel data: {exc}") from exc
        if h.shape != (3, 3):
            raise ChannelConfigError(f"gain matrix must be 3x3, got shape {h.shape}")
        if not np.all(np.isfinite(h)):
            raise ChannelConfigError("gain matrix entries must be finite")
        if np.any(np.diag(h) == 0.0):
            raise ChannelConfigError("direct gains h[i][i] must be nonzero")
        if P.shape != (3,):
            raise ChannelConfigError(f"P must be a 3-vector, got shape {P.shape}")
        if not np.all(np.isfinite(P)) or np.any(P < 0.0):
            raise ChannelConfigError("powers must be finite and nonnegative")
        try:
            noise = float(self.noise_var)
        except (TypeError, ValueError) as exc:
            raise ChannelConfigError(f"bad noise_var: {exc}") from exc
        if noise != 1.0:
            raise ChannelConfigError(
                f"unsupported normalization: noise_var must be 1.0, got {noise}")
        h.flags.writeable = False
        P.flags.writeable = False
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "P", P)
        object.__setattr__(self, "noise_var", 1.0)

    def __eq__(self, other):
        if not isinstance(other, ChannelConfig):
            return NotImplemented
        return bool(np.array_equal(self.h, other.h) and np.array_equal(self.P, other.P))

    def gain(self, tx: int, rx: int) -> float:
        return float(self.h[tx - 1, rx - 1])

    def power(self, tx: int) -> float:
        return float(self.P[tx - 1])

    def to_dict(self) -> dict:
        return {"h": self.h.tolist(), "P": self.P.tolist(), "noise_var": 1.0}


_CONFIG_FIELDS = {"h", "P", "power", "noise_var"}


def parse_config(text: str) -> ChannelConfig:
    """Parse a JSON channel document.

    Expected fields: `h` (3x3, transmitter-major), exactly one of `P` (3 powers)
    or `power` (common power expanded to all users), optional `noise_var` which
    must equal 1.0. Unknown fields are rejected.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ChannelConfigError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ChannelConfigError("config must be a JSON object")
    unknown = sorted(set(doc) - _CONFIG_FIELDS)
    if unknown:
        raise ChannelConfigError(f"unknown config fields: {unknown}")
    if "h" not in doc:
        raise ChannelConfigError("config requires a 3x3 gain matrix 'h'")
    if "P" in doc and "power" in doc:
        raise ChannelConfigError("give either 'P' or 'power', not both")
    if "P" in doc:
        P = doc["P"]
    elif "power" in doc:
        P = [doc["power"]] * 3
    else:
        raise ChannelConfigError("config requires 'P' (3 powers) or 'power' (common power)")
    return ChannelConfig(h=doc["h"], P=P, noise_var=doc.get("noise_var", 1.0))


class Strength(Enum):
    NOT_STRONG = "not_strong"
    STRONG = "strong"
    VERY_STRONG = "very_strong"


@dataclass(frozen=True)
class LinkRegime:
    """Classification of one interference link plus the signed slack, in
    linear-power units, of the inequality that determined it."""

    strength: Strength
    margin: float


def _check_user(label: str, value: int) -> None:
    if value not in USERS:
        raise ValueError(f"{label} must be 1, 2 or 3, got {value!r}")


def classify_link(cfg: ChannelConfig, tx: int, rx: int, other: int) -> LinkRegime:
    """Classify the interference link tx -> rx.

    Strong: h_tx,rx^2 >= h_tx,tx^2. Very strong: h_tx,rx^2 also exceeds
    h_tx,tx^2 * (1 + h_rx,rx^2 P_rx + h_other,rx^2 P_other), i.e. the link can
    carry tx's full single-user rate with the other two signals as noise.
    `other` is the third transmitter. Very strong implies strong; the margin
    reported is that of the binding (very strong or strong) test.
    """
    _check_user("tx", tx)
    _check_user("rx", rx)
    _check_user("other", other)
    if tx == rx:
        raise ValueError("tx and rx must differ: only cross links are classified")
    if other in (tx, rx):
        raise ValueError("other must be the third transmitter")
    cross2 = cfg.gain(tx, rx) ** 2
    own2 = cfg.gain(tx, tx) ** 2
    strong_margin = cross2 - own2
    strong = tolerant_geq(cross2, own2)
    threshold = own2 * (1.0
                        + cfg.gain(rx, rx) ** 2 * cfg.power(rx)
                        + cfg.gain(other, rx) ** 2 * cfg.power(other))
    very_margin = cross2 - threshold
    very = tolerant_geq(cross2, threshold)
    if very:
        assert strong, "a very strong link must also be strong"
        return LinkRegime(Strength.VERY_STRONG, very_margin)
    if strong:
        return LinkRegime(Strength.STRONG, strong_margin)
    return LinkRegime(Strength.NOT_STRONG, strong_margin)


@dataclass(frozen=True)
class MixedAssignment:
    """Interferer roles per receiver: very_strong[r-1] is decoded first at
    receiver r, strong[r-1] is decoded jointly with the desired signal."""

    very_strong: tuple[int, int, int]
    strong: tuple[int, int, int]

    def __post_init__(self):
        for r in USERS:
            j1, j2 = self.very_strong[r - 1], self.strong[r - 1]
            if {j1, j2, r} != {1, 2, 3}:
                raise ValueError(
                    f"receiver {r}: roles ({j1},{j2}) must be its two interferers")

    def j1(self, receiver: int) -> int:
        """The first-decoded (very strong) interferer at `receiver`."""
        return self.very_strong[receiver - 1]

    def j2(self, receiver: int) -> int:
        """The jointly-decoded (strong) interferer at `receiver`."""
        return self.strong[receiver - 1]

    def to_dict(self) -> dict:
        return {
            "very_strong": list(self.very_strong),
            "strong": list(self.strong),
        }


def find_mixed_assignments(cfg: ChannelConfig) -> list[MixedAssignment]:
    """All role splits under which every receiver sees one very strong and one
    strong interferer.

    Each receiver has two candidate splits, so up to 8 assignments exist; the
    result lists every valid one, sorted by the per-receiver first-decoded
    indices, and is empty when the mixed regime does not hold.
    """
    per_receiver: list[list[tuple[int, int]]] = []
    for r in USERS:
        a, b = (t for t in USERS if t != r)
        splits = []
        for j1, j2 in ((a, b), (b, a)):
            if (classify_link(cfg, j1, r, j2).strength is Strength.VERY_STRONG
                    and classify_link(cfg, j2, r, j1).strength is not Strength.NOT_STRONG):
                splits.append((j1, j2))
        per_receiver.append(splits)
    out = [
        MixedAssignment(very_strong=(s1[0], s2[0], s3[0]), strong=(s1[1], s2[1], s3[1]))
        for s1, s2, s3 in itertools.product(*per_receiver)
    ]
    out.sort(key=lambda m: m.very_strong)
    return out


def less_noisy_margin(cfg: ChannelConfig, decoder: int, helped: int) -> float:
    """Effective noise variance of the observation receiver `decoder` can
    synthesize for receiver `helped`'s channel out of its own signal.

    After removing its decoded inputs and rescaling by h_kk / h_k,decoder for
    k = helped's desired transmitter, receiver `decoder` holds a copy of
    receiver `helped`'s output whose noise variance is (h_kk / h_k,decoder)^2.
    That variance is <= 1 exactly when the link k -> decoder is strong, in
    which case the synthesized observation is less noisy than the real one.
    """
    _check_user("decoder", decoder)
    _check_user("helped", helped)
    if decoder == helped:
        raise ValueError("decoder and helped must be different receivers")
    k = helped
    cross = cfg.gain(k, decoder)
    if cross == 0.0:
        raise ValueError(
            f"construction undefined: zero cross gain on link {k} -> {decoder}")
    ratio = cfg.gain(k, k) / cross
    return ratio * ratio  # may overflow to inf for vanishing cross gains
