"""Monte Carlo validation of the decode-first, then-joint-MAC scheme.

Each trial draws fresh i.i.d. Gaussian codebooks (averaging over the code
ensemble), uniform messages, and unit-variance noise. Every receiver first
decodes its very strong interferer by minimum Euclidean distance against the
raw received word, subtracts the decoded codeword, then decodes its own and
the remaining interferer's messages jointly over all codeword pairs. Streams
are counter-derived from the master seed, so results are bit-identical for
any trial execution order or worker count.
"""
from __future__ import annotations

import math
import multiprocessing
from dataclasses import dataclass

import numpy as np

from .channel import USERS, ChannelConfig, MixedAssignment
from .region import constraint_load, inner_region

# Cap on n * (R_j + R_j2) for any receiver: the joint decoding stage searches
# M_j * M_j2 <= 2^24 (~16.7M) codeword pairs, the desk-scale limit.
MAX_JOINT_BITS = 24.0

# Stream lanes within a trial: 0..2 codebooks per transmitter, then messages
# and noise.
_MESSAGE_LANE = 3
_NOISE_LANE = 4

# Joint-decode distance matrices are evaluated in blocks of at most this
# many entries (~32 MB of float64).
_BLOCK_ELEMS = 1 << 22


class JointSearchBudgetError(ValueError):
    """Requested rates put the joint decoding search beyond desk scale."""


@dataclass(frozen=True)
class SimParams:
    """Blocklength, requested rates (bits per channel use), trial count and
    master seed of one simulation run."""

    n: int
    rates: tuple[float, float, float]
    trials: int
    master_seed: int

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise ValueError(f"blocklength must be a positive integer, got {self.n!r}")
        if not isinstance(self.trials, (int, np.integer)) or self.trials < 1:
            raise ValueError(f"trials must be a positive integer, got {self.trials!r}")
        rates = tuple(float(r) for r in self.rates)
        if len(rates) != 3:
            raise ValueError("rates must be a 3-vector")
        if any(not math.isfinite(r) or r < 0.0 for r in rates):
            raise ValueError(f"rates must be finite and nonnegative, got {rates}")
        if not isinstance(self.master_seed, (int, np.integer)) or not 0 <= self.master_seed < 2 ** 64:
            raise ValueError("master_seed must be an unsigned 64-bit integer")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "trials", int(self.trials))
        object.__setattr__(self, "rates", rates)
        object.__setattr__(self, "master_seed", int(self.master_seed))
        worst = max(self.n * (rates[j - 1] + rates[k - 1])
                    for j in USERS for k in USERS if j != k)
        if worst > MAX_JOINT_BITS + 1e-12:
            raise JointSearchBudgetError(
                f"joint decoding would search 2^{worst:.2f} codeword pairs per "
                f"receiver; the desk-scale limit is 2^{MAX_JOINT_BITS:.0f}")

    def codebook_sizes(self) -> tuple[int, int, int]:
        return tuple(max(1, math.floor(2.0 ** (self.n * r))) for r in self.rates)

    def realized_rates(self) -> tuple[float, float, float]:
        return tuple(math.log2(m) / self.n for m in self.codebook_sizes())


@dataclass(frozen=True)
class Codebook:
    """One trial's Gaussian codebooks: words[i] is (M_i, n) with entries
    i.i.d. N(0, P_i). Reproducible from (master_seed, trial, transmitter)."""

    words: tuple[np.ndarray, np.ndarray, np.ndarray]
    master_seed: int
    trial: int


def _stream(master_seed: int, trial: int, lane: int) -> np.random.Generator:
    # Disjoint Philox counter blocks per (trial, lane): a splittable counter
    # scheme, so streams never overlap and need no sequential seeding.
    bits = np.random.Philox(key=master_seed, counter=[0, 0, lane, trial])
    return np.random.Generator(bits)


def draw_codebooks(cfg: ChannelConfig, params: SimParams, trial: int) -> Codebook:
    """Fresh codebooks for one trial. Entries are soft power constrained:
    E[X^2] = P_i per symbol, with no per-codeword renormalization."""
    sizes = params.codebook_sizes()
    words = []
    for i in range(3):
        rng = _stream(params.master_seed, trial, i)
        words.append(rng.normal(0.0, math.sqrt(cfg.P[i]), size=(sizes[i], params.n)))
    return Codebook(words=tuple(words), master_seed=params.master_seed, trial=trial)


def _joint_decode(target: np.ndarray, words_a: np.ndarray, words_b: np.ndarray,
                  gain_a: float, gain_b: float) -> tuple[int, int]:
    """Exact argmin of ||target - gain_a*x_a - gain_b*x_b|| over all pairs.

    Blocked so the (M_a, M_b) distance matrix never fully materializes;
    the scan order matches a flat row-major argmin, keeping ties deterministic.
    """
    proj_a = words_a @ target
    proj_b = words_b @ target
    energy_a = np.einsum("ij,ij->i", words_a, words_a)
    energy_b = np.einsum("ij,ij->i", words_b, words_b)
    row = gain_a * gain_a * energy_a - 2.0 * gain_a * proj_a
    col = gain_b * gain_b * energy_b - 2.0 * gain_b * proj_b
    m_a, m_b = len(row), len(col)
    step = max(1, _BLOCK_ELEMS // max(m_b, 1))
    best = math.inf
    best_pair = (0, 0)
    cross_scale = 2.0 * gain_a * gain_b
    for start in range(0, m_a, step):
        block = cross_scale * (words_a[start:start + step] @ words_b.T)
        block += row[start:start + step, None]
        block += col[None, :]
        flat = int(np.argmin(block))
        i, j = divmod(flat, m_b)
        value = float(block[i, j])
        if value < best:
            best = value
            best_pair = (start + i, j)
    return best_pair


@dataclass(frozen=True)
class TrialOutcome:
    """Per-receiver correctness of one trial (index r-1 for receiver r)."""

    stage1_correct: tuple[bool, bool, bool]
    own_correct: tuple[bool, bool, bool]
    partner_correct: tuple[bool, bool, bool]

    @property
    def block_ok(self) -> bool:
        return all(self.own_correct)


def run_trial(cfg: ChannelConfig, asg: MixedAssignment, books: Codebook,
              trial_seed: int) -> TrialOutcome:
    """One transmission round.

    Messages are uniform; receiver r forms y = sum_i h_i,r x_i + z, decodes
    transmitter asg.j1(r) by minimum distance against y with the other signals
    untouched, subtracts the decoded codeword (right or wrong), and jointly
    decodes (own, asg.j2(r)) over all codeword pairs. Deterministic given
    (books, trial_seed).
    """
    n = books.words[0].shape[1]
    sizes = tuple(w.shape[0] for w in books.words)
    msg_rng = _stream(books.master_seed, trial_seed, _MESSAGE_LANE)
    messages = tuple(int(m) for m in msg_rng.integers(0, sizes))
    noise = _stream(books.master_seed, trial_seed, _NOISE_LANE).normal(0.0, 1.0, (3, n))
    sent = [books.words[i][messages[i]] for i in range(3)]
    stage1, own, partner = [], [], []
    for r in USERS:
        y = noise[r - 1].copy()
        for i in USERS:
            y += cfg.gain(i, r) * sent[i - 1]
        j1, j2 = asg.j1(r), asg.j2(r)
        first_words = books.words[j1 - 1]
        gain_first = cfg.gain(j1, r)
        dists = ((y[None, :] - gain_first * first_words) ** 2).sum(axis=1)
        decoded_first = int(np.argmin(dists))
        stage1.append(decoded_first == messages[j1 - 1])
        residual = y - gain_first * first_words[decoded_first]
        own_hat, partner_hat = _joint_decode(
            residual, books.words[r - 1], books.words[j2 - 1],
            cfg.gain(r, r), cfg.gain(j2, r))
        own.append(own_hat == messages[r - 1])
        partner.append(partner_hat == messages[j2 - 1])
    return TrialOutcome(tuple(stage1), tuple(own), tuple(partner))


@dataclass(frozen=True)
class SimReport:
    """Aggregated error statistics.

    stage1_errors[r-1] counts trials where receiver r misdecoded its first
    interferer; stage2_errors[r-1] counts trials where its own or its joint
    partner's message came out wrong; a block error is any receiver failing
    its own message.
    """

    n: int
    requested_rates: tuple[float, float, float]
    realized_rates: tuple[float, float, float]
    trials: int
    master_seed: int
    stage1_errors: tuple[int, int, int]
    stage2_errors: tuple[int, int, int]
    block_errors: int

    @property
    def block_error_rate(self) -> float:
        return self.block_errors / self.trials

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "requested_rates": list(self.requested_rates),
            "realized_rates": list(self.realized_rates),
            "trials": self.trials,
            "master_seed": self.master_seed,
            "receivers": [
                {"stage1_errors": self.stage1_errors[i],
                 "stage2_errors": self.stage2_errors[i]}
                for i in range(3)
            ],
            "block_error_rate": self.block_error_rate,
        }


def _count_range(cfg: ChannelConfig, asg: MixedAssignment, params: SimParams,
                 start: int, stop: int) -> np.ndarray:
    counts = np.zeros(7, dtype=np.int64)
    for trial in range(start, stop):
        books = draw_codebooks(cfg, params, trial)
        outcome = run_trial(cfg, asg, books, trial)
        for i in range(3):
            counts[i] += not outcome.stage1_correct[i]
            counts[3 + i] += not (outcome.own_correct[i] and outcome.partner_correct[i])
        counts[6] += not outcome.block_ok
    return counts


def estimate_error_rate(cfg: ChannelConfig, asg: MixedAssignment,
                        params: SimParams, workers: int = 1) -> SimReport:
    """Run params.trials independent trials and aggregate error counts.

    Codebooks are redrawn each trial. Counting is order-insensitive and every
    trial's streams depend only on (master_seed, trial), so the report is
    identical for any `workers` value.
    """
    if workers <= 1:
        counts = _count_range(cfg, asg, params, 0, params.trials)
    else:
        workers = min(workers, params.trials)
        bounds = np.linspace(0, params.trials, workers + 1).astype(int)
        jobs = [(cfg, asg, params, int(lo), int(hi))
                for lo, hi in zip(bounds[:-1], bounds[1:]) if hi > lo]
        with multiprocessing.Pool(len(jobs)) as pool:
            parts = pool.starmap(_count_range, jobs)
        counts = np.sum(parts, axis=0)
    return SimReport(
        n=params.n,
        requested_rates=params.rates,
        realized_rates=params.realized_rates(),
        trials=params.trials,
        master_seed=params.master_seed,
        stage1_errors=tuple(int(c) for c in counts[0:3]),
        stage2_errors=tuple(int(c) for c in counts[3:6]),
        block_errors=int(counts[6]),
    )


@dataclass(frozen=True)
class ConstraintCheck:
    tag: str
    slack: float


@dataclass(frozen=True)
class AchievabilityVerdict:
    """Slack of every decode-order constraint at a rate point; achievable when
    the rates are nonnegative and no slack is negative."""

    checks: tuple[ConstraintCheck, ...]
    rates_nonnegative: bool

    @property
    def achievable(self) -> bool:
        return self.rates_nonnegative and all(c.slack >= 0.0 for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "constraints": [{"tag": c.tag, "slack": c.slack} for c in self.checks],
            "rates_nonnegative": self.rates_nonnegative,
            "achievable": self.achievable,
        }


def predicted_achievable(cfg: ChannelConfig, asg: MixedAssignment,
                         rates) -> AchievabilityVerdict:
    """Evaluate all 12 scheme constraints (3 treat-as-noise + 9 MAC) at
    `rates`. Agrees exactly with membership of the scheme's inner region at
    zero tolerance."""
    R = [float(x) for x in rates]
    if len(R) != 3:
        raise ValueError("rates must be a 3-vector")
    poly = inner_region(cfg, asg)
    checks = tuple(ConstraintCheck(hs.tag, hs.b - constraint_load(hs.a, R))
                   for hs in poly.halfspaces)
    return AchievabilityVerdict(checks, all(r >= 0.0 for r in R))
