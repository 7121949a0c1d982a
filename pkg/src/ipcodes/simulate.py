"""Monte Carlo erasure-channel simulation of row/column peeling.

For MDS components a line is recoverable exactly when its erasure count is
at most ``length - k``, so decoding success depends only on the erasure
mask; the hot loop therefore never touches field arithmetic.
:func:`field_level_validate` checks that claim against real decoding.

Trial ``t`` draws its ``m x n`` uniforms from a Philox stream keyed by the
seed with counter ``t``; the same uniforms are thresholded at every
``epsilon`` (coupling), so each trial's failure is monotone in ``epsilon``.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from numba import njit

from .asymptotic import design_alpha_from_beta, discretize
from .galois import Field
from .mds import ERASED
from .product import CodeSpec, build_code, dimension, encode, mark_schedule

Z95 = 1.959963984540054


def trial_uniforms(seed: int, trial: int, m: int, n: int) -> np.ndarray:
    """Uniform variates ``U[i, j]`` of one trial; depends only on (seed, trial, i, j)."""
    bitgen = np.random.Philox(key=seed & ((1 << 64) - 1), counter=[0, trial, 0, 0])
    return np.random.Generator(bitgen).random((m, n))


def peel_decode(spec: CodeSpec, mask, columns_first: bool = False):
    """Iterative erasure decoding on a boolean mask (True = erased).

    Each round clears every row whose erasure count is at most ``n - a_i``,
    then every such column (or the other way round).  Returns the residual
    mask and the number of rounds that made progress.
    """
    E = np.array(mask, dtype=bool, copy=True)
    if E.shape != (spec.m, spec.n):
        raise ValueError(f"mask shape {E.shape} != ({spec.m}, {spec.n})")
    rt = spec.row_tolerance
    ct = spec.col_tolerance

    def rows():
        cnt = E.sum(axis=1)
        hit = (cnt > 0) & (cnt <= rt)
        E[hit, :] = False
        return hit.any()

    def cols():
        cnt = E.sum(axis=0)
        hit = (cnt > 0) & (cnt <= ct)
        E[:, hit] = False
        return hit.any()

    first, second = (cols, rows) if columns_first else (rows, cols)
    rounds = 0
    while True:
        changed = first()
        changed = second() or changed
        if not changed:
            return E, rounds
        rounds += 1


@njit(cache=True, nogil=True)
def _peel_inplace(E, row_tol, col_tol, row_cnt, col_cnt):
    m, n = E.shape
    remaining = 0
    for i in range(m):
        row_cnt[i] = 0
    for j in range(n):
        col_cnt[j] = 0
    for i in range(m):
        for j in range(n):
            if E[i, j]:
                row_cnt[i] += 1
                col_cnt[j] += 1
                remaining += 1
    rounds = 0
    while remaining > 0:
        changed = False
        for i in range(m):
            if row_cnt[i] > 0 and row_cnt[i] <= row_tol[i]:
                for j in range(n):
                    if E[i, j]:
                        E[i, j] = False
                        col_cnt[j] -= 1
                remaining -= row_cnt[i]
                row_cnt[i] = 0
                changed = True
        for j in range(n):
            if col_cnt[j] > 0 and col_cnt[j] <= col_tol[j]:
                for i in range(m):
                    if E[i, j]:
                        E[i, j] = False
                        row_cnt[i] -= 1
                remaining -= col_cnt[j]
                col_cnt[j] = 0
                changed = True
        if not changed:
            break
        rounds += 1
    bad_rows = 0
    for i in range(m):
        if row_cnt[i] > 0:
            bad_rows += 1
    return remaining, rounds, bad_rows


@njit(cache=True, nogil=True)
def _sweep_block(U, eps, row_tol, col_tol, fails, resid, resid_sq, resid_rows, hist):
    T, m, n = U.shape
    E = np.empty((m, n), dtype=np.bool_)
    row_cnt = np.empty(m, dtype=np.int64)
    col_cnt = np.empty(n, dtype=np.int64)
    violations = 0
    for t in range(T):
        prev_fail = False
        for k in range(eps.shape[0]):
            e = eps[k]
            for i in range(m):
                for j in range(n):
                    E[i, j] = U[t, i, j] < e
            r, rounds, br = _peel_inplace(E, row_tol, col_tol, row_cnt, col_cnt)
            fail = r > 0
            if prev_fail and not fail:
                violations += 1
            prev_fail = fail
            if fail:
                fails[k] += 1
            resid[k] += r
            resid_sq[k] += r * r
            resid_rows[k] += br
            hist[k, rounds] += 1
    return violations


@dataclass
class SimConfig:
    spec: CodeSpec
    epsilons: tuple[float, ...]
    trials: int
    seed: int
    couple: bool = True
    mode: str = "mask-only"

    def __post_init__(self):
        self.epsilons = tuple(float(e) for e in self.epsilons)
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if list(self.epsilons) != sorted(self.epsilons):
            raise ValueError("epsilons must be sorted")
        if any(not 0 <= e < 1 for e in self.epsilons):
            raise ValueError("epsilons must lie in [0, 1)")
        if self.mode != "mask-only":
            raise ValueError("only mask-only sweeps are supported; "
                             "use field_level_validate for symbol-level checks")


def wilson_interval(k: int, n: int, z: float = Z95):
    if n == 0:
        return 0.0, 1.0
    p = k / n
    denom = 1 + z * z / n
    centre = (p + z * z / (2 * n)) / denom
    hw = z * math.sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / denom
    # the endpoints are exactly 0 (k = 0) and 1 (k = n); avoid rounding residue
    lo = 0.0 if k == 0 else max(0.0, centre - hw)
    hi = 1.0 if k == n else min(1.0, centre + hw)
    return lo, hi


@dataclass
class SimResult:
    spec: CodeSpec
    epsilons: tuple[float, ...]
    trials: int
    word_errors: np.ndarray
    residual_symbols: np.ndarray
    residual_symbols_sq: np.ndarray
    residual_rows: np.ndarray
    rounds_histogram: np.ndarray  # [epsilon index, rounds] -> trial count

    @property
    def wer(self) -> np.ndarray:
        return self.word_errors / self.trials

    def wer_interval(self, k: int):
        return wilson_interval(int(self.word_errors[k]), self.trials)

    @property
    def wer_ci95(self) -> np.ndarray:
        return np.array([(hi - lo) / 2 for lo, hi in map(self.wer_interval, range(len(self.epsilons)))])

    @property
    def mean_residual_fraction(self) -> np.ndarray:
        return self.residual_symbols / (self.trials * self.spec.length)

    @property
    def residual_fraction_stderr(self) -> np.ndarray:
        N = self.spec.length
        mean = self.residual_symbols / self.trials
        var = self.residual_symbols_sq / self.trials - mean ** 2
        var = np.maximum(var, 0) * self.trials / max(self.trials - 1, 1)
        return np.sqrt(var / self.trials) / N

    @property
    def residual_row_fraction(self) -> np.ndarray:
        return self.residual_rows / (self.trials * self.spec.m)

    @property
    def mean_rounds(self) -> np.ndarray:
        r = np.arange(self.rounds_histogram.shape[1])
        return (self.rounds_histogram * r).sum(axis=1) / self.trials

    def to_csv(self) -> str:
        lines = ["epsilon,trials,word_errors,wer,wer_ci95,mean_residual_fraction,mean_rounds"]
        ci = self.wer_ci95
        res = self.mean_residual_fraction
        mr = self.mean_rounds
        for k, e in enumerate(self.epsilons):
            lines.append(f"{e:.10g},{self.trials},{int(self.word_errors[k])},"
                         f"{self.wer[k]:.10g},{ci[k]:.10g},{res[k]:.10g},{mr[k]:.10g}")
        return "\n".join(lines) + "\n"


def run_sweep(cfg: SimConfig, threads: int | None = None, block: int | None = None) -> SimResult:
    """Peel-decode ``cfg.trials`` coupled erasure patterns at every epsilon.

    Work is split into fixed trial blocks; per-block integer tallies are
    summed in block order, so the result does not depend on ``threads``.
    """
    spec = cfg.spec
    m, n = spec.m, spec.n
    eps = np.array(cfg.epsilons, dtype=np.float64)
    K = len(eps)
    row_tol = spec.row_tolerance
    col_tol = spec.col_tolerance
    if block is None:
        block = max(1, min(256, 2_000_000 // (m * n)))
    starts = list(range(0, cfg.trials, block))

    def work(start):
        stop = min(start + block, cfg.trials)
        if cfg.couple:
            U = np.stack([trial_uniforms(cfg.seed, t, m, n) for t in range(start, stop)])
            out = _tallies(U, eps, row_tol, col_tol, m, n)
        else:
            out = _tallies_uncoupled(cfg.seed, start, stop, eps, row_tol, col_tol, m, n)
        return out

    if threads is None:
        threads = os.cpu_count() or 1
    if threads > 1 and len(starts) > 1:
        with ThreadPoolExecutor(threads) as ex:
            parts = list(ex.map(work, starts))
    else:
        parts = [work(s) for s in starts]

    fails = np.zeros(K, dtype=np.int64)
    resid = np.zeros(K, dtype=np.int64)
    resid_sq = np.zeros(K, dtype=np.int64)
    resid_rows = np.zeros(K, dtype=np.int64)
    hist = np.zeros((K, m + n + 2), dtype=np.int64)
    for f, r, r2, rr, h, viol in parts:
        if viol:
            raise AssertionError(f"{viol} trials decoded at a larger epsilon but failed at a smaller one")
        fails += f
        resid += r
        resid_sq += r2
        resid_rows += rr
        hist += h
    return SimResult(spec, cfg.epsilons, cfg.trials, fails, resid, resid_sq, resid_rows, hist)


def _tallies(U, eps, row_tol, col_tol, m, n):
    K = len(eps)
    fails = np.zeros(K, dtype=np.int64)
    resid = np.zeros(K, dtype=np.int64)
    resid_sq = np.zeros(K, dtype=np.int64)
    resid_rows = np.zeros(K, dtype=np.int64)
    hist = np.zeros((K, m + n + 2), dtype=np.int64)
    viol = _sweep_block(U, eps, row_tol, col_tol, fails, resid, resid_sq, resid_rows, hist)
    return fails, resid, resid_sq, resid_rows, hist, viol


def _tallies_uncoupled(seed, start, stop, eps, row_tol, col_tol, m, n):
    # independent uniforms per epsilon: stream (seed + k + 1, trial)
    K = len(eps)
    acc = None
    for k in range(K):
        U = np.stack([trial_uniforms(seed + k + 1, t, m, n) for t in range(start, stop)])
        f, r, r2, rr, h, _ = _tallies(U, eps[k:k + 1], row_tol, col_tol, m, n)
        if acc is None:
            acc = [np.zeros(K, dtype=np.int64) for _ in range(4)]
            acc.append(np.zeros((K, m + n + 2), dtype=np.int64))
        for a, v in zip(acc, (f, r, r2, rr, h)):
            a[k] = v[0]
    return (*acc, 0)


# Symbol-level cross-check ------------------------------------------------------


@dataclass
class ValidationReport:
    trials: int
    position_mismatches: int
    value_mismatches: int
    decoded_words: int

    @property
    def ok(self) -> bool:
        return self.position_mismatches == 0 and self.value_mismatches == 0


def field_level_validate(spec: CodeSpec, trials: int, seed: int,
                         epsilon: float | None = None) -> ValidationReport:
    """Encode random messages, erase, decode symbol by symbol, compare with peeling.

    Unless ``epsilon`` is given each trial uses its own erasure probability,
    so the run covers both easy and hopeless patterns.
    """
    if max(spec.m, spec.n) > 16:
        raise ValueError("field-level validation is limited to m, n <= 16")
    code = build_code(spec)
    sched = mark_schedule(spec)
    k = len(sched.generating)
    q = spec.field.q
    pos_bad = val_bad = decoded = 0
    for t in range(trials):
        rng = np.random.Generator(np.random.Philox(key=seed, counter=[0, t, 1, 0]))
        info = rng.integers(0, q, size=k)
        M = encode(spec, sched, info)
        e = rng.random() if epsilon is None else epsilon
        mask = trial_uniforms(seed, t, spec.m, spec.n) < e
        received = np.where(mask, ERASED, M)
        out, _ = code.iterative_decode(received)
        got = out == ERASED
        want, _ = peel_decode(spec, mask)
        if not np.array_equal(got, want):
            pos_bad += 1
        if np.any(out[~got] != M[~got]):
            val_bad += 1
        decoded += int(not got.any())
    return ValidationReport(trials, pos_bad, val_bad, decoded)


@dataclass
class AsymptoticPoint:
    m: int
    n: int
    dimension_rate: float
    wer: float
    residual_fraction: float
    residual_stderr: float
    residual_row_fraction: float


def asymptotic_validate(beta, epsilon: float, delta: float, sizes, trials: int, seed: int,
                        alpha=None, floors=(1, 1), boosts: int = 0, threads=None):
    """Simulate the designed family at erasure rate ``epsilon - delta`` per size."""
    if alpha is None:
        alpha = design_alpha_from_beta(beta, epsilon)
    p = epsilon - delta
    out = []
    for m, n in sizes:
        a, b = discretize(alpha, beta, m, n, floors, boosts)
        spec = CodeSpec(Field.smallest_at_least(max(m, n)), m, n, a, b)
        if p <= 0:
            out.append(AsymptoticPoint(m, n, dimension(spec) / (m * n), 0.0, 0.0, 0.0, 0.0))
            continue
        res = run_sweep(SimConfig(spec, (p,), trials, seed), threads=threads)
        out.append(AsymptoticPoint(m, n, dimension(spec) / (m * n), float(res.wer[0]),
                                   float(res.mean_residual_fraction[0]),
                                   float(res.residual_fraction_stderr[0]),
                                   float(res.residual_row_fraction[0])))
    return out
