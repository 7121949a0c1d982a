"""Finite-length designs and paired WER comparisons against regular codes."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .asymptotic import Profile, design_alpha_from_beta, discretize
from .galois import Field
from .product import CodeSpec, dimension
from .simulate import SimConfig, SimResult, run_sweep


def linear_design(m: int = 50, n: int = 50, epsilon: float = 0.3164,
                  floors=(3, 3), boosts: int = 3, field: Field | None = None) -> CodeSpec:
    """``alpha(x) = beta(x) = epsilon * x`` discretized with distance floors and boosts."""
    beta = Profile.linear(epsilon)
    alpha = design_alpha_from_beta(beta, epsilon)
    a, b = discretize(alpha, beta, m, n, floors, boosts)
    if field is None:
        field = Field.smallest_at_least(max(m, n))
    return CodeSpec(field, m, n, a, b)


def regular_candidates(m: int, n: int, rate_lo: float, rate_hi: float,
                       field: Field | None = None) -> list[CodeSpec]:
    if field is None:
        field = Field.smallest_at_least(max(m, n))
    out = []
    for kr in range(1, n + 1):
        for kc in range(1, m + 1):
            if rate_lo <= kr * kc / (m * n) <= rate_hi:
                out.append(CodeSpec.regular(field, m, n, kr, kc))
    return out


def pick_best(specs, epsilons, trials: int, seed: int, threads=None):
    """Spec with the lowest mean WER over ``epsilons`` (ties: first listed)."""
    best = None
    for s in specs:
        r = run_sweep(SimConfig(s, tuple(epsilons), trials, seed), threads=threads)
        score = float(np.mean(r.wer))
        if best is None or score < best[0]:
            best = (score, s)
    return best[1]


@dataclass
class Comparison:
    first: SimResult
    second: SimResult
    # indices of the longest contiguous run where first.wer <= second.wer
    run: tuple[int, int] | None
    separated: list[int]  # indices in `run` with disjoint 95% intervals

    def summary_lines(self):
        eps = self.first.epsilons
        lines = []
        for k, e in enumerate(eps):
            lo1, hi1 = self.first.wer_interval(k)
            lo2, hi2 = self.second.wer_interval(k)
            mark = "*" if k in self.separated else " "
            lines.append(f"{mark} eps={e:.4f}  first={self.first.wer[k]:.5f} [{lo1:.5f},{hi1:.5f}]"
                         f"  second={self.second.wer[k]:.5f} [{lo2:.5f},{hi2:.5f}]")
        return lines


def compare(first: SimResult, second: SimResult) -> Comparison:
    """Where does ``first`` have WER at or below ``second``?"""
    K = len(first.epsilons)
    best = None
    start = None
    for k in range(K + 1):
        ok = k < K and first.wer[k] <= second.wer[k]
        if ok and start is None:
            start = k
        if not ok and start is not None:
            if best is None or k - start > best[1] - best[0] + 1:
                best = (start, k - 1)
            start = None
    separated = []
    if best is not None:
        for k in range(best[0], best[1] + 1):
            if first.wer_interval(k)[1] < second.wer_interval(k)[0]:
                separated.append(k)
    return Comparison(first, second, best, separated)


def paired_sweep(specs, epsilons, trials: int, seed: int, threads=None) -> list[SimResult]:
    """Every spec sees the same seed, hence the same uniforms per trial."""
    return [run_sweep(SimConfig(s, tuple(epsilons), trials, seed), threads=threads)
            for s in specs]


def profiles_with_dimension(m: int, n: int, k: int, symmetric: bool = True,
                            field: Field | None = None):
    """Irregular monotone profiles ``(a, b)`` of an ``m x n`` code with dimension ``k``."""
    if field is None:
        field = Field.smallest_at_least(max(m, n))
    rows = list(itertools.combinations_with_replacement(range(n + 1), m))
    if symmetric:
        if m != n:
            raise ValueError("symmetric search needs m == n")
        pairs = ((a, a) for a in rows)
    else:
        cols = list(itertools.combinations_with_replacement(range(m + 1), n))
        pairs = itertools.product(rows, cols)
    out = []
    for a, b in pairs:
        if len(set(a)) == 1 and len(set(b)) == 1:
            continue
        spec = CodeSpec(field, m, n, a, b)
        if dimension(spec) == k:
            out.append(spec)
    return out


def search_irregular(m: int, n: int, k: int, epsilons, trials: int, seed: int,
                     symmetric: bool = True, threads=None) -> CodeSpec:
    """Best irregular profile of dimension ``k`` by pilot-simulation mean WER."""
    cands = profiles_with_dimension(m, n, k, symmetric)
    if not cands:
        raise ValueError(f"no irregular {m}x{n} profile has dimension {k}")
    return pick_best(cands, epsilons, trials, seed, threads)
