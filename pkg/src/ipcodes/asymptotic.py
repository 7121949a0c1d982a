"""Density evolution and asymptotic design with piecewise-linear profiles.

A :class:`Profile` is a non-decreasing function ``[0, 1] -> [0, 1]`` given by
breakpoints.  Two breakpoints may share an abscissa, which encodes a jump;
the function value at a jump is the right limit, so every profile (and every
generalized inverse) is right-continuous.
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from pathlib import Path

import numpy as np


class ProfileError(ValueError):
    pass


_EPS = 1e-12


class Profile:
    def __init__(self, points):
        pts = [(float(t), float(v)) for t, v in points]
        self.points = _normalize(pts)
        ts = [t for t, _ in self.points]
        vs = [v for _, v in self.points]
        if not self.points or ts[0] != 0.0 or ts[-1] != 1.0:
            raise ProfileError("breakpoints must start at t=0 and end at t=1")
        for k in range(1, len(ts)):
            if ts[k] < ts[k - 1] or vs[k] < vs[k - 1] - _EPS:
                raise ProfileError(f"breakpoint {k} breaks monotonicity")
        if min(vs) < -_EPS or max(vs) > 1 + _EPS:
            raise ProfileError("values must lie in [0, 1]")
        self.ts = ts
        self.vs = vs

    @classmethod
    def linear(cls, slope: float) -> "Profile":
        return cls([(0.0, 0.0), (1.0, slope)])

    @classmethod
    def constant(cls, c: float) -> "Profile":
        return cls([(0.0, c), (1.0, c)])

    @classmethod
    def from_text(cls, text: str) -> "Profile":
        pts = []
        for lineno, line in enumerate(text.splitlines(), start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ProfileError(f"line {lineno}: expected 't v', got {line!r}")
            try:
                pts.append((float(parts[0]), float(parts[1])))
            except ValueError:
                raise ProfileError(f"line {lineno}: not a number: {line!r}")
        return cls(pts)

    @classmethod
    def load(cls, path) -> "Profile":
        return cls.from_text(Path(path).read_text())

    def to_text(self) -> str:
        return "".join(f"{t!r} {v!r}\n" for t, v in self.points)

    def __repr__(self):
        return f"Profile({self.points!r})"

    def __call__(self, x: float) -> float:
        k = bisect_right(self.ts, x) - 1
        if k < 0:
            return self.vs[0]
        if k >= len(self.ts) - 1:
            return self.vs[-1]
        return _interp(self.ts[k], self.vs[k], self.ts[k + 1], self.vs[k + 1], x)

    def left_limit(self, x: float) -> float:
        k = bisect_left(self.ts, x) - 1
        if k < 0:
            return self.vs[0]
        if k >= len(self.ts) - 1:
            return self.vs[-1]
        return _interp(self.ts[k], self.vs[k], self.ts[k + 1], self.vs[k + 1], x)

    def inverse(self) -> "Profile":
        """The generalized inverse ``x -> sup{z : f(z) <= x}`` as a profile.

        Flat pieces of ``f`` turn into jumps and jumps into flat pieces.
        """
        pts = [(0.0, 0.0)] + [(v, t) for t, v in self.points] + [(1.0, 1.0)]
        return Profile(pts)

    def segments(self):
        for k in range(len(self.ts) - 1):
            yield self.ts[k], self.vs[k], self.ts[k + 1], self.vs[k + 1]


def _interp(t0, v0, t1, v1, x):
    if t1 == t0:
        return v1
    return v0 + (v1 - v0) * (x - t0) / (t1 - t0)


def _normalize(pts):
    """Drop duplicate points and keep only the ends of equal-abscissa runs."""
    pts = [(min(max(t, 0.0), 1.0), v) for t, v in pts]
    out = []
    k = 0
    while k < len(pts):
        e = k
        while e + 1 < len(pts) and pts[e + 1][0] == pts[k][0]:
            e += 1
        out.append(pts[k])
        if pts[e][1] != pts[k][1]:
            out.append(pts[e])
        k = e + 1
    return out


def generalized_inverse(f: Profile, x: float) -> float:
    """``sup{z in [0, 1] : f(z) <= x}``, or 0 when no such ``z`` exists."""
    if f(0.0) > x:
        return 0.0
    z = 0.0
    for t0, v0, t1, v1 in f.segments():
        if v1 <= x:
            z = t1
            continue
        if v0 <= x and t1 > t0:
            z = t0 + (x - v0) * (t1 - t0) / (v1 - v0)
        else:
            z = t0
        break
    return z


# Density evolution -----------------------------------------------------------


def _composite(alpha: Profile, beta: Profile, epsilon: float):
    A = alpha.inverse()
    B = beta.inverse()

    def h(x):
        return A(epsilon * B(epsilon * x))

    return h, A, B


@dataclass(frozen=True)
class DeVerdict:
    """Outcome of :func:`de_check`.

    ``x`` is the infimum of the violating set; ``0.0`` means the condition
    fails on some interval ``(0, c)``.
    """

    satisfied: bool
    x: float | None = None

    def __bool__(self):
        return self.satisfied


def _candidates(A: Profile, B: Profile, epsilon: float, grid: int):
    xs = {k / grid for k in range(1, grid + 1)}
    xs.add(1.0)
    for s in B.ts:
        if 0 < s <= epsilon:
            xs.add(s / epsilon)
    # points where epsilon * B(epsilon x) crosses a breakpoint of A
    for s0, t0, s1, t1 in B.segments():
        if s1 <= s0 or t1 == t0 or s0 >= epsilon:
            continue
        for r in A.ts:
            # epsilon * (t0 + (eps x - s0) (t1 - t0) / (s1 - s0)) = r
            u = (r / epsilon - t0) * (s1 - s0) / (t1 - t0) + s0
            if s0 <= u <= s1:
                x = u / epsilon
                if 0 < x <= 1:
                    xs.add(x)
    return sorted(xs)


def de_check(alpha: Profile, beta: Profile, epsilon: float, grid: int = 10_000,
             tol: float = 1e-12) -> DeVerdict:
    """Test ``alpha^-1(epsilon * beta^-1(epsilon * x)) < x`` for all ``x`` in (0, 1].

    The composite is linear between consecutive candidate points (composite
    breakpoints plus a uniform grid), so checking each piece is exact.
    Equality counts as a violation; ``tol`` is a relative slack for it.
    Features of the profiles far below ``tol`` in scale (say breakpoints
    1e-40 apart) are beneath the floating-point resolution of the check.
    """
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    h, A, B = _composite(alpha, beta, epsilon)
    xs = [0.0] + _candidates(A, B, epsilon, grid)

    def g(x):
        return h(x) - (1 - tol) * x

    if h(0.0) > tol:
        return DeVerdict(False, 0.0)
    for x0, x1 in zip(xs, xs[1:]):
        if x0 > 0 and g(x0) >= 0:
            return DeVerdict(False, x0)
        # g is linear on (x0, x1); read the line off two interior points so a
        # jump that rounding put a hair inside the interval cannot bend it
        w = x1 - x0
        g1 = g(x0 + 0.25 * w)
        g3 = g(x0 + 0.75 * w)
        # h is right-continuous and 0 is exact, so g(0) is the right limit there
        gl = g(0.0) if x0 == 0 else 1.5 * g1 - 0.5 * g3
        gr = 1.5 * g3 - 0.5 * g1
        if gl > 0 or (x0 == 0 and gr > 0):
            return DeVerdict(False, x0)
        if gr > 0:
            return DeVerdict(False, x0 + w * (-gl) / (gr - gl))
    if g(xs[-1]) >= 0:
        return DeVerdict(False, xs[-1])
    return DeVerdict(True)


@dataclass(frozen=True)
class DeTrajectory:
    epsilon: float
    xs: tuple[float, ...]
    converged_to: float
    rounds: int


def de_trajectory(alpha: Profile, beta: Profile, epsilon: float, x_stop: float = 1e-6,
                  max_rounds: int = 100_000, stall_tol: float = 1e-14) -> DeTrajectory:
    """Iterate ``x <- alpha^-1(epsilon * beta^-1(epsilon * x))`` from ``x = 1``.

    Stops once ``x <= x_stop``, when an iteration moves less than
    ``stall_tol`` (a fixed point) or after ``max_rounds``.
    """
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    h, _, _ = _composite(alpha, beta, epsilon)
    xs = [1.0]
    while xs[-1] > x_stop and len(xs) - 1 < max_rounds:
        nx = h(xs[-1])
        if nx > xs[-1]:
            nx = xs[-1]
        if xs[-1] - nx < stall_tol:
            break
        xs.append(nx)
    return DeTrajectory(epsilon, tuple(xs), xs[-1], len(xs) - 1)


# Design ----------------------------------------------------------------------


def design_alpha_from_beta(beta: Profile, epsilon: float) -> Profile:
    """Row profile ``alpha(x) = epsilon * beta^-1(epsilon * x)``."""
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    if beta(1.0) > epsilon + _EPS:
        raise ProfileError(f"beta(1)={beta(1.0)} exceeds epsilon={epsilon}")
    if beta(0.0) > 0:
        raise ProfileError(f"beta(0)={beta(0.0)} must be 0")
    if beta(1.0) == 0:
        raise ProfileError("beta is identically zero")
    B = beta.inverse()
    pts = [(s / epsilon, epsilon * t) for s, t in B.points if s <= epsilon]
    if pts[-1][0] < 1.0:
        pts.append((1.0, epsilon * B(epsilon)))
    return Profile(pts)


def asymptotic_rate(alpha: Profile, beta: Profile, quad_points: int | None = None) -> float:
    """``integral_0^1 max(beta^-1(x) - alpha(x), 0) dx``.

    Exact piecewise-linear integration by default; ``quad_points`` switches
    to a midpoint rule with that many nodes.
    """
    B = beta.inverse()
    if quad_points:
        xs = (np.arange(quad_points) + 0.5) / quad_points
        return float(sum(max(B(x) - alpha(x), 0.0) for x in xs) / quad_points)
    knots = sorted(set(B.ts) | set(alpha.ts))
    total = 0.0
    for p, q in zip(knots, knots[1:]):
        L = q - p
        d0 = B(p) - alpha(p)
        d1 = B.left_limit(q) - alpha.left_limit(q)
        if d0 >= 0 and d1 >= 0:
            total += 0.5 * (d0 + d1) * L
        elif d0 > 0:
            total += 0.5 * d0 * d0 / (d0 - d1) * L
        elif d1 > 0:
            total += 0.5 * d1 * d1 / (d1 - d0) * L
    return total


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5 + 1e-9))


def discretize(alpha: Profile, beta: Profile, m: int, n: int,
               floors: tuple[int, int] = (1, 1), boosts: int = 0):
    """Integer row/column dimensions ``(a, b)`` following ``alpha`` and ``beta``.

    ``a_i = round(n * (1 - alpha(1 - i/m)))`` capped so that every row code
    keeps distance ``>= floors[0]`` (columns likewise).  ``boosts`` more of the
    lowest-index lines are then pulled down to the smallest dimension.
    """
    if m < 1 or n < 1:
        raise ValueError("m and n must be positive")
    fr, fc = floors
    if not 1 <= fr <= n + 1:
        raise ValueError(f"row distance floor {fr} outside [1, {n + 1}]")
    if not 1 <= fc <= m + 1:
        raise ValueError(f"column distance floor {fc} outside [1, {m + 1}]")

    def line(prof, count, length, floor):
        vals = []
        for i in range(1, count + 1):
            k = _round_half_up(length * (1 - prof(1 - i / count)))
            vals.append(min(max(k, 0), length - floor + 1))
        for i in range(1, count):
            vals[i] = max(vals[i], vals[i - 1])
        low = vals[0]
        c = sum(1 for v in vals if v == low)
        for i in range(min(c + boosts, count)):
            vals[i] = low
        assert all(x <= y for x, y in zip(vals, vals[1:]))
        return tuple(vals)

    return line(alpha, m, n, fr), line(beta, n, m, fc)
