"""Minimum-distance bound for irregular product codes.

Given non-increasing component distances ``d`` (rows) and ``dp`` (columns),
the bound ``D`` is the least weight of a nonzero 0/1 matrix whose nonzero
rows/columns meet those distances.  It is available three ways here: the
closed-form min-max (:func:`distance_bound`), a max-flow evaluation of each
inner problem (:func:`inner_via_maxflow`) and a dynamic-programming
enumeration over row patterns (:func:`min_weight_oracle`).
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass

import numpy as np

from .galois import Field
from .mds import LinearCode, make_family, scaled_code_containing
from .product import IrregularProductCode


class ProfileError(ValueError):
    pass


@dataclass(frozen=True)
class DistanceProfile:
    d: tuple[int, ...]
    dp: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "d", tuple(int(x) for x in self.d))
        object.__setattr__(self, "dp", tuple(int(x) for x in self.dp))
        m, n = self.m, self.n
        if m < 1 or n < 1:
            raise ProfileError("profiles must be nonempty")
        for name, seq, top in (("d", self.d, n), ("dp", self.dp, m)):
            for i, x in enumerate(seq):
                if not 1 <= x <= top:
                    raise ProfileError(f"{name}[{i}]={x} outside [1, {top}]")
                if i and x > seq[i - 1]:
                    raise ProfileError(f"{name}[{i}]: not non-increasing")

    @property
    def m(self) -> int:
        return len(self.d)

    @property
    def n(self) -> int:
        return len(self.dp)


def is_witness(p: DistanceProfile, M) -> bool:
    M = np.asarray(M)
    if M.shape != (p.m, p.n) or not M.any():
        return False
    rw = M.sum(axis=1)
    cw = M.sum(axis=0)
    return (all(w == 0 or w >= p.d[i] for i, w in enumerate(rw))
            and all(w == 0 or w >= p.dp[j] for j, w in enumerate(cw)))


def admissible(p: DistanceProfile, i: int, j: int) -> bool:
    """Anchor ``(i, j)`` (1-based) can hold the top-left of a nonzero block."""
    return p.d[i - 1] <= p.n - j + 1 and p.dp[j - 1] <= p.m - i + 1


def inner_max(p: DistanceProfile, i: int, j: int) -> int:
    """Least number of ones in block rows ``i..m`` x columns ``j..n`` (1-based)."""
    m, n = p.m, p.n
    # prefix sums over the block, index 0 = empty
    rs = np.concatenate([[0], np.cumsum(p.d[i - 1:])])
    cs = np.concatenate([[0], np.cumsum(p.dp[j - 1:])])
    best = 0
    for r in range(m - i + 2):
        for c in range(n - j + 2):
            best = max(best, int(rs[r] + cs[c]) - r * c)
    return best


def anchors(p: DistanceProfile):
    return [(i, j) for i in range(1, p.m + 1) for j in range(1, p.n + 1)
            if admissible(p, i, j)]


def distance_bound(p: DistanceProfile) -> int:
    cands = anchors(p)
    if not cands:
        raise ProfileError("no admissible anchor")
    return min(inner_max(p, i, j) for i, j in cands)


def _max_flow(cap, s, t):
    """Edmonds-Karp on a dense capacity matrix (modified in place)."""
    n = len(cap)
    flow = 0
    while True:
        parent = [-1] * n
        parent[s] = s
        q = deque([s])
        while q and parent[t] == -1:
            u = q.popleft()
            for v in range(n):
                if parent[v] == -1 and cap[u][v] > 0:
                    parent[v] = u
                    q.append(v)
        if parent[t] == -1:
            return flow
        aug = float("inf")
        v = t
        while v != s:
            aug = min(aug, cap[parent[v]][v])
            v = parent[v]
        v = t
        while v != s:
            u = parent[v]
            cap[u][v] -= aug
            cap[v][u] += aug
            v = u
        flow += aug


def inner_via_maxflow(p: DistanceProfile, i: int, j: int) -> int:
    """Same quantity as :func:`inner_max`, via maximising zeros with max-flow."""
    m, n = p.m, p.n
    rows = list(range(i, m + 1))
    cols = list(range(j, n + 1))
    R, C = len(rows), len(cols)
    src, sink = 0, R + C + 1
    cap = [[0] * (R + C + 2) for _ in range(R + C + 2)]
    for a, r in enumerate(rows):
        c_ = n - j + 1 - p.d[r - 1]
        if c_ < 0:
            raise ProfileError(f"anchor ({i}, {j}) is inadmissible")
        cap[src][1 + a] = c_
        for b in range(C):
            cap[1 + a][1 + R + b] = 1
    for b, c in enumerate(cols):
        c_ = m - i + 1 - p.dp[c - 1]
        if c_ < 0:
            raise ProfileError(f"anchor ({i}, {j}) is inadmissible")
        cap[1 + R + b][sink] = c_
    return R * C - _max_flow(cap, src, sink)


def min_weight_oracle(p: DistanceProfile, max_cells: int = 25):
    """Exact minimum-weight witness by enumerating row patterns.

    Rows are processed one at a time; the state is the vector of column
    weights so far, capped at each column's requirement.  Every row is either
    zero or any subset of size ``>= d_i``.  The matrix is transposed first if
    that gives the smaller state space.  Returns ``(weight, matrix)``.
    """
    if p.m * p.n > max_cells:
        raise ValueError(f"{p.m}x{p.n} exceeds the exhaustive-search limit of {max_cells} cells")
    if p.n > p.m:
        w, M = min_weight_oracle(DistanceProfile(p.dp, p.d), max_cells)
        return w, M.T.copy()
    m, n, d, dp = p.m, p.n, p.d, p.dp
    patterns = [np.array(bits, dtype=np.int64)
                for bits in itertools.product((0, 1), repeat=n)]
    weights = [int(x.sum()) for x in patterns]
    cap = np.array(dp, dtype=np.int64)
    # state -> (weight, back-pointer chain)
    layer = {tuple([0] * n): (0, None)}
    for i in range(m):
        nxt = {}
        for state, (w0, back) in layer.items():
            st = np.array(state, dtype=np.int64)
            for pat, pw in zip(patterns, weights):
                if pw and pw < d[i]:
                    continue
                new = tuple(np.minimum(st + pat, cap))
                cand = w0 + pw
                if new not in nxt or cand < nxt[new][0]:
                    nxt[new] = (cand, (back, pat))
        layer = nxt
    best = None
    for state, (w0, back) in layer.items():
        if w0 == 0:
            continue
        if all(s == 0 or s >= dp[j] for j, s in enumerate(state)):
            if best is None or w0 < best[0]:
                best = (w0, back)
    if best is None:
        raise ProfileError("no nonzero witness exists")
    rows = []
    back = best[1]
    while back is not None:
        back, pat = back
        rows.append(pat)
    M = np.array(rows[::-1], dtype=np.int64)
    assert is_witness(p, M) and int(M.sum()) == best[0]
    return best[0], M


def brute_force_min_weight(p: DistanceProfile) -> int:
    """Try every nonzero 0/1 matrix; feasible for m*n <= 16 or so."""
    m, n = p.m, p.n
    best = m * n + 1
    for bits in range(1, 1 << (m * n)):
        w = bin(bits).count("1")
        if w >= best:
            continue
        M = np.array([(bits >> k) & 1 for k in range(m * n)]).reshape(m, n)
        if is_witness(p, M):
            best = w
    return best


@dataclass
class AchievedCode:
    code: IrregularProductCode
    witness: np.ndarray
    bound: int


def achieve_distance(p: DistanceProfile, field: Field, max_cells: int = 25) -> AchievedCode:
    """Component codes with distances ``p`` whose product code has distance ``D``.

    Each nonzero row (column) of a minimum-weight witness is made a codeword
    of a coordinate-scaled RS code of the required distance; the other lines
    use plain RS codes.
    """
    m, n = p.m, p.n
    if field.q < max(m, n):
        raise ValueError(f"need q >= max(m, n) = {max(m, n)}, got {field.q}")
    weight, M = min_weight_oracle(p, max_cells)
    row_fam = make_family(field, n)
    col_fam = make_family(field, m)

    def component(fam, length, dist, line) -> LinearCode:
        k = length - dist + 1
        if line.any():
            return scaled_code_containing(fam, k, line)
        return fam.code(k)

    rows = [component(row_fam, n, p.d[i], M[i]) for i in range(m)]
    cols = [component(col_fam, m, p.dp[j], M[:, j]) for j in range(n)]
    return AchievedCode(IrregularProductCode(field, rows, cols), M, weight)
