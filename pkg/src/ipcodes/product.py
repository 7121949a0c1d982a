"""Irregular product codes: parameters, dimension, systematic encoding.

Coordinates are 0-based ``(row, column)`` pairs throughout.  Row ``i`` of a
codeword lies in an ``[n, a[i]]`` Reed-Solomon code and column ``j`` in an
``[m, b[j]]`` one; both families are nested, which is what makes the
dimension formula exact and the marking schedule a valid encoder.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .galois import Field, null_space, rank
from .mds import ERASED, make_family


class SpecError(ValueError):
    """Invalid code parameters; ``field`` names the offending entry."""

    def __init__(self, field: str, msg: str):
        super().__init__(f"{field}: {msg}")
        self.field = field


@dataclass(frozen=True)
class CodeSpec:
    field: Field
    m: int
    n: int
    a: tuple[int, ...]
    b: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(int(x) for x in self.a))
        object.__setattr__(self, "b", tuple(int(x) for x in self.b))
        if self.m < 1:
            raise SpecError("m", f"must be >= 1, got {self.m}")
        if self.n < 1:
            raise SpecError("n", f"must be >= 1, got {self.n}")
        _check_profile("a", self.a, self.m, self.n)
        _check_profile("b", self.b, self.n, self.m)
        if self.field.q < max(self.m, self.n):
            raise SpecError("field", f"q={self.field.q} < max(m, n)={max(self.m, self.n)}")

    @property
    def length(self) -> int:
        return self.m * self.n

    @property
    def row_tolerance(self) -> np.ndarray:
        """Erasures each row code can fill (``n - a_i``; MDS)."""
        return self.n - np.array(self.a, dtype=np.int64)

    @property
    def col_tolerance(self) -> np.ndarray:
        return self.m - np.array(self.b, dtype=np.int64)

    def to_config(self) -> dict:
        return {"field": self.field.to_config(), "m": self.m, "n": self.n,
                "a": list(self.a), "b": list(self.b)}

    @classmethod
    def regular(cls, field: Field, m: int, n: int, k_row: int, k_col: int) -> "CodeSpec":
        return cls(field, m, n, (k_row,) * m, (k_col,) * n)


def _check_profile(name, seq, length, top):
    if len(seq) != length:
        raise SpecError(name, f"expected {length} entries, got {len(seq)}")
    for i, x in enumerate(seq):
        if not 0 <= x <= top:
            raise SpecError(f"{name}[{i}]", f"value {x} outside [0, {top}]")
        if i and x < seq[i - 1]:
            raise SpecError(f"{name}[{i}]", f"not monotone: {seq[i - 1]} > {x}")


def dimension(spec: CodeSpec) -> int:
    """Closed-form dimension of the nested-MDS irregular product code."""
    total = 0
    prev = 0
    for j, bj in enumerate(spec.b, start=1):
        for i in range(prev + 1, bj + 1):
            total += max(spec.a[i - 1] - j + 1, 0)
        prev = bj
    return total


# Marking schedule ------------------------------------------------------------


@dataclass(frozen=True)
class FillStep:
    kind: str  # "row" or "column"
    index: int
    coords: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class MarkSchedule:
    generating: tuple[tuple[int, int], ...]
    steps: tuple[FillStep, ...]


def _assert_prefix(marked_line):
    cnt = int(marked_line.sum())
    assert marked_line[:cnt].all(), "marked coordinates are not a prefix"


@lru_cache(maxsize=256)
def mark_schedule(spec: CodeSpec) -> MarkSchedule:
    """Pick generating coordinates and the order in which the rest are filled.

    Each round fills, in priority order: the lowest available row that is
    already determined, else the lowest available determined column, else the
    lowest available row after marking generating coordinates up to its
    dimension.  A line is determined once its marked count reaches its code
    dimension.
    """
    m, n, a, b = spec.m, spec.n, spec.a, spec.b
    marked = np.zeros((m, n), dtype=bool)
    row_cnt = np.zeros(m, dtype=np.int64)
    col_cnt = np.zeros(n, dtype=np.int64)
    generating = []
    steps = []

    def fill_row(i):
        coords = tuple((i, j) for j in range(n) if not marked[i, j])
        for _, j in coords:
            marked[i, j] = True
            col_cnt[j] += 1
            _assert_prefix(marked[:, j])
        row_cnt[i] = n
        # kept even when empty so every generating run is followed by its row's step
        steps.append(FillStep("row", i, coords))

    while row_cnt.sum() < m * n:
        i = next((i for i in range(m) if a[i] <= row_cnt[i] < n), None)
        if i is not None:
            fill_row(i)
            continue
        j = next((j for j in range(n) if b[j] <= col_cnt[j] < m), None)
        if j is not None:
            coords = tuple((i, j) for i in range(m) if not marked[i, j])
            for i, _ in coords:
                marked[i, j] = True
                row_cnt[i] += 1
                _assert_prefix(marked[i])
            col_cnt[j] = m
            steps.append(FillStep("column", j, coords))
            continue
        i = next(i for i in range(m) if row_cnt[i] < n)
        _assert_prefix(marked[i])
        for j in range(int(row_cnt[i]), a[i]):
            generating.append((i, j))
            marked[i, j] = True
            col_cnt[j] += 1
            _assert_prefix(marked[:, j])
        row_cnt[i] = a[i]
        fill_row(i)

    return MarkSchedule(tuple(generating), tuple(steps))


# Codes -----------------------------------------------------------------------


class IrregularProductCode:
    """Product code with arbitrary linear row and column component codes."""

    def __init__(self, field: Field, row_codes, col_codes):
        self.field = field
        self.row_codes = list(row_codes)
        self.col_codes = list(col_codes)
        self.m = len(self.row_codes)
        self.n = len(self.col_codes)
        for c in self.row_codes:
            if c.n != self.n:
                raise ValueError("row code length != number of columns")
        for c in self.col_codes:
            if c.n != self.m:
                raise ValueError("column code length != number of rows")

    def _check_shape(self, M):
        M = np.asarray(M, dtype=np.int64)
        if M.shape != (self.m, self.n):
            raise ValueError(f"matrix shape {M.shape} != ({self.m}, {self.n})")
        return M

    def is_codeword(self, M) -> bool:
        M = self._check_shape(M)
        return (all(c.contains(M[i]) for i, c in enumerate(self.row_codes))
                and all(c.contains(M[:, j]) for j, c in enumerate(self.col_codes)))

    def parity_check_matrix(self) -> np.ndarray:
        """All row and column parity constraints on the ``m*n`` row-major symbols."""
        m, n = self.m, self.n
        blocks = []
        for i, c in enumerate(self.row_codes):
            H = c.parity_check
            B = np.zeros((H.shape[0], m * n), dtype=np.int64)
            B[:, i * n:(i + 1) * n] = H
            blocks.append(B)
        for j, c in enumerate(self.col_codes):
            H = c.parity_check
            B = np.zeros((H.shape[0], m * n), dtype=np.int64)
            B[:, j::n] = H
            blocks.append(B)
        return np.vstack(blocks) if blocks else np.zeros((0, m * n), dtype=np.int64)

    def dimension(self) -> int:
        return self.m * self.n - rank(self.field, self.parity_check_matrix())

    def basis(self) -> np.ndarray:
        return null_space(self.field, self.parity_check_matrix())

    def codewords(self):
        """All codewords as ``m x n`` matrices (small codes only)."""
        B = self.basis()
        F = self.field
        for coeffs in itertools.product(range(F.q), repeat=B.shape[0]):
            if B.shape[0] == 0:
                v = np.zeros(self.m * self.n, dtype=np.int64)
            else:
                v = F.matmul(np.array(coeffs, dtype=np.int64)[None, :], B)[0]
            yield v.reshape(self.m, self.n)

    def min_distance(self) -> int:
        best = self.m * self.n + 1
        for M in self.codewords():
            w = int(np.count_nonzero(M))
            if 0 < w < best:
                best = w
        return best

    def iterative_decode(self, received):
        """Row/column erasure decoding until no line can make progress.

        A line is decoded when its erasure count is at most ``len - k`` (below
        the MDS minimum distance).  Returns ``(matrix, rounds)``; unrecovered
        symbols stay ``ERASED``.
        """
        M = self._check_shape(received).copy()
        rounds = 0
        while True:
            changed = False
            for i, c in enumerate(self.row_codes):
                e = int(np.count_nonzero(M[i] == ERASED))
                if 0 < e <= c.n - c.k:
                    M[i] = c.erasure_decode(M[i])
                    changed = True
            for j, c in enumerate(self.col_codes):
                e = int(np.count_nonzero(M[:, j] == ERASED))
                if 0 < e <= c.n - c.k:
                    M[:, j] = c.erasure_decode(M[:, j])
                    changed = True
            if not changed:
                return M, rounds
            rounds += 1


class NestedRsProductCode(IrregularProductCode):
    """The code described by a :class:`CodeSpec` (nested RS components)."""

    def __init__(self, spec: CodeSpec):
        self.spec = spec
        self.row_family = make_family(spec.field, spec.n, max(spec.a))
        self.col_family = make_family(spec.field, spec.m, max(spec.b))
        super().__init__(spec.field,
                         [self.row_family.code(k) for k in spec.a],
                         [self.col_family.code(k) for k in spec.b])


@lru_cache(maxsize=256)
def build_code(spec: CodeSpec) -> NestedRsProductCode:
    return NestedRsProductCode(spec)


def encode(spec: CodeSpec, schedule: MarkSchedule | None, info) -> np.ndarray:
    """Systematic encoder: info symbols go to the generating coordinates."""
    if schedule is None:
        schedule = mark_schedule(spec)
    F = spec.field
    info = np.asarray(info, dtype=np.int64)
    if info.shape != (len(schedule.generating),):
        raise ValueError(f"info length {info.size} != dimension {len(schedule.generating)}")
    if np.any((info < 0) | (info >= F.q)):
        raise ValueError(f"info symbols must lie in [0, {F.q})")
    code = build_code(spec)
    M = np.full((spec.m, spec.n), ERASED, dtype=np.int64)
    for (i, j), x in zip(schedule.generating, info):
        M[i, j] = x
    for step in schedule.steps:
        if not step.coords:
            continue
        if step.kind == "row":
            line = code.row_codes[step.index].erasure_decode(M[step.index])
            for i, j in step.coords:
                assert M[i, j] == ERASED
                M[i, j] = line[j]
        else:
            line = code.col_codes[step.index].erasure_decode(M[:, step.index])
            for i, j in step.coords:
                assert M[i, j] == ERASED
                M[i, j] = line[i]
    return M


def extract_info(spec: CodeSpec, schedule: MarkSchedule | None, M) -> np.ndarray:
    if schedule is None:
        schedule = mark_schedule(spec)
    M = np.asarray(M, dtype=np.int64)
    return np.array([M[i, j] for i, j in schedule.generating], dtype=np.int64)


def is_codeword(spec: CodeSpec, M) -> bool:
    return build_code(spec).is_codeword(M)


def dimension_oracle(spec: CodeSpec) -> int:
    """``m*n - rank(H)`` with ``H`` stacking every row and column parity check."""
    return build_code(spec).dimension()
