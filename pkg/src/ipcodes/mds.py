"""Reed-Solomon component codes built from one Vandermonde matrix.

A :class:`NestedRsFamily` of length ``n`` over GF(q) fixes ``n`` distinct
evaluation points; its dimension-``k`` member is generated by the first ``k``
rows of ``V[i][j] = point_j ** i``, so smaller members are subcodes of larger
ones.  :func:`scaled_code_containing` rescales coordinates of an RS code so
that a given 0/1 word becomes a codeword without changing the distance.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field

import numpy as np

from .galois import Field, FieldError, LinearAlgebraError, inverse, null_space, rank

ERASED = -1


class DecodeFailure(Exception):
    """Fewer known symbols than the code dimension."""


class NotACodewordError(ValueError):
    """Known symbols are inconsistent with every codeword."""


@dataclass(eq=False)
class LinearCode:
    """Linear code given by a ``k x n`` generator matrix."""

    field: Field
    generator: np.ndarray
    _cache: dict = dc_field(default_factory=dict, repr=False)

    def __post_init__(self):
        G = np.asarray(self.generator, dtype=np.int64)
        if G.ndim == 1:
            G = G.reshape(0, G.shape[0]) if G.size == 0 else G[None, :]
        self.generator = G

    @property
    def n(self) -> int:
        return self.generator.shape[1]

    @property
    def k(self) -> int:
        return self.generator.shape[0]

    @property
    def parity_check(self) -> np.ndarray:
        if "H" not in self._cache:
            if self.k == 0:
                H = np.eye(self.n, dtype=np.int64)
            else:
                H = null_space(self.field, self.generator)
            self._cache["H"] = H
        return self._cache["H"]

    def encode(self, message) -> np.ndarray:
        message = np.asarray(message, dtype=np.int64)
        if message.shape != (self.k,):
            raise ValueError(f"message length {message.shape} != k={self.k}")
        if self.k == 0:
            return np.zeros(self.n, dtype=np.int64)
        return self.field.matmul(message[None, :], self.generator)[0]

    def contains(self, word) -> bool:
        word = np.asarray(word, dtype=np.int64)
        if word.shape != (self.n,):
            raise ValueError(f"word length {word.shape} != n={self.n}")
        H = self.parity_check
        if H.shape[0] == 0:
            return True
        return not np.any(self.field.matmul(H, word))

    def _reconstruction(self, support: tuple[int, ...]) -> np.ndarray:
        # maps the symbols on `support` (|support| = k) to the full codeword
        key = ("R", support)
        if key not in self._cache:
            Gs = self.generator[:, list(support)]
            try:
                Ginv = inverse(self.field, Gs)
            except LinearAlgebraError:
                raise DecodeFailure(f"coordinates {support} are not an information set")
            self._cache[key] = self.field.matmul(Ginv, self.generator)
        return self._cache[key]

    def erasure_decode(self, received) -> np.ndarray:
        """Fill erasures (``ERASED`` entries) of ``received``.

        Solves from the first ``k`` known coordinates and checks the rest.
        Raises :class:`DecodeFailure` when fewer than ``k`` symbols are known
        and :class:`NotACodewordError` when the known symbols disagree.
        """
        received = np.asarray(received, dtype=np.int64)
        if received.shape != (self.n,):
            raise ValueError(f"received length {received.shape} != n={self.n}")
        known = np.flatnonzero(received != ERASED)
        if known.size < self.k:
            raise DecodeFailure(f"{known.size} known symbols < k={self.k}")
        if self.k == 0:
            word = np.zeros(self.n, dtype=np.int64)
        else:
            support = tuple(int(j) for j in known[: self.k])
            R = self._reconstruction(support)
            word = self.field.matmul(received[list(support)][None, :], R)[0]
        if np.any(word[known] != received[known]):
            raise NotACodewordError("received word is not in the code")
        return word

    def codewords(self):
        """Iterate over all ``q**k`` codewords (small codes only)."""
        F = self.field
        for msg in itertools.product(range(F.q), repeat=self.k):
            yield self.encode(np.array(msg, dtype=np.int64))

    def min_distance(self) -> int:
        """Minimum distance by exhaustive enumeration; ``n + 1`` for k = 0."""
        best = self.n + 1
        for c in self.codewords():
            w = int(np.count_nonzero(c))
            if 0 < w < best:
                best = w
        return best


@dataclass(eq=False)
class NestedRsFamily:
    field: Field
    n: int
    max_dim: int
    eval_points: tuple[int, ...]
    rows: np.ndarray = dc_field(repr=False)
    _codes: dict = dc_field(default_factory=dict, repr=False)

    def code(self, k: int) -> LinearCode:
        if not 0 <= k <= self.max_dim:
            raise ValueError(f"k={k} outside [0, {self.max_dim}]")
        if k not in self._codes:
            self._codes[k] = LinearCode(self.field, self.rows[:k].copy())
        return self._codes[k]


def make_family(field: Field, n: int, max_dim: int | None = None,
                eval_points=None) -> NestedRsFamily:
    if max_dim is None:
        max_dim = n
    if not 0 <= max_dim <= n:
        raise ValueError(f"max_dim={max_dim} outside [0, {n}]")
    if field.q < n:
        raise FieldError(f"need q >= n, got q={field.q} < n={n}")
    if eval_points is None:
        eval_points = tuple(range(n))
    eval_points = tuple(int(field.check(int(a))) for a in eval_points)
    if len(eval_points) != n:
        raise ValueError(f"expected {n} evaluation points, got {len(eval_points)}")
    if len(set(eval_points)) != n:
        raise ValueError(f"evaluation points are not distinct: {eval_points}")
    V = np.array([[field.pow(a, i) for a in eval_points] for i in range(max_dim)],
                 dtype=np.int64).reshape(max_dim, n)
    return NestedRsFamily(field, n, max_dim, eval_points, V)


def encode(family: NestedRsFamily, k: int, message) -> np.ndarray:
    return family.code(k).encode(message)


def erasure_decode(family: NestedRsFamily, k: int, received) -> np.ndarray:
    return family.code(k).erasure_decode(received)


@dataclass(eq=False)
class ScaledRsCode(LinearCode):
    """An RS code with coordinate ``j`` multiplied by ``column_scalars[j]``."""

    base: NestedRsFamily = None
    column_scalars: tuple[int, ...] = ()


def scaled_code_containing(family: NestedRsFamily, k: int, target) -> ScaledRsCode:
    """Scale the ``[n, k]`` member of ``family`` so that ``target`` is a codeword.

    ``target`` is a 0/1 word whose weight ``w`` satisfies ``n - k + 1 <= w <= n``.
    A degree ``k - 1`` polynomial vanishing exactly on the zero coordinates of
    ``target`` is evaluated; each nonzero coordinate is then scaled to 1.
    """
    F, n = family.field, family.n
    target = np.asarray(target, dtype=np.int64)
    if target.shape != (n,) or np.any((target != 0) & (target != 1)):
        raise ValueError("target must be a 0/1 word of the family length")
    if not 0 <= k <= family.max_dim:
        raise ValueError(f"k={k} outside [0, {family.max_dim}]")
    w = int(target.sum())
    if not n - k + 1 <= w <= n:
        raise ValueError(f"target weight {w} outside [{n - k + 1}, {n}]")
    zeros = [j for j in range(n) if target[j] == 0]
    # roots: every zero coordinate once, the first one k + w - n times in all
    roots = []
    if zeros:
        roots = [zeros[0]] * (k + w - n) + zeros[1:]
    values = []
    for a in family.eval_points:
        v = 1
        for j in roots:
            v = F.mul(v, F.sub(a, family.eval_points[j]))
        values.append(v)
    scalars = tuple(F.inv(v) if target[j] else 1 for j, v in enumerate(values))
    G = F.mul_arr(family.rows[:k], np.array(scalars, dtype=np.int64)[None, :])
    return ScaledRsCode(F, G, base=family, column_scalars=scalars)


def is_mds(code: LinearCode) -> bool:
    """Every k columns of the generator are independent (small codes)."""
    F, k = code.field, code.k
    for cols in itertools.combinations(range(code.n), k):
        if rank(F, code.generator[:, list(cols)]) < k:
            return False
    return True
