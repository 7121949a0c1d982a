"""Finite-field arithmetic over GF(2^w) and GF(p).

Elements are plain integers in ``[0, q)``; the :class:`Field` object carries
the context.  Binary-extension fields multiply through exp/log tables,
prime fields through modular arithmetic.  Every scalar operation has a
vectorised numpy counterpart (``*_arr``) used by the linear algebra below.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import lru_cache

import numpy as np


class FieldError(ValueError):
    """Bad field parameters or an element outside the field."""


class LinearAlgebraError(ArithmeticError):
    pass


class InconsistentSystemError(LinearAlgebraError):
    """A x = b has no solution."""


class UnderdeterminedSystemError(LinearAlgebraError):
    """A x = b has more than one solution; ``particular`` is one of them."""

    def __init__(self, msg, rank, particular):
        super().__init__(msg)
        self.rank = rank
        self.particular = particular


def _poly_degree(p: int) -> int:
    return p.bit_length() - 1


def _poly_mod(a: int, b: int) -> int:
    db = _poly_degree(b)
    while a and _poly_degree(a) >= db:
        a ^= b << (_poly_degree(a) - db)
    return a


def carryless_mul(a: int, b: int) -> int:
    r = 0
    while b:
        if b & 1:
            r ^= a
        a <<= 1
        b >>= 1
    return r


def poly_mulmod(a: int, b: int, poly: int) -> int:
    """Schoolbook product of two GF(2)[x] polynomials reduced modulo ``poly``."""
    return _poly_mod(carryless_mul(a, b), poly)


def is_irreducible(poly: int) -> bool:
    w = _poly_degree(poly)
    if w < 1:
        return False
    for d in range(2, 1 << (w // 2 + 1)):
        if _poly_degree(d) > w // 2:
            break
        if _poly_mod(poly, d) == 0:
            return False
    return True


@lru_cache(maxsize=None)
def default_poly(w: int) -> int:
    """Lexicographically smallest irreducible polynomial of degree ``w``."""
    for p in range((1 << w) | 1, 1 << (w + 1), 2):
        if is_irreducible(p):
            return p
    raise FieldError(f"no irreducible polynomial of degree {w}")


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class Field:
    """GF(q) context.

    Use :meth:`gf2e` / :meth:`prime` / :meth:`from_config` rather than the
    constructor.  Equality and hashing only look at ``(kind, q, poly)``.
    """

    kind: str
    q: int
    poly: int = 0
    exp: np.ndarray = dc_field(default=None, compare=False, repr=False)
    log: np.ndarray = dc_field(default=None, compare=False, repr=False)

    @classmethod
    def gf2e(cls, w: int, poly: int | None = None) -> "Field":
        if not 1 <= w <= 16:
            raise FieldError(f"w must be in [1, 16], got {w}")
        if poly is None:
            poly = default_poly(w)
        if _poly_degree(poly) != w or not is_irreducible(poly):
            raise FieldError(f"poly {poly:#x} is not irreducible of degree {w}")
        q = 1 << w
        exp, log = _build_tables(w, poly)
        return cls("gf2e", q, poly, exp, log)

    @classmethod
    def prime(cls, p: int) -> "Field":
        if not _is_prime(p):
            raise FieldError(f"p={p} is not prime")
        return cls("prime", p)

    @classmethod
    def from_config(cls, cfg: dict) -> "Field":
        kind = cfg.get("kind")
        if kind == "gf2e":
            if "w" not in cfg:
                raise FieldError("field.w missing")
            return cls.gf2e(int(cfg["w"]), cfg.get("poly"))
        if kind == "prime":
            if "p" not in cfg:
                raise FieldError("field.p missing")
            return cls.prime(int(cfg["p"]))
        raise FieldError(f"field.kind must be 'gf2e' or 'prime', got {kind!r}")

    @classmethod
    def smallest_at_least(cls, q_min: int) -> "Field":
        """Smallest GF(2^w) with 2^w >= q_min (at least GF(2))."""
        w = max(1, (max(q_min, 2) - 1).bit_length())
        return cls.gf2e(w)

    def to_config(self) -> dict:
        if self.kind == "gf2e":
            return {"kind": "gf2e", "w": _poly_degree(self.poly), "poly": self.poly}
        return {"kind": "prime", "p": self.q}

    def __str__(self):
        if self.kind == "gf2e":
            return f"GF(2^{_poly_degree(self.poly)})"
        return f"GF({self.q})"

    @property
    def char2(self) -> bool:
        return self.kind == "gf2e"

    def check(self, x: int) -> int:
        if not 0 <= x < self.q:
            raise FieldError(f"{x} is not an element of {self}")
        return x

    # scalar ops

    def add(self, x: int, y: int) -> int:
        if self.char2:
            return x ^ y
        return (x + y) % self.q

    def sub(self, x: int, y: int) -> int:
        if self.char2:
            return x ^ y
        return (x - y) % self.q

    def neg(self, x: int) -> int:
        if self.char2:
            return x
        return (-x) % self.q

    def mul(self, x: int, y: int) -> int:
        if self.char2:
            if x == 0 or y == 0:
                return 0
            return int(self.exp[int(self.log[x]) + int(self.log[y])])
        return (x * y) % self.q

    def inv(self, x: int) -> int:
        if x == 0:
            raise ZeroDivisionError(f"0 has no inverse in {self}")
        if self.char2:
            return int(self.exp[(self.q - 1) - int(self.log[x])])
        return pow(x, self.q - 2, self.q)

    def div(self, x: int, y: int) -> int:
        return self.mul(x, self.inv(y))

    def pow(self, x: int, e: int) -> int:
        if e == 0:
            return 1
        if x == 0:
            return 0
        if self.char2:
            return int(self.exp[(int(self.log[x]) * e) % (self.q - 1)])
        return pow(x, e, self.q)

    # vectorised ops on integer arrays

    def add_arr(self, x, y):
        if self.char2:
            return np.bitwise_xor(x, y)
        return (np.asarray(x) + y) % self.q

    def sub_arr(self, x, y):
        if self.char2:
            return np.bitwise_xor(x, y)
        return (np.asarray(x) - y) % self.q

    def mul_arr(self, x, y):
        x = np.asarray(x, dtype=np.int64)
        y = np.asarray(y, dtype=np.int64)
        if self.char2:
            r = self.exp[self.log[x] + self.log[y]]
            return np.where((x == 0) | (y == 0), 0, r)
        return (x * y) % self.q

    def inv_arr(self, x):
        x = np.asarray(x, dtype=np.int64)
        if np.any(x == 0):
            raise ZeroDivisionError("0 has no inverse")
        if self.char2:
            return self.exp[(self.q - 1) - self.log[x]]
        return np.array([pow(int(v), self.q - 2, self.q) for v in x.ravel()],
                        dtype=np.int64).reshape(x.shape)

    def matmul(self, A, B):
        A = np.atleast_2d(np.asarray(A, dtype=np.int64))
        B = np.asarray(B, dtype=np.int64)
        vec = B.ndim == 1
        if vec:
            B = B[:, None]
        if A.shape[1] != B.shape[0]:
            raise ValueError(f"shape mismatch {A.shape} x {B.shape}")
        if not self.char2:
            # entries < q <= 2^16, so partial sums fit easily in int64
            out = (A @ B) % self.q
        else:
            out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
            for t in range(A.shape[1]):
                out ^= self.mul_arr(A[:, t:t + 1], B[t:t + 1, :])
        return out[:, 0] if vec else out

    def elements(self):
        return range(self.q)


def _build_tables(w: int, poly: int):
    q = 1 << w
    # the default polynomial need not be primitive, so search for a generator
    for g in range(2, q) if q > 2 else [1]:
        exp = np.zeros(2 * q, dtype=np.int64)
        log = np.zeros(q, dtype=np.int64)
        x = 1
        seen = set()
        ok = True
        for i in range(q - 1):
            if x in seen:
                ok = False
                break
            seen.add(x)
            exp[i] = x
            log[x] = i
            x = poly_mulmod(x, g, poly)
        if ok and x == 1:
            exp[q - 1:2 * (q - 1)] = exp[:q - 1]
            # log[0] is a dummy; mul_arr masks zero operands
            log[0] = 0
            return exp, log
    raise FieldError(f"no generator found for poly {poly:#x}")


# Linear algebra ------------------------------------------------------------


def row_reduce(F: Field, A):
    """Reduced row echelon form of ``A`` over ``F``.

    Returns ``(R, pivots)`` where ``pivots`` lists the pivot column of each
    nonzero row of ``R``.
    """
    R = np.array(A, dtype=np.int64, copy=True)
    if R.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    rows, cols = R.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(R[r:, c])[0]
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            R[[r, p]] = R[[p, r]]
        R[r] = F.mul_arr(R[r], F.inv(int(R[r, c])))
        col = R[:, c].copy()
        col[r] = 0
        nzr = np.nonzero(col)[0]
        if nzr.size:
            R[nzr] = F.sub_arr(R[nzr], F.mul_arr(col[nzr, None], R[r][None, :]))
        pivots.append(c)
        r += 1
    return R, pivots


def rank(F: Field, A) -> int:
    A = np.asarray(A)
    if A.size == 0:
        return 0
    return len(row_reduce(F, A)[1])


def solve_linear(F: Field, A, b):
    """Solve ``A x = b`` over ``F`` by Gaussian elimination.

    Raises :class:`InconsistentSystemError` if there is no solution and
    :class:`UnderdeterminedSystemError` (carrying one particular solution) if
    the solution is not unique.
    """
    A = np.atleast_2d(np.asarray(A, dtype=np.int64))
    b = np.asarray(b, dtype=np.int64)
    if b.ndim != 1 or b.shape[0] != A.shape[0]:
        raise ValueError(f"dimension mismatch: A is {A.shape}, b has {b.shape}")
    rows, cols = A.shape
    R, pivots = row_reduce(F, np.hstack([A, b[:, None]]))
    if pivots and pivots[-1] == cols:
        raise InconsistentSystemError("system is inconsistent")
    x = np.zeros(cols, dtype=np.int64)
    for r, c in enumerate(pivots):
        x[c] = R[r, cols]
    if len(pivots) < cols:
        raise UnderdeterminedSystemError(
            f"rank {len(pivots)} < {cols} unknowns", len(pivots), x)
    return x


def null_space(F: Field, A):
    """Basis of ``{x : A x = 0}`` as the rows of the returned matrix."""
    A = np.atleast_2d(np.asarray(A, dtype=np.int64))
    cols = A.shape[1]
    if A.shape[0] == 0:
        return np.eye(cols, dtype=np.int64)
    R, pivots = row_reduce(F, A)
    free = [c for c in range(cols) if c not in set(pivots)]
    N = np.zeros((len(free), cols), dtype=np.int64)
    for t, f in enumerate(free):
        N[t, f] = 1
        for r, c in enumerate(pivots):
            N[t, c] = F.neg(int(R[r, f]))
    return N


def inverse(F: Field, A):
    A = np.asarray(A, dtype=np.int64)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("matrix is not square")
    R, pivots = row_reduce(F, np.hstack([A, np.eye(n, dtype=np.int64)]))
    if pivots[:n] != list(range(n)):
        raise LinearAlgebraError("matrix is singular")
    return R[:, n:]
