"""Exact linear algebra over a prime field F_p.

Matrices are dense numpy int64 arrays with entries reduced into [0, p).
The modulus is capped at 2^31 - 1 so that a single multiply-accumulate
step of Gaussian elimination stays inside int64; matrix products use a
16-bit split so the accumulated dot products are exact as well.

Everything downstream (cohomology, Hilbert functions, Koszul and
partition homology, pairing ranks) reduces to rank/kernel computations
done here.
"""

from __future__ import annotations

import math

import numpy as np

DEFAULT_PRIME = 2147483647  # 2^31 - 1

# Largest modulus for which (p-1) + (p-1)^2 < 2^63 holds with room to spare.
MAX_PRIME = 2147483647


class LinAlgError(ValueError):
    pass


def is_prime(n: int) -> bool:
    """Deterministic primality by trial division (moduli are < 2^31.5)."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    for d in range(3, math.isqrt(n) + 1, 2):
        if n % d == 0:
            return False
    return True


class PrimeField:
    """The field F_p; stands in for an infinite field via random sampling."""

    def __init__(self, p: int = DEFAULT_PRIME):
        if not isinstance(p, int):
            raise LinAlgError(f"modulus must be an integer, got {type(p).__name__}")
        if p > MAX_PRIME:
            raise LinAlgError(f"modulus {p} exceeds the supported cap {MAX_PRIME}")
        if not is_prime(p):
            raise LinAlgError(f"modulus {p} is not prime")
        self.p = p

    def inverse(self, a: int) -> int:
        a = int(a) % self.p
        if a == 0:
            raise ZeroDivisionError("0 has no inverse in F_p")
        return pow(a, -1, self.p)

    def __repr__(self) -> str:
        return f"PrimeField({self.p})"

    def __eq__(self, other) -> bool:
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("PrimeField", self.p))


def field_inverse(a: int, field: PrimeField) -> int:
    return field.inverse(a)


def as_matrix(entries, rows: int | None = None, cols: int | None = None, p: int = DEFAULT_PRIME) -> np.ndarray:
    """Coerce to an int64 matrix reduced mod p. Empty shapes allowed."""
    m = np.array(entries, dtype=np.int64)
    if m.ndim == 1:
        m = m.reshape(1, -1) if m.size else m.reshape(0, 0)
    if rows is not None and cols is not None:
        m = m.reshape(rows, cols)
    return m % p


def zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=np.int64)


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Exact A @ B mod p.

    Entries are < 2^31, so a @ b overflows int64 once the inner dimension
    exceeds 2; splitting a into 16-bit halves keeps every accumulated dot
    product below 2^63 for inner dimensions up to 2^16.
    """
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if a.shape[-1] != b.shape[0]:
        raise LinAlgError(f"shape mismatch for matmul: {a.shape} @ {b.shape}")
    if a.shape[-1] == 0:
        return np.zeros(a.shape[:-1] + b.shape[1:], dtype=np.int64)
    if a.shape[-1] > (1 << 16):
        raise LinAlgError("inner dimension too large for exact int64 matmul")
    hi = a >> 16
    lo = a & 0xFFFF
    return (((hi @ b) % p << 16) + lo @ b) % p


def _eliminate(m: np.ndarray, p: int, reduced: bool) -> tuple[np.ndarray, list[int]]:
    """Row echelon form with a frozen pivot order.

    Columns are scanned left to right and the first nonzero row at or
    below the cursor is used as pivot; this fixed order is what makes
    coset representatives reproducible across runs.
    """
    m = np.array(m, dtype=np.int64, copy=True) % p
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            m[[r, i]] = m[[i, r]]
        inv = pow(int(m[r, c]), -1, p)
        m[r, c:] = m[r, c:] * inv % p
        if reduced:
            targets = np.nonzero(m[:, c])[0]
            targets = targets[targets != r]
        else:
            targets = r + 1 + np.nonzero(m[r + 1:, c])[0]
        if targets.size:
            factors = m[targets, c][:, None]
            m[np.ix_(targets, range(c, cols))] = (
                m[np.ix_(targets, range(c, cols))] - factors * m[r, c:][None, :]
            ) % p
        pivots.append(c)
        r += 1
    return m, pivots


def rref(m: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns."""
    return _eliminate(np.asarray(m, dtype=np.int64), p, reduced=True)


def _sparse_rank(m: np.ndarray, p: int) -> int:
    """Rank by greedy low-fill elimination, for large sparse matrices.

    Rank does not depend on pivot order, so each step pivots in the
    sparsest active column and row to limit fill-in. Active rows always
    hold zeros in retired columns, which keeps the bookkeeping to two
    nonzero-count vectors. If fill-in densifies the active block anyway,
    the leftover submatrix is handed to the frozen-order eliminator.
    """
    m = np.array(m, dtype=np.int64, copy=True) % p
    rows, cols = m.shape
    rowmask = np.ones(rows, dtype=bool)
    colmask = np.ones(cols, dtype=bool)
    rowcnt = np.count_nonzero(m, axis=1)
    colcnt = np.count_nonzero(m, axis=0)
    r = 0
    while True:
        live = np.nonzero(colmask & (colcnt > 0))[0]
        if live.size == 0:
            return r
        active_nnz = int(rowcnt[rowmask].sum())
        active_cells = int(rowmask.sum()) * live.size
        if active_cells > 250_000 and active_nnz * 4 > active_cells:
            sub = m[np.ix_(np.nonzero(rowmask)[0], np.nonzero(colmask)[0])]
            _, pivots = _eliminate(sub, p, reduced=False)
            return r + len(pivots)
        c = int(live[np.argmin(colcnt[live])])
        in_col = np.nonzero((m[:, c] != 0) & rowmask)[0]
        if in_col.size == 0:
            colcnt[c] = 0
            continue
        pr = int(in_col[np.argmin(rowcnt[in_col])])
        piv_cols = np.nonzero(m[pr])[0]
        targets = in_col[in_col != pr]
        if targets.size:
            inv = pow(int(m[pr, c]), -1, p)
            factors = m[targets, c] * inv % p
            block = m[np.ix_(targets, piv_cols)]
            before = block != 0
            block = (block - factors[:, None] * m[pr, piv_cols][None, :]) % p
            m[np.ix_(targets, piv_cols)] = block
            after = block != 0
            colcnt[piv_cols] += after.sum(axis=0) - before.sum(axis=0)
            rowcnt[targets] += after.sum(axis=1) - before.sum(axis=1)
        colcnt[piv_cols] -= 1
        rowmask[pr] = False
        colmask[c] = False
        r += 1


def rank(m: np.ndarray, p: int) -> int:
    """Rank over F_p; 0 for empty matrices."""
    m = np.asarray(m, dtype=np.int64)
    if m.shape[0] == 0 or m.shape[1] == 0:
        return 0
    # Eliminating along the shorter axis is faster and rank is transpose-invariant.
    if m.shape[1] > m.shape[0]:
        m = m.T
    nnz = np.count_nonzero(m)
    if m.size > 250_000 and nnz * 20 < m.size:
        return _sparse_rank(m, p)
    _, pivots = _eliminate(m, p, reduced=False)
    return len(pivots)


def kernel_basis(m: np.ndarray, p: int) -> np.ndarray:
    """Columns form a basis of {v : Mv = 0}; shape (cols, nullity)."""
    m = np.asarray(m, dtype=np.int64)
    rows, cols = m.shape
    if cols == 0:
        return np.zeros((0, 0), dtype=np.int64)
    if rows == 0:
        return identity(cols)
    red, pivots = _eliminate(m, p, reduced=True)
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = np.zeros((cols, len(free)), dtype=np.int64)
    for k, f in enumerate(free):
        basis[f, k] = 1
        for r, c in enumerate(pivots):
            if c < f:
                basis[c, k] = (-int(red[r, f])) % p
    return basis


class ChainComplexSpec:
    """A finite cohomologically graded complex of F_p spaces.

    dims[i] is the dimension at index i for i in [lo, hi]; diffs[i] is the
    matrix of d^i: C^i -> C^{i+1} (shape dims[i+1] x dims[i]). Missing
    differentials are zero maps.
    """

    def __init__(self, dims: dict[int, int], diffs: dict[int, np.ndarray], field: PrimeField,
                 check: bool = True):
        dims = dict(dims)
        if dims:
            self.lo = min(dims)
            self.hi = max(dims)
            for i in range(self.lo, self.hi + 1):
                dims.setdefault(i, 0)
        else:
            self.lo, self.hi = 0, -1
        self.dims = dims
        self.diffs = {i: np.asarray(d, dtype=np.int64) % field.p for i, d in diffs.items()}
        self.field = field
        for i, d in self.diffs.items():
            expect = (self.dims.get(i + 1, 0), self.dims.get(i, 0))
            if d.shape != expect:
                raise LinAlgError(f"differential at {i} has shape {d.shape}, expected {expect}")
        if check:
            self.check_complex()

    def check_complex(self) -> None:
        p = self.field.p
        for i in sorted(self.diffs):
            nxt = self.diffs.get(i + 1)
            if nxt is None or nxt.size == 0 or self.diffs[i].size == 0:
                continue
            comp = matmul(nxt, self.diffs[i], p)
            if np.any(comp):
                raise LinAlgError(f"composition d^{i + 1} d^{i} is nonzero: not a complex")

    def homology_dims(self) -> dict[int, int]:
        p = self.field.p
        ranks = {i: rank(d, p) for i, d in self.diffs.items()}
        out = {}
        for i in range(self.lo, self.hi + 1):
            out[i] = self.dims[i] - ranks.get(i, 0) - ranks.get(i - 1, 0)
            if out[i] < 0:
                raise LinAlgError(f"negative homology dimension at index {i}: invalid complex")
        return out


def chain_homology_dims(c: ChainComplexSpec) -> dict[int, int]:
    """dim H^i = dims[i] - rank d^i - rank d^{i-1}, per index."""
    return c.homology_dims()
