"""Finite fields GF(q), q = p^e, and dense linear algebra over them.

Elements are the integers ``0..q-1``.  The base-p digits of an element
(little-endian) are the coefficients of a polynomial over GF(p), reduced
modulo the smallest monic irreducible polynomial of degree e.  All
arithmetic goes through precomputed ``q x q`` tables.

Two code paths exist for matrices:

* scalar functions on :class:`Mat` (pure Python, for small objects), and
* batched functions on numpy arrays of shape ``(B, rows, cols)`` used when
  verifying or assembling large codes.

For q = 2 both paths also have a bit-packed variant.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

MAX_Q = 9


def _factor_prime_power(q: int) -> tuple[int, int]:
    if q < 2:
        raise ValueError(f"q={q} is not a prime power")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    e, rest = 0, q
    while rest % p == 0:
        rest //= p
        e += 1
    if rest != 1:
        raise ValueError(f"q={q} is not a prime power")
    return p, e


# ---------------------------------------------------------------------------
# polynomials over a field given by tables; coefficient lists, low degree first
# ---------------------------------------------------------------------------


def _poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: list[int], m: list[int], add, mul, neg, inv) -> list[int]:
    a = list(a)
    dm = len(m) - 1
    lead_inv = inv[m[-1]]
    _poly_trim(a)
    while len(a) - 1 >= dm:
        f = mul[a[-1]][lead_inv]
        shift = len(a) - 1 - dm
        for i, c in enumerate(m):
            a[i + shift] = add[a[i + shift]][neg[mul[f][c]]]
        _poly_trim(a)
    return a


def _poly_mul(a: list[int], b: list[int], add, mul) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] = add[out[i + j]][mul[x][y]]
    return _poly_trim(out)


def _poly_gcd(a, b, add, mul, neg, inv):
    a, b = _poly_trim(list(a)), _poly_trim(list(b))
    while b:
        a, b = b, _poly_mod(a, b, add, mul, neg, inv)
    return a


def _prime_divisors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _is_irreducible(f: list[int], q: int, add, mul, neg, inv) -> bool:
    """Rabin's test for a monic polynomial f of degree m over GF(q)."""
    m = len(f) - 1
    if m == 1:
        return True

    def frob(power: int) -> list[int]:
        # x^(q^power) mod f by repeated q-th powering
        r = [0, 1]
        for _ in range(power):
            acc = [1]
            for _ in range(q):
                acc = _poly_mod(_poly_mul(acc, r, add, mul), f, add, mul, neg, inv)
            r = acc
        return r

    def minus_x(r: list[int]) -> list[int]:
        r = list(r) + [0] * max(0, 2 - len(r))
        r[1] = add[r[1]][neg[1]]
        return _poly_trim(r)

    if minus_x(frob(m)):
        return False
    for p in _prime_divisors(m):
        g = _poly_gcd(f, minus_x(frob(m // p)), add, mul, neg, inv)
        if len(g) > 1:
            return False
    return True


def smallest_irreducible(degree: int, q: int, add, mul, neg, inv) -> tuple[int, ...]:
    """Smallest monic irreducible of the given degree over GF(q).

    Candidates are ordered by the integer whose base-q digits (little-endian)
    are the non-leading coefficients.
    """
    for code in range(q**degree):
        coeffs = [(code // q**i) % q for i in range(degree)] + [1]
        if degree > 1 and coeffs[0] == 0:
            continue
        if _is_irreducible(coeffs, q, add, mul, neg, inv):
            return tuple(coeffs)
    raise AssertionError("no irreducible polynomial found")


class GF:
    """The finite field with q elements.

    Build instances through :func:`get_field`, which caches them.
    """

    def __init__(self, q: int, max_q: int = MAX_Q):
        if q > max_q:
            raise ValueError(f"q={q} exceeds the configured cap {max_q}")
        self.q = q
        self.p, self.e = _factor_prime_power(q)
        p, e = self.p, self.e
        # prime-field tables first, then the modulus over GF(p)
        padd = [[(a + b) % p for b in range(p)] for a in range(p)]
        pmul = [[(a * b) % p for b in range(p)] for a in range(p)]
        pneg = [(-a) % p for a in range(p)]
        pinv = [0] + [pow(a, p - 2, p) for a in range(1, p)]
        if e == 1:
            self.modulus: tuple[int, ...] = (0, 1)
        else:
            self.modulus = smallest_irreducible(e, p, padd, pmul, pneg, pinv)

        def digits(x: int) -> list[int]:
            return [(x // p**i) % p for i in range(e)]

        def undigits(ds: Sequence[int]) -> int:
            return sum(int(d) * p**i for i, d in enumerate(ds))

        add = np.zeros((q, q), dtype=np.uint8)
        mul = np.zeros((q, q), dtype=np.uint8)
        for a in range(q):
            da = digits(a)
            for b in range(q):
                db = digits(b)
                add[a, b] = undigits([(x + y) % p for x, y in zip(da, db)])
                prod = _poly_mul(_poly_trim(list(da)), _poly_trim(list(db)), padd, pmul)
                prod = _poly_mod(prod, list(self.modulus), padd, pmul, pneg, pinv)
                mul[a, b] = undigits(prod + [0] * (e - len(prod)))
        neg = np.array([int(np.where(add[a] == 0)[0][0]) for a in range(q)], dtype=np.uint8)
        inv = np.zeros(q, dtype=np.uint8)
        for a in range(1, q):
            inv[a] = int(np.where(mul[a] == 1)[0][0])
        sub = add[np.arange(q)[:, None], neg[None, :]]
        for t in (add, mul, neg, inv, sub):
            t.setflags(write=False)
        self.add, self.mul, self.neg, self.inv, self.sub = add, mul, neg, inv, sub
        # list copies for the pure-Python paths
        self.add_l = add.tolist()
        self.mul_l = mul.tolist()
        self.sub_l = sub.tolist()
        self.neg_l = neg.tolist()
        self.inv_l = inv.tolist()
        self.check_axioms()

    def __repr__(self) -> str:
        return f"GF({self.q})"

    def __reduce__(self):
        return (get_field, (self.q,))

    def check_axioms(self) -> None:
        """Exhaustively check the field axioms on the tables."""
        q, add, mul = self.q, self.add.astype(np.int64), self.mul.astype(np.int64)
        a, b, c = np.meshgrid(np.arange(q), np.arange(q), np.arange(q), indexing="ij")
        ok = (
            np.array_equal(add, add.T)
            and np.array_equal(mul, mul.T)
            and np.array_equal(add[add[a, b], c], add[a, add[b, c]])
            and np.array_equal(mul[mul[a, b], c], mul[a, mul[b, c]])
            and np.array_equal(mul[a, add[b, c]], add[mul[a, b], mul[a, c]])
            and np.all(add[:, 0] == np.arange(q))
            and np.all(mul[:, 1] == np.arange(q))
            and np.all(mul[0] == 0)
            and np.all(add[np.arange(q), self.neg] == 0)
            and np.all(mul[np.arange(1, q), self.inv[1:]] == 1)
        )
        if not ok:
            raise AssertionError(f"field tables for q={q} violate the field axioms")

    @functools.cached_property
    def primitive_element(self) -> int:
        for g in range(2 if self.q > 2 else 1, self.q):
            x, seen = 1, set()
            for _ in range(self.q - 1):
                x = self.mul_l[x][g]
                seen.add(x)
            if len(seen) == self.q - 1:
                return g
        return 1

    def pow(self, a: int, n: int) -> int:
        r = 1
        for _ in range(n):
            r = self.mul_l[r][a]
        return r


@functools.lru_cache(maxsize=None)
def get_field(q: int) -> GF:
    return GF(q)


# ---------------------------------------------------------------------------
# Mat
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Mat:
    """Immutable dense matrix over GF(q); zero rows or columns are allowed."""

    field: GF
    rows: int
    cols: int
    data: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.data) != self.rows or any(len(r) != self.cols for r in self.data):
            raise ValueError("shape does not match data")
        if any(x < 0 or x >= self.field.q for r in self.data for x in r):
            raise ValueError("entry outside the field")

    @classmethod
    def from_rows(cls, field: GF, rows: Iterable[Iterable[int]], cols: int | None = None) -> "Mat":
        data = tuple(tuple(int(x) for x in r) for r in rows)
        ncols = len(data[0]) if data else (cols or 0)
        return cls(field, len(data), ncols, data)

    @classmethod
    def from_array(cls, field: GF, arr) -> "Mat":
        arr = np.asarray(arr)
        return cls(field, arr.shape[0], arr.shape[1], tuple(tuple(int(x) for x in r) for r in arr))

    @classmethod
    def zeros(cls, field: GF, rows: int, cols: int) -> "Mat":
        return cls(field, rows, cols, tuple((0,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, field: GF, n: int) -> "Mat":
        return cls(field, n, n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    def to_array(self) -> np.ndarray:
        return np.array(self.data, dtype=np.uint8).reshape(self.rows, self.cols)

    @property
    def T(self) -> "Mat":
        return transpose(self)

    def __add__(self, other: "Mat") -> "Mat":
        _check_same(self, other)
        a = self.field.add_l
        return Mat(self.field, self.rows, self.cols,
                   tuple(tuple(a[x][y] for x, y in zip(r, s)) for r, s in zip(self.data, other.data)))

    def __sub__(self, other: "Mat") -> "Mat":
        _check_same(self, other)
        s_ = self.field.sub_l
        return Mat(self.field, self.rows, self.cols,
                   tuple(tuple(s_[x][y] for x, y in zip(r, s)) for r, s in zip(self.data, other.data)))

    def __neg__(self) -> "Mat":
        n = self.field.neg_l
        return Mat(self.field, self.rows, self.cols, tuple(tuple(n[x] for x in r) for r in self.data))

    def __matmul__(self, other: "Mat") -> "Mat":
        if self.field is not other.field or self.cols != other.rows:
            raise ValueError("incompatible matrices for multiplication")
        a, m = self.field.add_l, self.field.mul_l
        cols = list(zip(*other.data)) if other.rows else [()] * other.cols
        out = []
        for r in self.data:
            row = []
            for c in cols:
                acc = 0
                for x, y in zip(r, c):
                    if x and y:
                        acc = a[acc][m[x][y]]
                row.append(acc)
            out.append(tuple(row))
        return Mat(self.field, self.rows, other.cols, tuple(out))

    def scale(self, c: int) -> "Mat":
        m = self.field.mul_l[c]
        return Mat(self.field, self.rows, self.cols, tuple(tuple(m[x] for x in r) for r in self.data))

    def __str__(self) -> str:
        return "\n".join("".join(str(x) for x in r) for r in self.data)


def _check_same(a: Mat, b: Mat) -> None:
    if a.field is not b.field or a.rows != b.rows or a.cols != b.cols:
        raise ValueError("matrices differ in shape or field")


@dataclass(frozen=True)
class PivotVector:
    bits: tuple[int, ...]

    @property
    def weight(self) -> int:
        return sum(self.bits)

    def positions(self) -> tuple[int, ...]:
        return tuple(i for i, b in enumerate(self.bits) if b)

    def hamming(self, other: "PivotVector") -> int:
        if len(self.bits) != len(other.bits):
            raise ValueError("pivot vectors of different length")
        return sum(x != y for x, y in zip(self.bits, other.bits))


def transpose(m: Mat) -> Mat:
    data = tuple(zip(*m.data)) if m.rows else tuple(() for _ in range(m.cols))
    return Mat(m.field, m.cols, m.rows, tuple(tuple(r) for r in data))


def hconcat(a: Mat, b: Mat) -> Mat:
    if a.field is not b.field:
        raise ValueError("matrices over different fields")
    if a.rows != b.rows:
        raise ValueError(f"row counts differ: {a.rows} vs {b.rows}")
    return Mat(a.field, a.rows, a.cols + b.cols, tuple(x + y for x, y in zip(a.data, b.data)))


def vstack(a: Mat, b: Mat) -> Mat:
    if a.field is not b.field:
        raise ValueError("matrices over different fields")
    if a.cols != b.cols:
        raise ValueError(f"column counts differ: {a.cols} vs {b.cols}")
    return Mat(a.field, a.rows + b.rows, a.cols, a.data + b.data)


def _rref_rows(field: GF, rows: list[list[int]], ncols: int) -> tuple[list[list[int]], list[int]]:
    """In-place Gauss-Jordan; returns (rows, pivot columns)."""
    sub, mul, inv = field.sub_l, field.mul_l, field.inv_l
    pivots: list[int] = []
    r = 0
    n = len(rows)
    for c in range(ncols):
        if r == n:
            break
        piv = next((i for i in range(r, n) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        f = inv[rows[r][c]]
        if f != 1:
            rows[r] = [mul[f][x] for x in rows[r]]
        prow = rows[r]
        for i in range(n):
            if i != r and rows[i][c]:
                g = mul[rows[i][c]]
                rows[i] = [sub[x][g[y]] for x, y in zip(rows[i], prow)]
        pivots.append(c)
        r += 1
    return rows, pivots


def _pack(row: Sequence[int]) -> int:
    # column 0 is the most significant bit
    v = 0
    for x in row:
        v = (v << 1) | x
    return v


def _unpack(v: int, ncols: int) -> tuple[int, ...]:
    return tuple((v >> (ncols - 1 - c)) & 1 for c in range(ncols))


def rref_packed(rows: Sequence[int], ncols: int) -> tuple[list[int], list[int]]:
    """Gauss-Jordan over GF(2) on bit-packed rows (column 0 = MSB)."""
    rows = list(rows)
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        bit = 1 << (ncols - 1 - c)
        piv = next((i for i in range(r, len(rows)) if rows[i] & bit), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i] & bit:
                rows[i] ^= rows[r]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rank_packed(rows: Sequence[int]) -> int:
    """Rank over GF(2) of bit-packed rows (xor basis, no column bookkeeping)."""
    basis: list[int] = []
    for x in rows:
        for b in basis:
            x = min(x, x ^ b)
        if x:
            basis.append(x)
    return len(basis)


def rref(m: Mat, packed: bool | None = None) -> tuple[Mat, int]:
    """Reduced row echelon form and rank."""
    if packed is None:
        packed = m.field.q == 2
    if packed and m.field.q == 2:
        rows, piv = rref_packed([_pack(r) for r in m.data], m.cols)
        data = tuple(_unpack(v, m.cols) for v in rows)
        return Mat(m.field, m.rows, m.cols, data), len(piv)
    rows, piv = _rref_rows(m.field, [list(r) for r in m.data], m.cols)
    return Mat(m.field, m.rows, m.cols, tuple(tuple(r) for r in rows)), len(piv)


def rank(m: Mat) -> int:
    if m.field.q == 2:
        return rank_packed([_pack(r) for r in m.data])
    return len(_rref_rows(m.field, [list(r) for r in m.data], m.cols)[1])


def pivot(m: Mat) -> PivotVector:
    if m.field.q == 2:
        _, piv = rref_packed([_pack(r) for r in m.data], m.cols)
    else:
        _, piv = _rref_rows(m.field, [list(r) for r in m.data], m.cols)
    s = set(piv)
    return PivotVector(tuple(int(c in s) for c in range(m.cols)))


def is_rref(m: Mat) -> bool:
    return rref(m)[0] == m


def row_basis(m: Mat) -> Mat:
    """The nonzero rows of rref(m): the canonical basis of the row space."""
    r, k = rref(m)
    return Mat(m.field, k, m.cols, r.data[:k])


def nullspace(m: Mat) -> Mat:
    """Canonical (RREF) basis of {x : m x^T = 0}, one vector per row."""
    field = m.field
    r, k = rref(m)
    pivots = [next(c for c in range(m.cols) if r.data[i][c]) for i in range(k)]
    free = [c for c in range(m.cols) if c not in pivots]
    vecs = []
    for f in free:
        x = [0] * m.cols
        x[f] = 1
        for i, pc in enumerate(pivots):
            x[pc] = field.neg_l[r.data[i][f]]
        vecs.append(x)
    return row_basis(Mat.from_rows(field, vecs, m.cols)) if vecs else Mat.zeros(field, 0, m.cols)


def random_mat(field: GF, rows: int, cols: int, rng: np.random.Generator) -> Mat:
    return Mat.from_array(field, rng.integers(0, field.q, size=(rows, cols)))


def random_full_rank(field: GF, rows: int, cols: int, rng: np.random.Generator) -> Mat:
    target = min(rows, cols)
    while True:
        m = random_mat(field, rows, cols, rng)
        if rank(m) == target:
            return m


# ---------------------------------------------------------------------------
# batched numpy kernels
# ---------------------------------------------------------------------------


def pack_rows(arr: np.ndarray) -> np.ndarray:
    """Pack GF(2) arrays (..., rows, cols) to uint64 (..., rows), column 0 = MSB."""
    cols = arr.shape[-1]
    if cols > 64:
        raise ValueError("bit packing supports at most 64 columns")
    weights = (np.uint64(1) << np.arange(cols - 1, -1, -1, dtype=np.uint64))
    return (arr.astype(np.uint64) * weights).sum(axis=-1, dtype=np.uint64)


def unpack_rows(packed: np.ndarray, cols: int) -> np.ndarray:
    shifts = np.arange(cols - 1, -1, -1, dtype=np.uint64)
    return ((packed[..., None] >> shifts) & np.uint64(1)).astype(np.uint8)


def _batch_rref_packed(packed: np.ndarray, cols: int, full: bool) -> tuple[np.ndarray, np.ndarray]:
    a = packed.copy()
    B, R = a.shape
    rk = np.zeros(B, dtype=np.int64)
    rows_idx = np.arange(R)
    for c in range(cols):
        bit = np.uint64(1) << np.uint64(cols - 1 - c)
        has_bit = (a & bit) != 0
        cand = has_bit & (rows_idx[None, :] >= rk[:, None])
        found = cand.any(axis=1)
        if not found.any():
            continue
        b = np.nonzero(found)[0]
        piv = cand[b].argmax(axis=1)
        dst = rk[b]
        prow = a[b, piv]
        # swap pivot row into position rk
        a[b, piv] = a[b, dst]
        a[b, dst] = prow
        elim = (a[b] & bit) != 0
        if not full:
            elim &= rows_idx[None, :] > dst[:, None]
        elim[np.arange(len(b)), dst] = False
        a[b] ^= np.where(elim, prow[:, None], np.uint64(0))
        rk[b] += 1
    return a, rk


def _batch_rref_generic(field: GF, arr: np.ndarray, full: bool) -> tuple[np.ndarray, np.ndarray]:
    a = arr.astype(np.uint8, copy=True)
    B, R, C = a.shape
    rk = np.zeros(B, dtype=np.int64)
    rows_idx = np.arange(R)
    mul, sub, inv = field.mul, field.sub, field.inv
    for c in range(C):
        cand = (a[:, :, c] != 0) & (rows_idx[None, :] >= rk[:, None])
        found = cand.any(axis=1)
        if not found.any():
            continue
        b = np.nonzero(found)[0]
        piv = cand[b].argmax(axis=1)
        dst = rk[b]
        prow = a[b, piv]
        prow = mul[inv[prow[:, c]][:, None], prow]
        a[b, piv] = a[b, dst]
        a[b, dst] = prow
        sub_block = a[b]
        f = sub_block[:, :, c].copy()
        if not full:
            f[rows_idx[None, :] <= dst[:, None]] = 0
        f[np.arange(len(b)), dst] = 0
        a[b] = sub[sub_block, mul[f[:, :, None], prow[:, None, :]]]
        rk[b] += 1
    return a, rk


def batch_rref(field: GF, arr: np.ndarray, chunk: int = 1 << 16) -> tuple[np.ndarray, np.ndarray]:
    """RREF of every matrix in an array of shape (B, rows, cols); returns (rref, ranks)."""
    arr = np.asarray(arr, dtype=np.uint8)
    B, R, C = arr.shape
    out = np.empty_like(arr)
    ranks = np.empty(B, dtype=np.int64)
    for lo in range(0, B, chunk):
        part = arr[lo:lo + chunk]
        if field.q == 2 and C <= 64:
            red, rk = _batch_rref_packed(pack_rows(part), C, full=True)
            out[lo:lo + chunk] = unpack_rows(red, C)
        else:
            out[lo:lo + chunk], rk = _batch_rref_generic(field, part, full=True)
        ranks[lo:lo + chunk] = rk
    return out, ranks


def batch_rank(field: GF, arr: np.ndarray, chunk: int = 1 << 16) -> np.ndarray:
    """Rank of every matrix in an array of shape (B, rows, cols)."""
    arr = np.asarray(arr, dtype=np.uint8)
    B, R, C = arr.shape
    ranks = np.empty(B, dtype=np.int64)
    if R == 0 or C == 0:
        ranks[:] = 0
        return ranks
    for lo in range(0, B, chunk):
        part = arr[lo:lo + chunk]
        if field.q == 2 and C <= 64:
            _, rk = _batch_rref_packed(pack_rows(part), C, full=False)
        else:
            _, rk = _batch_rref_generic(field, part, full=False)
        ranks[lo:lo + chunk] = rk
    return ranks


def batch_rank_packed(packed: np.ndarray, cols: int) -> np.ndarray:
    """Rank over GF(2) of pre-packed matrices (B, rows)."""
    return _batch_rref_packed(packed, cols, full=False)[1]


def batch_matmul(field: GF, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Products a[i] @ b[i] (broadcasting over the leading axis)."""
    a = np.asarray(a, dtype=np.uint8)
    b = np.asarray(b, dtype=np.uint8)
    if field.e == 1:
        return (np.matmul(a.astype(np.int64), b.astype(np.int64)) % field.p).astype(np.uint8)
    prod = field.mul[a[..., :, :, None], b[..., None, :, :]]  # (..., n, k, m)
    out = prod[..., 0, :]
    for j in range(1, prod.shape[-2]):
        out = field.add[out, prod[..., j, :]]
    if prod.shape[-2] == 0:
        out = np.zeros(prod.shape[:-3] + (a.shape[-2], b.shape[-1]), dtype=np.uint8)
    return out


def batch_sub(field: GF, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return field.sub[np.asarray(a, dtype=np.uint8), np.asarray(b, dtype=np.uint8)]


def batch_add(field: GF, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return field.add[np.asarray(a, dtype=np.uint8), np.asarray(b, dtype=np.uint8)]


def encode_matrices(field: GF, arr: np.ndarray) -> np.ndarray:
    """Injective integer key per matrix (base-q digits, row-major)."""
    flat = np.asarray(arr).reshape(len(arr), -1).astype(object if arr[0].size * np.log2(field.q) > 62 else np.int64)
    weights = np.array([field.q**i for i in range(flat.shape[1] - 1, -1, -1)], dtype=flat.dtype)
    return flat @ weights if flat.shape[1] else np.zeros(len(arr), dtype=np.int64)


def span_enumerate(field: GF, basis: np.ndarray, chunk: int = 1 << 16) -> Iterator[np.ndarray]:
    """All GF(q)-linear combinations of the matrices in ``basis`` (n, r, c), in chunks.

    The span is enumerated as a GF(p)-span of {w * B_i} for w running over the
    monomial basis 1, x, ..., x^(e-1) of GF(q), working digit-wise mod p.
    The first generated element is the zero matrix.
    """
    p, e = field.p, field.e
    basis = np.asarray(basis, dtype=np.uint8)
    shape = basis.shape[1:]
    gens = []
    for b in basis:
        for j in range(e):
            gens.append(field.mul[p**j, b])
    gens = np.array(gens, dtype=np.uint8).reshape(len(gens), -1) if gens else np.zeros((0, int(np.prod(shape))), np.uint8)
    # digit decomposition of each generator entry: (g, entries, e)
    pw = np.array([p**i for i in range(e)], dtype=np.int64)
    gdig = (gens[..., None].astype(np.int64) // pw) % p
    ng = len(gens)
    total = p**ng
    for lo in range(0, total, chunk):
        idx = np.arange(lo, min(total, lo + chunk), dtype=np.int64)
        # most significant generator varies slowest
        coeff = (idx[:, None] // (p ** np.arange(ng - 1, -1, -1, dtype=np.int64))[None, :]) % p
        dig = np.tensordot(coeff, gdig, axes=([1], [0])) % p  # (m, entries, e)
        vals = (dig * pw).sum(axis=-1).astype(np.uint8)
        yield vals.reshape((len(idx),) + shape)
    if ng == 0:
        return


def all_matrices(field: GF, rows: int, cols: int) -> np.ndarray:
    """Every rows x cols matrix over GF(q), in base-q counting order."""
    n = rows * cols
    if field.q**n > 1 << 24:
        raise ValueError("too many matrices to enumerate")
    idx = np.arange(field.q**n, dtype=np.int64)
    digits = (idx[:, None] // (field.q ** np.arange(n - 1, -1, -1, dtype=np.int64))[None, :]) % field.q
    return digits.astype(np.uint8).reshape(-1, rows, cols)


def gl_generators(field: GF, n: int) -> list[np.ndarray]:
    """A generating set of GL(n, q): transvections I + c E_ij and diag(g, 1, ..., 1)."""
    gens = []
    if n == 0:
        return gens
    for i, j in itertools.permutations(range(n), 2):
        for c in range(1, field.q):
            m = np.eye(n, dtype=np.uint8)
            m[i, j] = c
            gens.append(m)
    if field.q > 2:
        m = np.eye(n, dtype=np.uint8)
        m[0, 0] = field.primitive_element
        gens.append(m)
    return gens


def enumerate_rref(field: GF, k: int, v: int, limit: int = 1 << 22) -> np.ndarray:
    """Canonical bases of all k-subspaces of GF(q)^v, shape (N, k, v).

    Ordered by pivot set (lexicographic), then by the free entries in
    base-q counting order.
    """
    chunks = []
    total = 0
    for piv in itertools.combinations(range(v), k):
        free = [(i, c) for i in range(k) for c in range(piv[i] + 1, v) if c not in piv]
        count = field.q ** len(free)
        total += count
        if total > limit:
            raise ValueError("too many subspaces to enumerate")
        base = np.zeros((count, k, v), dtype=np.uint8)
        for i, c in enumerate(piv):
            base[:, i, c] = 1
        if free:
            idx = np.arange(count, dtype=np.int64)
            digits = (idx[:, None] // (field.q ** np.arange(len(free) - 1, -1, -1, dtype=np.int64))[None, :]) % field.q
            rows, cols = zip(*free)
            base[:, list(rows), list(cols)] = digits
        chunks.append(base)
    if not chunks:
        return np.zeros((0, k, v), dtype=np.uint8)
    return np.concatenate(chunks)
