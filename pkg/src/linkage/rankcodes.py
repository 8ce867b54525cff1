"""Rank-metric ingredients.

Linear MRD codes are Gabidulin codes: evaluations of q-linearized
polynomials over GF(q^m), m = max(a, b), at the polynomial basis
1, x, ..., x^(n-1) of GF(q^m), n = min(a, b).  Rank-restricted codes
(every word of rank <= u) come from three sources: the low-rank words of an
MRD code, products of subspace codes, and exact clique search.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from typing import Callable

import numpy as np

from .clique import max_clique
from .codes import CDCCode, RankCode
from .field import (
    GF,
    Mat,
    gl_generators,
    hconcat,
    rref,
    all_matrices,
    batch_matmul,
    batch_rank,
    batch_rank_packed,
    enumerate_rref,
    get_field,
    pack_rows,
    smallest_irreducible,
    span_enumerate,
    _poly_mod,
    _poly_mul,
)
from .qcount import (
    count_matrices_rank_at_most,
    delta,
    mrd_exponent,
    mrd_size,
    q_number,
)

MRD_ENUM_BUDGET = 1 << 24
VERTEX_BUDGET = 10_000
SPLIT_THRESHOLD = 96
MAX_SPLIT_DEPTH = 4


class BudgetExceeded(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# Gabidulin codes
# ---------------------------------------------------------------------------


class ExtField:
    """GF(q^m) as GF(q)[x]/(f), elements are coefficient tuples of length m."""

    def __init__(self, base: GF, m: int):
        self.base, self.m = base, m
        tabs = (base.add_l, base.mul_l, base.neg_l, base.inv_l)
        self.modulus = smallest_irreducible(m, base.q, *tabs) if m > 1 else (0, 1)

    def _reduce(self, poly: list[int]) -> tuple[int, ...]:
        b = self.base
        r = _poly_mod(poly, list(self.modulus), b.add_l, b.mul_l, b.neg_l, b.inv_l)
        return tuple(r + [0] * (self.m - len(r)))

    def mul(self, x: tuple[int, ...], y: tuple[int, ...]) -> tuple[int, ...]:
        b = self.base
        return self._reduce(_poly_mul(list(x), list(y), b.add_l, b.mul_l))

    def alpha_pow(self, e: int) -> tuple[int, ...]:
        """x^e reduced modulo f."""
        result = self._reduce([1])
        base = self._reduce([0, 1])
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result


@dataclass
class LinearMRDCode:
    """A linear MRD code given by a GF(q)-basis of a x b matrices."""

    field: GF
    a: int
    b: int
    d: int
    generator: np.ndarray  # (dim, a, b)
    modulus: tuple[int, ...]
    points: list[tuple[int, ...]]

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def params(self) -> tuple[int, int, int, int]:
        return (self.field.q, self.a, self.b, self.d)

    @property
    def dimension(self) -> int:
        return len(self.generator)

    def __len__(self) -> int:
        return self.field.q ** self.dimension

    def enumerate(self, chunk: int = 1 << 16, budget: int = MRD_ENUM_BUDGET):
        """Yield all codewords in chunks of shape (B, a, b); the zero word comes first."""
        if len(self) > budget:
            raise BudgetExceeded(f"MRD code of size {len(self)} exceeds enumeration budget {budget}")
        yield from span_enumerate(self.field, self.generator, chunk)

    def to_rank_code(self, budget: int = MRD_ENUM_BUDGET) -> RankCode:
        words = np.concatenate(list(self.enumerate(budget=budget)))
        return RankCode(self.field, self.a, self.b, self.d, words, label="mrd")


def build_linear_mrd(q: int, a: int, b: int, d: int) -> LinearMRDCode:
    """Gabidulin code of a x b matrices over GF(q) with minimum rank distance d."""
    n, m = min(a, b), max(a, b)
    if not 1 <= d <= n:
        raise ValueError(f"need 1 <= d <= min(a, b) = {n}, got d={d}")
    field = get_field(q)
    ext = ExtField(field, m)
    k = n - d + 1
    points = [ext.alpha_pow(j) for j in range(n)]
    gens = []
    for i in range(k):
        for l in range(m):
            # column j holds the coordinates of x^l * (x^j)^(q^i)
            mat = np.array([ext.alpha_pow(l + j * q**i) for j in range(n)], dtype=np.uint8).T
            gens.append(mat if a >= b else mat.T)
    gen = np.array(gens, dtype=np.uint8).reshape(len(gens), a, b)
    return LinearMRDCode(field, a, b, d, gen, ext.modulus, points)


def _ranks_fast(field: GF, words: np.ndarray) -> np.ndarray:
    """Ranks of (B, a, b) matrices, using the packed path for q = 2."""
    if words.shape[1] > words.shape[2]:
        words = words.transpose(0, 2, 1)
    if field.q == 2 and words.shape[2] <= 64:
        return batch_rank_packed(pack_rows(words), words.shape[2])
    return batch_rank(field, words)


def delta_subset(mrd: LinearMRDCode, u: int, budget: int = MRD_ENUM_BUDGET) -> RankCode:
    """Words of rank <= u in a linear MRD code; size Delta(q, a, b, d, u)."""
    keep = []
    for chunk in mrd.enumerate(budget=budget):
        r = _ranks_fast(mrd.field, chunk)
        keep.append(chunk[r <= u])
    words = np.concatenate(keep)
    code = RankCode(mrd.field, mrd.a, mrd.b, mrd.d, words, u, label="delta_subset")
    expected = delta(mrd.q, mrd.a, mrd.b, mrd.d, u)
    if len(code) != expected:
        raise AssertionError(f"rank-restricted subset has {len(code)} words, expected {expected}")
    return code


def product_rrmc(q: int, a: int, b: int, u: int, d1: int, d2: int, cdc_a: CDCCode, cdc_b: CDCCode) -> RankCode:
    """Words x_i y_i, x_i an a x u column basis of the i-th word of cdc_a and
    y_i a u x b row basis of the i-th word of cdc_b.

    Every word has rank exactly u; the minimum rank distance is at least
    floor((d1 + d2) / 2).
    """
    if u > min(a, b):
        raise ValueError(f"u={u} exceeds min(a, b)={min(a, b)}")
    if (cdc_a.v, cdc_a.k) != (a, u) or (cdc_b.v, cdc_b.k) != (b, u):
        raise ValueError("ingredient codes have the wrong ambient space or dimension")
    if cdc_a.q != q or cdc_b.q != q:
        raise ValueError("ingredient codes are over a different field")
    if len(cdc_a) != len(cdc_b):
        raise ValueError("ingredient codes must have equal cardinality")
    field = get_field(q)
    x = cdc_a.array.transpose(0, 2, 1)
    y = cdc_b.array
    words = batch_matmul(field, x, y) if len(x) else np.zeros((0, a, b), np.uint8)
    return RankCode(field, a, b, (d1 + d2) // 2, words, u, label="product")


def puncture_columns(code: RankCode, keep: int) -> RankCode:
    """Keep the first ``keep`` columns; the distance drops by at most b - keep."""
    return RankCode(code.field, code.a, keep, max(1, code.d - (code.b - keep)), code.words[:, :, :keep],
                    code.u, label="punctured")


# ---------------------------------------------------------------------------
# exact Lambda by clique search
# ---------------------------------------------------------------------------


def rank_graph_vertices(q: int, a: int, b: int, u: int, budget: int = VERTEX_BUDGET) -> np.ndarray:
    """All a x b matrices of rank <= u, sorted by their row-major digit string."""
    n = count_matrices_rank_at_most(q, a, b, u)
    if n > budget:
        raise BudgetExceeded(f"rank graph has {n} vertices, budget is {budget}")
    field = get_field(q)
    if q ** (a * b) <= 1 << 20:
        mats = all_matrices(field, a, b)
        out = mats[_ranks_fast(field, mats) <= u]
    else:
        chunks = [np.zeros((1, a, b), np.uint8)]
        for r in range(1, min(u, a, b) + 1):
            cols = enumerate_rref(field, r, a).transpose(0, 2, 1)  # (C, a, r)
            rows = all_matrices(field, r, b)
            rows = rows[_ranks_fast(field, rows) == r]
            xs = np.repeat(cols, len(rows), axis=0)
            ys = np.tile(rows, (len(cols), 1, 1))
            chunks.append(batch_matmul(field, xs, ys))
        out = np.concatenate(chunks)
    keys = out.reshape(len(out), -1)
    order = np.lexsort(keys.T[::-1])
    out = out[order]
    if len(out) != n:
        raise AssertionError("vertex enumeration disagrees with the rank count")
    return out


def _adjacency_matrix(field: GF, words: np.ndarray, d: int) -> np.ndarray:
    """Boolean matrix of rank(W_i - W_j) >= d, zero diagonal."""
    n = len(words)
    t = words if words.shape[1] <= words.shape[2] else words.transpose(0, 2, 1)
    packed = pack_rows(t) if field.q == 2 and t.shape[2] <= 64 else None
    out = np.zeros((n, n), dtype=bool)
    for i in range(n):
        if packed is not None:
            r = batch_rank_packed(packed ^ packed[i], t.shape[2])
        else:
            r = batch_rank(field, field.sub[t, t[i]])
        out[i] = r >= d
        out[i, i] = False
    return out


def _bitsets(adj: np.ndarray) -> list[int]:
    packed = np.packbits(adj, axis=1, bitorder="little")
    return [int.from_bytes(row.tobytes(), "little") for row in packed]


def _canonical_rank_matrix(a: int, b: int, r: int) -> np.ndarray:
    e = np.zeros((a, b), dtype=np.uint8)
    e[range(r), range(r)] = 1
    return e


def _inverse(field: GF, m: np.ndarray) -> np.ndarray:
    n = len(m)
    red, rk = rref(hconcat(Mat.from_array(field, m), Mat.identity(field, n)))
    if rk != n or any(red.data[i][i] != 1 for i in range(n)):
        raise ValueError("matrix is singular")
    return red.to_array()[:, n:]


def _embed(n: int, block: np.ndarray, at: int) -> np.ndarray:
    out = np.eye(n, dtype=np.uint8)
    k = len(block)
    out[at:at + k, at:at + k] = block
    return out


def stabilizer_generators(field: GF, a: int, b: int, r: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """Pairs (P, Q) generating the stabilizer of diag(I_r, 0) under A -> P A Q."""
    gens = []
    for g in gl_generators(field, r):
        gens.append((_embed(a, g, 0), _embed(b, _inverse(field, g), 0)))
    for g in gl_generators(field, a - r):
        gens.append((_embed(a, g, r), np.eye(b, dtype=np.uint8)))
    for g in gl_generators(field, b - r):
        gens.append((np.eye(a, dtype=np.uint8), _embed(b, g, r)))
    for c in range(1, field.q):
        for i in range(r):
            for j in range(r, a):
                p = np.eye(a, dtype=np.uint8)
                p[i, j] = c
                gens.append((p, np.eye(b, dtype=np.uint8)))
            for j in range(r, b):
                qm = np.eye(b, dtype=np.uint8)
                qm[j, i] = c
                gens.append((np.eye(a, dtype=np.uint8), qm))
    return gens


def _keys(field: GF, words: np.ndarray) -> np.ndarray:
    flat = words.reshape(len(words), -1).astype(np.int64)
    w = field.q ** np.arange(flat.shape[1] - 1, -1, -1, dtype=np.int64)
    return flat @ w


def action_permutations(field: GF, words: np.ndarray, gens: list[tuple[np.ndarray, np.ndarray]]) -> list[np.ndarray]:
    """Each pair (P, Q) as a permutation of the sorted word list ``words`` under A -> P A Q."""
    keys = _keys(field, words)
    perms = []
    for p, qm in gens:
        img = _keys(field, batch_matmul(field, batch_matmul(field, p[None], words), qm[None]))
        idx = np.minimum(np.searchsorted(keys, img), len(keys) - 1)
        if np.any(keys[idx] != img):
            raise AssertionError("word set is not closed under the group action")
        perms.append(idx)
    return perms


def orbit_labels(perms: list[np.ndarray], n: int) -> np.ndarray:
    """Smallest point in the orbit of each of 0..n-1 under the group generated by ``perms``."""
    lab = np.arange(n)
    while True:
        old = lab.copy()
        for perm in perms:
            np.minimum.at(lab, perm, lab)
            lab = np.minimum(lab, lab[perm])
        lab = lab[lab]
        if np.array_equal(lab, old):
            return lab


def point_stabilizer(perms: list[np.ndarray], w: int, rng: np.random.Generator, count: int = 24) -> list[np.ndarray]:
    """Random Schreier generators of the stabilizer of w.

    They generate a subgroup of the stabilizer (usually all of it), which
    is all the orbit pruning needs to stay exact.
    """
    if not perms:
        return []
    n = len(perms[0])
    parent = {w: (-1, -1)}
    frontier = [w]
    while frontier:
        nxt = []
        for x in frontier:
            for gi, g in enumerate(perms):
                y = int(g[x])
                if y not in parent:
                    parent[y] = (x, gi)
                    nxt.append(y)
        frontier = nxt
    cache: dict[int, np.ndarray] = {w: np.arange(n)}

    def transversal(x: int) -> np.ndarray:
        # permutation sending w to x
        if x not in cache:
            px, gi = parent[x]
            cache[x] = perms[gi][transversal(px)]
        return cache[x]

    orbit = sorted(parent)
    out, seen = [], set()
    for _ in range(count):
        x = orbit[int(rng.integers(len(orbit)))]
        g = perms[int(rng.integers(len(perms)))]
        y = int(g[x])
        ty = transversal(y)
        inv = np.empty(n, dtype=np.int64)
        inv[ty] = np.arange(n)
        s = inv[g[transversal(x)]]
        key = s.tobytes()
        if key not in seen and not np.array_equal(s, np.arange(n)):
            seen.add(key)
            out.append(s)
    return out


@dataclass
class LambdaExact:
    """Outcome of the clique search for Lambda(q, a, b, d, u)."""

    params: tuple[int, int, int, int, int]
    value: int | None
    exact: bool
    clique: RankCode
    lower: int
    upper: int
    nodes: int = 0
    seconds: float = 0.0
    notes: list[str] = dc_field(default_factory=list)

    def certificate(self) -> dict:
        q, a, b, d, u = self.params
        return {
            "format_version": 1,
            "params": {"q": q, "a": a, "b": b, "d": d, "u": u},
            "value": self.value,
            "exact": self.exact,
            "lower": self.lower,
            "upper": self.upper,
            "clique": ["".join(str(int(x)) for x in w.ravel()) for w in self.clique.words],
        }


def lambda_exact_clique(q: int, a: int, b: int, d: int, u: int, budget: int = VERTEX_BUDGET,
                        node_limit: int | None = None, time_limit: float | None = None) -> LambdaExact:
    """Maximum size of an a x b code with rank distance >= d and all ranks <= u.

    The search uses the action A -> P A Q of GL(a) x GL(b), which preserves
    both rank and rank distance: a clique whose lowest-rank word has rank r
    can be moved so that this word is diag(I_r, 0).  For each r the search
    therefore looks for a largest clique among words of rank >= r at
    distance >= d from diag(I_r, 0).  Large subproblems are split the same
    way under the stabilizer of the words fixed so far.  The low-rank words
    of an MRD code seed the incumbent; the search stops early once the
    upper bound is met.
    """
    start = time.monotonic()
    field = get_field(q)
    upper = lambda_upper_bound(q, a, b, d, u)
    verts = rank_graph_vertices(q, a, b, u, budget)
    u_eff = min(u, a, b)
    best = np.zeros((1, a, b), np.uint8)
    if min(a, b) >= d and q ** mrd_exponent(a, b, d) <= MRD_ENUM_BUDGET:
        best = delta_subset(build_linear_mrd(q, a, b, d), u_eff).words
    ranks = _ranks_fast(field, verts)
    nodes, exact = 0, True
    deadline = None if time_limit is None else start + time_limit
    rng = np.random.default_rng(0)

    def level(words, adj, fixed: list[int], cand: np.ndarray, perms, depth: int) -> None:
        # largest clique of words[cand] extending words[fixed]; perms preserve fixed and cand
        nonlocal best, nodes, exact
        idx = np.nonzero(cand)[0]
        if len(idx) + len(fixed) <= len(best) or len(best) >= upper:
            return
        if depth >= MAX_SPLIT_DEPTH or len(idx) < SPLIT_THRESHOLD or not perms:
            left = None if deadline is None else max(0.0, deadline - time.monotonic())
            res = max_clique(_bitsets(adj[np.ix_(idx, idx)]), floor=len(best) - len(fixed),
                             target=upper - len(fixed), node_limit=node_limit, time_limit=left)
            nodes += res.nodes
            exact &= res.exact
            if res.size + len(fixed) > len(best):
                best = words[np.concatenate([fixed, idx[res.clique]]).astype(np.int64)]
            return
        # some clique word lies in a first orbit; move it to that orbit's representative
        lab = orbit_labels(perms, len(words))
        reps = np.unique(lab[idx])
        done = np.zeros(len(words), dtype=bool)
        for w in reps:
            level(words, adj, fixed + [int(w)], cand & adj[w] & ~done, point_stabilizer(perms, int(w), rng),
                  depth + 1)
            done |= lab == w

    for r in range(u_eff + 1):
        if len(best) >= upper:
            break
        # cliques whose lowest-rank word has rank r, moved so that word is diag(I_r, 0)
        e = _canonical_rank_matrix(a, b, r)
        sub = verts[ranks >= r]
        sub = sub[_ranks_fast(field, field.sub[sub, e[None]]) >= d]
        words = np.concatenate([e[None], sub])
        if len(words) <= len(best):
            continue
        adj = _adjacency_matrix(field, words, d)
        perms = action_permutations(field, sub, stabilizer_generators(field, a, b, r))
        perms = [np.concatenate([[0], p + 1]) for p in perms]
        cand = np.ones(len(words), dtype=bool)
        cand[0] = False
        level(words, adj, [0], cand, perms, 1)
    code = RankCode(field, a, b, d, best, u, label="clique")
    lower = len(code)
    return LambdaExact((q, a, b, d, u), lower if exact else None, exact, code, lower,
                       lower if exact else upper, nodes, time.monotonic() - start)


# ---------------------------------------------------------------------------
# bounds on Lambda
# ---------------------------------------------------------------------------


def lambda_closed_form(q: int, a: int, b: int, d: int, u: int,
                       cdc_exact: Callable[[int, int, int, int], int | None] | None = None) -> tuple[int, str] | None:
    """Exact Lambda when one of the closed-form cases applies, with a tag."""
    n = min(a, b)
    if 2 * u < d or n < d:
        return 1, "forced_singleton"
    if n <= u:
        return mrd_size(q, a, b, d), "unrestricted_mrd"
    if d == 1:
        return count_matrices_rank_at_most(q, a, b, u), "all_low_rank"
    if d == 2 * u:
        if n % u == 0:
            return q_number(q, n) // q_number(q, u), "spread"
        if cdc_exact is not None:
            val = cdc_exact(q, n, 2 * u, u)
            if val is not None:
                return val, "exact_cdc"
    return None


def puncture_upper(q: int, a: int, b: int, d: int, u: int) -> int:
    """Delete d - 1 columns of the longer side: the result is injective and keeps ranks <= u."""
    n, m = min(a, b), max(a, b)
    return count_matrices_rank_at_most(q, n, m - d + 1, min(u, n))


@lru_cache(maxsize=None)
def _upper(q: int, a: int, b: int, d: int, u: int) -> tuple[int, str]:
    cf = lambda_closed_form(q, a, b, d, u)
    if cf is not None:
        return cf
    best = (mrd_size(q, a, b, d), "mrd")
    cand = puncture_upper(q, a, b, d, u)
    if cand < best[0]:
        best = (cand, "puncture")
    if d >= 2:
        for a2, b2 in ((a, b - 1), (a - 1, b)):
            if min(a2, b2) >= 1:
                val = _upper(q, a2, b2, d - 1, u)[0]
                if val < best[0]:
                    best = (val, "shorten")
    return best


def lambda_upper_bound(q: int, a: int, b: int, d: int, u: int) -> int:
    return _upper(q, a, b, d, u)[0]


def _default_cdc_lower(q: int, v: int, d: int, k: int) -> int:
    from .bounds import cdc_lower_value

    return cdc_lower_value(q, v, d, k)


def subspace_sweep(q: int, a: int, b: int, d: int, u: int, cdc_lower) -> tuple[int, int | None]:
    """max over 0 <= i <= 2u - d of A_q(min(a + i, b + 2u - d - i), 2u; u), with the arg-max i."""
    best, arg = 0, None
    if d > 2 * u or u < 1:
        return best, arg
    for i in range(2 * u - d + 1):
        v = min(a + i, b + 2 * u - d - i)
        if v < u:
            continue
        val = cdc_lower(q, v, 2 * u, u)
        if val > best:
            best, arg = val, i
    return best, arg


def subspace_sweep_best_i(a: int, b: int, d: int, u: int) -> int:
    return max(0, min(2 * u - d, (b - a - d) // 2 + u))


def product_lower(q: int, a: int, b: int, d: int, u: int, cdc_lower) -> tuple[int, tuple[int, int] | None]:
    """max over even d1, d2 in [2, 2u] with d1 + d2 >= 2d of min(A_q(a, d1; u), A_q(b, d2; u))."""
    best, arg = 0, None
    if u < 1 or u > min(a, b):
        return best, arg
    for d1 in range(2, 2 * u + 1, 2):
        for d2 in range(2, 2 * u + 1, 2):
            if d1 + d2 < 2 * d:
                continue
            val = min(cdc_lower(q, a, d1, u), cdc_lower(q, b, d2, u))
            if val > best:
                best, arg = val, (d1, d2)
    return best, arg


@dataclass
class LambdaBounds:
    params: tuple[int, int, int, int, int]
    lower: int
    lower_source: str
    upper: int
    upper_source: str
    exact: int | None = None

    def __post_init__(self):
        if self.lower > self.upper:
            raise AssertionError(f"Lambda bounds cross: {self.lower} > {self.upper} at {self.params}")
        if self.exact is not None and not self.lower == self.exact == self.upper:
            raise AssertionError("exact value does not match both bounds")

    def to_dict(self) -> dict:
        q, a, b, d, u = self.params
        return {
            "format_version": 1,
            "params": {"q": q, "a": a, "b": b, "d": d, "u": u},
            "lower": self.lower,
            "lower_source": self.lower_source,
            "upper": self.upper,
            "upper_source": self.upper_source,
            "exact": self.exact,
        }


def lambda_lower_bound(q: int, a: int, b: int, d: int, u: int, cdc_lower=None) -> tuple[int, str]:
    """Best lower bound on Lambda with the name of the bound attaining it."""
    if d < 1:
        raise ValueError("d must be positive")
    cf = lambda_closed_form(q, a, b, d, u)
    if cf is not None:
        return cf
    cdc_lower = cdc_lower or _default_cdc_lower
    best = (1, "singleton")
    if min(a, b) >= d:
        val = delta(q, a, b, d, u)
        if val > best[0]:
            best = (val, "delta")
    for x, y in ((a, b), (b, a)):
        val, _ = subspace_sweep(q, x, y, d, u, cdc_lower)
        if val > best[0]:
            best = (val, "subspace_sweep")
    val, _ = product_lower(q, a, b, d, u, cdc_lower)
    if val > best[0]:
        best = (val, "product")
    return best


def lambda_bounds(q: int, a: int, b: int, d: int, u: int, cdc_lower=None) -> LambdaBounds:
    lo, lo_src = lambda_lower_bound(q, a, b, d, u, cdc_lower)
    hi, hi_src = _upper(q, a, b, d, u)
    return LambdaBounds((q, a, b, d, u), lo, lo_src, hi, hi_src, lo if lo == hi else None)
