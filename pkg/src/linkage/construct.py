"""Explicit constant-dimension codes.

Base cases are single subspaces, all k-subspaces, spreads and lifted MRD
codes.  Larger codes come from linkage: codewords are concatenations
tau^-1(X | Y) of echelon bases of smaller subspace codes with rank-metric
blocks.  :class:`ConstructionPlan` is the serializable recipe produced by
the bounds engine; :func:`construct_from_plan` replays it.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from typing import Sequence

import numpy as np

from .codes import CDCCode, Part, RankCode
from .field import (
    GF,
    Mat,
    batch_rank,
    batch_rref,
    enumerate_rref,
    get_field,
    nullspace,
)
from .qcount import q_number
from .rankcodes import ExtField, build_linear_mrd, delta_subset, product_rrmc


class ConstraintError(ValueError):
    """A construction parameter constraint is violated; the message names the inequality."""


class NotConstructible(RuntimeError):
    """A plan contains a node that is only a bound, not an explicit code."""


def _require(cond: bool, text: str) -> None:
    if not cond:
        raise ConstraintError(f"constraint violated: {text}")


# ---------------------------------------------------------------------------
# base cases
# ---------------------------------------------------------------------------


def single_subspace(q: int, v: int, k: int, d: int) -> CDCCode:
    """The code {<e_1, ..., e_k>}."""
    basis = np.zeros((1, k, v), dtype=np.uint8)
    basis[0, range(k), range(k)] = 1
    return CDCCode(get_field(q), v, k, d, [Part([basis], canonical=True)], "single")


def all_subspaces(q: int, v: int, k: int) -> CDCCode:
    """Every k-subspace of GF(q)^v (minimum distance 2)."""
    field = get_field(q)
    return CDCCode(field, v, k, 2, [Part([enumerate_rref(field, k, v)], canonical=True)], "all_subspaces")


def build_spread(q: int, v: int, k: int) -> CDCCode:
    """The Desarguesian spread: GF(q^k)-lines of GF(q^k)^(v/k), viewed over GF(q)."""
    if k < 1 or v % k:
        raise ConstraintError(f"constraint violated: k | v (k={k}, v={v})")
    field = get_field(q)
    n = v // k
    ext = ExtField(field, k)
    # multiplication by x^l as a k x k matrix on coefficient vectors
    powers = []
    for l in range(k):
        cols = []
        for j in range(k):
            e = [0] * k
            e[j] = 1
            cols.append(ext.mul(tuple(e), ext.alpha_pow(l)))
        powers.append(np.array(cols, dtype=np.uint8).T)
    qk = q**k
    digits = np.array([[(x // q**i) % q for i in range(k)] for x in range(qk)], dtype=np.uint8)
    vectors = []
    for lead in range(n):
        free = n - lead - 1
        count = qk**free
        idx = np.arange(count, dtype=np.int64)
        coords = np.zeros((count, n), dtype=np.int64)
        coords[:, lead] = 1
        for j in range(free):
            coords[:, lead + 1 + j] = (idx // qk ** (free - 1 - j)) % qk
        vectors.append(coords)
    vec = np.concatenate(vectors)  # (N, n) elements of GF(q^k)
    dig = digits[vec]  # (N, n, k)
    rows = []
    for l in range(k):
        prod = np.einsum("ij,bnj->bni", powers[l].astype(np.int64), dig.astype(np.int64))
        if field.e == 1:
            prod %= q
        else:
            prod = _ext_apply(field, powers[l], dig)
        rows.append(prod.reshape(len(vec), v))
    gens = np.stack(rows, axis=1).astype(np.uint8)
    red, ranks = batch_rref(field, gens)
    assert np.all(ranks == k)
    code = CDCCode(field, v, k, 2 * k, [Part([red], canonical=True)], "spread")
    if len(code) != q_number(q, v) // q_number(q, k):
        raise AssertionError("spread has the wrong size")
    return code


def _ext_apply(field: GF, mat: np.ndarray, dig: np.ndarray) -> np.ndarray:
    # mat @ dig[b, n] over a non-prime GF(q)
    out = np.zeros(dig.shape, dtype=np.uint8)
    for i in range(mat.shape[0]):
        acc = np.zeros(dig.shape[:2], dtype=np.uint8)
        for j in range(mat.shape[1]):
            acc = field.add[acc, field.mul[mat[i, j], dig[..., j]]]
        out[..., i] = acc
    return out


def lift_rmc(rmc: RankCode, d: int | None = None) -> CDCCode:
    """{tau^-1(I_k | R)}: a (k + n, N, 2 d_R; k) code."""
    k = rmc.a
    ident = np.eye(k, dtype=np.uint8)[None]
    d = 2 * rmc.d if d is None else d
    return CDCCode(rmc.field, k + rmc.b, k, d, [Part([ident, rmc.words], canonical=True)], "lifted_mrd")


def lifted_mrd(q: int, k: int, n: int, d: int) -> CDCCode:
    """Lifted Gabidulin code; a single word when min(k, n) < d/2."""
    if min(k, n) < d // 2:
        return lift_rmc(RankCode.zero(get_field(q), k, n, d // 2), d)
    return lift_rmc(build_linear_mrd(q, k, n, d // 2).to_rank_code(), d)


def complement(code: CDCCode) -> CDCCode:
    """Orthogonal complements of all codewords; the subspace distance is unchanged."""
    field = code.field
    bases = [nullspace(Mat.from_array(field, b)).to_array() for b in code.array]
    arr = np.array(bases, dtype=np.uint8).reshape(len(bases), code.v - code.k, code.v)
    red, _ = batch_rref(field, arr)
    return CDCCode(field, code.v, code.v - code.k, code.d, [Part([red], canonical=True)], "complement")


def embed(code: CDCCode, v: int) -> CDCCode:
    """Append zero coordinates: the same code inside GF(q)^v."""
    pad = np.zeros((1, code.k, v - code.v), dtype=np.uint8)
    return CDCCode(code.field, v, code.k, code.d, [Part([code.array, pad], canonical=True)], "embed")


def truncate(code: CDCCode, n: int) -> CDCCode:
    arr = code.array[:n]
    return CDCCode(code.field, code.v, code.k, code.d, [Part([arr], canonical=True)], code.label)


# ---------------------------------------------------------------------------
# linkage
# ---------------------------------------------------------------------------


def check_generalized(d: int, k: int, r: int, s: int, t: int) -> None:
    h = d // 2
    _require(d % 2 == 0, "d even")
    _require(2 <= h, "2 <= d/2")
    _require(h <= k, "d/2 <= k")
    _require(2 * k <= r + s, "k <= (r+s)/2")
    _require(k <= r, "k <= r")
    _require(k <= s + t, "k <= s+t")
    _require(0 <= t, "0 <= t")
    _require(t <= k - h, "t <= k-d/2")


def _check_cdc(code: CDCCode, v: int, k: int, d: int, name: str) -> None:
    if (code.v, code.k) != (v, k):
        raise ValueError(f"{name} must consist of {k}-subspaces of GF(q)^{v}, got {code.k}-subspaces of GF(q)^{code.v}")
    if code.d < d:
        raise ValueError(f"{name} has minimum distance {code.d} < {d}")


def _check_rmc(code: RankCode, a: int, b: int, d: int, u: int | None, name: str) -> None:
    if (code.a, code.b) != (a, b):
        raise ValueError(f"{name} must consist of {a} x {b} matrices, got {code.a} x {code.b}")
    if code.d < d and len(code) > 1:
        raise ValueError(f"{name} has minimum rank distance {code.d} < {d}")
    if u is not None and len(code) and int(batch_rank(code.field, code.words).max()) > u:
        raise ValueError(f"{name} has a word of rank above {u}")


def construct_generalized_linkage(q: int, d: int, k: int, r: int, s: int, t: int, A: CDCCode, B: CDCCode,
                                  M: RankCode, R: RankCode) -> CDCCode:
    """{tau^-1(tau(A) | M)} u {tau^-1(R | tau(B))} in GF(q)^(r+s)."""
    check_generalized(d, k, r, s, t)
    h = d // 2
    _check_cdc(A, r, k, d, "A")
    _check_cdc(B, s + t, k, d, "B")
    _check_rmc(M, k, s, h, None, "M")
    _check_rmc(R, k, r - t, h, k - h - t, "R")
    field = get_field(q)
    parts = [Part([A.array, M.words], canonical=True), Part([R.words, B.array])]
    return CDCCode(field, r + s, k, d, parts, f"generalized_linkage(r={r},s={s},t={t})")


def construct_improved_linkage(q: int, d: int, k: int, r: int, s: int, A: CDCCode, B: CDCCode,
                               M: RankCode) -> CDCCode:
    """Generalized linkage with t = k - d/2 and R = {0}."""
    t = k - d // 2
    zero = RankCode.zero(get_field(q), k, r - t, d // 2)
    return construct_generalized_linkage(q, d, k, r, s, t, A, B, M, zero)


def construct_padded_parallel(q: int, d: int, k: int, s: int, B: CDCCode, M: RankCode, R: RankCode) -> CDCCode:
    """Lifted code {tau^-1(I | M)} u {tau^-1(R | tau(B))}: generalized linkage with r = k, t = 0, A = {I}."""
    A = single_subspace(q, k, k, d)
    return construct_generalized_linkage(q, d, k, k, s, 0, A, B, M, R)


def check_parallel(d: int, k: int, n: int) -> None:
    h = d // 2
    _require(d % 2 == 0, "d even")
    _require(2 <= h, "2 <= d/2")
    _require(h <= k, "d/2 <= k")
    _require(0 <= n, "0 <= n")


def construct_parallel_linkage(q: int, d: int, k: int, n: int, A: CDCCode, B: CDCCode, M: RankCode,
                               R: RankCode) -> CDCCode:
    """{tau^-1(tau(A) | M)} u {tau^-1(R | tau(B))} in GF(q)^(n+2k), A a lifted code in GF(q)^(k+n),
    M a k x k code, R a k x k code of ranks <= k - d/2."""
    check_parallel(d, k, n)
    h = d // 2
    _check_cdc(A, k + n, k, d, "A")
    _check_cdc(B, n + k, k, d, "B")
    _check_rmc(M, k, k, h, None, "M")
    _check_rmc(R, k, k, h, k - h, "R")
    if len(A) and not np.array_equal(A.array[:, :, :k], np.broadcast_to(np.eye(k, dtype=np.uint8), (len(A), k, k))):
        raise ValueError("A must be a lifted code (every basis starts with the identity)")
    field = get_field(q)
    parts = [Part([A.array, M.words], canonical=True), Part([R.words, B.array])]
    return CDCCode(field, n + 2 * k, k, d, parts, f"parallel_linkage(n={n})")


def check_multiblock(d: int, k: int, blocks: Sequence[tuple[int, int]]) -> None:
    h = d // 2
    m = len(blocks)
    _require(m >= 2, "m >= 2")
    _require(d % 2 == 0, "d even")
    _require(2 <= h, "2 <= d/2")
    _require(h <= k, "d/2 <= k")
    _require(2 * k <= sum(n for n, _ in blocks), "k <= (n_1+...+n_m)/2")
    _require(blocks[0][1] == 0, "t_1 = 0")
    for i, (n, t) in enumerate(blocks):
        _require(k <= n + t, f"k <= n_i+t_i (i={i + 1})")
        if i:
            _require(0 <= t, f"0 <= t_i (i={i + 1})")
            _require(t <= k - h, f"t_i <= k-d/2 (i={i + 1})")
            _require(t <= blocks[i - 1][0], f"t_i <= n_(i-1) (i={i + 1})")


@dataclass
class MultiblockIngredients:
    """Per-block ingredients, lists indexed by block (0-based).

    C[i]: k-subspaces of GF(q)^(n_i + t_i).  M[i] (i >= 1): k x n_i codes of
    distance d/2.  R[j] (j <= m-3): k x n_j codes of ranks <= k - d/2.
    S[i] (i <= m-2): k x (n_i - t_(i+1)) codes of ranks <= k - d/2 - t_(i+1).
    Unused slots are None.
    """

    C: list
    M: list
    R: list
    S: list


def construct_multiblock(q: int, d: int, k: int, blocks: Sequence[tuple[int, int]],
                         ing: MultiblockIngredients) -> CDCCode:
    """Union over i of {tau^-1(r_1 | ... | r_(i-2) | s_(i-1) | c_i | m_(i+1) | ... | m_m)} (1-based i)."""
    check_multiblock(d, k, blocks)
    h = d // 2
    m = len(blocks)
    ns = [n for n, _ in blocks]
    ts = [t for _, t in blocks]
    for i in range(m):
        _check_cdc(ing.C[i], ns[i] + ts[i], k, d, f"C_{i + 1}")
        if i >= 1:
            _check_rmc(ing.M[i], k, ns[i], h, None, f"M_{i + 1}")
        if i <= m - 3:
            _check_rmc(ing.R[i], k, ns[i], h, k - h, f"R_{i + 1}")
        if i <= m - 2:
            _check_rmc(ing.S[i], k, ns[i] - ts[i + 1], h, k - h - ts[i + 1], f"S_{i + 1}")
    parts = []
    for i in range(m):
        blocks_i = [ing.R[j].words for j in range(i - 1)]
        if i >= 1:
            blocks_i.append(ing.S[i - 1].words)
        blocks_i.append(ing.C[i].array)
        blocks_i += [ing.M[w].words for w in range(i + 1, m)]
        parts.append(Part(blocks_i, canonical=(i == 0)))
    return CDCCode(get_field(q), sum(ns), k, d, parts, f"multiblock({list(blocks)})")


def multiblock_size(C: Sequence[int], M: Sequence[int], R: Sequence[int], S: Sequence[int]) -> int:
    """sum_i C_i S_(i-1) prod_(j <= i-2) R_j prod_(w > i) M_w (1-based, S_0 = 1)."""
    m = len(C)
    total = 0
    for i in range(m):
        term = C[i] * (S[i - 1] if i >= 1 else 1)
        term *= math.prod(R[j] for j in range(i - 1))
        term *= math.prod(M[w] for w in range(i + 1, m))
        total += term
    return total


# ---------------------------------------------------------------------------
# diagnostics
# ---------------------------------------------------------------------------


def linkage_distance_case(A: Mat, B: Mat, C: Mat, D: Mat, d: int) -> str:
    """Which sufficient condition guarantees d_S(tau^-1(A|B), tau^-1(C|D)) >= d.

    Returns the first of ``cdc_part`` (A, C full rank and far apart),
    ``rmc_part`` (A = C full rank, B and D far apart in rank), ``rank_gap``
    (|rk A - rk C| >= d/2) that applies, else ``none``.
    """
    from .field import hconcat, rank, vstack

    k = A.rows
    if rank(hconcat(A, B)) != k or rank(hconcat(C, D)) != k:
        raise ValueError("need rk(A|B) = rk(C|D) = k")
    ra, rc = rank(A), rank(C)
    if ra == rc == k and 2 * rank(vstack(A, C)) - 2 * k >= d:
        return "cdc_part"
    if A == C and ra == k and 2 * rank(B - D) >= d:
        return "rmc_part"
    if 2 * abs(ra - rc) >= d:
        return "rank_gap"
    return "none"


# ---------------------------------------------------------------------------
# plans
# ---------------------------------------------------------------------------

PLAN_FORMAT_VERSION = 1

CDC_KINDS = {
    "trivial", "spread", "lifted_mrd", "complement", "embed", "linkage_original", "linkage_improved",
    "linkage_generalized", "linkage_parallel", "linkage_padded_parallel", "linkage_multiblock", "seed", "formula",
}
RMC_KINDS = {"zero", "mrd", "delta_subset", "delta_nonzero", "product", "formula"}


@dataclass
class RankIngredient:
    """Recipe for a rank-metric ingredient (a x b, distance d, ranks <= u)."""

    kind: str
    q: int
    a: int
    b: int
    d: int
    u: int | None
    size: int
    children: dict = dc_field(default_factory=dict)  # product: {"left": plan, "right": plan}

    def to_dict(self) -> dict:
        return {
            "kind": self.kind, "q": self.q, "a": self.a, "b": self.b, "d": self.d, "u": self.u,
            "size": self.size, "children": {k: v.to_dict() for k, v in self.children.items()},
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "RankIngredient":
        kids = {k: ConstructionPlan.from_dict(v) for k, v in obj.get("children", {}).items()}
        return cls(obj["kind"], obj["q"], obj["a"], obj["b"], obj["d"], obj["u"], obj["size"], kids)

    @property
    def constructible(self) -> bool:
        return self.kind != "formula" and all(c.constructible for c in self.children.values())


@dataclass
class ConstructionPlan:
    """A node of a construction tree for a (v, N, d; k)_q code."""

    kind: str
    q: int
    v: int
    d: int
    k: int
    predicted: int
    params: dict = dc_field(default_factory=dict)
    children: dict = dc_field(default_factory=dict)  # name -> ConstructionPlan
    rmcs: dict = dc_field(default_factory=dict)  # name -> RankIngredient

    def __post_init__(self):
        if self.kind not in CDC_KINDS:
            raise ValueError(f"unknown plan kind {self.kind!r}")

    @property
    def constructible(self) -> bool:
        if self.kind in ("seed", "formula"):
            return False
        return all(c.constructible for c in self.children.values()) and all(
            r.constructible for r in self.rmcs.values())

    def to_dict(self) -> dict:
        return {
            "format_version": PLAN_FORMAT_VERSION,
            "kind": self.kind,
            "q": self.q, "v": self.v, "d": self.d, "k": self.k,
            "predicted": self.predicted,
            "params": self.params,
            "children": {k: c.to_dict() for k, c in self.children.items()},
            "rmcs": {k: r.to_dict() for k, r in self.rmcs.items()},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, obj: dict) -> "ConstructionPlan":
        return cls(obj["kind"], obj["q"], obj["v"], obj["d"], obj["k"], int(obj["predicted"]),
                   dict(obj.get("params", {})),
                   {k: cls.from_dict(c) for k, c in obj.get("children", {}).items()},
                   {k: RankIngredient.from_dict(r) for k, r in obj.get("rmcs", {}).items()})

    @classmethod
    def from_json(cls, text: str) -> "ConstructionPlan":
        return cls.from_dict(json.loads(text))

    def describe(self, indent: int = 0) -> str:
        pad = "  " * indent
        head = f"{pad}{self.kind} (v={self.v}, d={self.d}, k={self.k}) N={self.predicted}"
        if self.params:
            head += " " + ", ".join(f"{k}={v}" for k, v in sorted(self.params.items()))
        lines = [head]
        for name, r in sorted(self.rmcs.items()):
            lines.append(f"{pad}  {name}: {r.kind} {r.a}x{r.b} d={r.d} u={r.u} size={r.size}")
            for c in r.children.values():
                lines.append(c.describe(indent + 2))
        for name, c in sorted(self.children.items()):
            lines.append(c.describe(indent + 1))
        return "\n".join(lines)


def build_rmc(recipe: RankIngredient) -> RankCode:
    return _build_rmc_cached(json.dumps(recipe.to_dict(), sort_keys=True))


@lru_cache(maxsize=64)
def _build_rmc_cached(key: str) -> RankCode:
    recipe = RankIngredient.from_dict(json.loads(key))
    field = get_field(recipe.q)
    if recipe.kind == "zero":
        code = RankCode.zero(field, recipe.a, recipe.b, recipe.d)
    elif recipe.kind == "mrd":
        code = build_linear_mrd(recipe.q, recipe.a, recipe.b, recipe.d).to_rank_code()
    elif recipe.kind in ("delta_subset", "delta_nonzero"):
        code = delta_subset(build_linear_mrd(recipe.q, recipe.a, recipe.b, recipe.d), recipe.u)
        if recipe.kind == "delta_nonzero":
            keep = np.any(code.words.reshape(len(code), -1) != 0, axis=1)
            code = RankCode(field, recipe.a, recipe.b, recipe.d, code.words[keep], recipe.u, "delta_nonzero")
    elif recipe.kind == "product":
        left = construct_from_plan(recipe.children["left"])
        right = construct_from_plan(recipe.children["right"])
        n = min(len(left), len(right))
        code = product_rrmc(recipe.q, recipe.a, recipe.b, recipe.u, left.d, right.d, truncate(left, n), truncate(right, n))
        code = RankCode(field, recipe.a, recipe.b, recipe.d, code.words, recipe.u, "product")
    else:
        raise NotConstructible(f"rank-metric ingredient of kind {recipe.kind!r} is a bound only")
    if len(code) != recipe.size:
        raise AssertionError(f"{recipe.kind} ingredient has {len(code)} words, plan says {recipe.size}")
    return code


def construct_from_plan(plan: ConstructionPlan) -> CDCCode:
    """Build the code described by ``plan``; its size must equal ``plan.predicted``."""
    code = _construct_cached(plan.to_json())
    if len(code) != plan.predicted:
        raise AssertionError(f"plan predicted {plan.predicted} codewords, construction gave {len(code)}")
    return code


@lru_cache(maxsize=128)
def _construct_cached(key: str) -> CDCCode:
    return _construct(ConstructionPlan.from_json(key))


def _construct(plan: ConstructionPlan) -> CDCCode:
    q, v, d, k, p = plan.q, plan.v, plan.d, plan.k, plan.params
    kids = {name: construct_from_plan(c) for name, c in plan.children.items()} if plan.constructible else None
    if kids is None:
        raise NotConstructible(f"plan for (v={v}, d={d}, k={k}) contains seed or formula-only nodes")
    rm = {name: build_rmc(r) for name, r in plan.rmcs.items()}
    kind = plan.kind
    if kind == "trivial":
        if d <= 2:
            return all_subspaces(q, v, k)
        return single_subspace(q, v, k, d)
    if kind == "spread":
        return build_spread(q, v, k)
    if kind == "lifted_mrd":
        return lift_rmc(rm["M"], d)
    if kind == "complement":
        out = complement(kids["C"])
        out.d = d
        return out
    if kind == "embed":
        return embed(kids["C"], v)
    if kind == "linkage_original":
        zero = RankCode.zero(get_field(q), k, p["r"], d // 2)
        r, s = p["r"], p["s"]
        # {tau^-1(0 | tau(B))}, B in GF(q)^s, is the t = 0, R = {0} case
        code = CDCCode(get_field(q), r + s, k, d,
                       [Part([kids["A"].array, rm["M"].words], canonical=True), Part([zero.words, kids["B"].array])],
                       f"original_linkage(r={r},s={s})")
        return code
    if kind == "linkage_improved":
        return construct_improved_linkage(q, d, k, p["r"], p["s"], kids["A"], kids["B"], rm["M"])
    if kind in ("linkage_generalized", "linkage_padded_parallel"):
        if kind == "linkage_padded_parallel":
            return construct_padded_parallel(q, d, k, p["s"], kids["B"], rm["M"], rm["R"])
        return construct_generalized_linkage(q, d, k, p["r"], p["s"], p["t"], kids["A"], kids["B"], rm["M"], rm["R"])
    if kind == "linkage_parallel":
        return construct_parallel_linkage(q, d, k, p["n"], kids["A"], kids["B"], rm["M"], rm["R"])
    if kind == "linkage_multiblock":
        blocks = [tuple(x) for x in p["blocks"]]
        m = len(blocks)
        ing = MultiblockIngredients(
            C=[kids[f"C{i + 1}"] for i in range(m)],
            M=[rm.get(f"M{i + 1}") for i in range(m)],
            R=[rm.get(f"R{i + 1}") for i in range(m)],
            S=[rm.get(f"S{i + 1}") for i in range(m)],
        )
        return construct_multiblock(q, d, k, blocks, ing)
    raise NotConstructible(f"plan node {kind!r} is not constructible")
