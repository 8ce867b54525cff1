"""Subspace, rank and pivot-Hamming distances, and code verifiers."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field as dc_field

import numpy as np

from .codes import CDCCode, RankCode, Subspace
from .field import GF, Mat, batch_rank, batch_rank_packed, pack_rows, rank, vstack

FORMAT_VERSION = 1


def subspace_distance(u: Subspace, w: Subspace) -> int:
    """dim(U + W) - dim(U n W) = 2 rk(tau(U); tau(W)) - dim U - dim W."""
    if u.field is not w.field or u.v != w.v:
        raise ValueError("subspaces live in different ambient spaces")
    return 2 * rank(vstack(u.basis, w.basis)) - u.k - w.k


def rank_distance(a: Mat, b: Mat) -> int:
    if a.field is not b.field or (a.rows, a.cols) != (b.rows, b.cols):
        raise ValueError("matrices differ in shape or field")
    return rank(a - b)


def pivot_hamming_lower_bound(u: Subspace, w: Subspace) -> int:
    if u.v != w.v:
        raise ValueError("subspaces live in different ambient spaces")
    return u.pivot.hamming(w.pivot)


def hamming(x, y) -> int:
    if len(x) != len(y):
        raise ValueError("vectors of different length")
    return sum(a != b for a, b in zip(x, y))


@dataclass
class VerifyReport:
    params: dict
    mode: str
    pairs_checked: int = 0
    rank_computations: int = 0
    min_distance_observed: float = math.inf
    certified: bool = False
    falsified: bool = False
    counterexample: list[int] | None = None
    rank_violation: int | None = None
    seed: int | None = None
    format_version: int = FORMAT_VERSION
    notes: list[str] = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        """Certified (exhaustive) or not falsified (sampled)."""
        return self.certified if self.mode == "exhaustive" else not self.falsified

    def to_dict(self) -> dict:
        out = asdict(self)
        if math.isinf(self.min_distance_observed):
            out["min_distance_observed"] = None
        else:
            out["min_distance_observed"] = int(self.min_distance_observed)
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def _pivot_masks(bases: np.ndarray) -> np.ndarray:
    """Packed pivot vectors of RREF bases (N, k, v): bit set at each row's leading column."""
    n, k, v = bases.shape
    nz = bases != 0
    lead = np.where(nz.any(axis=2), nz.argmax(axis=2), -1)  # (N, k)
    masks = np.zeros(n, dtype=np.uint64)
    for r in range(k):
        col = lead[:, r]
        ok = col >= 0
        masks[ok] |= np.uint64(1) << (np.uint64(v - 1) - col[ok].astype(np.uint64))
    return masks


def _popcount(x: np.ndarray) -> np.ndarray:
    return np.bitwise_count(x.astype(np.uint64)).astype(np.int64)


class _PairRanker:
    """Rank of stacked pairs (A_i; A_j) for many j at once."""

    def __init__(self, field: GF, mats: np.ndarray, diff: bool):
        self.field = field
        self.mats = mats
        self.diff = diff
        cols = mats.shape[2]
        self.packed = pack_rows(mats) if field.q == 2 and cols <= 64 else None

    def ranks(self, i: np.ndarray, j: np.ndarray) -> np.ndarray:
        cols = self.mats.shape[2]
        if self.packed is not None:
            if self.diff:
                return batch_rank_packed(self.packed[i] ^ self.packed[j], cols)
            return batch_rank_packed(np.concatenate([self.packed[i], self.packed[j]], axis=1), cols)
        if self.diff:
            return batch_rank(self.field, self.field.sub[self.mats[i], self.mats[j]])
        return batch_rank(self.field, np.concatenate([self.mats[i], self.mats[j]], axis=1))


def _exhaustive(n: int, dist_of, d_claimed: int, pivots: np.ndarray | None, max_possible: int,
                early_exit: bool, report: VerifyReport, block: int = 1 << 16) -> None:
    """Scan pairs (i, j), i < j, in lexicographic order."""
    running = math.inf
    first_bad = None
    i = 0
    while i < n - 1:
        # gather consecutive rows i..i2-1 until ~block pairs
        i2, total = i, 0
        while i2 < n - 1 and (total == 0 or total + (n - 1 - i2) <= block):
            total += n - 1 - i2
            i2 += 1
        ii = np.concatenate([np.full(n - 1 - x, x, dtype=np.int64) for x in range(i, i2)])
        jj = np.concatenate([np.arange(x + 1, n, dtype=np.int64) for x in range(i, i2)])
        report.pairs_checked += len(ii)
        if pivots is not None:
            hd = _popcount(pivots[ii] ^ pivots[jj])
            bar = min(running, max_possible)
            need = ~((hd >= d_claimed) & (hd >= bar))
            ii, jj = ii[need], jj[need]
        if len(ii):
            dist = dist_of(ii, jj)
            report.rank_computations += len(ii)
            m = int(dist.min())
            running = min(running, m)
            bad = np.nonzero(dist < d_claimed)[0]
            if len(bad) and first_bad is None:
                first_bad = [int(ii[bad[0]]), int(jj[bad[0]])]
                if early_exit:
                    break
        i = i2
    report.min_distance_observed = running
    report.counterexample = first_bad


def _sampled_pairs(n: int, n_pairs: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    rng = np.random.default_rng(seed)
    i = rng.integers(0, n, size=n_pairs)
    j = rng.integers(0, n - 1, size=n_pairs)
    j = j + (j >= i)
    lo, hi = np.minimum(i, j), np.maximum(i, j)
    return lo, hi


def verify_cdc(code: CDCCode, mode: str = "exhaustive", n_pairs: int = 100_000, seed: int = 0,
               pivot_filter: bool = True, early_exit: bool = False) -> VerifyReport:
    """Check that every pair of distinct codewords has subspace distance >= code.d.

    ``exhaustive`` computes the exact minimum distance over all pairs; pairs
    whose pivot vectors are already at Hamming distance >= max(d, current
    minimum) are skipped, since that Hamming distance is a lower bound.
    ``sampled`` checks random pairs and can only falsify.
    """
    n, k = len(code), code.k
    report = VerifyReport(params={"q": code.q, "v": code.v, "k": k, "N": n, "d": code.d},
                          mode=mode, seed=seed if mode == "sampled" else None)
    if n < 2:
        report.certified = mode == "exhaustive"
        return report
    if mode == "exhaustive":
        mats = code.array
        ranker = _PairRanker(code.field, mats, diff=False)
        pivots = _pivot_masks(mats) if pivot_filter else None
        _exhaustive(n, lambda i, j: 2 * ranker.ranks(i, j) - 2 * k, code.d, pivots,
                    2 * min(k, code.v - k), early_exit, report)
        report.certified = report.counterexample is None
        report.falsified = not report.certified
    elif mode == "sampled":
        ii, jj = _sampled_pairs(n, n_pairs, seed)
        mins, first_bad = math.inf, None
        for lo in range(0, n_pairs, 1 << 16):
            a, b = ii[lo:lo + (1 << 16)], jj[lo:lo + (1 << 16)]
            A, B = code.bases(a), code.bases(b)
            r = batch_rank(code.field, np.concatenate([A, B], axis=1))
            dist = 2 * r - 2 * k
            mins = min(mins, int(dist.min()))
            bad = np.nonzero(dist < code.d)[0]
            if len(bad) and first_bad is None:
                first_bad = [int(a[bad[0]]), int(b[bad[0]])]
        report.pairs_checked = report.rank_computations = n_pairs
        report.min_distance_observed = mins
        report.counterexample = first_bad
        report.falsified = first_bad is not None
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return report


def verify_rmc(code: RankCode, mode: str = "exhaustive", n_pairs: int = 100_000, seed: int = 0,
               early_exit: bool = False) -> VerifyReport:
    """Check pairwise rank distance >= code.d and, if set, every rank <= code.u."""
    n = len(code)
    report = VerifyReport(params={"q": code.q, "a": code.a, "b": code.b, "N": n, "d": code.d, "u": code.u},
                          mode=mode, seed=seed if mode == "sampled" else None)
    if code.u is not None and n:
        ranks = code.ranks()
        over = np.nonzero(ranks > code.u)[0]
        if len(over):
            report.rank_violation = int(over[0])
    if n >= 2:
        ranker = _PairRanker(code.field, code.words, diff=True)
        if mode == "exhaustive":
            _exhaustive(n, ranker.ranks, code.d, None, min(code.a, code.b), early_exit, report)
        elif mode == "sampled":
            ii, jj = _sampled_pairs(n, n_pairs, seed)
            dist = ranker.ranks(ii, jj)
            report.pairs_checked = report.rank_computations = n_pairs
            report.min_distance_observed = int(dist.min())
            bad = np.nonzero(dist < code.d)[0]
            report.counterexample = [int(ii[bad[0]]), int(jj[bad[0]])] if len(bad) else None
        else:
            raise ValueError(f"unknown mode {mode!r}")
    violated = report.counterexample is not None or report.rank_violation is not None
    report.falsified = violated
    report.certified = mode == "exhaustive" and not violated
    return report


def check_rrmc_structure(code: RankCode) -> bool:
    """Structure forced on any rank-restricted code with at least two words.

    Every rank lies in [d - u, u], at most one word has rank < d/2, and all
    pairwise distances are at most 2u.
    """
    if len(code) < 2 or code.u is None:
        return True
    d, u = code.d, code.u
    ranks = code.ranks()
    if ranks.min() < d - u or ranks.max() > u:
        return False
    if np.count_nonzero(2 * ranks < d) > 1:
        return False
    n = len(code)
    ii, jj = np.triu_indices(n, 1)
    ranker = _PairRanker(code.field, code.words, diff=True)
    for lo in range(0, len(ii), 1 << 16):
        if ranker.ranks(ii[lo:lo + (1 << 16)], jj[lo:lo + (1 << 16)]).max() > 2 * u:
            return False
    return True
