"""Code containers: subspaces, constant-dimension codes and rank-metric codes.

A :class:`CDCCode` stores its codewords as canonical (RREF) bases.  Codes
assembled by linkage-type constructions are kept as unions of Cartesian
products of ingredient blocks and are only materialized on demand, so that
codes with tens of millions of words can still be counted and sampled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import Iterator, Sequence

import numpy as np

from .field import GF, Mat, PivotVector, batch_rank, batch_rref, nullspace, pivot, rank, row_basis


@dataclass(frozen=True)
class Subspace:
    """A subspace of GF(q)^v, stored as its RREF basis (k x v, rank k)."""

    basis: Mat

    def __post_init__(self):
        r = row_basis(self.basis)
        if r != self.basis:
            raise ValueError("basis is not a full-rank RREF matrix")

    @classmethod
    def span(cls, m: Mat) -> "Subspace":
        return cls(row_basis(m))

    @property
    def field(self) -> GF:
        return self.basis.field

    @property
    def v(self) -> int:
        return self.basis.cols

    @property
    def k(self) -> int:
        return self.basis.rows

    @property
    def pivot(self) -> PivotVector:
        return pivot(self.basis)

    def orthogonal_complement(self) -> "Subspace":
        return Subspace(nullspace(self.basis))

    def __contains__(self, vec: Sequence[int]) -> bool:
        row = Mat.from_rows(self.field, [vec])
        stacked = Mat(self.field, self.k + 1, self.v, self.basis.data + row.data)
        return rank(stacked) == self.k


def _index_digits(idx: np.ndarray, sizes: Sequence[int]) -> list[np.ndarray]:
    """Mixed-radix decomposition of indices, first block most significant."""
    out = []
    rest = idx.astype(np.int64)
    for n in reversed(sizes):
        out.append(rest % n)
        rest = rest // n
    return out[::-1]


@dataclass
class Part:
    """Codewords tau^-1(X_1 | ... | X_m) for all choices X_j in blocks[j].

    Each block is an array (N_j, k, n_j).  ``canonical`` marks parts whose
    concatenation is already in RREF (first block is itself RREF of full rank).
    """

    blocks: list[np.ndarray]
    canonical: bool = False

    def __len__(self) -> int:
        return math.prod(len(b) for b in self.blocks)

    def get(self, field: GF, idx: np.ndarray) -> np.ndarray:
        digits = _index_digits(idx, [len(b) for b in self.blocks])
        mats = np.concatenate([b[d] for b, d in zip(self.blocks, digits)], axis=2)
        if not self.canonical:
            mats = batch_rref(field, mats)[0]
        return mats


@dataclass
class CDCCode:
    """A constant-dimension code: k-subspaces of GF(q)^v with claimed distance d."""

    field: GF
    v: int
    k: int
    d: int
    parts: list[Part] = dc_field(default_factory=list)
    label: str = ""

    @classmethod
    def from_bases(cls, field: GF, v: int, k: int, d: int, bases, label: str = "") -> "CDCCode":
        """Canonicalize generator matrices, drop duplicates (first occurrence wins)."""
        arr = np.asarray(bases, dtype=np.uint8).reshape(-1, k, v)
        red, ranks = batch_rref(field, arr)
        if np.any(ranks != k):
            raise ValueError("a generator matrix does not have full row rank")
        _, first = np.unique(red.reshape(len(red), -1), axis=0, return_index=True)
        keep = np.sort(first)
        return cls(field, v, k, d, [Part([red[keep]], canonical=True)], label)

    @classmethod
    def from_subspaces(cls, subspaces: Sequence[Subspace], d: int, label: str = "") -> "CDCCode":
        s0 = subspaces[0]
        return cls.from_bases(s0.field, s0.v, s0.k, d, [s.basis.to_array() for s in subspaces], label)

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def params(self) -> tuple[int, int, int, int]:
        return (self.field.q, self.v, self.d, self.k)

    def __len__(self) -> int:
        return sum(len(p) for p in self.parts)

    def bases(self, idx) -> np.ndarray:
        """RREF bases of the codewords at the given indices, shape (B, k, v)."""
        idx = np.asarray(idx, dtype=np.int64)
        out = np.empty((len(idx), self.k, self.v), dtype=np.uint8)
        lo = 0
        for part in self.parts:
            n = len(part)
            sel = (idx >= lo) & (idx < lo + n)
            if sel.any():
                out[sel] = part.get(self.field, idx[sel] - lo)
            lo += n
        if np.any((idx < 0) | (idx >= lo)):
            raise IndexError("codeword index out of range")
        return out

    @cached_property
    def array(self) -> np.ndarray:
        """All codewords, shape (N, k, v), in canonical construction order."""
        chunks = []
        for part in self.parts:
            n = len(part)
            for lo in range(0, n, 1 << 18):
                chunks.append(part.get(self.field, np.arange(lo, min(n, lo + (1 << 18)))))
        if not chunks:
            return np.zeros((0, self.k, self.v), dtype=np.uint8)
        return np.concatenate(chunks)

    def materialized(self) -> "CDCCode":
        arr = self.array
        return CDCCode(self.field, self.v, self.k, self.d, [Part([arr], canonical=True)], self.label)

    def __getitem__(self, i: int) -> Subspace:
        return Subspace(Mat.from_array(self.field, self.bases([i])[0]))

    def __iter__(self) -> Iterator[Subspace]:
        for i in range(len(self)):
            yield self[i]


@dataclass
class RankCode:
    """A set of a x b matrices with claimed minimum rank distance d and optional rank cap u."""

    field: GF
    a: int
    b: int
    d: int
    words: np.ndarray
    u: int | None = None
    label: str = ""

    def __post_init__(self):
        w = np.asarray(self.words, dtype=np.uint8).reshape(-1, self.a, self.b)
        if len(w) > 1:
            _, first = np.unique(w.reshape(len(w), -1), axis=0, return_index=True)
            w = w[np.sort(first)]
        self.words = w

    @classmethod
    def zero(cls, field: GF, a: int, b: int, d: int = 1, u: int | None = 0) -> "RankCode":
        return cls(field, a, b, d, np.zeros((1, a, b), dtype=np.uint8), u, "zero")

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def params(self) -> tuple:
        return (self.field.q, self.a, self.b, self.d, self.u)

    def __len__(self) -> int:
        return len(self.words)

    def __getitem__(self, i: int) -> Mat:
        return Mat.from_array(self.field, self.words[i])

    def ranks(self) -> np.ndarray:
        return batch_rank(self.field, self.words)

    def rank_histogram(self) -> dict[int, int]:
        vals, counts = np.unique(self.ranks(), return_counts=True)
        return {int(v): int(c) for v, c in zip(vals, counts)}

    def transpose(self) -> "RankCode":
        return RankCode(self.field, self.b, self.a, self.d, self.words.transpose(0, 2, 1), self.u, self.label)

    def restrict_rank(self, u: int) -> "RankCode":
        keep = self.ranks() <= u
        return RankCode(self.field, self.a, self.b, self.d, self.words[keep], u, self.label)
