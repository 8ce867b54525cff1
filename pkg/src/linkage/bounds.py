"""Lower and upper bounds on A_q(v, d; k) with provenance.

Lower bounds are the best value over every implemented construction,
computed recursively with memoization (ingredients always have smaller
ambient dimension or smaller k).  Each value carries the plan that attains
it.  Upper bounds are the trivial count, the anticode bound and spread
exactness.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .construct import ConstructionPlan, RankIngredient, check_generalized, check_multiblock, ConstraintError
from .qcount import anticode_bound, delta, mrd_size, q_binomial, q_number
from .rankcodes import (
    MRD_ENUM_BUDGET,
    subspace_sweep,
    lambda_closed_form,
    lambda_upper_bound,
    product_lower,
)

SEED_FORMAT_VERSION = 1
EXTERNAL_SEED_FILE = "seeds_external.json"


class SeedError(ValueError):
    pass


# ---------------------------------------------------------------------------
# keys and upper bounds
# ---------------------------------------------------------------------------


def normalize_key(q: int, v: int, d: int, k: int) -> tuple[int, int, int, int]:
    """(q, v, d, min(k, v - k)): a code and its dual have the same parameters."""
    if d % 2:
        raise ValueError(f"subspace distances are even, got d={d}")
    if not 2 <= d // 2 <= k <= v:
        raise ValueError(f"need 2 <= d/2 <= k <= v, got v={v}, d={d}, k={k}")
    return (q, v, d, min(k, v - k))


def anticode_upper(q: int, v: int, d: int, k: int) -> int:
    """Anticode bound, taking the better of k and v - k."""
    val = anticode_bound(q, v, d, k)
    if 2 <= d // 2 <= v - k:
        val = min(val, anticode_bound(q, v, d, v - k))
    return val


def _forced(q: int, v: int, d: int, k: int) -> int | None:
    """Values outside 2 <= d/2 <= min(k, v-k)."""
    if k < 0 or k > v:
        return 0
    if d // 2 > min(k, v - k) or k in (0, v):
        return 1
    if d <= 2:
        return q_binomial(q, v, k)
    return None


def upper_bound(q: int, v: int, d: int, k: int) -> tuple[int, str]:
    forced = _forced(q, v, d, k)
    if forced is not None:
        return forced, "trivial"
    best = (q_binomial(q, v, k), "trivial")
    kk = min(k, v - k)
    ac = anticode_upper(q, v, d, kk)
    if ac < best[0]:
        best = (ac, "anticode")
    if d == 2 * kk and v % kk == 0:
        best = (q_number(q, v) // q_number(q, kk), "spread_exact")
    return best


# ---------------------------------------------------------------------------
# seeds
# ---------------------------------------------------------------------------


def formula_seed(q: int) -> int:
    """Lower bound q^12 + q^2 (q^2+1)^2 (q^2+q+1) + 1 on A_q(8, 4; 4)."""
    return q**12 + q**2 * (q**2 + 1) ** 2 * (q**2 + q + 1) + 1


@dataclass
class SeedSet:
    """Externally claimed lower bounds, keyed by normalized (q, v, d, k)."""

    values: dict = dc_field(default_factory=dict)  # key -> (value, source)
    lambdas: dict = dc_field(default_factory=dict)  # (q, a, b, d, u) -> (value, source)

    def add(self, q: int, v: int, d: int, k: int, value: int, source: str) -> None:
        key = normalize_key(q, v, d, k)
        up, _ = upper_bound(*key)
        if value > up:
            raise SeedError(f"seed A_{q}({v},{d};{k}) >= {value} exceeds the upper bound {up}")
        if value < 1:
            raise SeedError(f"seed A_{q}({v},{d};{k}) >= {value} is not positive")
        old = self.values.get(key)
        if old is None or value > old[0]:
            self.values[key] = (value, source)

    def add_lambda(self, q: int, a: int, b: int, d: int, u: int, value: int, source: str) -> None:
        """Record a known Lambda value, e.g. from a completed clique search."""
        up = lambda_upper_bound(q, a, b, d, u)
        if not 1 <= value <= up:
            raise SeedError(f"Lambda seed ({q},{a},{b},{d},{u}) = {value} outside [1, {up}]")
        key = (q, a, b, d, u)
        old = self.lambdas.get(key)
        if old is None or value > old[0]:
            self.lambdas[key] = (value, source)

    def get(self, key) -> tuple[int, str] | None:
        return self.values.get(key)

    def merged(self, other: "SeedSet") -> "SeedSet":
        out = SeedSet(dict(self.values), dict(self.lambdas))
        for key, (val, src) in other.values.items():
            out.add(*key, val, src)
        for key, (val, src) in other.lambdas.items():
            out.add_lambda(*key, val, src)
        return out

    @classmethod
    def default(cls, q: int) -> "SeedSet":
        s = cls()
        s.add(q, 8, 4, 4, formula_seed(q), "formula q^12+q^2(q^2+1)^2(q^2+q+1)+1")
        return s

    @classmethod
    def from_json(cls, text: str) -> "SeedSet":
        obj = json.loads(text)
        s = cls()
        for item in obj.get("seeds", []):
            try:
                s.add(int(item["q"]), int(item["v"]), int(item["d"]), int(item["k"]), int(item["lower"]),
                      str(item.get("source", "")))
            except (KeyError, ValueError) as exc:
                raise SeedError(f"bad seed entry {item}: {exc}") from exc
        for item in obj.get("lambda_seeds", []):
            try:
                s.add_lambda(*(int(item[f]) for f in ("q", "a", "b", "d", "u")), int(item["value"]),
                             str(item.get("source", "")))
            except (KeyError, ValueError) as exc:
                raise SeedError(f"bad Lambda seed entry {item}: {exc}") from exc
        return s

    @classmethod
    def load(cls, path: str | Path) -> "SeedSet":
        return cls.from_json(Path(path).read_text())

    @classmethod
    def external(cls) -> "SeedSet":
        """The bundled external seed file."""
        text = resources.files("linkage.data").joinpath(EXTERNAL_SEED_FILE).read_text()
        return cls.from_json(text)

    def to_json(self) -> str:
        items = [{"q": q, "v": v, "d": d, "k": k, "lower": val, "source": src}
                 for (q, v, d, k), (val, src) in sorted(self.values.items())]
        lams = [{"q": q, "a": a, "b": b, "d": d, "u": u, "value": val, "source": src}
                for (q, a, b, d, u), (val, src) in sorted(self.lambdas.items())]
        return json.dumps({"format_version": SEED_FORMAT_VERSION, "seeds": items, "lambda_seeds": lams}, indent=2)


# ---------------------------------------------------------------------------
# construction formulas
# ---------------------------------------------------------------------------


def original_linkage_value(q: int, k: int, s: int, h: int, a_r: int, a_s: int) -> int:
    return a_r * mrd_size(q, k, s, h) + a_s


def generalized_linkage_value(q: int, k: int, s: int, h: int, a_r: int, a_st: int, lam: int) -> int:
    return a_r * mrd_size(q, k, s, h) + a_st * lam


def parallel_linkage_value(q: int, k: int, n: int, h: int, a_nk: int, lam: int) -> int:
    return mrd_size(q, k, n, h) * mrd_size(q, k, k, h) + a_nk * lam


def padded_parallel_value(q: int, k: int, s: int, h: int, a_s: int, lam: int) -> int:
    return mrd_size(q, k, s, h) + a_s * lam


def meeting_subspace_value(q: int, k: int, s: int, a_r: int, a_s: int) -> int:
    return a_r * mrd_size(q, k, s, k - 1) + a_s


@dataclass
class Term:
    """One construction's contribution to a lower bound."""

    construction: str
    params: dict
    value: int
    ingredients: dict
    plan: ConstructionPlan

    def to_dict(self) -> dict:
        return {"construction": self.construction, "params": self.params, "value": self.value,
                "ingredients": self.ingredients, "constructible": self.plan.constructible}


@dataclass
class BoundEntry:
    key: tuple[int, int, int, int]
    lower: int
    plan: ConstructionPlan
    upper: int
    upper_provenance: str

    def __post_init__(self):
        if not 1 <= self.lower <= self.upper:
            raise AssertionError(f"inconsistent bounds {self.lower} / {self.upper} at {self.key}")

    @property
    def exact(self) -> bool:
        return self.lower == self.upper

    @property
    def lower_provenance(self) -> str:
        p = self.plan
        if p.kind in ("seed", "formula"):
            return f"{p.kind}:{p.params.get('source', p.params.get('construction', ''))}"
        tail = ",".join(f"{k}={v}" for k, v in sorted(p.params.items()) if k != "source")
        return f"{p.kind}({tail})" if tail else p.kind

    def to_dict(self) -> dict:
        q, v, d, k = self.key
        return {"q": q, "v": v, "d": d, "k": k, "lower": self.lower, "upper": self.upper, "exact": self.exact,
                "provenance": self.lower_provenance, "upper_provenance": self.upper_provenance,
                "constructible": self.plan.constructible}


# ---------------------------------------------------------------------------
# the engine
# ---------------------------------------------------------------------------


class BoundsEngine:
    """Memoized best lower bounds for one field size.

    With ``constructible_only`` every value is backed by a plan that
    :func:`construct_from_plan` can build (seeds and formula-only
    constructions are ignored, rank-metric ingredients are restricted to
    ones that can be enumerated).
    """

    def __init__(self, q: int, seeds: SeedSet | None = None, constructible_only: bool = False, m_max: int = 3,
                 mrd_budget: int = MRD_ENUM_BUDGET):
        self.q = q
        self.seeds = SeedSet() if seeds is None else seeds
        self.constructible_only = constructible_only
        self.m_max = m_max
        self.mrd_budget = mrd_budget
        self._memo: dict = {}
        self._lam: dict = {}

    # -- plumbing -----------------------------------------------------------

    def lower(self, v: int, d: int, k: int) -> int:
        return self.entry(v, d, k).lower

    def plan(self, v: int, d: int, k: int) -> ConstructionPlan:
        return self.entry(v, d, k).plan

    def cdc_lower(self, q: int, v: int, d: int, k: int) -> int:
        assert q == self.q
        return self.lower(v, d, k)

    def entry(self, v: int, d: int, k: int) -> BoundEntry:
        key = (v, d, k)
        if key not in self._memo:
            self._memo[key] = self._compute(v, d, k)
        return self._memo[key]

    def _mrd_ingredient(self, a: int, b: int, h: int) -> RankIngredient:
        size = mrd_size(self.q, a, b, h)
        if min(a, b) < h or b == 0:
            return RankIngredient("zero", self.q, a, b, h, None, 1)
        kind = "mrd" if size <= self.mrd_budget else "formula"
        return RankIngredient(kind, self.q, a, b, h, None, size)

    # -- Lambda ingredients ---------------------------------------------------

    def lam(self, a: int, b: int, h: int, u: int) -> RankIngredient:
        """Best rank-restricted ingredient (a x b, distance h, ranks <= u)."""
        key = (a, b, h, u)
        if key in self._lam:
            return self._lam[key]
        q = self.q
        u = max(u, 0)
        options: list[RankIngredient] = [RankIngredient("zero", q, a, b, h, u, 1)]
        cf = lambda_closed_form(q, a, b, h, u)
        if cf is not None and cf[1] == "unrestricted_mrd":
            rmc = self._mrd_ingredient(a, b, h)
            options.append(RankIngredient(rmc.kind, q, a, b, h, u, rmc.size))
        if b >= 1 and min(a, b) >= h:
            dl = delta(q, a, b, h, u)
            enumerable = mrd_size(q, a, b, h) <= self.mrd_budget
            options.append(RankIngredient("delta_subset" if enumerable else "formula", q, a, b, h, u, dl))
        if 1 <= u <= min(a, b):
            val, arg = product_lower(q, a, b, h, u, self.cdc_lower)
            if arg is not None and val > 1:
                left, right = self.plan(a, arg[0], u), self.plan(b, arg[1], u)
                options.append(RankIngredient("product", q, a, b, h, u, val, {"left": left, "right": right}))
        if not self.constructible_only:
            best_sweep = 0
            for x, y in ((a, b), (b, a)):
                val, _ = subspace_sweep(q, x, y, h, u, self.cdc_lower)
                best_sweep = max(best_sweep, val)
            if best_sweep > 1:
                options.append(RankIngredient("formula", q, a, b, h, u, best_sweep))
            if cf is not None and cf[1] in ("all_low_rank", "spread", "exact_cdc"):
                options.append(RankIngredient("formula", q, a, b, h, u, cf[0]))
            seed = self.seeds.lambdas.get((q, a, b, h, u))
            if seed is not None:
                options.append(RankIngredient("formula", q, a, b, h, u, seed[0]))
        else:
            options = [o for o in options if o.constructible]
        best = options[0]
        for o in options[1:]:
            if o.size > best.size:
                best = o
        if best.size > lambda_upper_bound(q, a, b, h, u):
            raise AssertionError(f"Lambda ingredient above its upper bound at {(q, a, b, h, u)}")
        self._lam[key] = best
        return best

    def lam_value(self, a: int, b: int, h: int, u: int) -> int:
        return self.lam(a, b, h, u).size

    # -- per-construction terms ---------------------------------------------

    def terms(self, v: int, d: int, k: int) -> list[Term]:
        """Every construction term for a key with 2 <= d/2 <= k <= v - k."""
        q, h = self.q, d // 2
        out: list[Term] = []

        def add(name: str, params: dict, value: int, ingredients: dict, plan: ConstructionPlan) -> None:
            if self.constructible_only and not plan.constructible:
                return
            out.append(Term(name, params, value, ingredients, plan))

        if v % k == 0 and d == 2 * k:
            add("spread", {}, q_number(q, v) // q_number(q, k), {},
                ConstructionPlan("spread", q, v, d, k, q_number(q, v) // q_number(q, k)))
        m = self._mrd_ingredient(k, v - k, h)
        add("lifted_mrd", {}, m.size, {"M": m.size}, ConstructionPlan("lifted_mrd", q, v, d, k, m.size, rmcs={"M": m}))
        if v - 1 >= 2 * k:
            e = self.entry(v - 1, d, k)
            add("embed", {}, e.lower, {"C": e.lower}, ConstructionPlan("embed", q, v, d, k, e.lower, children={"C": e.plan}))

        for r in range(k, v - k + 1):
            s = v - r
            a_r = self.entry(r, d, k)
            ms = self._mrd_ingredient(k, s, h)
            # original linkage
            a_s = self.entry(s, d, k)
            val = a_r.lower * ms.size + a_s.lower
            add("original_linkage", {"r": r, "s": s}, val, {"A": a_r.lower, "M": ms.size, "B": a_s.lower},
                ConstructionPlan("linkage_original", q, v, d, k, val, {"r": r, "s": s},
                                 {"A": a_r.plan, "B": a_s.plan}, {"M": ms}))
        for r in range(k, v + 1):
            s = v - r
            ms = self._mrd_ingredient(k, s, h) if s >= 1 else None
            for t in range(0, k - h + 1):
                try:
                    check_generalized(d, k, r, s, t)
                except ConstraintError:
                    continue
                a_r = self.entry(r, d, k)
                b = self.entry(s + t, d, k)
                R = self.lam(k, r - t, h, k - h - t)
                val = a_r.lower * ms.size + b.lower * R.size
                ing = {"A": a_r.lower, "M": ms.size, "R": R.size, "B": b.lower}
                add("generalized_linkage", {"r": r, "s": s, "t": t}, val, ing,
                    ConstructionPlan("linkage_generalized", q, v, d, k, val, {"r": r, "s": s, "t": t},
                                     {"A": a_r.plan, "B": b.plan}, {"M": ms, "R": R}))
                if t == k - h:
                    val = a_r.lower * ms.size + b.lower
                    add("improved_linkage", {"r": r, "s": s, "t": t}, val, {"A": a_r.lower, "M": ms.size, "B": b.lower},
                        ConstructionPlan("linkage_improved", q, v, d, k, val, {"r": r, "s": s},
                                         {"A": a_r.plan, "B": b.plan}, {"M": ms}))
        # padded parallel: generalized with A = {I}, r = k, t = 0
        s = v - k
        if s >= k:
            b = self.entry(s, d, k)
            R = self.lam(k, k, h, k - h)
            ms = self._mrd_ingredient(k, s, h)
            val = padded_parallel_value(q, k, s, h, b.lower, R.size)
            add("padded_parallel_linkage", {"s": s}, val, {"M": ms.size, "R": R.size, "B": b.lower},
                ConstructionPlan("linkage_padded_parallel", q, v, d, k, val, {"s": s}, {"B": b.plan}, {"M": ms, "R": R}))
        # parallel linkage with the nonzero low-rank words of an MRD code as R
        n = v - 2 * k
        if n >= 0:
            b = self.entry(n + k, d, k)
            a_lift = self._mrd_ingredient(k, n, h) if n >= 1 else RankIngredient("zero", q, k, 0, h, None, 1)
            mk = self._mrd_ingredient(k, k, h)
            lam_p = delta(q, k, k, h, k - h) - 1
            enumerable = mrd_size(q, k, k, h) <= self.mrd_budget
            R = RankIngredient("delta_nonzero" if enumerable else "formula", q, k, k, h, k - h, lam_p)
            val = parallel_linkage_value(q, k, n, h, b.lower, lam_p)
            lift_plan = (ConstructionPlan("lifted_mrd", q, k + n, d, k, a_lift.size, rmcs={"M": a_lift}) if n >= 1
                         else ConstructionPlan("trivial", q, k, d, k, 1))
            add("parallel_linkage", {"n": n}, val,
                {"A": a_lift.size, "M": mk.size, "R": lam_p, "B": b.lower},
                ConstructionPlan("linkage_parallel", q, v, d, k, val, {"n": n}, {"A": lift_plan, "B": b.plan},
                                 {"M": mk, "R": R}))
        # formula-only construction for d = 2k - 2
        if d == 2 * k - 2 and k >= 3 and not self.constructible_only:
            for r in range(k, v + 1):
                s = v - r
                if not (2 * k <= r + s and h <= s and k <= s + 1):
                    continue
                a_r = self.entry(r, d, k)
                a_s = self.entry(s, 2 * k - 4, k - 1)
                val = meeting_subspace_value(q, k, s, a_r.lower, a_s.lower)
                add("meeting_subspace_formula", {"r": r, "s": s}, val,
                    {"A": a_r.lower, "M": mrd_size(q, k, s, k - 1), "B": a_s.lower},
                    ConstructionPlan("formula", q, v, d, k, val, {"construction": "meeting_subspace_formula", "r": r, "s": s}))
        for m in range(3, self.m_max + 1):
            out.extend(self._multiblock_terms(v, d, k, m, add))
        return out

    def multiblock_term(self, d: int, k: int, blocks: list[tuple[int, int]]) -> tuple[int, dict, ConstructionPlan]:
        q, h = self.q, d // 2
        check_multiblock(d, k, blocks)
        m = len(blocks)
        ns = [n for n, _ in blocks]
        ts = [t for _, t in blocks]
        v = sum(ns)
        children, rmcs = {}, {}
        Cs, Ms, Rs, Ss = [], [], [], []
        for i in range(m):
            e = self.entry(ns[i] + ts[i], d, k)
            children[f"C{i + 1}"] = e.plan
            Cs.append(e.lower)
            if i >= 1:
                rmc = self._mrd_ingredient(k, ns[i], h)
                rmcs[f"M{i + 1}"] = rmc
                Ms.append(rmc.size)
            else:
                Ms.append(1)
            if i <= m - 3:
                rmc = self.lam(k, ns[i], h, k - h)
                rmcs[f"R{i + 1}"] = rmc
                Rs.append(rmc.size)
            else:
                Rs.append(1)
            if i <= m - 2:
                rmc = self.lam(k, ns[i] - ts[i + 1], h, k - h - ts[i + 1])
                rmcs[f"S{i + 1}"] = rmc
                Ss.append(rmc.size)
            else:
                Ss.append(1)
        from .construct import multiblock_size

        val = multiblock_size(Cs, Ms, Rs, Ss)
        ing = {"C": Cs, "M": Ms[1:], "R": Rs[:max(0, m - 2)], "S": Ss[:m - 1]}
        plan = ConstructionPlan("linkage_multiblock", q, v, d, k, val, {"blocks": [list(b) for b in blocks]},
                                children, rmcs)
        return val, ing, plan

    def _multiblock_terms(self, v: int, d: int, k: int, m: int, add) -> list[Term]:
        h = d // 2
        for ns in _compositions(v, m):
            t_ranges = [range(0, 1)] + [range(0, min(k - h, ns[i - 1]) + 1) for i in range(1, m)]
            for ts in itertools.product(*t_ranges):
                blocks = list(zip(ns, ts))
                try:
                    check_multiblock(d, k, blocks)
                except ConstraintError:
                    continue
                val, ing, plan = self.multiblock_term(d, k, blocks)
                add("multiblock_linkage", {"blocks": [list(b) for b in blocks]}, val, ing, plan)
        return []

    # -- the recursion --------------------------------------------------------

    def _compute(self, v: int, d: int, k: int) -> BoundEntry:
        q = self.q
        forced = _forced(q, v, d, k)
        up, up_src = upper_bound(q, v, d, k)
        if forced is not None:
            plan = ConstructionPlan("trivial", q, v, d, k, forced)
            return BoundEntry((q, v, d, k), max(forced, 1), plan, max(up, 1), up_src)
        if 2 * k > v:
            inner = self.entry(v, d, v - k)
            plan = ConstructionPlan("complement", q, v, d, k, inner.lower, children={"C": inner.plan})
            return BoundEntry((q, v, d, k), inner.lower, plan, inner.upper, inner.upper_provenance)
        best = Term("trivial", {}, 1, {}, ConstructionPlan("trivial", q, v, d, k, 1))
        for term in self.terms(v, d, k):
            if term.value > best.value:
                best = term
        plan = best.plan
        lower = best.value
        if not self.constructible_only:
            seed = self.seeds.get((q, v, d, k))
            if seed is not None and seed[0] > lower:
                lower = seed[0]
                plan = ConstructionPlan("seed", q, v, d, k, lower, {"source": seed[1]})
        if lower > up:
            raise AssertionError(f"lower bound {lower} exceeds upper bound {up} at {(q, v, d, k)}")
        return BoundEntry((q, v, d, k), lower, plan, up, up_src)


def _compositions(v: int, m: int):
    for cuts in itertools.combinations(range(1, v), m - 1):
        bounds = (0,) + cuts + (v,)
        yield [bounds[i + 1] - bounds[i] for i in range(m)]


@lru_cache(maxsize=None)
def default_engine(q: int) -> BoundsEngine:
    return BoundsEngine(q, SeedSet.default(q))


def cdc_lower_value(q: int, v: int, d: int, k: int) -> int:
    """Best lower bound on A_q(v, d; k) with the default seeds."""
    return default_engine(q).lower(v, d, k)


# ---------------------------------------------------------------------------
# tables and comparisons
# ---------------------------------------------------------------------------


def compute_table(q: int, d: int, k: int, v_max: int, seeds: SeedSet | None = None,
                  constructible_only: bool = False, m_max: int = 3) -> list[BoundEntry]:
    """Entries for v = 2k .. v_max (smaller v are forced values)."""
    if seeds is None:
        seeds = SeedSet.default(q)
    eng = BoundsEngine(q, seeds, constructible_only, m_max)
    return [eng.entry(v, d, k) for v in range(max(1, k), v_max + 1)]


def table_to_json(entries: list[BoundEntry]) -> str:
    return json.dumps({"format_version": 1, "entries": [e.to_dict() for e in entries]}, indent=2)


def table_to_csv(entries: list[BoundEntry]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["q", "v", "d", "k", "lower", "upper", "exact", "provenance"])
    for e in entries:
        q, v, d, k = e.key
        w.writerow([q, v, d, k, e.lower, e.upper, str(e.exact).lower(), e.lower_provenance])
    return buf.getvalue()


def compare_constructions(q: int, v: int, d: int, k: int, seeds: SeedSet | None = None,
                          m_max: int = 3) -> dict:
    """Per-construction, per-split breakdown for one key."""
    if seeds is None:
        seeds = SeedSet.default(q)
    eng = BoundsEngine(q, seeds, m_max=m_max)
    key = normalize_key(q, v, d, k)
    terms = eng.terms(key[1], key[2], key[3])
    by: dict[str, list] = {}
    for t in terms:
        by.setdefault(t.construction, []).append(t.to_dict())
    best = {name: max(rows, key=lambda r: r["value"]) for name, rows in by.items()}
    entry = eng.entry(*key[1:])
    return {
        "format_version": 1,
        "key": {"q": q, "v": v, "d": d, "k": k},
        "normalized_k": key[3],
        "constructions": by,
        "best_per_construction": best,
        "lower": entry.lower,
        "provenance": entry.lower_provenance,
        "upper": entry.upper,
        "exact": entry.exact,
    }
