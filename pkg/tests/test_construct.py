import numpy as np
import pytest
from hypothesis import given, strategies as st

from linkage.bounds import BoundsEngine
from linkage.codes import CDCCode, RankCode
from linkage.construct import (
    ConstraintError,
    ConstructionPlan,
    NotConstructible,
    all_subspaces,
    build_rmc,
    build_spread,
    check_generalized,
    check_multiblock,
    complement,
    construct_from_plan,
    construct_generalized_linkage,
    construct_improved_linkage,
    construct_padded_parallel,
    construct_parallel_linkage,
    embed,
    lift_rmc,
    lifted_mrd,
    multiblock_size,
    single_subspace,
)
from linkage.field import get_field
from linkage.metrics import verify_cdc
from linkage.qcount import q_binomial
from linkage.rankcodes import build_linear_mrd, delta_subset


@pytest.mark.parametrize("q,v,k", [(2, 4, 2), (2, 6, 2), (2, 6, 3), (3, 4, 2), (4, 4, 2), (2, 8, 4), (3, 6, 3), (9, 4, 2)])
def test_spreads(q, v, k):
    code = build_spread(q, v, k)
    assert len(code) == (q**v - 1) // (q**k - 1)
    assert verify_cdc(code).certified
    # a spread covers every nonzero vector exactly once
    assert len(code) * (q**k - 1) == q**v - 1


def test_spread_requires_divisibility():
    with pytest.raises(ConstraintError):
        build_spread(2, 5, 2)


def test_lift_complement_embed():
    f = get_field(2)
    mrd = build_linear_mrd(2, 3, 3, 2).to_rank_code()
    lifted = lift_rmc(mrd)
    assert (lifted.v, lifted.k, lifted.d, len(lifted)) == (6, 3, 4, 64)
    assert verify_cdc(lifted).certified
    comp = complement(lifted)
    assert comp.k == 3 and verify_cdc(comp).certified
    big = embed(lifted, 8)
    assert big.v == 8 and verify_cdc(big).certified
    assert len(all_subspaces(2, 4, 2)) == q_binomial(2, 4, 2)
    assert len(single_subspace(2, 5, 2, 4)) == 1
    assert f.q == 2


def test_generalized_linkage_265():
    q, d, k, r, s, t = 2, 4, 3, 3, 4, 1
    A = single_subspace(q, 3, 3, d)
    M = build_linear_mrd(q, 3, 4, 2).to_rank_code()
    R = RankCode.zero(get_field(q), 3, 2, 2)
    # a (5, 9, 4; 3) code: duals of a (5, 9, 4; 2) code
    small = construct_from_plan(BoundsEngine(q, constructible_only=True).plan(5, 4, 2))
    B = complement(small)
    B.d = 4
    code = construct_generalized_linkage(q, d, k, r, s, t, A, B, M, R)
    assert len(code) == q**8 + q**3 + 1 == 265
    rep = verify_cdc(code)
    assert rep.certified and rep.min_distance_observed == 4


def test_generalized_linkage_71():
    q = 2
    eng = BoundsEngine(q, constructible_only=True)
    A = single_subspace(q, 4, 3, 4)
    B = single_subspace(q, 3, 3, 4)
    M = build_linear_mrd(q, 3, 3, 2).to_rank_code()
    rmc = eng.lam(3, 4, 2, 1)  # rank-one words from two point sets
    assert rmc.kind == "product" and rmc.size == 7
    R = build_rmc(rmc)
    assert len(delta_subset(build_linear_mrd(q, 3, 4, 2), 1)) == 1
    code = construct_generalized_linkage(q, 4, 3, 4, 3, 0, A, B, M, R)
    assert len(code) == q**6 + q**2 + q + 1
    assert verify_cdc(code).certified
    assert eng.lower(7, 4, 3) == 265


@pytest.mark.parametrize("args,violated", [
    ((4, 3, 2, 4, 0), "k <= r"),
    ((4, 3, 3, 2, 0), "k <= (r+s)/2"),
    ((4, 3, 3, 4, 2), "t <= k-d/2"),
    ((4, 3, 3, 4, -1), "0 <= t"),
    ((8, 3, 3, 4, 0), "d/2 <= k"),
    ((2, 3, 3, 4, 0), "2 <= d/2"),
])
def test_constraint_messages_name_the_inequality(args, violated):
    with pytest.raises(ConstraintError, match=f"constraint violated: {violated.replace('(', '[(]').replace(')', '[)]').replace('+', '[+]')}"):
        check_generalized(*args)


def test_multiblock_constraints():
    with pytest.raises(ConstraintError, match="t_1 = 0"):
        check_multiblock(4, 3, [(3, 1), (3, 0), (3, 0)])
    with pytest.raises(ConstraintError, match="t_i <= k-d/2"):
        check_multiblock(4, 3, [(3, 0), (3, 2), (3, 0)])
    check_multiblock(4, 3, [(3, 0), (3, 1), (3, 1)])


def test_multiblock_size_formula():
    # C = (1,1,1), M_2 = M_3 = 64, R_1 = 7, S_1 = S_2 = 1
    assert multiblock_size([1, 1, 1], [1, 64, 64], [7, 1, 1], [1, 1, 1]) == 4096 + 64 + 7
    assert multiblock_size([5, 3], [1, 4], [1, 1], [2, 1]) == 5 * 4 + 3 * 2


def test_multiblock_sampled_larger_instance():
    eng = BoundsEngine(2, constructible_only=True)
    val, _, plan = eng.multiblock_term(4, 3, [(3, 0), (4, 1), (4, 1)])
    code = construct_from_plan(plan)
    assert len(code) == val == 67903
    assert verify_cdc(code, mode="sampled", n_pairs=200_000, seed=5).ok


def test_improved_and_padded_and_parallel_small():
    q, d, k = 2, 4, 2
    eng = BoundsEngine(q, constructible_only=True)
    A = construct_from_plan(eng.plan(4, 4, 2))
    B = construct_from_plan(eng.plan(2, 4, 2))
    M = build_linear_mrd(q, 2, 2, 2).to_rank_code()
    code = construct_improved_linkage(q, d, k, 4, 2, A, B, M)
    assert len(code) == 5 * 4 + 1 and verify_cdc(code).certified
    R = RankCode.zero(get_field(q), 2, 2, 2)
    M3 = build_linear_mrd(q, 2, 3, 2).to_rank_code()
    Bs = construct_from_plan(eng.plan(3, 4, 2))
    pad = construct_padded_parallel(q, d, k, 3, Bs, M3, R)
    assert len(pad) == 8 + 1 and verify_cdc(pad).certified
    lift = lifted_mrd(q, 2, 1, 4)
    par = construct_parallel_linkage(q, d, k, 1, lift, Bs, M, R)
    assert len(par) == 1 * 4 + 1 and verify_cdc(par).certified
    with pytest.raises(ValueError, match="lifted"):
        not_lifted = CDCCode.from_bases(get_field(q), 3, 2, 4, [[[0, 1, 0], [0, 0, 1]]])
        construct_parallel_linkage(q, d, k, 1, not_lifted, Bs, M, R)


@pytest.mark.parametrize("q,v,d,k", [(2, 6, 4, 3), (2, 7, 4, 2), (3, 6, 4, 3), (2, 8, 6, 3), (2, 6, 4, 4), (2, 7, 4, 4),
                                     (4, 5, 4, 2), (2, 10, 6, 3)])
def test_every_engine_plan_builds_and_verifies(q, v, d, k):
    eng = BoundsEngine(q, constructible_only=True)
    plan = eng.plan(v, d, k)
    code = construct_from_plan(plan)
    assert len(code) == plan.predicted == eng.lower(v, d, k)
    rep = verify_cdc(code) if len(code) <= 3000 else verify_cdc(code, mode="sampled", n_pairs=100_000)
    assert rep.ok


def test_plan_json_round_trip_and_formula_nodes():
    eng = BoundsEngine(2, constructible_only=True)
    plan = eng.plan(9, 4, 3)
    again = ConstructionPlan.from_json(plan.to_json())
    assert again == plan and again.to_json() == plan.to_json()
    bound_only = BoundsEngine(2).plan(7, 4, 3)
    assert not bound_only.constructible
    with pytest.raises(NotConstructible):
        construct_from_plan(bound_only)


@given(st.integers(0, 2**32 - 1))
def test_random_lifted_subcodes(seed):
    rng = np.random.default_rng(seed)
    q = int(rng.choice([2, 3]))
    mrd = build_linear_mrd(q, 2, 3, 2).to_rank_code()
    pick = rng.choice(len(mrd), size=int(rng.integers(2, 8)), replace=False)
    sub = RankCode(mrd.field, 2, 3, 2, mrd.words[pick])
    assert verify_cdc(lift_rmc(sub)).certified
