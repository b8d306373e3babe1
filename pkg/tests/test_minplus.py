import numpy as np
import pytest
from hypothesis import given, strategies as st

from dyckedit.minplus import (BDMatrix, MinPlusParams, ProductStats, classify_triples,
                              is_column_bd, is_row_bd, minplus_bd, minplus_small_entries,
                              phase1_block_approx, phase2_sampled_products, phase3_complete)
from dyckedit.oracle import INF, minplus_naive

from helpers import bd_pair, harvested_pair


def test_small_entries_examples():
    assert minplus_small_entries([[0]], [[0]], 0).tolist() == [[0]]
    A = np.array([[INF, INF], [1, -2]])
    B = np.array([[0, 3], [2, INF]])
    out = minplus_small_entries(A, B, 3)
    assert out[0].tolist() == [INF, INF]
    assert out.tolist() == minplus_naive(A, B).tolist()
    rng = np.random.default_rng(0)
    A = rng.integers(-10, 11, (8, 4))
    B = rng.integers(-10, 11, (4, 8))
    assert np.array_equal(minplus_small_entries(A, B, 10), minplus_naive(A, B))
    with pytest.raises(ValueError):
        minplus_small_entries([[11]], [[0]], 10)
    with pytest.raises(ValueError):
        minplus_small_entries([[0, 0]], [[0]], 1)


@given(st.integers(1, 6), st.integers(1, 6), st.integers(1, 6), st.integers(0, 6), st.data())
def test_small_entries_both_encodings(n, s, m, R, data):
    vals = st.one_of(st.integers(-R, R), st.just(INF))
    A = np.array(data.draw(st.lists(st.lists(vals, min_size=s, max_size=s), min_size=n, max_size=n)))
    B = np.array(data.draw(st.lists(st.lists(vals, min_size=m, max_size=m), min_size=s, max_size=s)))
    want = minplus_naive(A, B)
    assert np.array_equal(minplus_small_entries(A, B, R), want)
    assert np.array_equal(minplus_small_entries(A, B, R, method="bigint"), want)


def test_bd_flags():
    rng = np.random.default_rng(1)
    A, B = bd_pair(rng, 10, 3, 12)
    assert is_column_bd(A) and is_row_bd(B)
    m = BDMatrix.of(A)
    assert m.column_bd and m.rows == 10 and m.cols == 3
    assert not is_column_bd([[0], [2]]) and is_row_bd([[0], [2]])
    assert not is_column_bd([[0], [INF]])


def test_phase1_examples():
    rng = np.random.default_rng(2)
    A, B = bd_pair(rng, 20, 5, 17)
    C = minplus_naive(A, B)
    assert np.array_equal(phase1_block_approx(A, B, 1), C)
    whole = phase1_block_approx(A, B, 20)
    assert np.all(whole == C[-1, -1])
    for delta in (2, 4, 7):
        Ct = phase1_block_approx(A, B, delta)
        assert np.abs(Ct - C).max() <= 2 * delta
        # block representatives carry exact values
        reps_i = np.arange(delta - 1, 20, delta)
        reps_j = np.arange(delta - 1, 17, delta)
        assert np.array_equal(Ct[np.ix_(reps_i, reps_j)], C[np.ix_(reps_i, reps_j)])


def test_phase2_no_rounds():
    rng = np.random.default_rng(3)
    A, B = bd_pair(rng, 12, 3, 12)
    Ct = phase1_block_approx(A, B, 4)
    Chat, state = phase2_sampled_products(A, B, Ct, 0, 4)
    assert np.all(Chat == INF) and state.pivots == [] and state.survivors == []


def test_phase2_covers_constant_instance():
    A = np.full((16, 4), 3)
    B = np.full((4, 16), -1)
    Ct = phase1_block_approx(A, B, 4)
    Chat, _ = phase2_sampled_products(A, B, Ct, 1, 4, "random", 0)
    assert np.array_equal(Chat, minplus_naive(A, B))


@pytest.mark.parametrize("strategy", ["random", "greedy"])
def test_phase2_upper_bound_and_covered_equality(strategy):
    rng = np.random.default_rng(4)
    for seed in range(5):
        A, B = bd_pair(rng, 64, 8, 64, spread=200)
        C = minplus_naive(A, B)
        d = 4
        Ct = phase1_block_approx(A, B, d)
        Chat, state = phase2_sampled_products(A, B, Ct, 8, d, strategy, seed)
        assert np.all(Chat >= C)
        covered = np.zeros(C.shape, bool)
        for (pi, pj), surv in zip(state.pivots, state.survivors):
            Ar = A[:, surv] + B[surv, pj][None, :] - Ct[:, pj][:, None]
            Br = B[surv] - B[surv, pj][:, None] + Ct[pi, pj] - Ct[pi, :][None, :]
            ok = (np.abs(Ar)[:, :, None] <= 48 * d) & (np.abs(Br)[None, :, :] <= 48 * d)
            tight = (A[:, surv][:, :, None] + B[surv][None, :, :]) == C[:, None, :]
            covered |= (ok & tight).any(axis=1)
        assert np.array_equal(Chat[covered], C[covered])


def test_phase3_repairs_everything_left():
    # V-shaped ramps: inner index l wins near position 40 l, so one pivot cannot see them all
    pos = np.arange(200)
    A = np.abs(pos[:, None] - 40 * np.arange(6)[None, :])
    B = np.ascontiguousarray(A.T)
    C = minplus_naive(A, B)
    Ct = phase1_block_approx(A, B, 1)
    # with no sampling rounds every relevant triple is uncovered and phase 3 does all the work
    Chat, state = phase2_sampled_products(A, B, Ct, 0, 1)
    assert np.array_equal(phase3_complete(A, B, Ct, Chat, state), C)
    # one narrow round leaves entries wrong after phase 2
    Chat, state = phase2_sampled_products(A, B, Ct, 1, 1, "random", 3)
    assert np.any(Chat != C)
    assert np.array_equal(phase3_complete(A, B, Ct, Chat, state), C)


def test_phase3_leaves_exact_input_alone():
    A = np.full((8, 2), 1)
    B = np.full((2, 8), 1)
    Ct = phase1_block_approx(A, B, 4)
    Chat, state = phase2_sampled_products(A, B, Ct, 2, 4, "greedy")
    assert np.array_equal(Chat, minplus_naive(A, B))
    assert np.array_equal(phase3_complete(A, B, Ct, Chat, state), Chat)


def test_minplus_bd_examples():
    assert np.array_equal(minplus_bd(np.zeros((5, 1)), np.zeros((1, 7))), np.zeros((5, 7)))
    ramp_a = np.add.outer(np.arange(16), np.arange(4)) % 3
    A = np.cumsum(np.ones((16, 4), int), axis=0) - ramp_a[0]
    B = np.cumsum(np.ones((4, 16), int), axis=1)
    assert np.array_equal(minplus_bd(A, B, MinPlusParams(2, 2)), minplus_naive(A, B))
    rng = np.random.default_rng(6)
    A, B = harvested_pair(rng, 40)
    assert np.array_equal(minplus_bd(A, B), minplus_naive(A, B))
    with pytest.raises(ValueError):
        minplus_bd([[0, INF]], [[0], [0]])
    with pytest.raises(ValueError):
        minplus_bd(np.zeros((2, 2)), np.zeros((3, 2)))
    with pytest.raises(ValueError):
        MinPlusParams(strategy="best").resolve(4)


@given(st.integers(1, 40), st.integers(1, 11), st.integers(1, 40), st.integers(1, 6),
       st.integers(0, 4), st.sampled_from(["random", "greedy"]), st.integers(0, 2 ** 31))
def test_minplus_bd_exact_and_fully_bd(n, s, m, delta, rho, strategy, seed):
    rng = np.random.default_rng(seed)
    A, B = bd_pair(rng, n, s, m, spread=int(rng.integers(0, 300)))
    stats = ProductStats()
    out = minplus_bd(A, B, MinPlusParams(delta, rho, strategy, seed), stats)
    assert np.array_equal(out, minplus_naive(A, B))
    assert is_column_bd(out) and is_row_bd(out)
    assert stats.calls == 1


def test_reproducible_state():
    rng = np.random.default_rng(7)
    A, B = bd_pair(rng, 50, 7, 50, spread=150)
    Ct = phase1_block_approx(A, B, 3)
    for strategy in ("random", "greedy"):
        c1, s1 = phase2_sampled_products(A, B, Ct, 5, 3, strategy, 42)
        c2, s2 = phase2_sampled_products(A, B, Ct, 5, 3, strategy, 42)
        assert np.array_equal(c1, c2) and s1.pivots == s2.pivots
        assert all(np.array_equal(x, y) for x, y in zip(s1.survivors, s2.survivors))
        assert all((p + 1) % 3 == 0 and (q + 1) % 3 == 0 for p, q in s1.pivots)


def test_greedy_gain_does_not_increase():
    rng = np.random.default_rng(8)
    A, B = bd_pair(rng, 64, 8, 64, spread=300)
    Ct = phase1_block_approx(A, B, 2)
    _, state = phase2_sampled_products(A, B, Ct, 6, 2, "greedy")
    assert state.greedy_gain[0] > 0
    assert all(x >= y for x, y in zip(state.greedy_gain, state.greedy_gain[1:]))


def test_clamp_hierarchy():
    rng = np.random.default_rng(9)
    for it in range(60):
        n, s, m = (int(x) for x in rng.integers(1, 30, 3))
        A, B = bd_pair(rng, n, min(s, 6), m, spread=int(rng.integers(0, 400)))
        d = int(rng.integers(1, 4))
        Ct = phase1_block_approx(A, B, d)
        _, state = phase2_sampled_products(A, B, Ct, 3, d, ("random", "greedy")[it % 2], it)
        c = classify_triples(A, B, state)
        for strong, approx, weak in (("strong_rel", "approx_rel", "weak_rel"),
                                     ("strong_unc", "approx_unc", "weak_unc")):
            assert not np.any(c[strong] & ~c[approx])
            assert not np.any(c[approx] & ~c[weak])
