import itertools
import math

import numpy as np
import pytest

from nbldpc.code import TannerGraph, enumerate_spc_codewords, local_spc, syndrome
from nbldpc.minsum import decode, hard_decision, init_messages, ms_cn_update, ms_vn_update
from nbldpc.oracle import brute_best_codeword


class TestVnUpdate:
    def test_first_iteration_is_channel(self, toy_graph):
        rng = np.random.default_rng(0)
        llr = rng.normal(size=(3, 3))
        state = init_messages(toy_graph, llr)
        out = ms_vn_update(state, llr, 1)
        for row in out:
            np.testing.assert_allclose(row, llr[1])  # zero incoming: channel only

    def test_relative_costs_unchanged_by_common_shift(self, toy_graph):
        llr = np.zeros((3, 3))
        llr[1] = [1.0, 2.0, 3.0]
        state = init_messages(toy_graph, llr)
        out = ms_vn_update(state, llr, 1)
        assert out[0].tolist() == [1.0, 2.0, 3.0]

    def test_matches_independent_recomputation(self, lifted_24):
        rng = np.random.default_rng(1)
        g = lifted_24
        llr = rng.normal(size=(g.n, 3))
        state = init_messages(g, llr)
        state.cn_to_vn[:] = rng.normal(size=state.cn_to_vn.shape)
        i = 5
        out = ms_vn_update(state, llr, i)
        for k, j in enumerate(g.col_support[i]):
            want = llr[i].copy()
            for jj in g.col_support[i]:
                if jj != j:
                    want += state.cn_to_vn[g.edge_index[(jj, i)]]
            np.testing.assert_array_equal(out[k], want)


class TestCnUpdate:
    def test_degree_two_forwards_partner_symbol(self):
        g = TannerGraph(2, 1, 4, [(0, 0, 1), (0, 1, 1)])
        rng = np.random.default_rng(2)
        llr = rng.normal(size=(2, 3))
        state = init_messages(g, llr)
        ms_cn_update(state, j=0)
        e0, e1 = g.edge_index[(0, 0)], g.edge_index[(0, 1)]
        inc1 = np.concatenate(([0.0], state.vn_to_cn[e1]))
        for a in (1, 2, 3):
            assert state.cn_to_vn[e0][a - 1] == pytest.approx(inc1[(4 - a) % 4])

    def test_all_zero_in_all_zero_out(self, lifted_24):
        state = init_messages(lifted_24, np.zeros((lifted_24.n, 3)))
        for j in range(lifted_24.m):
            ms_cn_update(state, j=j)
        assert not state.cn_to_vn.any()

    def test_matches_enumeration_oracle(self, lifted_24):
        rng = np.random.default_rng(3)
        g = lifted_24
        llr = rng.normal(size=(g.n, 3))
        state = init_messages(g, llr)
        state.vn_to_cn[:] = rng.normal(size=state.vn_to_cn.shape)
        j = 4
        out = ms_cn_update(state, j=j)
        code = local_spc(g, j)
        d = len(code)
        ids = g.row_edge_ids[j]
        inc = np.zeros((d, 4))
        inc[:, 1:] = state.vn_to_cn[ids]
        want = np.full((d, 4), np.inf)
        for w in enumerate_spc_codewords(code):
            cost = sum(inc[t, w[t]] for t in range(d))
            for t in range(d):
                want[t, w[t]] = min(want[t, w[t]], cost - inc[t, w[t]])
        rel = want[:, 1:] - want[:, :1]
        np.testing.assert_allclose(out, rel, atol=1e-12)

    def test_extrinsic_property(self, lifted_24):
        rng = np.random.default_rng(4)
        g = lifted_24
        state = init_messages(g, rng.normal(size=(g.n, 3)))
        state.vn_to_cn[:] = rng.normal(size=state.vn_to_cn.shape)
        j = 2
        t = 3  # local position within the row
        e = g.row_edge_ids[j][t]
        before = ms_cn_update(state, j=j)[t].copy()
        state.vn_to_cn[e] += rng.normal(size=3) * 10
        after = ms_cn_update(state, j=j)[t]
        np.testing.assert_array_equal(before, after)


class TestDecode:
    def test_noiseless_all_zero(self, lifted_24):
        llr = np.full((lifted_24.n, 3), 30.0)
        result = decode(lifted_24, llr, max_iterations=64)
        assert result.converged
        assert result.iterations_used <= 1
        assert not result.word.any()

    def test_no_convergence_hits_cap(self, lifted_24):
        rng = np.random.default_rng(0)
        costs = rng.normal(size=(lifted_24.n, 3))
        result = decode(lifted_24, costs, max_iterations=8)
        assert not result.converged
        assert result.iterations_used == 8

    def test_single_check_matches_exhaustive(self):
        g = TannerGraph(3, 1, 4, [(0, 0, 1), (0, 1, 3), (0, 2, 1)])
        rng = np.random.default_rng(5)
        agree = ran = 0
        for _ in range(50):
            llr = rng.normal(size=(3, 3)) * 2
            result = decode(g, llr, max_iterations=16)
            if not result.converged:
                continue
            ran += 1
            table = np.concatenate([np.zeros((3, 1)), llr], axis=1)
            best = brute_best_codeword(g, table)
            agree += int(result.word.tolist() == best.tolist())
        assert ran > 30 and agree == ran

    def test_scale_invariance_of_decisions(self, lifted_24):
        rng = np.random.default_rng(6)
        costs = rng.normal(size=(lifted_24.n, 3))
        a = decode(lifted_24, costs, max_iterations=10)
        b = decode(lifted_24, 2.5 * costs, max_iterations=10)
        assert a.word.tolist() == b.word.tolist()
        assert a.iterations_used == b.iterations_used

    def test_converged_iff_zero_syndrome(self, lifted_24):
        for seed in range(6):
            costs = np.random.default_rng(seed).normal(size=(lifted_24.n, 3))
            result = decode(lifted_24, costs, max_iterations=12)
            assert result.converged == (not syndrome(result.word, lifted_24).any())

    def test_corrects_moderate_noise(self, lifted_96):
        from nbldpc import channel

        sigma = channel.ebn0_to_sigma(5.0, 0.5, 2.0)
        cfg = channel.ChannelConfig(noise_sigma=sigma)
        sent = np.zeros(lifted_96.n, dtype=int)
        tx = channel.modulate(sent, cfg)
        ok = 0
        for f in range(20):
            rng = np.random.default_rng(100 + f)
            costs = channel.llr(channel.add_noise(tx, cfg, rng), cfg)
            result = decode(lifted_96, costs, max_iterations=64)
            ok += int(not result.word.any())
        assert ok >= 19


class TestHardDecision:
    def test_tie_breaks_to_smallest(self, toy_graph):
        state = init_messages(toy_graph, np.zeros((3, 3)))
        assert hard_decision(state, np.zeros((3, 3))).tolist() == [0, 0, 0]
