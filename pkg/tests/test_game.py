from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from kvisloc.errors import CapacityError, ContractError, ParameterError
from kvisloc.game import (
    STAR,
    GameConfig,
    Mode,
    ScheduleStrategy,
    Strategy,
    TableStrategy,
    class_of,
    exact_number,
    localization_number,
    proximity_survivors,
    signature,
    signature_partition,
    simulate_proximity,
    solve_game,
    split,
    spread,
    verify_strategy,
)
from kvisloc.graph import bits, cycle, graph_metrics, grid, path, spider, star

from conftest import connected_graphs, mask


class TestSemantics:
    def test_partition_single_probe(self):
        g = path(5)
        parts = signature_partition(g.dm, g.full, [2], 1)
        assert parts == {(0,): mask(2), (1,): mask(1, 3), (STAR,): mask(0, 4)}

    def test_partition_resolving_pair(self):
        g = path(5)
        parts = signature_partition(g.dm, g.full, [1, 3], 1)
        assert len(parts) == 5 and all(bin(c).count("1") == 1 for c in parts.values())

    def test_partition_trivial(self):
        g = path(3)
        assert signature_partition(g.dm, mask(1), [1], 2) == {(0,): mask(1)}

    def test_partition_needs_probes(self):
        with pytest.raises(ParameterError):
            signature_partition(path(3).dm, 1, [], 1)

    def test_survivors(self):
        g = path(5)
        assert proximity_survivors(g.dm, g.full, [1], 1) == mask(3, 4)
        assert proximity_survivors(g.dm, mask(0, 1), [0], 1) == 0

    def test_survivors_grid_corners(self):
        g = grid(3)
        left = proximity_survivors(g.dm, g.full, [g.index_of((2, 2))], 1)
        assert {g.labels[v] for v in bits(left)} == {(1, 1), (1, 3), (3, 1), (3, 3)}

    def test_spread(self):
        assert spread(path(5), mask(3, 4)) == mask(2, 3, 4)
        assert spread(path(5), 0) == 0
        assert bin(spread(cycle(4), mask(0))).count("1") == 3

    @settings(max_examples=200, deadline=None)
    @given(st.integers(0, len(connected_graphs(7)) - 1), st.integers(0, 2**31), st.integers(0, 3))
    def test_partition_properties(self, gi, seed, k):
        g = connected_graphs(7)[gi]
        rng = random.Random(seed)
        S = rng.randrange(1, 1 << g.n)
        P = sorted(rng.sample(range(g.n), rng.randint(1, min(3, g.n))))
        parts = signature_partition(g.dm, S, P, k)
        union = 0
        for sig, C in parts.items():
            assert union & C == 0
            union |= C
            assert class_of(g.dm, S, P, sig, k) == C
            assert all(signature(g.dm, v, P, k) == sig for v in bits(C))
        assert union == S
        assert parts.get((STAR,) * len(P), 0) == proximity_survivors(g.dm, S, P, k)
        assert sorted(split(S, P, g.dm.rings(k))) == sorted(parts.values())
        # spread via byte tables agrees with the direct union
        direct = 0
        for v in bits(S):
            direct |= g.closed_nbr[v]
        assert g.spread(S) == direct


class TestSolver:
    def test_c4(self):
        assert not solve_game(cycle(4), GameConfig(1, 1, Mode.LOCALIZATION)).cop_win

    def test_star(self):
        assert solve_game(star(5), GameConfig(1, 1, Mode.LOCALIZATION)).cop_win

    def test_c4_zero_visibility(self):
        assert not solve_game(cycle(4), GameConfig(0, 2, Mode.PROXIMITY)).cop_win
        assert solve_game(cycle(4), GameConfig(0, 3, Mode.PROXIMITY)).cop_win

    def test_exact_examples(self):
        assert exact_number(path(7), 1, "prox") == 1
        assert exact_number(spider((2, 2, 2)), 2, "loc") == 1
        assert exact_number(grid(2), 0, "loc") == 3

    def test_capacity(self):
        with pytest.raises(CapacityError) as exc:
            solve_game(path(19), GameConfig(1, 1, Mode.LOCALIZATION))
        assert exc.value.limit == 18
        with pytest.raises(CapacityError):
            exact_number(path(25), 1, Mode.PROXIMITY)
        assert exact_number(path(19), 1, Mode.LOCALIZATION, max_n=19) == 1

    def test_config_validation(self):
        with pytest.raises(ParameterError):
            GameConfig(-1, 1)
        with pytest.raises(ParameterError):
            GameConfig(1, 0)
        with pytest.raises(ParameterError):
            GameConfig(1, 1, "chess")
        with pytest.raises(ParameterError):
            GameConfig(1, 1, round_bound=0)

    def test_extracted_table_wins(self):
        for g, k in ((star(5), 1), (path(6), 1), (spider((1, 2, 2)), 2)):
            res = solve_game(g, GameConfig(k, 1, Mode.LOCALIZATION))
            s = TableStrategy(g, k, res.table, 1)
            assert verify_strategy(g, GameConfig(k, 1, Mode.LOCALIZATION), s).captured

    def test_extracted_schedule_wins(self):
        g = path(7)
        res = solve_game(g, GameConfig(1, 1, Mode.PROXIMITY))
        cleared, rounds, _ = simulate_proximity(g, 1, res.schedule)
        assert cleared and rounds == res.rounds

    def test_json_shape(self):
        out = solve_game(star(3), GameConfig(1, 1, Mode.LOCALIZATION)).to_json()
        assert set(out) >= {"game", "k", "m", "cop_win", "states_explored", "witness"}

    def test_visibility_dominates_unlimited(self):
        for g in connected_graphs(5):
            z = localization_number(g)
            for k in range(3):
                assert exact_number(g, k, "loc") >= z


class _Silent(Strategy):
    name = "silent"

    def probes(self, state):
        return ()


class _Coin(Strategy):
    """Not a function of its history: flips on every call."""

    def __init__(self, g):
        super().__init__(g, 1, 1)
        self.flip = False

    def probes(self, state):
        self.flip = not self.flip
        return (0,) if self.flip else (1,)


class TestVerifier:
    def test_silent_loses(self):
        g = path(3)
        res = verify_strategy(g, GameConfig(1, 1, round_bound=20), _Silent(g, 1, 1))
        assert not res.captured and res.reason

    def test_nondeterminism_detected(self):
        g = path(6)
        with pytest.raises(ContractError):
            verify_strategy(g, GameConfig(1, 1), _Coin(g))

    def test_mode_mismatch(self):
        g = path(3)
        with pytest.raises(ParameterError):
            verify_strategy(g, GameConfig(1, 1, Mode.PROXIMITY), _Silent(g, 1, 1))

    def test_too_many_probes(self):
        g = path(4)
        s = TableStrategy(g, 1, {g.full: (0, 1)}, 2)
        with pytest.raises(ContractError):
            verify_strategy(g, GameConfig(1, 1), s)

    def test_proximity_schedule(self):
        g = path(7)
        s = ScheduleStrategy(g, 1, [(1,), (3,), (5,)])
        assert verify_strategy(g, GameConfig(1, 1, Mode.PROXIMITY), s).captured
        bad = ScheduleStrategy(g, 1, [(3,)], cyclic=True)
        res = verify_strategy(g, GameConfig(1, 1, Mode.PROXIMITY, round_bound=50), bad)
        assert not res.captured

    def test_witness_is_a_play(self):
        g = spider((2, 2, 2))
        res = solve_game(g, GameConfig(2, 1, Mode.LOCALIZATION))
        v = verify_strategy(g, GameConfig(2, 1), TableStrategy(g, 2, res.table, 1))
        assert v.captured and len(v.witness) == v.worst_rounds - 1
        S = g.full
        for P, sig in v.witness:
            C = class_of(g.dm, S, P, sig, 2)
            assert C & (C - 1)
            S = g.spread(C)

    def test_captured_within_bound(self):
        g = star(4)
        res = solve_game(g, GameConfig(1, 1, Mode.LOCALIZATION))
        v = verify_strategy(g, GameConfig(1, 1, round_bound=3), TableStrategy(g, 1, res.table, 1))
        assert v.captured and v.worst_rounds <= 3
