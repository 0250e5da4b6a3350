import math

import pytest

from resetword.automaton import Dfa, brute_force_shortest, cerny, verify_reset_word
from resetword.random_model import gen
from resetword.shortest import (
    NotSynchronizingError,
    SoundnessError,
    shortest_reset_word,
    synchro_word,
)
from resetword.solver import BudgetExceeded, ExternalSolver, SolveResult

from .conftest import constant_dfa, permutation_dfa, sync_sample


class TestSynchroWord:
    def test_single_state(self):
        assert synchro_word(Dfa(((0, 0),)), 0) == ()

    @pytest.mark.parametrize("c", [0, 1, 5])
    def test_permutations_never(self, c):
        assert synchro_word(permutation_dfa(4), c) is None

    def test_cerny_boundary(self, c4):
        word = synchro_word(c4, 9)
        assert len(word) == 9 and verify_reset_word(c4, word)
        assert synchro_word(c4, 8) is None

    def test_soundness_guard(self, c4):
        class Liar:
            def solve(self, formula, budget=None):
                return SolveResult(True, {v: False for v in range(1, formula.num_vars + 1)})

        with pytest.raises(SoundnessError):
            synchro_word(c4, 3, Liar())


class TestShortest:
    def test_single_state(self):
        result = shortest_reset_word(Dfa(((0, 0),)))
        assert (result.length, result.word, result.queries) == (0, (), 0)

    def test_constant(self):
        result = shortest_reset_word(constant_dfa(5))
        assert result.length == 1 and verify_reset_word(constant_dfa(5), result.word)

    def test_cerny4(self, c4):
        result = shortest_reset_word(c4)
        assert result.length == 9
        assert len(result.word) == 9 and verify_reset_word(c4, result.word)

    def test_rejects_non_synchronizing(self):
        with pytest.raises(NotSynchronizingError):
            shortest_reset_word(permutation_dfa(3))

    def test_rejects_three_letters(self):
        with pytest.raises(ValueError):
            shortest_reset_word(gen(3, 3, 1))

    def test_fig1_exact_bound(self, c4):
        result = shortest_reset_word(c4, fig1_exact=True)
        assert result.initial_upper == 64
        assert result.length == 9 and verify_reset_word(c4, result.word)

    def test_fig1_exact_agrees_with_greedy_start(self):
        for dfa in sync_sample(40, [2, 3, 4, 5, 6], seed=12):
            assert (
                shortest_reset_word(dfa, fig1_exact=True).length
                == shortest_reset_word(dfa).length
            )

    def test_budget_propagates(self):
        dfa = sync_sample(1, [40], seed=3)[0]
        with pytest.raises(BudgetExceeded):
            shortest_reset_word(dfa, budget=1)

    def test_external_solver(self, fake_solver):
        assert shortest_reset_word(cerny(3), ExternalSolver(fake_solver)).length == 4


def test_exact_against_subset_oracle_with_trace_checks():
    for dfa in sync_sample(300, [2, 3, 4, 5, 6, 7, 8], seed=2024):
        result = shortest_reset_word(dfa)
        expected = brute_force_shortest(dfa)[0]
        assert result.length == expected
        assert len(result.word) == result.length and verify_reset_word(dfa, result.word)
        sat = [p.c for p in result.probes if p.sat]
        unsat = [p.c for p in result.probes if not p.sat]
        if sat and unsat:
            assert max(unsat) < min(sat)
        assert result.queries <= math.ceil(math.log2(max(result.initial_upper, 1))) + 2


def test_unsat_certificate_at_length_minus_one():
    # with the lower end at 0, a length-1 answer is certified by lo=0 directly
    for dfa in sync_sample(60, [5, 6, 7, 8], seed=77):
        result = shortest_reset_word(dfa)
        if result.length >= 2:
            assert any(p.c == result.length - 1 and not p.sat for p in result.probes)
