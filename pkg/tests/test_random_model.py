import pytest

from resetword.automaton import format_automaton, parse_automaton
from resetword.random_model import CounterRng, gen, mix64, trial_key


def test_mix64_reference_values():
    # first outputs of the standard SplitMix64 stream seeded with 0
    gamma = 0x9E3779B97F4A7C15
    assert mix64(gamma) == 0xE220A8397B1DCDAF
    assert mix64(2 * gamma % 2**64) == 0x6E789E6AA1B965F4


def test_single_state_is_unique():
    for seed in range(5):
        assert gen(1, 2, seed).delta == ((0, 0),)


def test_deterministic():
    assert gen(10, 2, 7) == gen(10, 2, 7)
    assert gen(10, 2, 7, 3) == gen(10, 2, 7, 3)


def test_trials_differ():
    autos = {gen(10, 2, 7, i) for i in range(50)}
    assert len(autos) == 50
    assert gen(10, 2, 7) != gen(10, 2, 8)


def test_keys_depend_on_every_part():
    keys = {trial_key(m, n, i) for m in range(4) for n in range(1, 5) for i in range(4)}
    assert len(keys) == 64


def test_serializable():
    dfa = gen(12, 2, 1)
    assert parse_automaton(format_automaton(dfa)) == dfa


def test_below_range_and_rejection_bound():
    rng = CounterRng(123)
    draws = [rng.below(7) for _ in range(2000)]
    assert set(draws) == set(range(7))
    with pytest.raises(ValueError):
        rng.below(0)


def test_golden_automaton():
    # pins the generator so other implementations can reproduce trials
    assert format_automaton(gen(5, 2, 1, 0)) == GOLDEN_5


def test_marginal_uniformity():
    n, k, samples = 3, 2, 60_000
    counts = [[[0] * n for _ in range(k)] for _ in range(n)]
    for i in range(samples):
        for q, row in enumerate(gen(n, k, 99, i).delta):
            for x, t in enumerate(row):
                counts[q][x][t] += 1
    p = 1 / n
    sigma = (p * (1 - p) / samples) ** 0.5
    for q in range(n):
        for x in range(k):
            for t in range(n):
                assert abs(counts[q][x][t] / samples - p) < 3 * sigma, (q, x, t)
            chi2 = sum((c - samples * p) ** 2 / (samples * p) for c in counts[q][x])
            # 2 degrees of freedom, 0.999 quantile
            assert chi2 < 13.816


GOLDEN_5 = "5 2\n1 2\n3 4\n3 3\n1 0\n0 4\n"
