import math

import numpy as np
import pytest
import scipy.stats

from ganfault.circuit import BitVector, Circuit, GateKind, identity_circuit, pair_layer, unary_layer
from ganfault.faults import InputPerturbation, Missing, Swap
from ganfault.sampler import (
    ComparisonMode,
    DeviationSample,
    ExperimentConfig,
    ModulatorCache,
    deviation,
    max_acceptable_distance,
    relative_uncertainty,
    run_experiment,
    run_trial,
    trial_rng,
)


def test_relative_uncertainty_examples():
    x = BitVector.from_string("1010")
    assert relative_uncertainty(x, x) == 0.0
    assert relative_uncertainty(x, BitVector.from_string("1000")) == 0.25
    y = BitVector.from_string("10110100")
    assert relative_uncertainty(y, y.complement()) == 1.0
    with pytest.raises(ValueError, match="width"):
        relative_uncertainty(x, y)


def test_deviation_examples():
    ones = BitVector.from_string("1111")
    assert deviation(ones, ones) == (30, 30)
    assert deviation(BitVector.from_string("0000"), ones) == (0, 30)
    assert deviation(BitVector.from_string("1010"), BitVector.from_string("0011")) == (10, 24)
    with pytest.raises(ValueError, match="width"):
        deviation(ones, BitVector.from_string("11"))


def test_max_acceptable_distance():
    assert max_acceptable_distance(8, 0.0) == 0
    assert max_acceptable_distance(8, 1 / 8) == 1
    assert max_acceptable_distance(8, 0.1) == 0
    assert max_acceptable_distance(4, 0.25) == 1
    assert max_acceptable_distance(8, 1.0) == 8


def _config(**kwargs) -> ExperimentConfig:
    defaults = dict(
        circuit=identity_circuit(4),
        epsilon=0.0,
        trials=10,
        seed=7,
    )
    defaults.update(kwargs)
    return ExperimentConfig(**defaults)


def test_fault_free_compare_accepts_first_draw():
    cfg = _config(circuit=Circuit(8, [unary_layer(GateKind.NOT, 8)]), trials=200)
    for s in run_experiment(cfg):
        assert s.accepted and s.iterations == 1 and s.re == s.im
        assert s.label == "none"


def test_trial_count_contract():
    assert len(run_experiment(_config(trials=1))) == 1
    with pytest.raises(ValueError):
        run_experiment(_config(trials=0))
    with pytest.raises(ValueError):
        run_experiment(_config(epsilon=1.5))


def test_accepted_samples_satisfy_predicate():
    cfg = _config(
        circuit=Circuit(8, [unary_layer(GateKind.NOT, 8)]),
        faults=(Missing(1, 1), InputPerturbation(0.2)),
        epsilon=0.25,
        trials=400,
        max_iterations=50,
    )
    k = max_acceptable_distance(8, 0.25)
    for s in run_experiment(cfg):
        dist = ((s.re >> 1) ^ (s.im >> 1)).bit_count()
        if s.accepted:
            assert dist <= k
            assert dist / 8 <= s.epsilon
        else:
            assert s.iterations == 50


def test_target_search_geometric_mean_eps0():
    # Geometric oracle: success probability 2^-4 per draw, mean 16.
    cfg = _config(
        mode=ComparisonMode.TARGET_SEARCH, trials=10_000, seed=11, epsilon=0.0
    )
    samples = run_experiment(cfg)
    assert all(s.accepted for s in samples)
    mean = sum(s.iterations for s in samples) / len(samples)
    assert abs(mean - 16.0) / 16.0 < 0.05


def test_target_search_cumulative_binomial_mean():
    # Hamming ball of radius 1 in 4 bits holds 5 of 16 points: mean 3.2.
    cfg = _config(
        mode=ComparisonMode.TARGET_SEARCH, trials=10_000, seed=13, epsilon=0.25
    )
    samples = run_experiment(cfg)
    mean = sum(s.iterations for s in samples) / len(samples)
    assert abs(mean - 3.2) / 3.2 < 0.05


def test_deterministic_across_worker_counts():
    cfg = _config(
        circuit=Circuit(8, [pair_layer(GateKind.AND, 8)]),
        faults=(Swap(1, 1, GateKind.OR), InputPerturbation(0.1)),
        epsilon=0.25,
        trials=300,
        seed=99,
        max_iterations=200,
    )
    runs = [run_experiment(cfg, workers=w) for w in (1, 4, 8)]
    assert runs[0] == runs[1] == runs[2]


def test_trial_substreams_are_trial_indexed():
    cfg = _config(trials=5, seed=21, mode=ComparisonMode.TARGET_SEARCH, epsilon=1.0)
    samples = run_experiment(cfg)
    # Recomputing any single trial from its substream reproduces the sample.
    faulty = ideal = cfg.circuit
    for t in (0, 3, 4):
        again = run_trial(cfg, faulty, ideal, trial_rng(cfg.seed, t))
        assert again == samples[t]


def test_budget_exhaustion_is_flagged_not_raised():
    # Identity circuit cannot reach a target whose distance exceeds epsilon
    # within a tiny budget for most targets.
    cfg = _config(
        mode=ComparisonMode.TARGET_SEARCH, epsilon=0.0, trials=50, max_iterations=3
    )
    samples = run_experiment(cfg)
    censored = [s for s in samples if not s.accepted]
    assert censored, "expected some censored trials at budget 3"
    for s in censored:
        assert s.iterations == 3
        assert 0 <= s.re <= 30 and 0 <= s.im <= 30


def test_mean_iterations_monotone_in_epsilon():
    cfg = _config(mode=ComparisonMode.TARGET_SEARCH, trials=400, seed=5)
    means = []
    for eps in (0.0, 0.25, 0.5, 0.75, 1.0):
        samples = run_experiment(
            ExperimentConfig(
                circuit=cfg.circuit, epsilon=eps, trials=cfg.trials, seed=cfg.seed,
                mode=cfg.mode,
            )
        )
        means.append(sum(s.iterations for s in samples) / len(samples))
    assert all(b <= a for a, b in zip(means, means[1:]))


def test_memoized_repeats_never_slow_down():
    cfg = _config(
        circuit=identity_circuit(3),
        mode=ComparisonMode.TARGET_SEARCH,
        epsilon=0.0,
        trials=400,
        seed=17,
        memoize=True,
    )
    samples = run_experiment(cfg)
    per_target: dict[int, list[int]] = {}
    for s in samples:
        per_target.setdefault(s.im, []).append(s.iterations)
    repeated = [its for its in per_target.values() if len(its) > 1]
    assert repeated, "with 400 trials over 8 targets, repeats must occur"
    for its in repeated:
        # After the first acceptance the cached input is replayed first.
        assert all(x == 1 for x in its[1:])


def test_memoization_reduces_total_iterations():
    base = dict(
        circuit=identity_circuit(4),
        mode=ComparisonMode.TARGET_SEARCH,
        epsilon=0.0,
        trials=300,
        seed=23,
    )
    plain = run_experiment(ExperimentConfig(**base))
    memo = run_experiment(ExperimentConfig(**base, memoize=True))
    assert sum(s.iterations for s in memo) < sum(s.iterations for s in plain)


def test_cache_invalidated_on_config_change():
    cache = ModulatorCache()
    cfg = _config(
        circuit=identity_circuit(3),
        mode=ComparisonMode.TARGET_SEARCH,
        epsilon=0.0,
        trials=50,
        seed=29,
        memoize=True,
    )
    run_experiment(cfg, cache=cache)
    assert len(cache) > 0
    changed = ExperimentConfig(
        circuit=cfg.circuit, epsilon=1.0, trials=1, seed=29,
        mode=cfg.mode, memoize=True,
    )
    run_experiment(changed, cache=cache)
    # Binding to a different epsilon cleared the old entries; the single
    # new trial stored at most one input.
    assert len(cache) <= 1


def test_cached_inputs_still_satisfy_predicate():
    cache = ModulatorCache()
    cfg = _config(
        circuit=Circuit(4, [unary_layer(GateKind.NOT, 4)]),
        mode=ComparisonMode.TARGET_SEARCH,
        epsilon=0.25,
        trials=200,
        seed=31,
        memoize=True,
    )
    run_experiment(cfg, cache=cache)
    k = max_acceptable_distance(4, 0.25)
    for target, inputs in cache._store.items():
        for g in inputs:
            out = cfg.circuit.evaluate(BitVector(4, g))
            assert (out.value ^ target).bit_count() <= k


def test_perturbed_buffer_outputs_uniform_chi_square():
    # Chi-square uniformity over the 16 encodings at significance 0.01.
    cfg = _config(
        circuit=identity_circuit(4),
        faults=(InputPerturbation(0.5),),
        epsilon=1.0,
        trials=100_000,
        seed=37,
    )
    samples = run_experiment(cfg)
    counts = np.zeros(16, dtype=np.int64)
    for s in samples:
        assert s.accepted
        counts[s.re >> 1] += 1
    expected = len(samples) / 16
    chi2 = float(((counts - expected) ** 2 / expected).sum())
    critical = scipy.stats.chi2.ppf(0.99, df=15)
    assert chi2 < critical, f"chi2={chi2:.2f} >= {critical:.2f}"
