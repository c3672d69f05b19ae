"""End-to-end acceptance checks.

One test per criterion; each prints a single summary line through the
conftest hook (see the "acceptance criteria" section of the pytest output).
Tolerances are fixed here, not tuned: exact identities are asserted exactly,
float comparisons carry the stated absolute bounds.
"""

import math
import time

import numpy as np
import pytest

from schurcompress.blocksim import (
    BlochVector,
    block_weights,
    decode,
    encode,
    exact_protocol_error,
    product_state,
    qubit_weight,
    random_block_state,
    trace_distance,
)
from schurcompress.oracle import (
    character_projection_weights,
    dense_product_state,
    dense_weights,
)
from schurcompress.planner import (
    ceil_log2,
    error_threshold_copies,
    greedy_budget_keep,
    keyl_werner_tail_bound,
    mixed_prep_cost,
    qubit_approx_plan,
    qubit_error_upper_bound,
    qudit_approx_plan,
    simulate_mixed_prep,
    spectrum_tail_mass,
    total_variation_radius,
    truncation_lower_bound,
    zero_error_plan,
)
from schurcompress.schur_core import (
    Spectrum,
    enumerate_diagrams,
    irrep_dim,
    multiplicity_dim,
    spectrum_of,
)

GRID_N = range(10, 61, 10)
GRID_P = (0.6, 0.75, 0.9)
GRID_EPS = (0.1, 0.01)


def test_criterion_01_completeness_identity():
    start = time.monotonic()
    for d, n_max in ((2, 30), (3, 30), (4, 20)):
        for n in range(0, n_max + 1):
            total = sum(irrep_dim(lam, d) * multiplicity_dim(lam)
                        for lam in enumerate_diagrams(n, d))
            assert total == d ** n, (d, n)
    assert time.monotonic() - start < 10.0


def test_criterion_02_distribution_matches_dense_oracle():
    # qubits: every N <= 8, even and odd, against dense projection
    for n in range(1, 9):
        for p in (0.55, 0.6, 0.75, 0.9, 1.0):
            sp = Spectrum((p, 1.0 - p))
            dense = dense_weights(dense_product_state(sp, n), n)
            for two_j, oracle_q in dense.items():
                assert qubit_weight(n, p, two_j) == pytest.approx(oracle_q, abs=1e-10), \
                    (n, p, two_j)
    # qudits: d = 3, N <= 5, against explicit character projectors
    spectra = (spectrum_of(0.5, 0.3, 0.2), spectrum_of(0.5, 0.25, 0.25),
               spectrum_of(1 / 3, 1 / 3, 1 / 3), spectrum_of(0.7, 0.2, 0.1))
    for sp in spectra:
        for n in range(1, 6):
            oracle = character_projection_weights(sp, n)
            ours = block_weights(n, sp)
            for lam, val in oracle.items():
                assert ours[lam] == pytest.approx(val, abs=1e-8), (sp.probs, n, lam)


def test_criterion_03_zero_error_counts_and_roundtrip():
    for n in range(2, 201, 2):
        plan = zero_error_plan(n, 2)
        assert plan.d_enc == (n // 2 + 1) ** 2
        assert plan.qubit_count == ceil_log2((n + 2) ** 2) - 2  # ceil(2 log2(N+2) - 2)
    # exact round trip on product states ...
    for n in (4, 6, 8):
        everything = enumerate_diagrams(n, 2)
        for p, orient in ((0.6, None), (0.9, None), (0.75, BlochVector(1.2, 0.3))):
            state = product_state(spectrum_of(p, 1 - p), n, orient)
            back = decode(encode(state, everything))
            assert trace_distance(state, back) < 1e-10
    # ... and on 50 random permutation-invariant block states per N
    rng = np.random.default_rng(123)
    for n in (4, 6, 8):
        everything = enumerate_diagrams(n, 2)
        for _ in range(50):
            state = random_block_state(n, 2, rng)
            back = decode(encode(state, everything))
            assert trace_distance(state, back) < 1e-10


def test_criterion_04_headline_twenty_copies():
    start = time.monotonic()
    plan = qubit_approx_plan(20, 0.6, 0.01)
    assert plan.qubit_count <= 8
    report = exact_protocol_error(20, spectrum_of(0.6, 0.4), plan.keep)
    assert report.exact_error < 0.01
    assert time.monotonic() - start < 1.0


def test_criterion_05_error_sandwich_on_grid():
    for p in GRID_P:
        sp = spectrum_of(p, 1 - p)
        thresholds = {eps: error_threshold_copies(p, eps) for eps in GRID_EPS}
        for n in GRID_N:
            for eps in GRID_EPS:
                plan = qubit_approx_plan(n, p, eps)
                rep = exact_protocol_error(n, sp, plan.keep)
                bound = qubit_error_upper_bound(n, p, eps)
                assert rep.lower_bound <= rep.exact_error + 1e-12, (n, p, eps)
                assert rep.exact_error <= rep.tail_mass + 1e-12, (n, p, eps)
                assert rep.tail_mass <= bound + 1e-15, (n, p, eps)
                if n >= thresholds[eps]:
                    assert rep.exact_error <= eps, (n, p, eps)


def test_criterion_06a_qubit_rate_three_halves():
    n = 2 ** 14
    plan = qubit_approx_plan(n, 0.75, 0.01)
    ratio = plan.qubit_count / math.log2(n)
    assert 1.4 <= ratio <= 1.7, ratio


def test_criterion_06b_covariant_lower_bound_trend():
    sp = spectrum_of(0.75, 0.25)
    values = []
    for k in range(6, 13):
        n = 2 ** k
        keep = greedy_budget_keep(n, sp, float(n) ** 1.4)
        assert sum(irrep_dim(lam, 2) for lam in keep) <= float(n) ** 1.4
        values.append(truncation_lower_bound(n, sp, keep))
    assert all(b > a for a, b in zip(values, values[1:])), values
    assert values[-1] < 0.5  # approaching, never crossing, the asymptotic floor


def test_criterion_06c_dimension_sum_growth_exponent():
    # The sums carry a measured O(1/N) correction, so the asymptotic exponent
    # is read off the top of the window: local log-log slopes over the grid
    # must increase toward the exponent and the final one must match +-0.15.
    for d, r in ((2, 2), (3, 2), (3, 3)):
        target = (2 * d * r - r * r + r - 2) / 2
        ns = list(range(20, 201, 20))
        logs = [math.log(sum(irrep_dim(lam, d) for lam in enumerate_diagrams(n, d, r)))
                for n in ns]
        slopes = [(logs[i] - logs[i - 1]) / math.log(ns[i] / ns[i - 1])
                  for i in range(1, len(ns))]
        assert all(b > a for a, b in zip(slopes, slopes[1:])), (d, r, slopes)
        assert slopes[-1] <= target
        assert abs(slopes[-1] - target) <= 0.15, (d, r, slopes[-1])


def test_criterion_07_concentration_bound_never_violated():
    violations = 0
    for p in GRID_P:
        sp = spectrum_of(p, 1 - p)
        for n in GRID_N:
            for eps in GRID_EPS:
                x = total_variation_radius(n, 2, eps)
                if spectrum_tail_mass(n, sp, x) > keyl_werner_tail_bound(n, 2, x):
                    violations += 1
            for x in (0.05, 0.1, 0.2):
                if spectrum_tail_mass(n, sp, x) > keyl_werner_tail_bound(n, 2, x):
                    violations += 1
    for sp in (spectrum_of(0.5, 0.3, 0.2), spectrum_of(0.5, 0.25, 0.25)):
        for n in (15, 30):
            for x in (0.05, 0.1, 0.2, total_variation_radius(n, 3, 0.1)):
                if spectrum_tail_mass(n, sp, x) > keyl_werner_tail_bound(n, 3, x):
                    violations += 1
    assert violations == 0


def test_criterion_08_orientation_invariance():
    n, p, eps = 30, 0.75, 0.01
    sp = spectrum_of(p, 1 - p)
    plan = qubit_approx_plan(n, p, eps)
    rng = np.random.default_rng(77)
    errors = []
    for _ in range(20):
        orient = BlochVector(float(rng.uniform(0, math.pi)),
                             float(rng.uniform(0, 2 * math.pi)))
        errors.append(exact_protocol_error(n, sp, plan.keep, orient).exact_error)
    assert max(errors) - min(errors) < 1e-9, (min(errors), max(errors))


def test_criterion_09_degeneracy_dividend():
    n, eps = 40, 0.1
    degenerate = qudit_approx_plan(n, spectrum_of(0.5, 0.25, 0.25), eps)
    plain = qudit_approx_plan(n, spectrum_of(0.5, 0.3, 0.2), eps)
    dividend = plain.bound_qubits - degenerate.bound_qubits
    assert dividend >= 0.5 * math.log2(n + 3 - 1) - 1.0, dividend


def test_criterion_10_mixed_prep_statistics():
    trials = 100_000
    for m in (3, 5, 6, 7):
        for rounds in (1, 5, 10):
            model = mixed_prep_cost(m, rounds)
            sample = simulate_mixed_prep(m, rounds, trials=trials, seed=2024)
            # the halving bound the model promises, with sampling slack on
            # the exact per-trial failure probability
            sigma_fail = math.sqrt(model.failure_bound * (1 - model.failure_bound) / trials)
            assert sample.failure_frequency <= 2.0 ** -rounds, (m, rounds)
            assert sample.failure_frequency <= model.failure_bound + 3 * sigma_fail, (m, rounds)
            sigma = math.sqrt(model.success_prob * (1 - model.success_prob)
                              / sample.rounds_simulated)
            assert abs(sample.round_success_frequency - model.success_prob) <= 3 * sigma, \
                (m, rounds)
