import math

import numpy as np
import pytest

import ksep


def test_reference_thresholds():
    assert ksep.noise_threshold_dicke(4, 2, 2) == pytest.approx(8 / 17, abs=1e-15)
    assert ksep.noise_threshold_qudit_w(3, 3, 2) == pytest.approx(9 / 13, abs=1e-15)


def test_criterion_reports():
    r = ksep.evaluate_criterion1(ksep.dicke_mixture(4, 2), 4, 2, 2)
    assert r.violated
    assert r.lhs == pytest.approx(2.0)
    assert r.rhs == pytest.approx(1.0)
    w = ksep.evaluate_criterion2(ksep.w_mixture(3, 0.0), 3, 2)
    assert w.lhs == pytest.approx(1.5)
    assert w.rhs == pytest.approx(0.5)


def test_gamma_matches_direct_ratio():
    for p in (0.1, 0.5, 0.9):
        r = ksep.evaluate_criterion1(ksep.dicke_mixture(5, 2, p), 5, 2, 3)
        assert ksep.gamma(5, 2, 3, p) == pytest.approx(r.rhs / r.lhs, rel=1e-12)


def test_index_sets_and_partitions():
    s = ksep.index_sets_criterion2(3)
    assert s["lhs_pairs"][0] == (6, 8)
    assert s["diag_indices"] == [6, 8, 12, 16, 20, 22]
    assert ksep.count_partitions(6, 3) == 90
    assert len(ksep.enumerate_partitions(4, 2)) == 7


def test_numpy_round_trip_and_observables():
    rng = np.random.default_rng(3)
    g = rng.normal(size=(8, 2)) + 1j * rng.normal(size=(8, 2))
    rho = g @ g.conj().T
    rho /= np.trace(rho).real
    dm = ksep.DensityMatrix.from_numpy(rho, 3, 2)
    assert np.allclose(dm.to_numpy(), rho, atol=1e-14)
    a = ksep.evaluate_criterion1(dm, 3, 1, 2)
    b = ksep.evaluate_criterion1_via_observables(dm, 3, 1, 2)
    assert a.lhs == pytest.approx(b.lhs, abs=1e-10)
    assert a.rhs == pytest.approx(b.rhs, abs=1e-10)

    terms = ksep.pauli_diag_observable(5, 7)
    assert len(terms) == 32
    assert (-1 / 32, ["I", "Z", "I", "Z", "Z"]) in terms
    assert ksep.observable_count_dicke(4, 2) == 112


def test_separable_samples_and_errors():
    for seed in range(20):
        rho = ksep.random_k_separable_state(4, 2, 2, 2, seed)
        assert math.isclose(rho.trace(), 1.0, abs_tol=1e-12)
        assert not ksep.evaluate_criterion1(rho, 4, 2, 2).violated
    with pytest.raises(ValueError):
        ksep.evaluate_criterion1(ksep.dicke_mixture(4, 2), 4, 2, 7)
    with pytest.raises(ValueError):
        ksep.DensityMatrix.from_numpy(np.eye(3), 1, 2)
