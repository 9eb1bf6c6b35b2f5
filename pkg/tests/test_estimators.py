import numpy as np
import pytest

from nonunitary_mbqc import estimators as est
from nonunitary_mbqc import gates, linalg
from nonunitary_mbqc.estimators import EstimationFailure, ShadowConfig

N_025 = gates.ite_step(0.25)
A_025 = gates.a_of_epsilon(0.25)


def test_choi_examples():
    np.testing.assert_allclose(est.choi_state(np.eye(2)), np.array([1, 0, 0, 1]) / np.sqrt(2))
    np.testing.assert_allclose(est.choi_state(np.diag([1.0, 0.0])), [1, 0, 0, 0])
    data = linalg.schmidt(est.choi_state(N_025), [0])
    np.testing.assert_allclose(data.coefficients**2, np.array([A_025**2, 1]) / (1 + A_025**2), atol=1e-12)


def test_choi_rejects_zero():
    with pytest.raises(ValueError):
        est.choi_state(np.zeros((2, 2)))


def test_choi_schmidt_is_singular_spectrum(rng):
    for _ in range(10):
        n = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        data = linalg.schmidt(est.choi_state(n), [0, 1])
        np.testing.assert_allclose(data.coefficients, linalg.singular_spectrum(n), atol=1e-10)


@pytest.mark.parametrize(
    "n, expected", [(linalg.H, np.log(2)), (np.diag([1.0, 0.0]), 0.0), (N_025, 0.6337)]
)
def test_exact_renyi2(n, expected):
    assert est.exact_renyi2_op(n) == pytest.approx(expected, abs=1e-4)


def test_exact_renyi2_closed_form():
    expected = -np.log((A_025**4 + 1) / (1 + A_025**2) ** 2)
    assert est.exact_renyi2_op(N_025) == pytest.approx(expected, abs=1e-12)


def test_scalar_invariance(rng):
    cfg = ShadowConfig(10, 50, "haar", 4)
    z = 3.2 * np.exp(0.7j)
    assert est.exact_renyi2_op(z * N_025) == pytest.approx(est.exact_renyi2_op(N_025))
    assert est.hamming_renyi2(z * N_025, cfg, repeats=2).value == pytest.approx(est.hamming_renyi2(N_025, cfg, repeats=2).value)
    assert est.swap_test_renyi2(z * N_025, 1000, 1).value == pytest.approx(est.swap_test_renyi2(N_025, 1000, 1).value)


def test_swap_purity_probabilities():
    assert est.swap_test_purity_exact(np.eye(2)) == pytest.approx(0.5)
    assert est.swap_test_purity_exact(np.diag([1.0, 0.0])) == pytest.approx(1.0)
    assert -np.log(est.swap_test_purity_exact(N_025)) == pytest.approx(est.exact_renyi2_op(N_025))


def test_swap_test_sampling():
    rep = est.swap_test_renyi2(N_025, 20_000, seed=5)
    assert rep.value == pytest.approx(0.6337, abs=0.05)
    assert rep.std_error > 0 and rep.method == "swap"
    assert est.swap_test_renyi2(np.diag([1.0, 0.0]), 1000, seed=0).value == 0.0


def test_swap_test_reports_failure():
    # two shots at singlet probability 1/4: any singlet drives the purity to <= 0
    with pytest.raises(EstimationFailure):
        for seed in range(50):
            est.swap_test_renyi2(np.eye(2), 2, seed=seed, batches=2)


def test_hamming_plugin_maximally_mixed():
    freq0 = np.full(5, 0.5)
    assert est._hamming_purity(freq0, 10**9, "pooled") == pytest.approx(0.5)
    assert est._hamming_purity(freq0, 10**9, "per_unitary") == pytest.approx(0.5, abs=1e-8)


def test_hamming_pure_in_expectation():
    # Haar average of the per-unitary estimator is Tr rho^2 = 1 for a pure marginal
    rep = est.hamming_renyi2(np.diag([1.0, 0.0]), ShadowConfig(400, 200, "haar", 1), repeats=3)
    assert abs(rep.value) < 0.05


def test_hamming_pooled_is_biased_towards_ln2():
    rep = est.hamming_renyi2(np.diag([1.0, 0.0]), ShadowConfig(200, 500, "haar", 2), repeats=3, average="pooled")
    assert rep.value > 0.5


def test_hamming_bad_average():
    with pytest.raises(ValueError):
        est.hamming_renyi2(N_025, ShadowConfig(), average="median")


def test_shadow_examples():
    snaps = est._shadows(np.diag([1.0, 0.0]), ShadowConfig(2, 10, "clifford1q", 0), np.random.default_rng(0))
    for s in snaps:
        assert np.trace(s).real == pytest.approx(1.0)
        np.testing.assert_allclose(s, s.conj().T, atol=1e-12)
    # identity rotation with every shot in |0>
    u = np.eye(2)
    np.testing.assert_allclose(3 * u.conj().T @ np.diag([1.0, 0.0]) @ u - np.eye(2), np.diag([2.0, -1.0]))


def test_shadow_states_unbiased():
    rho = est.output_marginal(N_025)
    snaps = est.shadow_states(N_025, ShadowConfig(20_000, 100, "haar", 9))
    np.testing.assert_allclose(np.mean(snaps, axis=0), rho, atol=0.03)


def test_shadow_renyi2_synthetic():
    assert est.shadow_renyi2([np.eye(2) / 2] * 5).value == pytest.approx(np.log(2))
    assert est.shadow_renyi2([np.diag([1.0, 0.0])] * 5).value == pytest.approx(0.0)
    with pytest.raises(EstimationFailure):
        est.shadow_renyi2([np.diag([2.0, -1.0]), np.diag([-1.0, 2.0])])
    with pytest.raises(ValueError):
        est.shadow_renyi2([np.eye(2) / 2])


def test_shadow_purity_pairwise_formula(rng):
    mats = [rng.normal(size=(2, 2)) for _ in range(6)]
    brute = np.mean([np.trace(a @ b) for i, a in enumerate(mats) for j, b in enumerate(mats) if i != j])
    assert est.shadow_purity(mats) == pytest.approx(brute)


@pytest.mark.parametrize("ensemble", ["haar", "clifford1q"])
def test_sample_unitary_unitary(ensemble):
    u = est.sample_unitary(ensemble, np.random.default_rng(3))
    np.testing.assert_allclose(u.conj().T @ u, np.eye(2), atol=1e-12)
    np.testing.assert_array_equal(u, est.sample_unitary(ensemble, np.random.default_rng(3)))


def test_sample_unitary_unknown():
    with pytest.raises(ValueError):
        est.sample_unitary("gaussian", np.random.default_rng())


def test_clifford_group_structure():
    group = est.clifford_group()
    assert len(group) == 24
    for a in group:
        # closed under multiplication up to phase
        for b in group[:6]:
            assert any(linalg.equal_up_to_scalar(a @ b, c, 1e-12) for c in group)


def test_clifford_uniform():
    g = np.random.default_rng(17)
    group = est.clifford_group()
    counts = np.zeros(24)
    draws = 10_000
    for _ in range(draws):
        u = est.sample_unitary("clifford1q", g)
        counts[next(k for k, c in enumerate(group) if np.allclose(u, c))] += 1
    p = 1 / 24
    assert np.all(np.abs(counts / draws - p) < 4 * np.sqrt(p * (1 - p) / draws))


def test_haar_first_moment():
    g = np.random.default_rng(21)
    acc = np.zeros((2, 2), complex)
    for _ in range(10_000):
        u = est.haar_unitary(g)
        acc += u @ np.diag([1.0, 0.0]) @ u.conj().T
    np.testing.assert_allclose(acc / 10_000, np.eye(2) / 2, atol=0.02)


def test_shadow_config_validation():
    with pytest.raises(ValueError):
        ShadowConfig(1, 10)
    with pytest.raises(ValueError):
        ShadowConfig(5, 0)
    with pytest.raises(ValueError):
        ShadowConfig(5, 5, "pauli")


def test_report_fields():
    rep = est.hamming_renyi2(N_025, ShadowConfig(40, 500, "haar", 0))
    assert rep.repeats == 10 and len(rep.samples) == 10
    assert rep.std_error == pytest.approx(rep.spread / np.sqrt(10))
    assert rep.value == pytest.approx(0.6337, abs=0.1)
