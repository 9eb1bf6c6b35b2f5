import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nonunitary_mbqc import gates, linalg, protocols
from nonunitary_mbqc.gates import BlochState

PLUS = BlochState(np.pi / 2)


def test_schedule_values():
    assert protocols.feedback_schedule(2.0, 4).terms == (2.0, -4.0, -16.0, -256.0)
    assert protocols.feedback_schedule(2.0, 4, form="alternating").terms == (2.0, -4.0, 16.0, -256.0)


def test_alternating_form_breaks_third_attempt():
    stats = protocols.simulate_feedback(2.0, PLUS, 4, 20_000, seed=1, form="alternating")
    assert stats.attempts_histogram[2] > 0
    assert stats.min_success_fidelity < 0.5


def test_schedule_forms_share_magnitudes():
    a = protocols.feedback_schedule(1.7, 6).terms
    b = protocols.feedback_schedule(1.7, 6, form="alternating").terms
    np.testing.assert_allclose(np.abs(a), np.abs(b))
    with pytest.raises(ValueError):
        protocols.feedback_schedule(1.7, 2, form="other")


@settings(max_examples=50, deadline=None)
@given(st.floats(0.2, 3.0).filter(lambda a: abs(a - 1) > 1e-3), st.integers(1, 5))
def test_schedule_recursion(a, n):
    t = protocols.feedback_schedule(a, n).terms
    assert t[0] == pytest.approx(a)
    for x, y in zip(t, t[1:]):
        assert y == pytest.approx(-x * x)


@pytest.mark.parametrize("a", [0.4, 1.5, 2.0, 3.3])
def test_correction_identity(a):
    a2 = protocols.feedback_schedule(a, 2).terms[1]
    assert linalg.equal_up_to_scalar(gates.m_povm_a(a2, 0) @ gates.m_povm_a(a, 1), gates.m_povm_a(a, 0))


@pytest.mark.parametrize("a", [0.5, 2.0, 1.3])
def test_success_chain_proportional_to_target(a):
    terms = protocols.feedback_schedule(a, 4).terms
    prod = np.eye(2)
    for k, ak in enumerate(terms):
        assert linalg.equal_up_to_scalar(gates.m_povm_a(ak, 0) @ prod, gates.m_povm_a(a, 0))
        prod = gates.m_povm_a(ak, 1) @ prod


@pytest.mark.parametrize("a", [1.0, 1 + 1e-9, 0.0, -2.0])
def test_schedule_rejects(a):
    with pytest.raises(ValueError):
        protocols.feedback_schedule(a, 3)


def test_p_attempt_examples():
    assert protocols.p_attempt(2.0, PLUS, 1) == pytest.approx(0.5)
    assert protocols.p_attempt(2.0, PLUS, 2) == pytest.approx(0.117647, abs=1e-6)
    assert protocols.p_success(2.0, PLUS, 2) == pytest.approx(0.617647, abs=1e-6)
    assert protocols.p_success(2.0, PLUS, math.inf) == pytest.approx(0.625)


@settings(max_examples=50, deadline=None)
@given(st.floats(0.3, 4.0).filter(lambda a: abs(a - 1) > 1e-2), st.floats(0, np.pi), st.integers(1, 5))
def test_p_attempt_matches_sequential_products(a, beta, n):
    psi = BlochState(beta)
    assert protocols.p_attempt(a, psi, n) == pytest.approx(protocols.p_attempt_sequential(a, psi, n), abs=1e-12)


@settings(max_examples=50, deadline=None)
@given(st.floats(1.01, 5.0), st.floats(0, np.pi))
def test_first_attempt_formula(a, beta):
    psi = BlochState(beta)
    expected = (a * a * np.cos(beta / 2) ** 2 + np.sin(beta / 2) ** 2) / (1 + a * a)
    assert protocols.p_attempt(a, psi, 1) == pytest.approx(expected)
    assert protocols.p_attempt(a, psi, 1) == pytest.approx(gates.p_max(gates.m_povm_a(a, 0), psi.vector) * a * a / (1 + a * a))


@pytest.mark.parametrize("a", [0.3, 0.7, 1.2, 2.0, 5.0])
@pytest.mark.parametrize("beta", [0.0, 1.0, np.pi / 2, 3.0])
def test_p_success_bounded_and_monotone(a, beta):
    psi = BlochState(beta)
    vals = [protocols.p_success(a, psi, n) for n in range(1, 9)]
    pmax = protocols.p_success(a, psi, math.inf)
    assert np.all(np.diff(vals) >= -1e-15)
    assert vals[-1] <= pmax + 1e-12
    assert vals[-1] == pytest.approx(pmax, abs=1e-6)


def test_bracket_converges():
    assert abs(protocols.bracket(2.0, 6) - 1) < 1e-9
    parts = [protocols.bracket(2.0, n) for n in range(1, 7)]
    assert np.all(np.diff(parts) >= 0)
    assert np.all(np.diff(parts[:4]) > 0)


def test_bracket_no_overflow():
    assert protocols.bracket(3.0, 60) == pytest.approx(1.0)


@pytest.mark.parametrize("beta", [0.5, np.pi / 2, 2.5])
def test_small_epsilon_asymptote(beta):
    psi = BlochState(beta)
    eps = np.array([0.0125, 0.025, 0.05])
    resid = []
    for e in eps:
        a = gates.a_of_epsilon(e)
        resid.append(1 - protocols.p_success(a, psi, math.inf) - 2 * np.sin(beta / 2) ** 2 * e)
    resid = np.abs(resid)
    # second-order remainder: halving eps quarters it, up to O(eps^3)
    assert resid[0] / eps[0] < resid[2] / eps[2]
    assert np.all(resid <= 3 * eps**2)


def test_simulate_feedback_statistics():
    stats = protocols.simulate_feedback(2.0, PLUS, 6, 100_000, seed=11)
    assert stats.attempts_histogram.sum() == 100_000
    for n in range(1, 7):
        p = protocols.p_success(2.0, PLUS, n)
        sigma = np.sqrt(p * (1 - p) / 100_000)
        assert abs(stats.p_success_empirical[n - 1] - p) < 4 * sigma
    assert stats.min_success_fidelity >= 1 - 1e-10


def test_simulate_feedback_deterministic():
    a = protocols.simulate_feedback(0.6, BlochState(1.0), 4, 5000, seed=3, batch=1000)
    b = protocols.simulate_feedback(0.6, BlochState(1.0), 4, 5000, seed=3, batch=1000)
    np.testing.assert_array_equal(a.attempts_histogram, b.attempts_histogram)


def test_simulate_rejects_unit_a():
    with pytest.raises(ValueError):
        protocols.simulate_feedback(1 + 1e-9, PLUS, 3, 10, seed=0)


def test_ite_examples():
    assert protocols.ite_chain(0.25, 0)[0] == pytest.approx(0.5)
    p0, _ = protocols.ite_chain(0.25, 2)
    assert p0 == pytest.approx(0.7331, abs=1e-3)
    p0, tau = protocols.ite_chain(0.25, 8)
    assert p0 == pytest.approx(0.9827, abs=1e-3)
    assert tau == pytest.approx(1.0105, abs=1e-3)


@pytest.mark.parametrize("n", range(0, 6))
@pytest.mark.parametrize("policy", ["postselect", "correct"])
def test_ite_modes_agree(n, policy):
    a = protocols.ite_state(0.25, n, "matrices")
    b = protocols.ite_state(0.25, n, "mbqc", x_policy=policy, seed=n)
    assert linalg.fidelity(a, b) == pytest.approx(1.0, abs=1e-10)


def test_ite_segmented_equals_single_pattern():
    for n in (1, 3, 6):
        a = protocols.ite_state(0.4, n, "mbqc", x_policy="correct", seed=5, segmented=False)
        b = protocols.ite_state(0.4, n, "mbqc", x_policy="correct", seed=5, segmented=True)
        assert linalg.fidelity(a, b) == pytest.approx(1.0, abs=1e-10)


def test_ite_monotone():
    p = [protocols.ite_chain(0.3, n)[0] for n in range(10)]
    assert np.all(np.diff(p) >= 0)


def test_ite_errors():
    with pytest.raises(ValueError):
        protocols.ite_chain(0.25, -1)
    with pytest.raises(ValueError):
        protocols.ite_state(0.25, 2, "nope")
    with pytest.raises(OverflowError):
        protocols.ite_state(0.25, 9, "mbqc", segmented=False)


@pytest.mark.parametrize("eps, n", [(0.25, 1), (0.25, 3), (0.0, 3), (1.0, 5)])
def test_compact_chain_equivalence(eps, n):
    assert protocols.compact_chain_equivalence(eps, n)


def test_compact_unitary_case_is_plus():
    out = protocols.compact_circuit_state(0.0, 3)
    np.testing.assert_allclose(np.abs(out) ** 2, [0.5, 0.5], atol=1e-12)
