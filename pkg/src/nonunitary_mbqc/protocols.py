"""Monitor-and-correct feedback and imaginary-time evolution on MBQC chains."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import gates, linalg
from .linalg import X, Z
from .mbqc import (
    X_BASIS,
    MeasurementBasis,
    chain_pattern,
    inject_input,
    measure_qubit,
    MAX_QUBITS,
)

# segmented chains beyond this many gate steps would exceed the qubit cap
MAX_SINGLE_PATTERN_STEPS = 7


def _check_a(a: float) -> None:
    if not np.isfinite(a) or a <= 0:
        raise ValueError(f"a must be positive and finite, got {a}")
    if abs(a - 1.0) < 1e-6:
        raise ValueError("a = 1 is the unitary gate; the feedback schedule is degenerate")


@dataclass(frozen=True)
class FeedbackSchedule:
    base_a: float
    terms: tuple[float, ...]


def feedback_schedule(a: float, n: int, *, form: str = "recursive") -> FeedbackSchedule:
    """Attempt strengths ``a_1 = a``, ``a_{k+1} = -a_k^2``.

    After failures ``M_1(a_1) ... M_1(a_{k-1})`` the accumulated operator is
    ``diag(1, prod(-a_i))``, and ``M_0(a_k)`` turns it into ``M_0(a)`` only
    for ``a_k = -a^(2^(k-1))`` (``k >= 2``), which the recursion produces.
    ``form="alternating"`` gives ``(-1)^(k-1) a^(2^(k-1))`` instead; it
    agrees up to ``k = 2`` and has the same magnitudes, so success
    probabilities match, but from ``k = 3`` on a success no longer yields
    ``M_0(a)|psi>``.
    """
    _check_a(a)
    if n < 1:
        raise ValueError("need at least one attempt")
    if form == "recursive":
        terms = [a] + [-(a ** (2 ** (k - 1))) for k in range(2, n + 1)]
    elif form == "alternating":
        terms = [(-1) ** (k - 1) * a ** (2 ** (k - 1)) for k in range(1, n + 1)]
    else:
        raise ValueError(f"unknown schedule form {form!r}")
    return FeedbackSchedule(float(a), tuple(float(t) for t in terms))


def _bloch_vector(psi) -> np.ndarray:
    if isinstance(psi, gates.BlochState):
        return psi.vector
    return linalg.as_state(psi)


def weak_success_scale(a: float, psi) -> float:
    """``cos^2(beta/2) + sin^2(beta/2) / a^2``.

    This is the maximal success probability of ``M_0(a)`` for ``a > 1``.  For
    ``a < 1`` the attempt weights below sum to ``a^2`` instead of 1 and the
    product is again the maximal success probability.
    """
    v = _bloch_vector(psi)
    return float(abs(v[0]) ** 2 + abs(v[1]) ** 2 / a**2)


def _bracket_term(a: float, k: int) -> float:
    """``(a^2 - 1) / (a^(2^k) - a^(-2^k))`` computed without overflow."""
    x = 2.0**k * np.log(a)
    if abs(x) > 700:
        return 0.0
    return float((a * a - 1) / (2 * np.sinh(x)))


def bracket(a: float, n: int) -> float:
    """Partial sum of the attempt weights; tends to 1 for ``a > 1``."""
    _check_a(a)
    return float(sum(_bracket_term(a, k) for k in range(1, n + 1)))


def p_attempt(a: float, psi, n: int) -> float:
    """Probability that the ``n``-th attempt is the first success."""
    _check_a(a)
    if n < 1:
        raise ValueError("attempts are numbered from 1")
    return weak_success_scale(a, psi) * _bracket_term(a, n)


def p_success(a: float, psi, n: int | float) -> float:
    """Total success probability within ``n`` attempts (``n = inf`` allowed)."""
    _check_a(a)
    if np.isinf(n):
        return gates.p_max(gates.m_povm_a(a, 0), _bloch_vector(psi))
    return float(sum(p_attempt(a, psi, k) for k in range(1, int(n) + 1)))


def p_attempt_sequential(a: float, psi, n: int) -> float:
    """Same quantity as :func:`p_attempt` from explicit POVM products."""
    v = _bloch_vector(psi)
    sched = feedback_schedule(a, n).terms
    for ak in sched[:-1]:
        v = gates.m_povm_a(ak, 1) @ v
    w = gates.m_povm_a(sched[-1], 0) @ v
    return float(np.vdot(w, w).real)


@dataclass
class TrajectoryStats:
    attempts_histogram: np.ndarray  # index k-1 -> successes at attempt k; last entry: failures
    p_success_empirical: np.ndarray  # cumulative, per n
    trajectories: int
    seed: int
    min_success_fidelity: float = 1.0
    extra: dict = field(default_factory=dict)

    @property
    def failures(self) -> int:
        return int(self.attempts_histogram[-1])


def simulate_feedback(
    a: float,
    psi,
    n_max: int,
    trajectories: int,
    seed: int,
    *,
    batch: int = 1 << 16,
    form: str = "recursive",
) -> TrajectoryStats:
    """Sample trajectories of the feedback protocol.

    Each trajectory applies the pair ``{M_0(a_k), M_1(a_k)}`` to its current
    renormalized state, stopping at the first ``M_0`` outcome or after
    ``n_max`` attempts.  On success the state is compared with
    ``M_0(a)|psi>``.  Trajectories are processed in batches with sub-seeds
    spawned from ``seed`` so results do not depend on the batch layout being
    parallel or serial.
    """
    sched = feedback_schedule(a, n_max, form=form).terms
    v0 = _bloch_vector(psi)
    target = linalg.normalize(gates.m_povm_a(a, 0) @ v0)
    hist = np.zeros(n_max + 1, dtype=np.int64)
    min_fid = 1.0
    seqs = np.random.SeedSequence(seed).spawn((trajectories + batch - 1) // batch)
    done = 0
    for ss in seqs:
        size = min(batch, trajectories - done)
        done += size
        rng = np.random.default_rng(ss)
        states = np.tile(v0, (size, 1))
        alive = np.ones(size, dtype=bool)
        for k, ak in enumerate(sched):
            m0 = np.diag(gates.m_povm_a(ak, 0))
            m1 = np.diag(gates.m_povm_a(ak, 1))
            idx = np.flatnonzero(alive)
            cur = states[idx]
            b0 = cur * m0
            p0 = np.sum(np.abs(b0) ** 2, axis=1)
            u = rng.random(idx.size)
            win = u < p0
            if np.any(win):
                good = b0[win] / np.sqrt(p0[win])[:, None]
                fid = np.abs(good @ target.conj()) ** 2
                min_fid = min(min_fid, float(fid.min()))
                hist[k] += int(win.sum())
            lose = ~win
            b1 = cur[lose] * m1
            b1 /= np.linalg.norm(b1, axis=1)[:, None]
            states[idx[lose]] = b1
            alive[idx[win]] = False
        hist[n_max] += int(alive.sum())
    cum = np.cumsum(hist[:-1]) / trajectories
    return TrajectoryStats(hist, cum, trajectories, int(seed), min_fid)


# ---------------------------------------------------------------- imaginary time


def _ite_closed_form(epsilon: float, n: int) -> float:
    a = gates.a_of_epsilon(epsilon)
    r = a ** (2 * n)
    return float(r / (1 + r))


def _apply_pauli_frame(psi: np.ndarray, live: list[int], node: int, neighbors: Sequence[int]) -> np.ndarray:
    """Undo an ``X`` byproduct sitting on ``node`` under the remaining CZs:
    apply ``X_node`` and ``Z`` on its unmeasured neighbors."""
    psi = linalg.apply_gate(psi, X, [live.index(node)])
    for nb in neighbors:
        if nb in live:
            psi = linalg.apply_gate(psi, Z, [live.index(nb)])
    return psi


def _run_chain(epsilon: float, n: int, psi, rng, correct: bool, postselect_x: bool) -> np.ndarray:
    """One chain pattern of ``2n + 1`` nodes; returns the output state.

    Tilted nodes (even ids) are postselected on 0.  Each ``x`` node (odd id)
    is either postselected on 0 or sampled and its byproduct corrected by
    Pauli-frame feed-forward.
    """
    bases = []
    for _ in range(n):
        bases += [MeasurementBasis.xz(epsilon), X_BASIS]
    pattern = chain_pattern(bases)
    state = inject_input(psi, pattern)
    live = list(pattern.nodes)
    for node in pattern.order:
        q = live.index(node)
        if node % 2 == 0:
            _, _, state = measure_qubit(state, q, pattern.bases[node], postselect=0)
            live.pop(q)
        else:
            forced = 0 if postselect_x else None
            s, _, state = measure_qubit(state, q, pattern.bases[node], postselect=forced, rng=rng)
            live.pop(q)
            if s == 1 and correct:
                state = _apply_pauli_frame(state, live, node + 1, [node + 2])
    return state


def ite_state(
    epsilon: float,
    n: int,
    mode: str = "matrices",
    *,
    x_policy: str = "postselect",
    seed: int = 0,
    segmented: bool | None = None,
) -> np.ndarray:
    """Output state of ``n`` imaginary-time steps applied to ``|+>``.

    ``mode="matrices"`` multiplies the step matrix; ``mode="mbqc"`` runs the
    chain pattern (one pattern, or ``n`` chained 3-node segments).
    ``x_policy`` is ``"postselect"`` or ``"correct"`` (sample + feed-forward).
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    plus = np.ones(2, dtype=complex) / np.sqrt(2)
    if mode == "matrices":
        step = gates.ite_step(epsilon)
        v = plus
        for _ in range(n):
            v = linalg.normalize(step @ v)
        return v
    if mode != "mbqc":
        raise ValueError(f"unknown mode {mode!r}")
    if x_policy not in ("postselect", "correct"):
        raise ValueError(f"unknown x_policy {x_policy!r}")
    if n == 0:
        return plus
    rng = np.random.default_rng(seed)
    postselect_x = x_policy == "postselect"
    if segmented is None:
        segmented = n > MAX_SINGLE_PATTERN_STEPS
    if not segmented:
        if 2 * n + 1 > MAX_QUBITS:
            raise OverflowError(f"chain of {2 * n + 1} nodes exceeds the qubit cap; use segmented=True")
        return _run_chain(epsilon, n, plus, rng, correct=True, postselect_x=postselect_x)
    v = plus
    for _ in range(n):
        v = _run_chain(epsilon, 1, v, rng, correct=True, postselect_x=postselect_x)
    return v


def ite_chain(epsilon: float, n: int, mode: str = "matrices", **kwargs) -> tuple[float, float]:
    """``(p0, tau)``: probability of ``|0>`` after ``n`` steps and the
    imaginary time ``tau = (n/2) ln a``."""
    out = ite_state(epsilon, n, mode, **kwargs)
    tau = n / 2 * np.log(gates.a_of_epsilon(epsilon))
    return float(abs(out[0]) ** 2), float(tau)


def compact_circuit_state(epsilon: float, n: int, psi=None) -> np.ndarray:
    """Compacted single-qubit-per-step circuit, tilted outcomes postselected on 0.

    Each step couples a fresh ``|+>`` qubit by CZ, measures the old one in the
    tilted basis (leaving ``H M_0`` on the fresh qubit), and applies ``H``.
    """
    v = np.ones(2, dtype=complex) / np.sqrt(2) if psi is None else linalg.as_state(psi)
    basis = MeasurementBasis.xz(epsilon)
    plus = np.ones(2, dtype=complex) / np.sqrt(2)
    for _ in range(n):
        # old qubit 0, fresh qubit 1
        state = np.kron(plus, v)
        state = linalg.apply_gate(state, linalg.CZ, [0, 1])
        _, _, state = measure_qubit(state, 0, basis, postselect=0)
        v = linalg.H @ state
    return v


def compact_chain_equivalence(epsilon: float, n: int, *, seed: int = 0, tol: float = 1e-10) -> bool:
    """True iff the compacted circuit and the full MBQC chain give the same
    Z-basis output distribution, for both postselected and feed-forward
    corrected ``x`` outcomes."""
    if n < 1:
        raise ValueError("n must be at least 1")
    compact = compact_circuit_state(epsilon, n)
    ref = np.abs(compact) ** 2
    for policy in ("postselect", "correct"):
        for segmented in (False, True):
            if not segmented and 2 * n + 1 > MAX_QUBITS:
                continue
            out = ite_state(epsilon, n, "mbqc", x_policy=policy, seed=seed, segmented=segmented)
            if np.max(np.abs(np.abs(out) ** 2 - ref)) > tol:
                return False
    return True
