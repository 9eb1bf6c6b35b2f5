"""Second Renyi operator entanglement, exactly and from simulated measurements.

The operator entanglement of a map ``N`` equals the entanglement of its Choi
state ``(I x N)|Phi+>``; for a single-qubit map the second Renyi entropy is
``-ln Tr rho^2`` with ``rho`` the reduced state of the output qubit.  Three
sampling estimators are provided:

* a destructive two-copy SWAP test (Bell-basis measurement across copies),
* the randomized-measurement Hamming-distance formula,
* classical shadows with pairwise purity estimation.

Each returns an :class:`EstimateReport` averaged over independent repeats.
Negative purity estimates raise :class:`EstimationFailure` instead of being
clamped.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from . import linalg
from .linalg import CNOT, H

ENSEMBLES = ("haar", "clifford1q")


class EstimationFailure(ArithmeticError):
    """A purity estimate came out non-positive; more samples are needed."""


@dataclass(frozen=True)
class ShadowConfig:
    n_unitaries: int = 40
    shots_per_unitary: int = 500
    ensemble: str = "haar"
    seed: int = 0

    def __post_init__(self):
        if self.n_unitaries < 2:
            raise ValueError("need at least two unitaries")
        if self.shots_per_unitary < 1:
            raise ValueError("need at least one shot per unitary")
        if self.ensemble not in ENSEMBLES:
            raise ValueError(f"ensemble must be one of {ENSEMBLES}")


@dataclass(frozen=True)
class EstimateReport:
    value: float
    std_error: float
    method: str
    repeats: int
    samples: tuple[float, ...] = ()

    @property
    def spread(self) -> float:
        """Sample standard deviation across repeats."""
        return float(np.std(self.samples, ddof=1)) if len(self.samples) > 1 else 0.0


def _single_qubit_map(n) -> np.ndarray:
    n = linalg.as_matrix(n)
    if n.shape != (2, 2):
        raise ValueError(f"expected a single-qubit map, got shape {n.shape}")
    if np.linalg.norm(n) == 0:
        raise ValueError("map is zero")
    return n


def choi_state(n) -> np.ndarray:
    """Normalized ``(I x N)|Phi+>``: reference on the low qubits, the map's
    output on the high qubits, so amplitude ``[o * d + r] = N[o, r]``."""
    n = linalg.as_matrix(n)
    if n.shape[0] != n.shape[1]:
        raise ValueError("map must be square")
    norm = np.linalg.norm(n)
    if norm == 0:
        raise ValueError("map is zero")
    return (n / norm).reshape(-1)


def exact_renyi2_op(n) -> float:
    """``-ln sum mu^4`` of the Frobenius-normalized singular values."""
    mu = linalg.singular_spectrum(n)
    if mu.size == 0 or mu[0] == 0:
        raise ValueError("map is zero")
    return linalg.renyi2_entropy(mu)


def output_marginal(n) -> np.ndarray:
    """Reduced state of the Choi state's output side, ``N N^dag / Tr``."""
    n = linalg.as_matrix(n)
    rho = n @ n.conj().T
    return rho / np.trace(rho).real


# ---------------------------------------------------------------- random unitaries


@functools.lru_cache(maxsize=None)
def _clifford_group() -> tuple[np.ndarray, ...]:
    def canon(u):
        # fix the global phase by the first entry of largest modulus
        flat = u.reshape(-1)
        k = int(np.argmax(np.abs(flat) > 1e-9))
        return u * (abs(flat[k]) / flat[k])

    def key(u):
        return tuple(np.round(canon(u).reshape(-1), 8))

    gens = (H, linalg.S)
    found = {key(np.eye(2, dtype=complex)): canon(np.eye(2, dtype=complex))}
    frontier = list(found.values())
    while frontier:
        nxt = []
        for u in frontier:
            for g in gens:
                v = canon(g @ u)
                k = key(v)
                if k not in found:
                    found[k] = v
                    nxt.append(v)
        frontier = nxt
    return tuple(found[k] for k in sorted(found))


def clifford_group() -> list[np.ndarray]:
    """The 24 single-qubit Cliffords modulo phase, in a fixed order."""
    return [u.copy() for u in _clifford_group()]


def haar_unitary(rng: np.random.Generator, dim: int = 2) -> np.ndarray:
    """QR of a complex Gaussian matrix with the phases of ``R``'s diagonal
    absorbed into ``Q``."""
    z = (rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def sample_unitary(ensemble: str, rng: np.random.Generator) -> np.ndarray:
    if ensemble == "haar":
        return haar_unitary(rng)
    if ensemble == "clifford1q":
        group = _clifford_group()
        return group[int(rng.integers(len(group)))].copy()
    raise ValueError(f"ensemble must be one of {ENSEMBLES}, got {ensemble!r}")


# ---------------------------------------------------------------- sampling helpers


def _report(samples: list[float], method: str) -> EstimateReport:
    arr = np.asarray(samples, dtype=float)
    err = float(arr.std(ddof=1) / np.sqrt(arr.size)) if arr.size > 1 else 0.0
    return EstimateReport(float(arr.mean()), err, method, int(arr.size), tuple(float(x) for x in arr))


def _entropy_from_purity(purity: float, method: str) -> float:
    if not purity > 0:
        raise EstimationFailure(f"{method}: purity estimate {purity:.4g} is not positive; increase the sample size")
    return float(-np.log(purity))


def _rotated_counts(rho: np.ndarray, cfg: ShadowConfig, rng: np.random.Generator):
    """Draw ``M`` unitaries and ``K`` computational-basis shots each.

    Returns the unitaries and the empirical frequency of outcome 0.
    """
    us, freq0 = [], []
    for _ in range(cfg.n_unitaries):
        u = sample_unitary(cfg.ensemble, rng)
        p0 = float(np.clip((u @ rho @ u.conj().T)[0, 0].real, 0.0, 1.0))
        k0 = rng.binomial(cfg.shots_per_unitary, p0)
        us.append(u)
        freq0.append(k0 / cfg.shots_per_unitary)
    return us, np.asarray(freq0)


# ---------------------------------------------------------------- SWAP test


def swap_test_purity_exact(n) -> float:
    """Probability-level purity of the destructive SWAP test, for checks."""
    return 1 - 2 * _singlet_probability(n)


def _singlet_probability(n) -> float:
    psi = choi_state(_single_qubit_map(n))
    # copy A on qubits 0 (ref), 1 (out); copy B on qubits 2 (ref), 3 (out)
    two = np.kron(psi, psi)
    two = linalg.apply_gate(two, CNOT, [1, 3])
    two = linalg.apply_gate(two, H, [1])
    t = np.abs(two.reshape((2,) * 4)) ** 2  # axes: q3, q2, q1, q0
    return float(t[1, :, 1, :].sum())


def swap_test_renyi2(n, shots: int, seed: int, *, batches: int = 20) -> EstimateReport:
    """Destructive two-copy SWAP test on the Choi state's output qubits.

    The output qubits of two independent Choi copies are measured in the Bell
    basis (``CNOT`` then ``H``); the singlet outcome ``11`` occurs with
    probability ``(1 - Tr rho^2) / 2``.  Shots are split into ``batches``
    whose spread gives the standard error.
    """
    if shots < batches or batches < 2:
        raise ValueError("need at least two batches and one shot per batch")
    p11 = _singlet_probability(n)
    rng = np.random.default_rng(seed)
    sizes = np.full(batches, shots // batches)
    sizes[: shots % batches] += 1
    hits = rng.binomial(sizes, p11)
    purity = 1 - 2 * hits.sum() / shots
    value = _entropy_from_purity(purity, "swap")
    batch_purity = 1 - 2 * hits / sizes
    err = float(batch_purity.std(ddof=1) / np.sqrt(batches) / purity)
    return EstimateReport(value, err, "swap", batches, (value,))


# ---------------------------------------------------------------- Hamming formula


def _hamming_purity(freq0: np.ndarray, shots: int, average: str) -> float:
    """``2 sum_{s,s'} (-2)^{-D(s,s')} P(s) P(s')`` for one qubit.

    ``per_unitary`` evaluates the quadratic form separately for each unitary
    with unbiased estimates of ``P(s)^2`` and ``P(0)P(1)``, then averages;
    ``pooled`` first averages ``P`` over unitaries.
    """
    p0, p1 = freq0, 1 - freq0
    if average == "pooled":
        q0, q1 = p0.mean(), p1.mean()
        return float(2 * (q0 * q0 + q1 * q1 - q0 * q1))
    if average != "per_unitary":
        raise ValueError("average must be 'per_unitary' or 'pooled'")
    if shots < 2:
        raise ValueError("per-unitary averaging needs at least two shots")
    k = shots
    sq0 = p0 * (k * p0 - 1) / (k - 1)
    sq1 = p1 * (k * p1 - 1) / (k - 1)
    cross = p0 * p1 * k / (k - 1)
    return float(np.mean(2 * (sq0 + sq1 - cross)))


def hamming_renyi2(n, cfg: ShadowConfig, *, repeats: int = 10, average: str = "per_unitary") -> EstimateReport:
    """Randomized-measurement estimate via the Hamming-distance identity."""
    rho = output_marginal(_single_qubit_map(n))
    values = []
    for ss in np.random.SeedSequence(cfg.seed).spawn(repeats):
        rng = np.random.default_rng(ss)
        _, freq0 = _rotated_counts(rho, cfg, rng)
        values.append(_entropy_from_purity(_hamming_purity(freq0, cfg.shots_per_unitary, average), "hamming"))
    return _report(values, f"hamming-{average}")


# ---------------------------------------------------------------- classical shadows


def _shadows(rho: np.ndarray, cfg: ShadowConfig, rng: np.random.Generator) -> list[np.ndarray]:
    us, freq0 = _rotated_counts(rho, cfg, rng)
    out = []
    for u, f in zip(us, freq0):
        diag = np.diag([f, 1 - f]).astype(complex)
        out.append(3 * u.conj().T @ diag @ u - np.eye(2))
    return out


def shadow_states(n, cfg: ShadowConfig) -> list[np.ndarray]:
    """Snapshots ``3 U^dag (sum_i |s_i><s_i| / K) U - I`` of the output qubit."""
    rho = output_marginal(_single_qubit_map(n))
    return _shadows(rho, cfg, np.random.default_rng(cfg.seed))


def shadow_purity(shadows) -> float:
    """``sum_{m != m'} Tr(rho_m rho_m') / (M (M - 1))``."""
    mats = [linalg.as_matrix(s) for s in shadows]
    m = len(mats)
    if m < 2:
        raise ValueError("need at least two shadows")
    total = sum(mats)
    cross = np.trace(total @ total).real - sum(np.trace(r @ r).real for r in mats)
    return float(cross / (m * (m - 1)))


def shadow_renyi2(shadows) -> EstimateReport:
    """Pairwise purity of a list of snapshots as an entropy (one repeat)."""
    value = _entropy_from_purity(shadow_purity(shadows), "shadow")
    return EstimateReport(value, 0.0, "shadow", 1, (value,))


def shadow_renyi2_repeated(n, cfg: ShadowConfig, *, repeats: int = 10) -> EstimateReport:
    rho = output_marginal(_single_qubit_map(n))
    values = []
    for ss in np.random.SeedSequence(cfg.seed).spawn(repeats):
        rng = np.random.default_rng(ss)
        values.append(_entropy_from_purity(shadow_purity(_shadows(rho, cfg, rng)), "shadow"))
    return _report(values, "shadow")
