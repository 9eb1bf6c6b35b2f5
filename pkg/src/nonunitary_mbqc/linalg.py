"""Dense linear algebra shared by the simulator, gate library and estimators.

Qubit ordering convention
-------------------------
Qubit ``k`` is bit ``k`` of the basis-state index, so qubit 0 is the least
significant bit.  With this convention ``tensor_product(a, b)`` (a plain
Kronecker product) places ``b`` on the low qubits and ``a`` on the high ones,
e.g. ``tensor_product(Z, I)`` acts with ``Z`` on qubit 1.

All entropies are in nats.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

MAX_AXIS_DIM = 2**16
SCHMIDT_CUTOFF = 1e-12
DEFAULT_TOL = 1e-10

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
S = np.diag([1, 1j]).astype(complex)
CZ = np.diag([1, 1, 1, -1]).astype(complex)
SWAP = np.array(
    [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex
)
# control qubit 0, target qubit 1
CNOT = np.array(
    [[1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0]], dtype=complex
)


@dataclass(frozen=True)
class SchmidtData:
    """Schmidt decomposition ``|psi> = sum_a mu_a |a;L> (x) |a;R>``.

    ``left_basis[:, a]`` and ``right_basis[:, a]`` are the Schmidt vectors;
    the left vectors are indexed by the left qubits in ascending order
    (lowest left qubit is the least significant bit), likewise on the right.
    """

    coefficients: np.ndarray
    left_basis: np.ndarray
    right_basis: np.ndarray
    left_qubits: tuple[int, ...]
    right_qubits: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.coefficients)


def as_matrix(m) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim == 1:
        m = m.reshape(-1, 1)
    if m.ndim != 2:
        raise ValueError(f"expected a matrix, got array of shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def n_qubits_of(dim: int) -> int:
    n = int(dim).bit_length() - 1
    if dim < 1 or 2**n != dim:
        raise ValueError(f"dimension {dim} is not a power of two")
    return n


def as_state(psi, *, normalized: bool = True, tol: float = 1e-12) -> np.ndarray:
    """Validate a statevector.  Raises ``ValueError`` on a bad norm or size."""
    psi = np.asarray(psi, dtype=complex).ravel()
    n_qubits_of(psi.size)
    if not np.all(np.isfinite(psi)):
        raise ValueError("state has non-finite amplitudes")
    if normalized and abs(np.linalg.norm(psi) - 1.0) > tol:
        raise ValueError(f"state is not normalized (norm {np.linalg.norm(psi):.3g})")
    return psi


def normalize(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex).ravel()
    norm = np.linalg.norm(psi)
    if norm == 0:
        raise ValueError("cannot normalize the zero vector")
    return psi / norm


def basis_state(bits: str | Sequence[int]) -> np.ndarray:
    """Computational basis state; ``bits[k]`` is the value of qubit ``k``."""
    bits = [int(b) for b in bits]
    psi = np.zeros(2 ** len(bits), dtype=complex)
    psi[sum(b << k for k, b in enumerate(bits))] = 1.0
    return psi


def tensor_product(a, b, *, max_dim: int = MAX_AXIS_DIM) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    rows, cols = a.shape[0] * b.shape[0], a.shape[1] * b.shape[1]
    if rows > max_dim or cols > max_dim:
        raise OverflowError(f"tensor product of shape {rows}x{cols} exceeds cap {max_dim}")
    return np.kron(a, b)


def kron_all(*ms) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for m in ms:
        out = tensor_product(out, m)
    return out


def apply_gate(state, gate, targets: Sequence[int], *, check_norm: bool = False) -> np.ndarray:
    """Apply ``gate`` to the ``targets`` qubits of ``state``.

    Bit ``j`` of the gate's row/column index refers to ``targets[j]``.  The
    state is not renormalized, so a nonunitary gate yields an unnormalized
    vector.
    """
    state = as_state(state, normalized=check_norm)
    gate = as_matrix(gate)
    targets = [int(t) for t in targets]
    n = n_qubits_of(state.size)
    m = len(targets)
    if len(set(targets)) != m:
        raise ValueError(f"duplicate targets {targets}")
    if any(t < 0 or t >= n for t in targets):
        raise ValueError(f"targets {targets} out of range for {n} qubits")
    if gate.shape != (2**m, 2**m):
        raise ValueError(f"gate of shape {gate.shape} does not act on {m} qubits")
    if m == 0:
        return gate[0, 0] * state
    # numpy axis i of the reshaped state holds qubit n-1-i
    psi = state.reshape((2,) * n)
    g = gate.reshape((2,) * (2 * m))
    # gate input axes m..2m-1 hold targets[m-1], ..., targets[0]
    in_axes = list(range(m, 2 * m))
    state_axes = [n - 1 - targets[m - 1 - i] for i in range(m)]
    out = np.tensordot(g, psi, axes=(in_axes, state_axes))
    # out axes: gate outputs (targets[m-1..0]) followed by remaining qubits
    remaining = [ax for ax in range(n) if ax not in state_axes]
    current = state_axes + remaining
    out = np.moveaxis(out, list(range(n)), current)
    return out.reshape(-1)


def reorder_qubits(state, order: Sequence[int]) -> np.ndarray:
    """Permute qubits so that new qubit ``k`` is old qubit ``order[k]``."""
    state = np.asarray(state, dtype=complex).ravel()
    n = n_qubits_of(state.size)
    psi = state.reshape((2,) * n)
    # new axis i (qubit n-1-i) takes old qubit order[n-1-i] at old axis n-1-order[n-1-i]
    axes = [n - 1 - order[n - 1 - i] for i in range(n)]
    return np.transpose(psi, axes).reshape(-1)


def bipartite_matrix(state, left_qubits: Sequence[int]) -> tuple[np.ndarray, tuple, tuple]:
    """Reshape amplitudes into a (left, right) matrix."""
    state = np.asarray(state, dtype=complex).ravel()
    n = n_qubits_of(state.size)
    left = tuple(sorted(int(q) for q in left_qubits))
    if len(set(left)) != len(left) or any(q < 0 or q >= n for q in left):
        raise ValueError(f"invalid left qubits {left_qubits} for {n} qubits")
    if not 0 < len(left) < n:
        raise ValueError("bipartition must be a proper nonempty subset")
    right = tuple(q for q in range(n) if q not in left)
    # put right qubits on the low bits and left on the high bits
    psi = reorder_qubits(state, right + left)
    mat = psi.reshape(2 ** len(left), 2 ** len(right))
    return mat, left, right


def schmidt(state, left_qubits: Sequence[int], *, cutoff: float = SCHMIDT_CUTOFF) -> SchmidtData:
    mat, left, right = bipartite_matrix(state, left_qubits)
    u, s, vh = np.linalg.svd(mat, full_matrices=False)
    keep = s > cutoff
    return SchmidtData(
        coefficients=s[keep],
        left_basis=u[:, keep],
        right_basis=vh[keep].T,
        left_qubits=left,
        right_qubits=right,
    )


def schmidt_reassemble(data: SchmidtData) -> np.ndarray:
    mat = (data.left_basis * data.coefficients) @ data.right_basis.T
    n = len(data.left_qubits) + len(data.right_qubits)
    flat = mat.reshape(-1)
    # flat has right qubits on low bits then left qubits
    order = data.right_qubits + data.left_qubits
    inverse = [0] * n
    for new, old in enumerate(order):
        inverse[old] = new
    return reorder_qubits(flat, inverse)


def _weights(mu, tol: float) -> np.ndarray:
    mu = np.abs(np.asarray(mu, dtype=float).ravel())
    p = mu**2
    if abs(p.sum() - 1.0) > tol:
        raise ValueError(f"coefficients are not normalized (sum mu^2 = {p.sum():.6g})")
    return p


def vn_entropy(mu, *, tol: float = 1e-8) -> float:
    p = _weights(mu, tol)
    p = p[p > 0]
    return float(-np.sum(p * np.log(p)))


def renyi2_entropy(mu, *, tol: float = 1e-8) -> float:
    p = _weights(mu, tol)
    return float(-np.log(np.sum(p**2)))


def singular_spectrum(m) -> np.ndarray:
    """Singular values of ``m`` normalized so that their squares sum to one."""
    s = np.linalg.svd(as_matrix(m), compute_uv=False)
    norm = np.linalg.norm(s)
    if norm == 0:
        raise ValueError("zero map has no operator entanglement")
    s = s / norm
    return s[s > SCHMIDT_CUTOFF]


def equal_up_to_scalar(a, b, tol: float = DEFAULT_TOL) -> bool:
    """Cauchy-Schwarz test for ``a = c * b`` with some nonzero complex ``c``."""
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")
    aa = np.vdot(a, a).real
    bb = np.vdot(b, b).real
    if aa == 0 or bb == 0:
        raise ValueError("zero matrix has no scalar class")
    ab = np.vdot(a, b)
    return bool(abs(ab) ** 2 >= (1 - tol) * aa * bb)


def scalar_ratio(a, b) -> complex:
    """Least-squares ``c`` with ``a ~= c * b``."""
    a, b = as_matrix(a), as_matrix(b)
    return complex(np.vdot(b, a) / np.vdot(b, b))


def scalar_deviation(a, b) -> float:
    """Frobenius distance between ``a`` and ``b`` after both are unit-normalized
    and phase-aligned; zero iff they agree up to a scalar."""
    a, b = as_matrix(a), as_matrix(b)
    a = a / np.linalg.norm(a)
    b = b / np.linalg.norm(b)
    ov = np.vdot(b, a)
    phase = ov / abs(ov) if abs(ov) > 0 else 1.0
    return float(np.linalg.norm(a - phase * b))


def _check_hermitian(m: np.ndarray, tol: float) -> None:
    if m.shape[0] != m.shape[1]:
        raise ValueError("matrix is not square")
    scale = max(1.0, np.abs(m).max())
    if np.abs(m - m.conj().T).max() > tol * scale:
        raise ValueError("matrix is not Hermitian")


def matrix_sqrt_psd(m, *, herm_tol: float = 1e-10, neg_tol: float = 1e-8) -> np.ndarray:
    m = as_matrix(m)
    _check_hermitian(m, herm_tol)
    w, v = np.linalg.eigh((m + m.conj().T) / 2)
    if w.min(initial=0.0) < -neg_tol:
        raise ValueError(f"matrix has negative eigenvalue {w.min():.3g}")
    w = np.clip(w, 0.0, None)
    return (v * np.sqrt(w)) @ v.conj().T


def max_eigenvalue_psd(m, *, herm_tol: float = 1e-10) -> float:
    m = as_matrix(m)
    _check_hermitian(m, herm_tol)
    return float(np.linalg.eigvalsh((m + m.conj().T) / 2)[-1])


def fidelity(a, b) -> float:
    """``|<a|b>|^2`` for normalized pure states."""
    a = normalize(a)
    b = normalize(b)
    return float(abs(np.vdot(a, b)) ** 2)


def random_state(n_qubits: int, rng: np.random.Generator) -> np.ndarray:
    psi = rng.normal(size=2**n_qubits) + 1j * rng.normal(size=2**n_qubits)
    return psi / np.linalg.norm(psi)
