"""Cluster-state MBQC with arbitrary-axis single-qubit measurements.

A :class:`MeasurementPattern` is a graph whose nodes are inputs, middles or
outputs.  Running a pattern injects the logical input on the input nodes,
puts every other node in ``|+>``, applies ``CZ`` along every edge, and then
measures all non-output nodes one by one.  Measured qubits are dropped from
the register as soon as they are measured.

Register layout: at any point the register holds the unmeasured nodes in
ascending node-id order, the lowest id on qubit 0.  Outputs therefore end up
ordered by node id, and so do inputs on the logical side.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import linalg

MAX_QUBITS = 16
ZERO_PROB = 1e-14


@dataclass(frozen=True)
class MeasurementBasis:
    """Measurement along ``n = (sin t cos p, sin t sin p, cos t)``.

    Outcome 0 projects onto ``cos(t/2)|0> + e^{ip} sin(t/2)|1>``.
    """

    theta: float
    phi: float = 0.0

    @classmethod
    def xz(cls, epsilon: float) -> "MeasurementBasis":
        """xz-plane basis tilted by ``epsilon`` from x towards z."""
        return cls(np.pi / 2 - epsilon, 0.0)

    @classmethod
    def xy(cls, phi: float) -> "MeasurementBasis":
        return cls(np.pi / 2, phi)

    def eigenvector(self, s: int) -> np.ndarray:
        c, sn = np.cos(self.theta / 2), np.sin(self.theta / 2)
        ph = np.exp(1j * self.phi)
        if s == 0:
            return np.array([c, ph * sn], dtype=complex)
        if s == 1:
            return np.array([sn, -ph * c], dtype=complex)
        raise ValueError(f"outcome must be 0 or 1, got {s}")

    def projector(self, s: int) -> np.ndarray:
        v = self.eigenvector(s)
        return np.outer(v, v.conj())


X_BASIS = MeasurementBasis(np.pi / 2, 0.0)
Y_BASIS = MeasurementBasis(np.pi / 2, np.pi / 2)
Z_BASIS = MeasurementBasis(0.0, 0.0)


@dataclass(frozen=True)
class MeasurementPattern:
    """Graph plus per-node measurement bases.

    ``inputs`` and ``outputs`` are node-id tuples; a node listed in both is an
    unmeasured pass-through.  Every node that is not an output needs a basis.
    ``order`` is the measurement order; by default inputs first, then the
    remaining measured nodes in ascending id.
    """

    nodes: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]
    inputs: tuple[int, ...]
    outputs: tuple[int, ...]
    bases: dict[int, MeasurementBasis] = field(default_factory=dict)
    order: tuple[int, ...] | None = None

    def __post_init__(self):
        nodes = tuple(sorted(int(n) for n in self.nodes))
        if len(set(nodes)) != len(nodes):
            raise ValueError("duplicate node ids")
        node_set = set(nodes)
        edges = []
        seen = set()
        for u, v in self.edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValueError(f"self-loop on node {u}")
            if u not in node_set or v not in node_set:
                raise ValueError(f"edge ({u}, {v}) references an unknown node")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise ValueError(f"duplicate edge {key}")
            seen.add(key)
            edges.append(key)
        inputs = tuple(sorted(int(n) for n in self.inputs))
        outputs = tuple(sorted(int(n) for n in self.outputs))
        for group, name in ((inputs, "input"), (outputs, "output")):
            if not set(group) <= node_set:
                raise ValueError(f"{name} nodes {group} not in graph")
            if len(set(group)) != len(group):
                raise ValueError(f"duplicate {name} nodes")
        if not outputs:
            raise ValueError("pattern needs at least one output")
        bases = {int(k): v for k, v in self.bases.items()}
        measured = [n for n in nodes if n not in outputs]
        missing = [n for n in measured if n not in bases]
        if missing:
            raise ValueError(f"nodes {missing} have no measurement basis")
        extra = [n for n in bases if n not in measured]
        if extra:
            raise ValueError(f"bases given for unmeasured nodes {extra}")
        if self.order is None:
            order = tuple(n for n in inputs if n not in outputs) + tuple(
                n for n in measured if n not in inputs
            )
        else:
            order = tuple(int(n) for n in self.order)
            if sorted(order) != sorted(measured):
                raise ValueError("order must list every measured node exactly once")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "edges", tuple(edges))
        object.__setattr__(self, "inputs", inputs)
        object.__setattr__(self, "outputs", outputs)
        object.__setattr__(self, "bases", bases)
        object.__setattr__(self, "order", order)

    @property
    def n_inputs(self) -> int:
        return len(self.inputs)

    @property
    def n_outputs(self) -> int:
        return len(self.outputs)

    @property
    def measured(self) -> tuple[int, ...]:
        return self.order

    def role(self, node: int) -> str:
        if node in self.inputs and node in self.outputs:
            return "io"
        if node in self.inputs:
            return "input"
        if node in self.outputs:
            return "output"
        return "middle"

    def neighbors(self, node: int) -> list[int]:
        return sorted({v for u, v in self.edges if u == node} | {u for u, v in self.edges if v == node})

    def replace_basis(self, node: int, basis: MeasurementBasis) -> "MeasurementPattern":
        bases = dict(self.bases)
        bases[int(node)] = basis
        return MeasurementPattern(self.nodes, self.edges, self.inputs, self.outputs, bases, self.order)


def chain_pattern(bases: Sequence[MeasurementBasis], *, with_input: bool = True) -> MeasurementPattern:
    """Linear cluster ``0 - 1 - ... - k`` measuring nodes ``0..k-1`` with
    ``bases`` and leaving node ``k`` as the output."""
    k = len(bases)
    nodes = tuple(range(k + 1))
    edges = tuple((i, i + 1) for i in range(k))
    return MeasurementPattern(
        nodes,
        edges,
        inputs=(0,) if with_input else (),
        outputs=(k,),
        bases={i: b for i, b in enumerate(bases)},
    )


@dataclass(frozen=True)
class OutcomePolicy:
    """Either ``sample`` outcomes with a seeded RNG or ``postselect`` fixed bits."""

    mode: str
    seed: int | None = None
    bits: tuple[int, ...] | None = None

    @classmethod
    def sample(cls, seed: int) -> "OutcomePolicy":
        return cls("sample", seed=int(seed))

    @classmethod
    def postselect(cls, bits: Iterable[int] | str) -> "OutcomePolicy":
        return cls("postselect", bits=tuple(int(b) for b in bits))


@dataclass(frozen=True)
class RunRecord:
    outcomes: tuple[int, ...]
    joint_probability: float
    output_state: np.ndarray
    step_probabilities: tuple[float, ...] = ()


def _check_cap(n: int, cap: int) -> None:
    if n > cap:
        raise OverflowError(f"{n} qubits exceed the cap of {cap}")


def build_cluster_state(n_nodes: int, edges: Iterable[tuple[int, int]], *, cap: int = MAX_QUBITS) -> np.ndarray:
    """``CZ`` on every edge applied to ``|+>^n``; node ``k`` is qubit ``k``."""
    _check_cap(n_nodes, cap)
    psi = np.full(2**n_nodes, 2 ** (-n_nodes / 2), dtype=complex)
    return apply_cz_edges(psi, edges)


def apply_cz_edges(psi: np.ndarray, edges: Iterable[tuple[int, int]]) -> np.ndarray:
    """CZ is diagonal, so all edges collapse into one sign vector."""
    psi = np.asarray(psi, dtype=complex)
    n = linalg.n_qubits_of(psi.shape[0])
    idx = np.arange(2**n)
    parity = np.zeros(2**n, dtype=np.int64)
    for u, v in edges:
        if u == v or not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"invalid edge ({u}, {v})")
        parity ^= ((idx >> u) & (idx >> v)) & 1
    sign = 1 - 2 * parity
    if psi.ndim == 1:
        return psi * sign
    return psi * sign.reshape((-1,) + (1,) * (psi.ndim - 1))


def _register(pattern: MeasurementPattern) -> dict[int, int]:
    return {node: k for k, node in enumerate(pattern.nodes)}


def inject_input(input_state, pattern: MeasurementPattern, *, cap: int = MAX_QUBITS, normalized: bool = True) -> np.ndarray:
    """Place ``input_state`` on the input nodes, ``|+>`` elsewhere, then CZ.

    ``input_state`` may also be a ``(2**n_I, k)`` array of columns, which are
    processed in one batch (used for Kraus extraction).
    """
    _check_cap(len(pattern.nodes), cap)
    arr = np.asarray(input_state, dtype=complex)
    batch = arr.ndim == 2
    cols = arr if batch else arr.reshape(-1, 1)
    if cols.shape[0] != 2**pattern.n_inputs:
        raise ValueError(
            f"input has dimension {cols.shape[0]}, pattern expects {pattern.n_inputs} qubits"
        )
    if normalized and not batch:
        linalg.as_state(cols[:, 0])
    reg = _register(pattern)
    n = len(pattern.nodes)
    plus = np.ones(2, dtype=complex) / np.sqrt(2)
    others = [node for node in pattern.nodes if node not in pattern.inputs]
    # build as (input part) x (others in |+>) then permute into node order
    rest = np.ones(1, dtype=complex)
    for _ in others:
        rest = np.kron(plus, rest)
    full = np.einsum("i,jk->ijk", rest, cols).reshape(2 ** len(others) * cols.shape[0], -1)
    # current qubit layout: inputs on low bits (ascending), others above
    layout = list(pattern.inputs) + others
    order = [layout.index(node) for node in pattern.nodes]
    out = np.stack([linalg.reorder_qubits(full[:, j], order) for j in range(full.shape[1])], axis=1)
    edges = [(reg[u], reg[v]) for u, v in pattern.edges]
    out = apply_cz_edges(out, edges)
    return out if batch else out[:, 0]


def project_qubit(state: np.ndarray, qubit: int, basis: MeasurementBasis, s: int) -> np.ndarray:
    """Apply ``<b_s|`` on ``qubit`` without renormalizing; the qubit is removed.

    ``state`` may carry trailing batch axes.
    """
    state = np.asarray(state, dtype=complex)
    dim = state.shape[0]
    n = linalg.n_qubits_of(dim)
    if not 0 <= qubit < n:
        raise ValueError(f"qubit {qubit} out of range for {n} qubits")
    bra = basis.eigenvector(s).conj()
    tail = state.shape[1:]
    t = state.reshape((2 ** (n - 1 - qubit), 2, 2**qubit) + tail)
    out = np.tensordot(bra, t, axes=([0], [1]))
    return out.reshape((2 ** (n - 1),) + tail)


def measure_qubit(
    state,
    qubit: int,
    basis: MeasurementBasis,
    *,
    postselect: int | None = None,
    rng: np.random.Generator | None = None,
    seed: int | None = None,
) -> tuple[int, float, np.ndarray]:
    """Measure one qubit; return ``(s, probability, collapsed)``.

    The collapsed state is renormalized and has the measured qubit removed.
    Either ``postselect`` an outcome or sample one from ``rng``/``seed``.
    """
    state = linalg.as_state(state, tol=1e-9)
    branches = [project_qubit(state, qubit, basis, s) for s in (0, 1)]
    probs = [float(np.vdot(b, b).real) for b in branches]
    if postselect is None:
        if rng is None:
            rng = np.random.default_rng(seed)
        p0 = probs[0] / (probs[0] + probs[1])
        s = 0 if rng.random() < p0 else 1
    else:
        s = int(postselect)
        if s not in (0, 1):
            raise ValueError(f"outcome must be 0 or 1, got {s}")
    p = probs[s]
    if p < ZERO_PROB:
        raise ZeroDivisionError(f"outcome {s} on qubit {qubit} has probability {p:.3g}")
    return s, p, branches[s] / np.sqrt(p)


def run_pattern(pattern: MeasurementPattern, input_state, policy: OutcomePolicy, *, cap: int = MAX_QUBITS) -> RunRecord:
    """Inject, entangle, and measure every non-output node in order."""
    psi = inject_input(input_state, pattern, cap=cap)
    live = list(pattern.nodes)
    measured = pattern.order
    if policy.mode == "postselect":
        if policy.bits is None or len(policy.bits) != len(measured):
            raise ValueError(f"postselection needs {len(measured)} bits")
        rng = None
    elif policy.mode == "sample":
        rng = np.random.default_rng(policy.seed)
    else:
        raise ValueError(f"unknown policy mode {policy.mode!r}")
    outcomes = []
    step_probs = []
    for k, node in enumerate(measured):
        q = live.index(node)
        forced = policy.bits[k] if policy.mode == "postselect" else None
        s, p, psi = measure_qubit(psi, q, pattern.bases[node], postselect=forced, rng=rng)
        live.pop(q)
        outcomes.append(s)
        step_probs.append(p)
    return RunRecord(tuple(outcomes), float(np.prod(step_probs)), psi, tuple(step_probs))


def extract_kraus(pattern: MeasurementPattern, outcomes: Sequence[int] | str, *, cap: int = MAX_QUBITS) -> np.ndarray:
    """Kraus operator ``K_s`` (``2**n_O x 2**n_I``) of a pattern and outcome string.

    Every computational basis input is propagated through injection and the
    unnormalized projections, so ``run_pattern`` outputs ``K_s psi / |K_s psi|``
    with joint probability ``|K_s psi|^2``.
    """
    outcomes = [int(s) for s in outcomes]
    if len(outcomes) != len(pattern.order):
        raise ValueError(f"expected {len(pattern.order)} outcomes, got {len(outcomes)}")
    cols = np.eye(2**pattern.n_inputs, dtype=complex)
    psi = inject_input(cols, pattern, cap=cap, normalized=False)
    live = list(pattern.nodes)
    for node, s in zip(pattern.order, outcomes):
        q = live.index(node)
        psi = project_qubit(psi, q, pattern.bases[node], s)
        live.pop(q)
    return psi


def all_outcomes(m: int) -> list[tuple[int, ...]]:
    return [tuple((k >> j) & 1 for j in range(m)) for k in range(2**m)]


def povm_sum(pattern: MeasurementPattern) -> np.ndarray:
    total = np.zeros((2**pattern.n_inputs,) * 2, dtype=complex)
    for s in all_outcomes(len(pattern.order)):
        k = extract_kraus(pattern, s)
        total += k.conj().T @ k
    return total


def operator_from_choi(
    pattern: MeasurementPattern, outcomes: Sequence[int] | str, *, cap: int = MAX_QUBITS
) -> tuple[np.ndarray, linalg.SchmidtData]:
    """Induced operator via the state-operator duality.

    A maximally entangled reference is paired with the inputs, the pattern is
    run with the given outcomes postselected, and the surviving
    reference-output state is reshaped into the operator, normalized so that
    its squared singular values sum to one.
    """
    outcomes = [int(s) for s in outcomes]
    n_in = pattern.n_inputs
    n = len(pattern.nodes) + n_in
    if n > cap:
        raise OverflowError(f"{n} qubits (pattern + reference) exceed the cap of {cap}")
    d = 2**n_in
    # reference on the low n_in qubits, pattern nodes above in id order
    bell = np.eye(d, dtype=complex).reshape(-1) / np.sqrt(d)  # index = inp * d + ref
    reg = {node: n_in + k for k, node in enumerate(pattern.nodes)}
    others = [node for node in pattern.nodes if node not in pattern.inputs]
    plus = np.ones(2, dtype=complex) / np.sqrt(2)
    psi = bell
    for _ in others:
        psi = np.kron(plus, psi)
    layout = list(range(n_in)) + [reg[i] for i in pattern.inputs] + [reg[o] for o in others]
    order = [layout.index(q) for q in range(n)]
    psi = linalg.reorder_qubits(psi, order)
    psi = apply_cz_edges(psi, [(reg[u], reg[v]) for u, v in pattern.edges])
    live = list(range(n_in)) + [reg[node] for node in pattern.nodes]
    prob = 1.0
    for node, s in zip(pattern.order, outcomes):
        q = live.index(reg[node])
        _, p, psi = measure_qubit(psi, q, pattern.bases[node], postselect=s)
        prob *= p
        live.pop(q)
    # remaining register: reference (low bits), outputs (high bits)
    n_out = pattern.n_outputs
    op = psi.reshape(2**n_out, d) * np.sqrt(d)
    op = op / np.linalg.norm(op)
    if n_in == 0:
        data = linalg.SchmidtData(np.ones(1), np.ones((1, 1), complex), op, (), tuple(range(n_out)))
    else:
        data = linalg.schmidt(psi, range(n_in))
    return op, data
