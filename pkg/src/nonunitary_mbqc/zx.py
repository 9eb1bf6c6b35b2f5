"""A small ZX-calculus engine with scalar-exact tensor semantics.

Diagrams are immutable.  A diagram is a tuple of spiders whose legs name
wires; a wire is named by any hashable id and must have exactly two
endpoints, each either a spider leg or a boundary slot.  Wires listed in
``hadamard`` carry a Hadamard box.  ``to_matrix`` contracts the network
exactly (no dropped scalars): a green spider with phase ``a`` is
``|0..0><0..0| + e^{ia}|1..1><1..1|``, a red one the same in the ``|+>/|->``
basis, and a Hadamard box is the unitary Hadamard matrix.

Matrix convention: output slot ``k`` (and input slot ``k``) is qubit ``k`` of
the row (column) index, matching :mod:`nonunitary_mbqc.linalg`.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field, replace
from typing import Hashable, Iterable, Sequence

import numpy as np

from . import linalg
from .mbqc import MeasurementBasis, MeasurementPattern

GREEN = "g"
RED = "r"
TWO_PI = 2 * np.pi
PHASE_TOL = 1e-12
MAX_RANK = 20

Wire = Hashable


def _wrap(phase: float) -> float:
    p = float(phase) % TWO_PI
    return 0.0 if abs(p - TWO_PI) < PHASE_TOL else p


def _is_zero_phase(phase: float) -> bool:
    p = _wrap(phase)
    return p < PHASE_TOL or TWO_PI - p < PHASE_TOL


@dataclass(frozen=True)
class Spider:
    color: str
    phase: float
    legs: tuple[Wire, ...]

    def __post_init__(self):
        if self.color not in (GREEN, RED):
            raise ValueError(f"unknown spider color {self.color!r}")
        object.__setattr__(self, "phase", _wrap(self.phase))
        object.__setattr__(self, "legs", tuple(self.legs))

    def tensor(self) -> np.ndarray:
        k = len(self.legs)
        t = np.zeros((2,) * k, dtype=complex) if k else np.zeros((), dtype=complex)
        if k == 0:
            return np.asarray(1 + np.exp(1j * self.phase), dtype=complex)
        t[(0,) * k] = 1.0
        t[(1,) * k] += np.exp(1j * self.phase)
        if self.color == RED:
            for axis in range(k):
                t = np.moveaxis(np.tensordot(linalg.H, t, axes=([1], [axis])), 0, axis)
        return t


@dataclass(frozen=True)
class ZxDiagram:
    spiders: tuple[Spider, ...] = ()
    inputs: tuple[Wire, ...] = ()
    outputs: tuple[Wire, ...] = ()
    hadamard: frozenset = field(default_factory=frozenset)
    scalar: complex = 1.0

    def __post_init__(self):
        object.__setattr__(self, "spiders", tuple(self.spiders))
        object.__setattr__(self, "inputs", tuple(self.inputs))
        object.__setattr__(self, "outputs", tuple(self.outputs))
        object.__setattr__(self, "hadamard", frozenset(self.hadamard))
        object.__setattr__(self, "scalar", complex(self.scalar))
        counts = Counter(self.inputs) + Counter(self.outputs)
        for sp in self.spiders:
            counts.update(sp.legs)
        bad = {w: c for w, c in counts.items() if c != 2}
        if bad:
            raise ValueError(f"wires without exactly two endpoints: {bad}")
        stray = set(self.hadamard) - set(counts)
        if stray:
            raise ValueError(f"hadamard marks on unknown wires {stray}")

    @property
    def signature(self) -> tuple[int, int]:
        return len(self.inputs), len(self.outputs)

    @property
    def wires(self) -> list[Wire]:
        seen = []
        for w in itertools.chain(self.inputs, self.outputs, *(sp.legs for sp in self.spiders)):
            if w not in seen:
                seen.append(w)
        return seen

    def endpoints(self, wire: Wire) -> list[tuple[str, int]]:
        """Endpoints of ``wire`` as ``("spider", i)``, ``("in", k)`` or ``("out", k)``."""
        ends = []
        for k, w in enumerate(self.inputs):
            if w == wire:
                ends.append(("in", k))
        for k, w in enumerate(self.outputs):
            if w == wire:
                ends.append(("out", k))
        for i, sp in enumerate(self.spiders):
            ends.extend(("spider", i) for w in sp.legs if w == wire)
        return ends

    def to_matrix(self, *, max_rank: int = MAX_RANK) -> np.ndarray:
        return _contract(self, max_rank)

    def structure(self) -> tuple:
        """Hashable structural fingerprint (used for idempotence checks)."""
        return (
            tuple((s.color, round(s.phase, 12), s.legs) for s in self.spiders),
            self.inputs,
            self.outputs,
            tuple(sorted(map(repr, self.hadamard))),
            (round(self.scalar.real, 12), round(self.scalar.imag, 12)),
        )


@dataclass(frozen=True)
class DiagramSum:
    """Formal complex-weighted sum of diagrams sharing one boundary signature."""

    terms: tuple[tuple[complex, ZxDiagram], ...]

    def __post_init__(self):
        terms = tuple((complex(c), d) for c, d in self.terms)
        if not terms:
            raise ValueError("empty diagram sum")
        sigs = {d.signature for _, d in terms}
        if len(sigs) != 1:
            raise ValueError(f"terms have different signatures {sigs}")
        object.__setattr__(self, "terms", terms)

    @property
    def signature(self) -> tuple[int, int]:
        return self.terms[0][1].signature

    def to_matrix(self, *, max_rank: int = MAX_RANK) -> np.ndarray:
        return sum(c * d.to_matrix(max_rank=max_rank) for c, d in self.terms)

    def map_terms(self, fn) -> "DiagramSum":
        return DiagramSum(tuple((c, fn(d)) for c, d in self.terms))


def to_matrix(d: ZxDiagram | DiagramSum, *, max_rank: int = MAX_RANK) -> np.ndarray:
    return d.to_matrix(max_rank=max_rank)


# ---------------------------------------------------------------- contraction


def _contract(d: ZxDiagram, max_rank: int) -> np.ndarray:
    tensors: list[tuple[np.ndarray, list]] = []
    slot_label: dict[tuple[str, int], object] = {}
    # every spider leg occurrence gets its own label first
    leg_labels: list[list] = []
    for i, sp in enumerate(d.spiders):
        leg_labels.append([("leg", i, j) for j in range(len(sp.legs))])
    for k in range(len(d.inputs)):
        slot_label[("in", k)] = ("in", k)
    for k in range(len(d.outputs)):
        slot_label[("out", k)] = ("out", k)

    def occurrences(wire):
        occ = []
        for k, w in enumerate(d.inputs):
            if w == wire:
                occ.append(("in", k))
        for k, w in enumerate(d.outputs):
            if w == wire:
                occ.append(("out", k))
        for i, sp in enumerate(d.spiders):
            for j, w in enumerate(sp.legs):
                if w == wire:
                    occ.append(("leg", i, j))
        return occ

    # union labels joined by plain wires; hadamard wires get an H tensor
    rename: dict = {}
    for wire in d.wires:
        a, b = occurrences(wire)
        if wire in d.hadamard:
            tensors.append((linalg.H.copy(), [a, b]))
        else:
            rename[b] = a
            if a[0] != "leg" and b[0] != "leg":
                # boundary-to-boundary plain wire
                tensors.append((np.eye(2, dtype=complex), [a, b]))
                del rename[b]

    def lab(x):
        return rename.get(x, x)

    for i, sp in enumerate(d.spiders):
        tensors.append((sp.tensor(), [lab(x) for x in leg_labels[i]]))
    tensors = [(t, [lab(x) for x in labels]) for t, labels in tensors]

    # self-loops inside one tensor: trace them out
    cleaned = []
    for t, labels in tensors:
        t, labels = _trace_repeats(t, labels)
        cleaned.append((t, labels))
    tensors = cleaned

    while True:
        best = None
        for i in range(len(tensors)):
            li = tensors[i][1]
            for j in range(i + 1, len(tensors)):
                lj = tensors[j][1]
                shared = set(li) & set(lj)
                if not shared:
                    continue
                rank = len(li) + len(lj) - 2 * len(shared)
                if best is None or rank < best[0]:
                    best = (rank, i, j, shared)
        if best is None:
            break
        rank, i, j, shared = best
        if rank > max_rank:
            raise OverflowError(f"intermediate tensor of rank {rank} exceeds cap {max_rank}")
        (ti, li), (tj, lj) = tensors[i], tensors[j]
        shared = [x for x in li if x in shared]
        t = np.tensordot(ti, tj, axes=([li.index(x) for x in shared], [lj.index(x) for x in shared]))
        labels = [x for x in li if x not in shared] + [x for x in lj if x not in shared]
        t, labels = _trace_repeats(t, labels)
        tensors = [tensors[k] for k in range(len(tensors)) if k not in (i, j)] + [(t, labels)]

    total = np.asarray(d.scalar, dtype=complex)
    labels: list = []
    for t, ls in tensors:
        if len(labels) + len(ls) > max_rank:
            raise OverflowError("result exceeds contraction cap")
        total = np.multiply.outer(total, t)
        labels += ls
    n_in, n_out = len(d.inputs), len(d.outputs)
    want = [lab(("out", k)) for k in reversed(range(n_out))] + [lab(("in", k)) for k in reversed(range(n_in))]
    if sorted(map(repr, want)) != sorted(map(repr, labels)):
        raise ValueError("dangling wire in diagram")
    total = np.transpose(total, [labels.index(x) for x in want]) if labels else total
    return total.reshape(2**n_out, 2**n_in)


def _trace_repeats(t: np.ndarray, labels: list) -> tuple[np.ndarray, list]:
    while True:
        dup = next((x for x in labels if labels.count(x) > 1), None)
        if dup is None:
            return t, labels
        i = labels.index(dup)
        j = labels.index(dup, i + 1)
        t = np.trace(t, axis1=i, axis2=j)
        labels = [x for k, x in enumerate(labels) if k not in (i, j)]


# ---------------------------------------------------------------- rewrites


def _other_endpoint(d: ZxDiagram, wire: Wire, spider: int | None = None):
    ends = d.endpoints(wire)
    if spider is not None:
        ends = list(ends)
        ends.remove(("spider", spider))
    return ends


def fuse_spiders(d: ZxDiagram, wire: Wire) -> ZxDiagram:
    """Merge the two same-colored spiders joined by the plain ``wire``."""
    ends = d.endpoints(wire)
    if len(ends) != 2 or ends[0][0] != "spider" or ends[1][0] != "spider":
        raise ValueError(f"wire {wire!r} does not join two spiders")
    i, j = ends[0][1], ends[1][1]
    if i == j:
        raise ValueError(f"wire {wire!r} is a self-loop")
    if wire in d.hadamard:
        raise ValueError(f"wire {wire!r} carries a Hadamard box")
    a, b = d.spiders[i], d.spiders[j]
    if a.color != b.color:
        raise ValueError("cannot fuse spiders of different colors")
    legs_a = list(a.legs)
    legs_a.remove(wire)
    legs_b = list(b.legs)
    legs_b.remove(wire)
    merged = Spider(a.color, a.phase + b.phase, tuple(legs_a + legs_b))
    spiders = [merged if k == i else sp for k, sp in enumerate(d.spiders) if k != j]
    return replace(d, spiders=tuple(spiders))


def color_change(d: ZxDiagram, spider: int) -> ZxDiagram:
    """Flip a spider's color and toggle the Hadamard box on each of its legs."""
    sp = d.spiders[spider]
    had = set(d.hadamard)
    for w in sp.legs:
        had ^= {w}
    new = Spider(RED if sp.color == GREEN else GREEN, sp.phase, sp.legs)
    spiders = tuple(new if k == spider else s for k, s in enumerate(d.spiders))
    return replace(d, spiders=spiders, hadamard=frozenset(had))


def remove_identity(d: ZxDiagram, spider: int) -> ZxDiagram:
    """Drop a phase-free spider with two legs, joining its wires."""
    sp = d.spiders[spider]
    if len(sp.legs) != 2 or not _is_zero_phase(sp.phase):
        raise ValueError("spider is not an identity")
    w1, w2 = sp.legs
    rest = tuple(s for k, s in enumerate(d.spiders) if k != spider)
    had = set(d.hadamard)
    if w1 == w2:
        # closed loop: trace of I is 2, trace of H is 0
        factor = 0.0 if w1 in had else 2.0
        had.discard(w1)
        return replace(d, spiders=rest, hadamard=frozenset(had), scalar=d.scalar * factor)
    h = (w1 in had) ^ (w2 in had)
    had.discard(w1)
    had.discard(w2)
    if h:
        had.add(w1)

    def sub(w):
        return w1 if w == w2 else w

    spiders = tuple(Spider(s.color, s.phase, tuple(sub(w) for w in s.legs)) for s in rest)
    return ZxDiagram(
        spiders,
        tuple(sub(w) for w in d.inputs),
        tuple(sub(w) for w in d.outputs),
        frozenset(had),
        d.scalar,
    )


def cancel_hadamard_pair(d: ZxDiagram, w1: Wire, w2: Wire) -> ZxDiagram:
    """Remove two parallel Hadamard wires between two same-colored spiders
    (exact, with a factor 1/2)."""
    if w1 == w2 or w1 not in d.hadamard or w2 not in d.hadamard:
        raise ValueError("need two distinct Hadamard wires")
    e1, e2 = d.endpoints(w1), d.endpoints(w2)
    if sorted(e1) != sorted(e2) or any(e[0] != "spider" for e in e1) or e1[0] == e1[1]:
        raise ValueError("wires do not join the same two spiders")
    i, j = e1[0][1], e1[1][1]
    if d.spiders[i].color != d.spiders[j].color:
        raise ValueError("spiders have different colors")
    spiders = []
    for k, s in enumerate(d.spiders):
        if k in (i, j):
            legs = list(s.legs)
            legs.remove(w1)
            legs.remove(w2)
            s = Spider(s.color, s.phase, tuple(legs))
        spiders.append(s)
    had = set(d.hadamard) - {w1, w2}
    return replace(d, spiders=tuple(spiders), hadamard=frozenset(had), scalar=d.scalar / 2)


def remove_self_loop(d: ZxDiagram, spider: int, wire: Wire) -> ZxDiagram:
    """A plain self-loop is removed exactly; a Hadamard self-loop adds pi to
    the phase with a factor 1/sqrt(2)."""
    sp = d.spiders[spider]
    if list(sp.legs).count(wire) != 2:
        raise ValueError(f"wire {wire!r} is not a self-loop of spider {spider}")
    legs = tuple(w for w in sp.legs if w != wire)
    had = set(d.hadamard)
    scalar = d.scalar
    phase = sp.phase
    if wire in had:
        had.discard(wire)
        if sp.color == RED:
            raise ValueError("Hadamard self-loop on a red spider; color-change first")
        if not legs:
            # closed spider: sum_a H_aa e^{i a phase}
            scalar *= (1 - np.exp(1j * phase)) / np.sqrt(2)
            spiders = tuple(s for k, s in enumerate(d.spiders) if k != spider)
            return replace(d, spiders=spiders, hadamard=frozenset(had), scalar=scalar)
        phase += np.pi
        scalar /= np.sqrt(2)
    elif not legs:
        scalar *= 1 + np.exp(1j * phase)
        spiders = tuple(s for k, s in enumerate(d.spiders) if k != spider)
        return replace(d, spiders=spiders, hadamard=frozenset(had), scalar=scalar)
    new = Spider(sp.color, phase, legs)
    spiders = tuple(new if k == spider else s for k, s in enumerate(d.spiders))
    return replace(d, spiders=spiders, hadamard=frozenset(had), scalar=scalar)


def _find_rewrite(d: ZxDiagram):
    # fusion along plain wires
    for w in d.wires:
        if w in d.hadamard:
            continue
        ends = d.endpoints(w)
        if ends[0][0] == ends[1][0] == "spider" and ends[0][1] != ends[1][1]:
            if d.spiders[ends[0][1]].color == d.spiders[ends[1][1]].color:
                return fuse_spiders, (w,)
    for i, sp in enumerate(d.spiders):
        counts = Counter(sp.legs)
        for w, c in counts.items():
            if c == 2 and (w not in d.hadamard or sp.color == GREEN):
                return remove_self_loop, (i, w)
    for i, sp in enumerate(d.spiders):
        if len(sp.legs) == 2 and _is_zero_phase(sp.phase):
            return remove_identity, (i,)
    had = [w for w in d.wires if w in d.hadamard]
    for w1, w2 in itertools.combinations(had, 2):
        e1, e2 = d.endpoints(w1), d.endpoints(w2)
        if sorted(e1) == sorted(e2) and all(e[0] == "spider" for e in e1) and e1[0] != e1[1]:
            if d.spiders[e1[0][1]].color == d.spiders[e1[1][1]].color:
                return cancel_hadamard_pair, (w1, w2)
    return None


def simplify(d: ZxDiagram, *, max_steps: int = 10_000) -> ZxDiagram:
    """Apply fusion, self-loop removal, identity removal and Hadamard-pair
    cancellation until none applies."""
    for _ in range(max_steps):
        found = _find_rewrite(d)
        if found is None:
            return d
        rule, args = found
        d = rule(d, *args)
    raise RuntimeError("simplify did not reach a fixpoint")


def simplify_sum(s: DiagramSum) -> DiagramSum:
    return s.map_terms(simplify)


# ---------------------------------------------------------------- building blocks


def spider_map(color: str, phase: float, n_in: int, n_out: int) -> ZxDiagram:
    ins = tuple(f"i{k}" for k in range(n_in))
    outs = tuple(f"o{k}" for k in range(n_out))
    return ZxDiagram((Spider(color, phase, ins + outs),), ins, outs)


def identity_wire(n: int = 1) -> ZxDiagram:
    ws = tuple(f"w{k}" for k in range(n))
    return ZxDiagram((), ws, ws)


def red_measurement_expand(phase: float) -> DiagramSum:
    """Red 1->0 effect with ``phase`` as ``green(0) + e^{i phase} green(pi)``.

    The sum equals ``sqrt(2)`` times the red effect.
    """
    return DiagramSum(
        (
            (1.0, spider_map(GREEN, 0.0, 1, 0)),
            (np.exp(1j * phase), spider_map(GREEN, np.pi, 1, 0)),
        )
    )


def xz_measurement_effect(theta: float, s: int, *, phi: float = 0.0) -> DiagramSum:
    """Effect of measuring at polar angle ``theta`` (azimuth ``phi``), outcome ``s``.

    Built as ``green(pi/2)`` followed by ``red(theta + pi s)`` with the red
    effect expanded into green spiders; each term is one fused green spider
    ``green(pi/2 + l pi - phi)``.  Equals the basis bra ``<b_s|`` up to sign.
    """
    gamma = theta + np.pi * s
    terms = []
    for ell in (0, 1):
        terms.append((np.exp(1j * ell * gamma) * np.exp(-1j * gamma / 2) / 2,
                      spider_map(GREEN, np.pi / 2 + ell * np.pi - phi, 1, 0)))
    return DiagramSum(tuple(terms))


def xz_measurement_composite(theta: float, s: int) -> ZxDiagram:
    """Unexpanded ``green(pi/2) -> red(theta + pi s)`` effect (no scalar fix)."""
    return ZxDiagram(
        (Spider(GREEN, np.pi / 2, ("in", "m")), Spider(RED, theta + np.pi * s, ("m",))),
        ("in",),
        (),
    )


def measurement_effect(basis: MeasurementBasis, s: int) -> DiagramSum:
    """Basis bra ``<b_s|`` (up to sign) as green-spider terms."""
    if abs(np.sin(basis.theta) - 1.0) < 1e-15:
        # xy plane: a single green spider
        d = spider_map(GREEN, -basis.phi + np.pi * s, 1, 0)
        return DiagramSum(((1 / np.sqrt(2), d),))
    return xz_measurement_effect(basis.theta, s, phi=basis.phi)


def pattern_to_zx(pattern: MeasurementPattern, outcomes: Sequence[int]) -> DiagramSum:
    """ZX form of a pattern with fixed outcomes.

    Nodes are phase-free green spiders, graph edges Hadamard wires, and each
    measured node gets its measurement effect attached by a plain wire.  The
    result contracts to ``extract_kraus(pattern, outcomes)`` up to sign.
    """
    outcomes = [int(s) for s in outcomes]
    if len(outcomes) != len(pattern.order):
        raise ValueError(f"expected {len(pattern.order)} outcomes")
    effects = [measurement_effect(pattern.bases[n], s) for n, s in zip(pattern.order, outcomes)]
    legs: dict[int, list] = {n: [] for n in pattern.nodes}
    inputs = tuple(f"in{n}" for n in pattern.inputs)
    outputs = tuple(f"out{n}" for n in pattern.outputs)
    for n in pattern.inputs:
        legs[n].append(f"in{n}")
    for n in pattern.outputs:
        legs[n].append(f"out{n}")
    had = set()
    for u, v in pattern.edges:
        w = f"e{u}_{v}"
        legs[u].append(w)
        legs[v].append(w)
        had.add(w)
    for n in pattern.order:
        legs[n].append(f"m{n}")
    # exact scalars: CZ = sqrt(2) * (green-H-green), |+> = green/sqrt(2)
    n_fresh = sum(1 for n in pattern.nodes if n not in pattern.inputs)
    base_scalar = np.sqrt(2) ** len(pattern.edges) / np.sqrt(2) ** n_fresh
    node_spiders = [Spider(GREEN, 0.0, tuple(legs[n])) for n in pattern.nodes]
    # passthrough io nodes
    terms = []
    for choice in itertools.product(*(e.terms for e in effects)):
        coef = base_scalar
        eff_spiders = []
        for node, (c, eff) in zip(pattern.order, choice):
            coef *= c * eff.scalar
            (sp,) = eff.spiders
            eff_spiders.append(Spider(sp.color, sp.phase, (f"m{node}",)))
        terms.append((coef, ZxDiagram(tuple(node_spiders + eff_spiders), inputs, outputs, frozenset(had))))
    return DiagramSum(tuple(terms))


def verify_equiv(a, b, tol: float = linalg.DEFAULT_TOL) -> bool:
    """Equality up to a nonzero scalar of two diagrams, sums, or matrices."""
    ma = a.to_matrix() if hasattr(a, "to_matrix") else linalg.as_matrix(a)
    mb = b.to_matrix() if hasattr(b, "to_matrix") else linalg.as_matrix(b)
    if ma.shape != mb.shape:
        raise ValueError(f"signature mismatch: {ma.shape} vs {mb.shape}")
    return linalg.equal_up_to_scalar(ma, mb, tol)


# ---------------------------------------------------------------- fixtures


def teleport_diagram(s1: int, s2: int) -> ZxDiagram:
    """Three-node chain, both measured along x with outcomes ``s1, s2``,
    with the measurement effects already fused into the node spiders."""
    spiders = (
        Spider(GREEN, s1 * np.pi, ("in", "a")),
        Spider(GREEN, s2 * np.pi, ("a", "b")),
        Spider(GREEN, 0.0, ("b", "out")),
    )
    return ZxDiagram(spiders, ("in",), ("out",), frozenset({"a", "b"}))


def fig1d_sum(epsilon: float, s1: int, s2: int) -> DiagramSum:
    """Input node tilted by ``epsilon`` (red effect expanded), middle node
    along x; ``sum_l e^{il(theta + pi s1)} [green(pi/2 + l pi) -H- green(s2 pi) -H- out]``."""
    theta = np.pi / 2 - epsilon
    gamma = theta + np.pi * s1
    terms = []
    for ell in (0, 1):
        spiders = (
            Spider(GREEN, np.pi / 2 + ell * np.pi, ("in", "a")),
            Spider(GREEN, s2 * np.pi, ("a", "b")),
            Spider(GREEN, 0.0, ("b", "out")),
        )
        terms.append((np.exp(1j * ell * gamma), ZxDiagram(spiders, ("in",), ("out",), frozenset({"a", "b"}))))
    return DiagramSum(tuple(terms))


def bubble_diagram(epsilon: float) -> ZxDiagram:
    """Single-qubit ``I - tan(epsilon/2) X`` up to scalar: a green ``pi/2``
    spider between two Hadamard wires, capped by a red ``pi/2 + epsilon`` state."""
    spiders = (
        Spider(GREEN, np.pi / 2, ("in", "out", "c")),
        Spider(RED, np.pi / 2 + epsilon, ("c",)),
    )
    return ZxDiagram(spiders, ("in",), ("out",), frozenset({"in", "out"}))


def fig7_diagram(epsilon: float) -> ZxDiagram:
    """Two-qubit gate as SWAP, CNOT(0->1), bubble on qubit 0, CNOT(0->1).

    The SWAP is a wire crossing: qubit 0's line starts at input slot 1.
    """
    spiders = (
        # first CNOT: control on line A (qubit 0 after the swap), target on line B
        Spider(GREEN, 0.0, ("a0", "a1", "c1")),
        Spider(RED, 0.0, ("b0", "b1", "c1")),
        # bubble on line A
        Spider(GREEN, np.pi / 2, ("a1", "a2", "p")),
        Spider(RED, np.pi / 2 + epsilon, ("p",)),
        # second CNOT
        Spider(GREEN, 0.0, ("a2", "a3", "c2")),
        Spider(RED, 0.0, ("b1", "b3", "c2")),
    )
    return ZxDiagram(spiders, inputs=("b0", "a0"), outputs=("a3", "b3"), hadamard=frozenset({"a1", "a2"}))
