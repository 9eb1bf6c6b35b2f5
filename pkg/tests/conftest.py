import itertools

import numpy as np
import pytest

from nonunitary_mbqc import zx
from nonunitary_mbqc.mbqc import MeasurementBasis, MeasurementPattern
from nonunitary_mbqc.zx import GREEN, RED, Spider, ZxDiagram


# filled by the acceptance tests, printed after the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda l: int(l.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_pattern(rng, max_nodes=8, n_inputs=None):
    """Connected random graph with random inputs/outputs and bases."""
    n = int(rng.integers(2 if n_inputs is None else n_inputs + 1, max_nodes + 1))
    edges = set()
    for v in range(1, n):
        u = int(rng.integers(v))
        edges.add((u, v))
    for _ in range(int(rng.integers(0, n))):
        u, v = sorted(rng.choice(n, 2, replace=False).tolist())
        edges.add((u, v))
    perm = rng.permutation(n).tolist()
    k_in = int(rng.integers(0, min(2, n - 1) + 1)) if n_inputs is None else n_inputs
    k_out = int(rng.integers(1, min(2, n - k_in) + 1))
    inputs = perm[:k_in]
    outputs = perm[k_in:k_in + k_out]
    bases = {
        v: MeasurementBasis(float(rng.uniform(0, 2 * np.pi)), float(rng.uniform(0, 2 * np.pi)))
        for v in range(n) if v not in outputs
    }
    return MeasurementPattern(tuple(range(n)), tuple(sorted(edges)), tuple(inputs), tuple(outputs), bases)


def random_diagram(rng, max_spiders=6, max_wires=10):
    """Random well-formed diagram (self-loops and parallel wires allowed)."""
    n_sp = int(rng.integers(1, max_spiders + 1))
    n_in, n_out = int(rng.integers(0, 3)), int(rng.integers(0, 3))
    n_internal = int(rng.integers(0, max_wires - n_in - n_out + 1))
    legs = [[] for _ in range(n_sp)]
    inputs = tuple(f"i{k}" for k in range(n_in))
    outputs = tuple(f"o{k}" for k in range(n_out))
    for w in inputs + outputs:
        legs[int(rng.integers(n_sp))].append(w)
    for k in range(n_internal):
        a, b = rng.integers(n_sp, size=2)
        legs[a].append(f"w{k}")
        legs[b].append(f"w{k}")
    spiders = tuple(
        Spider(GREEN if rng.random() < 0.5 else RED, float(rng.choice([0, np.pi / 2, np.pi, rng.uniform(0, 7)])), tuple(l))
        for l in legs
    )
    wires = list(inputs + outputs) + [f"w{k}" for k in range(n_internal)]
    had = frozenset(w for w in wires if rng.random() < 0.4)
    return ZxDiagram(spiders, inputs, outputs, had, complex(rng.normal(), rng.normal()))


def applicable_rewrites(d):
    """Every (rule, args) whose preconditions hold on ``d``."""
    out = [(zx.color_change, (i,)) for i in range(len(d.spiders))]
    for w in d.wires:
        ends = d.endpoints(w)
        if w not in d.hadamard and ends[0][0] == ends[1][0] == "spider" and ends[0][1] != ends[1][1]:
            if d.spiders[ends[0][1]].color == d.spiders[ends[1][1]].color:
                out.append((zx.fuse_spiders, (w,)))
    for i, sp in enumerate(d.spiders):
        if len(sp.legs) == 2 and zx._is_zero_phase(sp.phase):
            out.append((zx.remove_identity, (i,)))
        for w in set(sp.legs):
            if list(sp.legs).count(w) == 2 and (w not in d.hadamard or sp.color == GREEN):
                out.append((zx.remove_self_loop, (i, w)))
    had = [w for w in d.wires if w in d.hadamard]
    for w1, w2 in itertools.combinations(had, 2):
        e1, e2 = d.endpoints(w1), d.endpoints(w2)
        if sorted(e1) == sorted(e2) and all(e[0] == "spider" for e in e1) and e1[0] != e1[1]:
            if d.spiders[e1[0][1]].color == d.spiders[e1[1][1]].color:
                out.append((zx.cancel_hadamard_pair, (w1, w2)))
    return out
