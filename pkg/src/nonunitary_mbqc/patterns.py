"""Named patterns and the pattern file format.

Pattern files are JSON documents::

    {
      "nodes": [{"id": 0, "role": "input"}, {"id": 1, "role": "middle"},
                {"id": 2, "role": "output"}],
      "edges": [[0, 1], [1, 2]],
      "bases": {"0": {"theta": "pi/2", "phi": 0},
                "1": {"theta": "pi/2 - eps", "phi": 0}},
      "order": [0, 1]
    }

``role`` is one of ``input``, ``middle``, ``output`` or ``io`` (an input that
is never measured).  Angles are numbers or expressions understood by
:func:`nonunitary_mbqc.angles.parse_angle`; the name ``eps`` is bound to the
``epsilon`` argument of :func:`loads_pattern`.  ``phi`` defaults to 0 and
``order`` is optional.  :func:`dumps_pattern` writes plain floats using
``repr``, so ``loads_pattern(dumps_pattern(p)) == p`` exactly.
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

import numpy as np

from .angles import AngleError, parse_angle
from .mbqc import X_BASIS, MeasurementBasis, MeasurementPattern

ROLES = ("input", "middle", "output", "io")

# 3x3 grid (row-major ids) with node 7 removed; rows 0 and 2 carry the two
# logical qubits and node 1 is the only non-Pauli measurement
FIG1E_NODES = (0, 1, 2, 3, 4, 5, 6, 8)
FIG1E_EDGES = ((0, 1), (0, 3), (1, 2), (1, 4), (2, 5), (3, 4), (3, 6), (4, 5), (5, 8))
FIG1E_INPUTS = (0, 6)
FIG1E_OUTPUTS = (2, 8)
FIG1E_SPECIAL = 1


class PatternParseError(ValueError):
    """Malformed pattern document; ``line``/``column`` are 1-based when known."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(where + message)


def fig1c_pattern(epsilon: float) -> MeasurementPattern:
    """3-chain: input along x, middle tilted by ``epsilon``."""
    return MeasurementPattern((0, 1, 2), ((0, 1), (1, 2)), (0,), (2,), {0: X_BASIS, 1: MeasurementBasis.xz(epsilon)})


def fig1d_pattern(epsilon: float) -> MeasurementPattern:
    """3-chain: input tilted by ``epsilon``, middle along x."""
    return MeasurementPattern((0, 1, 2), ((0, 1), (1, 2)), (0,), (2,), {0: MeasurementBasis.xz(epsilon), 1: X_BASIS})


def teleport_pattern() -> MeasurementPattern:
    return MeasurementPattern((0, 1, 2), ((0, 1), (1, 2)), (0,), (2,), {0: X_BASIS, 1: X_BASIS})


def _fig1e(special: MeasurementBasis) -> MeasurementPattern:
    bases = {n: X_BASIS for n in FIG1E_NODES if n not in FIG1E_OUTPUTS}
    bases[FIG1E_SPECIAL] = special
    return MeasurementPattern(FIG1E_NODES, FIG1E_EDGES, FIG1E_INPUTS, FIG1E_OUTPUTS, bases)


def fig1e_pattern(epsilon: float) -> MeasurementPattern:
    """Two-qubit weak ``X1 X2`` measurement followed by SWAP.

    With all Pauli outcomes 0 and outcome ``s`` on the tilted node, the Kraus
    operator is proportional to ``gate_fig1e(epsilon, s)``.  The tilted node
    sits at polar angle ``pi/2 + epsilon``; tilting towards ``+z`` instead
    flips the sign of ``epsilon`` in the gate.
    """
    return _fig1e(MeasurementBasis(np.pi / 2 + epsilon, 0.0))


def fig1e_xy_pattern(phi: float) -> MeasurementPattern:
    """Same graph with the special node in the xy plane; yields
    ``unitary_xx(phi)`` up to phase (node measured at azimuth ``-phi``)."""
    return _fig1e(MeasurementBasis(np.pi / 2, -phi))


# ------------------------------------------------------------------ file format


def _fail(msg: str) -> None:
    raise PatternParseError(msg)


def pattern_from_dict(doc: dict, *, epsilon: float | None = None) -> MeasurementPattern:
    if not isinstance(doc, dict):
        _fail("top level must be an object")
    unknown = set(doc) - {"nodes", "edges", "bases", "order"}
    if unknown:
        _fail(f"unknown fields {sorted(unknown)}")
    params = {} if epsilon is None else {"eps": float(epsilon)}
    nodes, inputs, outputs = [], [], []
    for k, entry in enumerate(doc.get("nodes", [])):
        if not isinstance(entry, dict) or "id" not in entry:
            _fail(f"nodes[{k}] must be an object with an 'id'")
        nid, role = entry["id"], entry.get("role", "middle")
        if not isinstance(nid, int) or isinstance(nid, bool) or nid < 0:
            _fail(f"nodes[{k}].id must be a non-negative integer")
        if role not in ROLES:
            _fail(f"nodes[{k}].role must be one of {ROLES}, got {role!r}")
        nodes.append(nid)
        if role in ("input", "io"):
            inputs.append(nid)
        if role in ("output", "io"):
            outputs.append(nid)
    edges = []
    for k, e in enumerate(doc.get("edges", [])):
        if not (isinstance(e, list) and len(e) == 2 and all(isinstance(v, int) for v in e)):
            _fail(f"edges[{k}] must be a pair of node ids")
        edges.append(tuple(e))
    bases = {}
    raw_bases = doc.get("bases", {})
    if not isinstance(raw_bases, dict):
        _fail("bases must be an object keyed by node id")
    for key, b in raw_bases.items():
        try:
            nid = int(key)
        except ValueError:
            _fail(f"bases key {key!r} is not a node id")
        if not isinstance(b, dict) or "theta" not in b:
            _fail(f"bases[{key}] needs a 'theta'")
        try:
            bases[nid] = MeasurementBasis(parse_angle(b["theta"], params), parse_angle(b.get("phi", 0.0), params))
        except AngleError as exc:
            _fail(f"bases[{key}]: {exc}")
    order = doc.get("order")
    try:
        return MeasurementPattern(tuple(nodes), tuple(edges), tuple(inputs), tuple(outputs), bases, order)
    except (ValueError, TypeError) as exc:
        raise PatternParseError(str(exc)) from exc


def loads_pattern(text: str, *, epsilon: float | None = None) -> MeasurementPattern:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PatternParseError(exc.msg, exc.lineno, exc.colno) from exc
    return pattern_from_dict(doc, epsilon=epsilon)


def load_pattern(path: str | Path, *, epsilon: float | None = None) -> MeasurementPattern:
    return loads_pattern(Path(path).read_text(), epsilon=epsilon)


def pattern_to_dict(pattern: MeasurementPattern) -> dict:
    return {
        "nodes": [{"id": n, "role": pattern.role(n)} for n in pattern.nodes],
        "edges": [list(e) for e in pattern.edges],
        "bases": {str(n): {"theta": b.theta, "phi": b.phi} for n, b in sorted(pattern.bases.items())},
        "order": list(pattern.order),
    }


def dumps_pattern(pattern: MeasurementPattern) -> str:
    return json.dumps(pattern_to_dict(pattern), indent=2)


def fixture_text(name: str) -> str:
    """Contents of a bundled fixture such as ``fig1d.pattern`` or ``fig7.zx``."""
    return resources.files("nonunitary_mbqc").joinpath("fixtures", name).read_text()


def fixture_names() -> list[str]:
    return sorted(p.name for p in resources.files("nonunitary_mbqc").joinpath("fixtures").iterdir() if p.is_file())
