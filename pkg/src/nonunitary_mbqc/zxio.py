"""Text format for ZX diagrams.

One statement per line; ``#`` starts a comment::

    in a0 b0            # ordered input wires
    out a1 b1           # ordered output wires
    g pi/2 : a0 a1 c    # green spider, phase, then its legs
    r pi/2 + eps : c    # red spider
    h a1                # Hadamard-marked wires
    scalar 0.5 0        # optional complex multiplier (real, imag)
    expect fig1e        # optional reference for verification

Phases and scalar parts are angle expressions (``pi``, ``eps``, ``+ - * /``,
see :mod:`nonunitary_mbqc.angles`).  Wire names are any whitespace-free
tokens.  Errors name the offending line.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import gates, linalg
from .angles import AngleError, parse_angle
from .zx import GREEN, RED, Spider, ZxDiagram


class ZxParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True)
class ZxDocument:
    diagram: ZxDiagram
    expect: str | None = None


def loads_zx(text: str, *, epsilon: float | None = None) -> ZxDocument:
    params = {} if epsilon is None else {"eps": float(epsilon)}
    inputs = outputs = None
    spiders, had = [], set()
    scalar = 1.0 + 0j
    expect = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        rest = rest.strip()
        try:
            if head == "in":
                if inputs is not None:
                    raise ZxParseError("duplicate 'in' declaration", lineno)
                inputs = tuple(rest.split())
            elif head == "out":
                if outputs is not None:
                    raise ZxParseError("duplicate 'out' declaration", lineno)
                outputs = tuple(rest.split())
            elif head in (GREEN, RED):
                phase, sep, legs = rest.partition(":")
                if not sep:
                    raise ZxParseError("spider needs ':' before its legs", lineno)
                spiders.append(Spider(head, parse_angle(phase or "0", params), tuple(legs.split())))
            elif head == "h":
                if not rest:
                    raise ZxParseError("'h' needs at least one wire", lineno)
                had.update(rest.split())
            elif head == "scalar":
                parts = rest.split()
                if len(parts) not in (1, 2):
                    raise ZxParseError("'scalar' takes a real part and an optional imaginary part", lineno)
                vals = [parse_angle(p, params) for p in parts] + [0.0]
                scalar = complex(vals[0], vals[1])
            elif head == "expect":
                if not rest:
                    raise ZxParseError("'expect' needs a reference name", lineno)
                expect = rest
            else:
                raise ZxParseError(f"unknown statement {head!r}", lineno)
        except AngleError as exc:
            raise ZxParseError(str(exc), lineno) from exc
    try:
        d = ZxDiagram(tuple(spiders), inputs or (), outputs or (), frozenset(had), scalar)
    except ValueError as exc:
        raise ZxParseError(str(exc)) from exc
    return ZxDocument(d, expect)


def load_zx(path: str | Path, *, epsilon: float | None = None) -> ZxDocument:
    return loads_zx(Path(path).read_text(), epsilon=epsilon)


def dumps_zx(d: ZxDiagram, *, expect: str | None = None) -> str:
    """Serialize with ``repr`` floats; wires are written with ``str``."""
    lines = [f"in {' '.join(map(str, d.inputs))}".rstrip(), f"out {' '.join(map(str, d.outputs))}".rstrip()]
    for sp in d.spiders:
        lines.append(f"{sp.color} {sp.phase!r} : {' '.join(map(str, sp.legs))}".rstrip())
    if d.hadamard:
        lines.append("h " + " ".join(sorted(map(str, d.hadamard))))
    if d.scalar != 1:
        lines.append(f"scalar {d.scalar.real!r} {d.scalar.imag!r}")
    if expect:
        lines.append(f"expect {expect}")
    return "\n".join(lines) + "\n"


def reference_matrix(name: str, *, epsilon: float = 0.0) -> np.ndarray:
    """Named reference maps for ``expect`` lines and ``zx check``.

    ``identity``, ``x``, ``z``, ``byproduct:<s1><s2>``, ``bubble``,
    ``fig1e`` (``s = 0``), ``swap``, ``unitary_xx`` (``phi = eps``).
    """
    key = name.strip().lower()
    if key == "identity":
        return np.eye(2, dtype=complex)
    if key == "x":
        return linalg.X.copy()
    if key == "z":
        return linalg.Z.copy()
    if key.startswith("byproduct:"):
        bits = key.split(":", 1)[1]
        if len(bits) != 2 or set(bits) - {"0", "1"}:
            raise ValueError(f"byproduct reference needs two bits, got {bits!r}")
        return gates.byproduct(int(bits[0]), int(bits[1]))
    if key == "bubble":
        return gates.bubble_gate(epsilon)
    if key == "fig1e":
        return gates.gate_fig1e(epsilon, 0)
    if key == "swap":
        return linalg.SWAP.copy()
    if key == "unitary_xx":
        return gates.unitary_xx(epsilon)
    raise ValueError(f"unknown reference {name!r}")
