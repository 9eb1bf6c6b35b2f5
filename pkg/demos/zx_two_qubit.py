"""The two-qubit grid pattern as a ZX diagram.

The bundled diagram ``fig7.zx`` is a compact ZX form of the weak ``XX``
measurement followed by SWAP.  Its tensor equals the closed-form gate up to
a scalar for every tilt, and simplification keeps it that way.
"""

from nonunitary_mbqc import linalg, zx, zxio
from nonunitary_mbqc.patterns import fixture_text

for eps in (0.0, 0.3, 0.9):
    doc = zxio.loads_zx(fixture_text("fig7.zx"), epsilon=eps)
    ref = zxio.reference_matrix(doc.expect, epsilon=eps)
    m = zx.to_matrix(doc.diagram)
    s = zx.simplify(doc.diagram)
    print(f"eps = {eps}: equal to reference {linalg.equal_up_to_scalar(m, ref)}, "
          f"after simplify {linalg.equal_up_to_scalar(zx.to_matrix(s), ref)} "
          f"({len(doc.diagram.spiders)} -> {len(s.spiders)} spiders)")
