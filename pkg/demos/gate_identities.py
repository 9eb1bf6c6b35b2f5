"""Tilted measurements on a three-node chain give non-unitary gates.

Measuring the input in X and the middle node slightly off the equator
produces, for each outcome pair, a Kraus operator that matches the closed
form ``gate_fig1c``.  Tilting the input instead gives ``gate_fig1d``.
"""

import numpy as np

from nonunitary_mbqc import gates, linalg, mbqc, patterns

eps = 0.4
print(f"epsilon = {eps}, a = {gates.a_of_epsilon(eps):.6f}\n")

for name, build, closed in [
    ("middle tilted", patterns.fig1c_pattern, gates.gate_fig1c),
    ("input tilted", patterns.fig1d_pattern, gates.gate_fig1d),
]:
    p = build(eps)
    print(name)
    for s1, s2 in mbqc.all_outcomes(2):
        k = mbqc.extract_kraus(p, (s1, s2))
        ok = linalg.equal_up_to_scalar(k, closed(eps, s1, s2))
        mu = linalg.singular_spectrum(k)
        print(f"  outcomes {s1}{s2}: matches closed form {ok}, singular values {np.round(mu, 4)}")
    # the four operators form a complete POVM
    print(f"  sum of K^dag K equals identity: {np.allclose(mbqc.povm_sum(p), np.eye(2))}\n")

# the 8-node grid: weak XX measurement followed by SWAP
k = mbqc.extract_kraus(patterns.fig1e_pattern(eps), "000000")
print("two-qubit grid pattern reproduces gate_fig1e:", linalg.equal_up_to_scalar(k, gates.gate_fig1e(eps, 0)))
