"""Repeat-until-success application of a non-unitary gate.

A failed attempt leaves a correctable error; the next attempt uses a larger
strength ``a_n``.  The cumulative success probability converges quickly to
the optimum ``p_max``, and a Monte Carlo run agrees with the closed form.
"""

import numpy as np

from nonunitary_mbqc import gates, protocols

eps = 0.25
a = gates.a_of_epsilon(eps)
psi = np.array([1, 1]) / np.sqrt(2)
sched = protocols.feedback_schedule(a, 5)
print(f"a = {a:.6f}; strengths per attempt: {np.round(sched.terms, 4)}")

stats = protocols.simulate_feedback(a, psi, 5, 200_000, seed=7)
print("\n n  p_success (closed)  p_success (MC)")
for n in range(1, 6):
    print(f"{n:2d}  {protocols.p_success(a, psi, n):18.6f}  {stats.p_success_empirical[n - 1]:14.6f}")
print(f"\np_max = {gates.p_max(gates.m_povm_a(a, 0), psi):.6f}")
print(f"worst fidelity among successful runs: {stats.min_success_fidelity:.12f}")
