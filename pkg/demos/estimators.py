"""Estimating the operator entanglement of a tilted-chain gate from samples.

The exact second Renyi entropy of the gate is compared with three
measurement-based estimates: a two-copy SWAP test, the randomized
measurement Hamming formula, and classical shadows.  Near zero entropy the
sampled purity can exceed one, so small negative estimates are expected.
"""

from nonunitary_mbqc import estimators, gates

cfg_kw = dict(n_unitaries=40, shots_per_unitary=500, ensemble="haar")
print(" eps    exact    swap     hamming  shadow")
for i, eps in enumerate([0.0, 0.5, 1.0, 1.5]):
    n = gates.gate_fig1d(eps, 0, 0)
    cfg = estimators.ShadowConfig(seed=i, **cfg_kw)
    exact = estimators.exact_renyi2_op(n)
    swap = estimators.swap_test_renyi2(n, 20_000, seed=i)
    ham = estimators.hamming_renyi2(n, cfg)
    sha = estimators.shadow_renyi2_repeated(n, cfg)
    print(f"{eps:4.1f}  {exact:7.4f}  {swap.value:7.4f}  {ham.value:7.4f}  {sha.value:7.4f}")
