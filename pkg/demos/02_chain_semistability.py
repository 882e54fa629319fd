"""Chain network: structural semistability and a sampled stability check.

A is 4x3 and B ranges over the matrices weakly sharing the sign pattern of
A transposed (zeros allowed).  The SR graph is odd and the DSR² graph is
odd*, so AB and its second additive compound are P0 for every such B and AB
is positive semistable.  Because A has more rows than columns, AB is always
singular; stability is therefore asked of the nonzero spectrum, through BA.

Run:  python3 demos/02_chain_semistability.py
"""

import numpy as np

from hopfgate import (
    RationalMatrix,
    analyze,
    build_dsr2,
    build_sr,
    classify_graph,
    evaluate_conditions,
)
from hopfgate.oracle import numeric_spectrum

A = RationalMatrix([[1, 1, 0], [-1, 1, 0], [0, 1, 1], [0, 0, 1]])

print("== Graph classes ==")
for label, G in (("SR graph", build_sr(A)), ("DSR² graph", build_dsr2(A, A.T).graph)):
    cls = classify_graph(G)
    print(f"{label:11s} cycles={len(cls.cycles):3d} odd={cls.odd} odd*={cls.odd_star} "
          f"steady={cls.steady}")

print("\n== Conditions on the qualitative class ==")
report = evaluate_conditions(A)
for name, st in report.conditions.items():
    print(f"  {name:4s} {st.status.value:13s} {st.basis or '-':10s} {st.detail or ''}")

print("\n== Full analysis with a stable witness B = A^t ==")
full = analyze(A, "q0t", oracle_trials=100, seed=2, witness_b=A.T)
sc = full.spectral
for name, flag in sc.flags().items():
    print(f"  {name:22s} {flag.level.value}")
for note in sc.notes:
    print("  note:", note)
st = full.stability
print(f"stability of {st.scope}: {st.stable} ({st.evidence}, {st.trials} samples)")

print("\n== The witness spectrum ==")
lam = numeric_spectrum(A @ A.T).eigenvalues
print("eig(A A^t):", np.round(np.sort(lam.real), 6))
