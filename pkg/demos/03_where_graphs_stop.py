"""Cases the graphs cannot settle, and what the oracle adds.

1. A diagonal A with a three-by-three B whose DSR² graph holds an e-cycle
   through infinite labels.  The compound is not always P0, yet its
   determinant stays positive on every sample, which still rules out
   nonreal eigenvalues on the imaginary axis.
2. A 5x4 matrix whose compound is P0 on every sample although neither
   DSR² graph is odd*.  The certificate is reported as sampled only.
3. A four-species ring with B = I: one odd and one even cycle, and an odd
   DSR² graph.

Run:  python3 demos/03_where_graphs_stop.py
"""

from hopfgate import (
    Claim,
    RationalMatrix,
    SampleSpec,
    SignPattern,
    build_dsr,
    build_dsr2,
    classify_graph,
    enumerate_cycles,
    spectral_conclusions,
    verify_claim,
)

print("== 1. diagonal A, sparse B ==")
I3 = RationalMatrix.identity(3)
a_spec = SampleSpec.q(SignPattern.of(I3))
b_spec = SampleSpec.q(SignPattern([["0", "-", "0"], ["-", "0", "+"], ["+", "0", "+"]]))
G2 = build_dsr2(I3, b_spec.base.as_matrix()).graph
cls = classify_graph(G2)
print(f"DSR² odd*: {cls.odd_star}; witness kind: {cls.odd_star_witness[0]}")
print("det of compound > 0:", verify_claim(Claim.DET_COMPOUND_POSITIVE, a_spec, b_spec,
                                            trials=500).status)
v = verify_claim(Claim.COMPOUND_P0, a_spec, b_spec, trials=2000)
print(f"compound-p0: {v.status} at sample {v.counterexample.index}")

print("\n== 2. a 5x4 matrix ==")
A = RationalMatrix([[1, 0, 0, 0], [-1, 1, 0, 0], [0, -1, 1, 0], [-1, 0, -1, 1], [0, 0, 0, -1]])
sc = spectral_conclusions(A, "q0t", oracle_trials=200, seed=3)
print("DSR²(A, A^t) odd*:", sc.dsr2.odd_star, "  DSR²(A^t, A) odd*:", sc.dsr2_transpose.odd_star)
print("compound_p0:", sc.compound_p0.level.value, "-", "; ".join(sc.compound_p0.provenance))
print("Hopf bifurcation excluded:", sc.hopf_excluded)

print("\n== 3. four-species ring with B = I ==")
ring = RationalMatrix([[1, 1, 0, 0], [-1, 1, 1, 0], [0, 0, 1, 1], [1, 0, 0, 1]])
G = build_dsr(ring, RationalMatrix.identity(4))
for c in enumerate_cycles(G):
    kind = "e-cycle" if c.is_e_cycle else "o-cycle"
    print(f"  length {c.length}: {kind}  {' '.join(c.names(G))}")
print("DSR² odd:", classify_graph(build_dsr2(ring, RationalMatrix.identity(4)).graph).odd)
