"""Three-row network: the product test fails, the compound test succeeds.

A is 3x3 with pattern [[+,+,0],[+,+,+],[0,+,+]] and B ranges over the
matrices with the sign pattern of A transposed.  The SR graph of A has two
e-cycles sharing one edge, so nothing certifies that AB is a P0-matrix, and
sampling indeed finds a B for which it is not.  The DSR² graph has every
R-vertex of degree at most two and no e-cycle that is not an s-cycle, so the
second additive compound of AB is P0 for every admissible B: no pair of
nonreal eigenvalues of AB can reach the imaginary axis.

Run:  python3 demos/01_three_row_network.py
"""

from hopfgate import (
    Claim,
    RationalMatrix,
    SampleSpec,
    SignPattern,
    additive_compound_2,
    build_dsr2,
    build_sr,
    classify_graph,
    is_p0,
    spectral_conclusions,
    verify_claim,
)

A = RationalMatrix([[1, 1, 0], [1, 1, 1], [0, 1, 1]])
P = SignPattern.of(A)

print("== SR graph of A ==")
G = build_sr(A)
cls = classify_graph(G)
print(f"odd: {cls.odd}   odd*: {cls.odd_star}   steady: {cls.steady}")
kind, (c1, c2) = cls.odd_star_witness
print(f"witness ({kind}):")
print("  ", " ".join(c1.names(G)))
print("  ", " ".join(c2.names(G)))

print("\n== Sampling B with the sign pattern of A transposed ==")
q = SampleSpec.q(P.T)
v = verify_claim(Claim.PRODUCT_P0, A, q, trials=200, seed=0)
print(f"product-p0: {v.status} at sample index {v.counterexample.index} (seed {v.seed})")
J = v.counterexample.A @ v.counterexample.B
print("failing principal minor at rows", [i + 1 for i in is_p0(J).witness])

print("\n== DSR² graph ==")
G2 = build_dsr2(A, A.T)
cls2 = classify_graph(G2.graph)
print(f"{len(G2.graph.s_names)} S-vertices, {len(G2.graph.r_names)} R-vertices, "
      f"{len(G2.graph.edges)} edges")
print(f"odd*: {cls2.odd_star} (degree shortcut used: {cls2.degree_shortcut})")

print("\n== The compound with every entry of B equal to one ==")
for row in additive_compound_2(A @ A.T).tolist():
    print("  ", " ".join(f"{str(x):>3s}" for x in row))

print("\n== Certificates ==")
sc = spectral_conclusions(A, "qt", oracle_trials=300, seed=1)
for name, flag in sc.flags().items():
    print(f"  {name:22s} {flag.level.value:15s} {'; '.join(flag.provenance)}")
print("Hopf bifurcation excluded:", sc.hopf_excluded)
