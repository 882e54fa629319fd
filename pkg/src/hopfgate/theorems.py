"""Decision layer: conditions C1-C10, specialised theorems, spectral flags.

Certificates come in layers and are never silently upgraded:

* ``structural`` - follows from a graph condition for the whole class;
* ``instance`` - decided on the one concrete product that was given;
* ``sampled`` - no counterexample among oracle samples (evidence only);
* ``refuted`` - a concrete counterexample is known.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Iterable

import networkx as nx
import numpy as np

from .compounds import additive_compound_2
from .dsr import (
    GraphClassification,
    HypothesisError,
    build_dsr,
    build_sr,
    classify_graph,
    enumerate_cycles,
)
from .dsr2 import build_dsr2
from .linalg import (
    C8Status,
    DimensionError,
    RationalMatrix,
    SignPattern,
    SizeLimitError,
    check_c7_c8,
    det,
    is_p0,
    qclass_membership,
)
from .oracle import (
    REAL_TOL,
    Claim,
    Mode,
    OracleVerdict,
    SampleSpec,
    numeric_spectrum,
    sample_member,
    verify_claim,
)

__all__ = [
    "BSpec",
    "Status",
    "ConditionStatus",
    "ConditionReport",
    "IMPLICATIONS",
    "evaluate_conditions",
    "Level",
    "Flag",
    "SpectralConclusion",
    "spectral_conclusions",
    "TheoremVerdict",
    "check_3species",
    "check_low_degree",
    "check_acyclic",
    "StabilityVerdict",
    "connected_family_stability",
    "p0_spectrum_wedge",
    "AnalysisReport",
    "analyze",
]


# --- the B side -----------------------------------------------------------------

@dataclass(frozen=True)
class BSpec:
    """Where B comes from: a given matrix, or the class Q(A^t) / Q0(A^t)."""

    kind: str  # "matrix" | "qt" | "q0t"
    matrix: RationalMatrix | SignPattern | None = None

    def __post_init__(self):
        if self.kind not in ("matrix", "qt", "q0t"):
            raise ValueError(f"unknown B source {self.kind!r}")
        if (self.kind == "matrix") != (self.matrix is not None):
            raise ValueError("a matrix is required exactly when kind == 'matrix'")

    @classmethod
    def of(cls, x) -> "BSpec":
        if isinstance(x, BSpec):
            return x
        if isinstance(x, (RationalMatrix, SignPattern)):
            return cls("matrix", x)
        return cls(str(x).lower())

    @property
    def is_class(self) -> bool:
        return self.kind != "matrix"

    @property
    def concrete(self) -> bool:
        return isinstance(self.matrix, RationalMatrix)

    def describe(self) -> str:
        return {"qt": "Q(A^t)", "q0t": "Q0(A^t)"}.get(self.kind, "given B")


def _pattern(M) -> SignPattern:
    return M if isinstance(M, SignPattern) else SignPattern.of(M)


def _representative(A, bspec: BSpec):
    """B used to build graphs; for a class only the signs matter."""
    if bspec.is_class:
        return _pattern(A).T
    return bspec.matrix


def _b_sampler(A, bspec: BSpec) -> SampleSpec:
    """Class that a structural certificate covers, for oracle cross-checks."""
    if bspec.kind == "qt":
        return SampleSpec.q(_pattern(A).T)
    if bspec.kind == "q0t":
        return SampleSpec.q0(_pattern(A).T)
    return SampleSpec.q0(_pattern(bspec.matrix))


def _a_sampler(A) -> SampleSpec:
    return SampleSpec.fixed(A) if isinstance(A, RationalMatrix) else SampleSpec.q(A)


def _sign_compatible(A, B) -> bool:
    """A and B^t lie in a common Q0 class (no entry of opposite sign)."""
    P, Q = _pattern(A), _pattern(B).T
    return all(p * q >= 0 for p, q in zip(P.signs, Q.signs))


# --- conditions C1-C10 -------------------------------------------------------------

class Status(str, enum.Enum):
    HOLDS = "holds"
    FAILS = "fails"
    UNDETERMINED = "undetermined"


@dataclass
class ConditionStatus:
    status: Status = Status.UNDETERMINED
    basis: str | None = None  # "structural" | "implied" | "exact" | "sampled"
    detail: str | None = None
    witness: object = None

    def to_dict(self) -> dict:
        out = {"status": self.status.value}
        if self.basis:
            out["basis"] = self.basis
        if self.detail:
            out["detail"] = self.detail
        if self.witness is not None:
            out["witness"] = self.witness
        return out


# (premise, conclusion); an equivalence appears in both directions
IMPLICATIONS: tuple[tuple[str, str], ...] = (
    ("C1", "C3"), ("C3", "C1"),
    ("C1", "C2"), ("C2", "C4"), ("C3", "C4"),
    ("C5", "C7"), ("C7", "C5"), ("C7", "C9"), ("C9", "C7"),
    ("C5", "C6"), ("C6", "C8"), ("C7", "C8"),
    ("C8", "C10"), ("C10", "C8"), ("C9", "C10"),
)

CONDITIONS = tuple(f"C{k}" for k in range(1, 11))


@dataclass
class ConditionReport:
    conditions: dict[str, ConditionStatus]
    dsr: GraphClassification | None = None
    sr: GraphClassification | None = None

    def __getitem__(self, key: str) -> Status:
        return self.conditions[key].status

    def to_dict(self) -> dict:
        return {k: self.conditions[k].to_dict() for k in CONDITIONS}


class InconsistentConditions(RuntimeError):
    """Forward and backward propagation disagree; indicates a bug."""


def close_implications(conds: dict[str, ConditionStatus]) -> None:
    """Propagate 'holds' forward and 'fails' backward until nothing changes."""
    changed = True
    while changed:
        changed = False
        for p, q in IMPLICATIONS:
            if conds[p].status is Status.HOLDS:
                if conds[q].status is Status.FAILS:
                    raise InconsistentConditions(f"{p} holds but {q} fails")
                if conds[q].status is Status.UNDETERMINED:
                    conds[q] = ConditionStatus(Status.HOLDS, "implied", f"{p} => {q}")
                    changed = True
            if conds[q].status is Status.FAILS:
                if conds[p].status is Status.UNDETERMINED:
                    conds[p] = ConditionStatus(Status.FAILS, "implied", f"not {q} => not {p}")
                    changed = True


def _cycle_names(G, c) -> list[str]:
    return list(c.names(G))


def _graph_condition(G, cls: GraphClassification, odd: bool) -> ConditionStatus:
    if odd:
        if cls.odd:
            return ConditionStatus(Status.HOLDS, "structural", "no e-cycles")
        return ConditionStatus(Status.FAILS, "structural", "e-cycle found",
                               _cycle_names(G, cls.odd_witness))
    if cls.odd_star:
        note = "degree shortcut" if cls.degree_shortcut else "pairwise check"
        return ConditionStatus(Status.HOLDS, "structural", f"odd* ({note})")
    kind, w = cls.odd_star_witness
    if kind == "not-s-cycle":
        return ConditionStatus(Status.FAILS, "structural", "e-cycle that is not an s-cycle",
                               _cycle_names(G, w))
    return ConditionStatus(Status.FAILS, "structural", "e-cycles with odd intersection",
                           [_cycle_names(G, w[0]), _cycle_names(G, w[1])])


def evaluate_conditions(
    A: RationalMatrix | SignPattern,
    B: RationalMatrix | SignPattern | None = None,
    oracle_trials: int = 0,
    seed: int = 0,
) -> ConditionReport:
    """Statuses of C1-C10 for A (and B when given), closed under the
    implications.  With ``oracle_trials`` the still-undetermined sampled
    conditions (C3, C4, C9, C10) are searched for counterexamples; a found
    counterexample makes the condition fail, otherwise it stays undetermined
    with sampled evidence recorded."""
    conds = {k: ConditionStatus() for k in CONDITIONS}
    dsr_cls = None
    if B is not None:
        G = build_dsr(A, B)
        dsr_cls = classify_graph(G)
        conds["C1"] = _graph_condition(G, dsr_cls, odd=True)
        conds["C2"] = _graph_condition(G, dsr_cls, odd=False)
    else:
        for k in ("C1", "C2", "C3", "C4"):
            conds[k].detail = "no B given"
    S = build_sr(A)
    sr_cls = classify_graph(S)
    conds["C5"] = _graph_condition(S, sr_cls, odd=True)
    conds["C6"] = _graph_condition(S, sr_cls, odd=False)
    try:
        c78 = check_c7_c8(A)
    except SizeLimitError as exc:
        conds["C7"].detail = conds["C8"].detail = str(exc)
    else:
        conds["C7"] = ConditionStatus(
            Status.HOLDS if c78.c7 else Status.FAILS, "structural",
            None if c78.c7 else "submatrix neither sign nonsingular nor sign singular",
            None if c78.c7 else [list(_one_based(x)) for x in c78.neither[0]],
        )
        if c78.c8 is C8Status.HOLDS:
            conds["C8"] = ConditionStatus(
                Status.HOLDS, "structural" if c78.c7 else "exact",
                None if c78.c7 else "every ambiguous submatrix is singular")
        elif c78.c8 is C8Status.FAILS:
            r, c = c78.c8_witness
            conds["C8"] = ConditionStatus(Status.FAILS, "exact",
                                          "nonsingular submatrix that is not sign nonsingular",
                                          [_one_based(r), _one_based(c)])
        else:
            conds["C8"].detail = f"{len(c78.neither)} submatrices need numeric confirmation"
    close_implications(conds)
    if oracle_trials:
        _sample_conditions(conds, A, B, oracle_trials, seed)
        close_implications(conds)
    return ConditionReport(conds, dsr_cls, sr_cls)


def _one_based(idx) -> tuple[int, ...]:
    return tuple(i + 1 for i in idx)


def _sample_conditions(conds, A, B, trials, seed):
    pA = _pattern(A)
    plans = {
        "C9": (SampleSpec.q0(pA), SampleSpec.q0(pA.T)),
    }
    if isinstance(A, RationalMatrix):
        plans["C10"] = (SampleSpec.fixed(A), SampleSpec.q0(pA.T))
    if B is not None:
        pB = _pattern(B)
        plans["C3"] = (SampleSpec.q0(pA), SampleSpec.q0(pB))
        if isinstance(A, RationalMatrix):
            plans["C4"] = (SampleSpec.fixed(A), SampleSpec.q0(pB))
    for key, (a_spec, b_spec) in plans.items():
        if conds[key].status is not Status.UNDETERMINED:
            continue
        v = verify_claim(Claim.PRODUCT_P0, a_spec, b_spec, trials, seed)
        if v.status == "counterexample":
            conds[key] = ConditionStatus(Status.FAILS, "sampled",
                                         v.counterexample.violation, v.to_dict())
        elif v.passed:
            conds[key].basis = "sampled"
            conds[key].detail = f"no counterexample in {v.trials} samples"


# --- specialised theorems ------------------------------------------------------

@dataclass(frozen=True)
class TheoremVerdict:
    name: str
    applicable: bool
    holds: bool | None
    conclusions: tuple[str, ...] = ()
    reason: str = ""
    route: str = ""

    def to_dict(self) -> dict:
        return {
            "applicable": self.applicable,
            "holds": self.holds,
            "conclusions": list(self.conclusions),
            "reason": self.reason,
            "route": self.route,
        }


def _short_cycle_conditions(G) -> tuple[bool, str]:
    """(i) e-cycles of length 4 and (ii) o-cycles of length 6 are s-cycles."""
    for c in enumerate_cycles(G, max_len=6):
        if c.length == 4 and c.is_e_cycle and not c.is_s_cycle:
            return False, "e-cycle of length 4 is not an s-cycle: " + "-".join(c.names(G))
        if c.length == 6 and not c.is_e_cycle and not c.is_s_cycle:
            return False, "o-cycle of length 6 is not an s-cycle: " + "-".join(c.names(G))
    return True, "short-cycle conditions hold"


def check_3species(A, bspec) -> TheoremVerdict:
    """Three S-vertices (rows), or three R-vertices via the transpose.

    For three rows a success certifies that (AB)^[2] is P0 and that the
    nonreal spectrum of AB avoids the open left half-plane; for three
    columns only the spectral statement transfers.
    """
    bspec = BSpec.of(bspec)
    B = _representative(A, bspec)
    n, m = A.shape
    name = "three-vertex"
    if n == 3:
        route, G = "rows", build_dsr(A, B)
        concl = ("compound_p0", "nonreal_avoids_left")
    elif m == 3:
        route, G = "columns", build_dsr(A.T, B.T)
        concl = ("nonreal_avoids_left",)
    else:
        return TheoremVerdict(name, False, None, reason=f"A is {n}x{m}; needs 3 rows or 3 columns")
    if not _sign_compatible(A, B):
        return TheoremVerdict(name, False, None, reason="A and B^t have opposite signs somewhere",
                              route=route)
    ok, why = _short_cycle_conditions(G)
    return TheoremVerdict(name, True, ok, concl if ok else (), why, route)


def check_low_degree(A, bspec) -> TheoremVerdict:
    """Steady SR graph and at most two nonzeros per column (or per row)."""
    bspec = BSpec.of(bspec)
    name = "low-degree"
    if not bspec.is_class and not (
        qclass_membership(_as_matrix(bspec.matrix), _pattern(A).T, closed=True)
    ):
        return TheoremVerdict(name, False, None, reason="B is not in Q0(A^t)")
    S = build_sr(A)
    cls = classify_graph(S)
    if not cls.steady:
        return TheoremVerdict(
            name, False, None,
            reason="hypothesis violated: SR graph not steady, cycle "
            + "-".join(cls.steady_witness.names(S)),
        )
    P = _pattern(A)
    n, m = P.shape
    col_max = max((sum(1 for i in range(n) if P[i, k]) for k in range(m)), default=0)
    row_max = max((sum(1 for k in range(m) if P[i, k]) for i in range(n)), default=0)
    if col_max <= 2:
        return TheoremVerdict(name, True, True,
                              ("product_p0", "compound_p0", "nonreal_avoids_left",
                               "positive_semistable"),
                              "steady, at most two nonzeros per column", "columns")
    if row_max <= 2:
        return TheoremVerdict(name, True, True, ("nonreal_avoids_left", "positive_semistable"),
                              "steady, at most two nonzeros per row (via transpose)", "rows")
    return TheoremVerdict(name, False, None,
                          reason=f"a column has {col_max} and a row has {row_max} nonzeros")


def _as_matrix(M) -> RationalMatrix:
    return M if isinstance(M, RationalMatrix) else M.as_matrix()


def check_acyclic(C: SignPattern | None, A, B) -> TheoremVerdict:
    """Acyclic SR graph of C, with A in Q0(C) and B in Q0(C^t).

    Without C, the underlying undirected graph of G_{A,B} is tested
    instead, which is equivalent to the existence of such a C.
    """
    name = "acyclic"
    if C is not None:
        if not qclass_membership(_as_matrix(A), C, closed=True):
            raise HypothesisError("A is not in Q0(C)")
        if not qclass_membership(_as_matrix(B), C.T, closed=True):
            raise HypothesisError("B is not in Q0(C^t)")
        U = build_sr(C).underlying()
        route = "pattern"
    else:
        U = build_dsr(A, B).underlying()
        route = "semicycles"
    # parallel edges form a semicycle of length two
    simple = nx.Graph(U)
    forest = U.number_of_edges() == 0 or (
        simple.number_of_edges() == U.number_of_edges() and nx.is_forest(simple)
    )
    if forest:
        return TheoremVerdict(name, True, True,
                              ("product_p0", "compound_p0", "nonreal_avoids_left",
                               "positive_semistable"),
                              "underlying graph is a forest", route)
    return TheoremVerdict(name, False, None, reason="underlying graph has a cycle", route=route)


# --- spectral conclusions -----------------------------------------------------

class Level(str, enum.Enum):
    STRUCTURAL = "structural"
    INSTANCE = "instance"
    SAMPLED = "sampled"
    REFUTED = "refuted"
    UNKNOWN = "unknown"
    NOT_APPLICABLE = "not-applicable"


@dataclass
class Flag:
    level: Level = Level.UNKNOWN
    provenance: list[str] = field(default_factory=list)
    oracle: OracleVerdict | None = None
    conflict: bool = False  # a structural or instance claim refuted by sampling

    @property
    def certified(self) -> bool:
        return self.level in (Level.STRUCTURAL, Level.INSTANCE)

    def set(self, level: Level, why: str) -> None:
        self.level = level
        self.provenance.append(why)

    def to_dict(self) -> dict:
        out = {"level": self.level.value, "provenance": list(self.provenance)}
        if self.oracle is not None:
            out["oracle"] = self.oracle.to_dict()
        if self.conflict:
            out["conflict"] = True
        return out


FLAG_CLAIMS = {
    "product_p0": Claim.PRODUCT_P0,
    "compound_p0": Claim.COMPOUND_P0,
    "compound_nonsingular": Claim.COMPOUND_NONSINGULAR,
    "nonreal_avoids_left": Claim.NONREAL_AVOIDS_LEFT,
    "positive_semistable": Claim.SEMISTABLE,
}


@dataclass
class SpectralConclusion:
    scope: str
    product_p0: Flag = field(default_factory=Flag)
    compound_p0: Flag = field(default_factory=Flag)
    compound_nonsingular: Flag = field(default_factory=Flag)
    nonreal_avoids_left: Flag = field(default_factory=Flag)
    positive_semistable: Flag = field(default_factory=Flag)
    positive_stable: Flag = field(default_factory=Flag)
    notes: list[str] = field(default_factory=list)
    dsr2: GraphClassification | None = None
    dsr2_transpose: GraphClassification | None = None
    theorems: dict[str, TheoremVerdict] = field(default_factory=dict)

    @property
    def hopf_excluded(self) -> str:
        keys = ("compound_p0", "compound_nonsingular", "nonreal_avoids_left")
        flags = [getattr(self, k) for k in keys]
        if any(f.level is Level.STRUCTURAL for f in flags):
            return "yes-structural"
        if any(f.level in (Level.INSTANCE, Level.SAMPLED) for f in flags):
            return "yes-sampled-only"
        return "unknown"

    def flags(self) -> dict[str, Flag]:
        return {k: getattr(self, k) for k in (*FLAG_CLAIMS, "positive_stable")}

    def to_dict(self) -> dict:
        out = {k: f.to_dict() for k, f in self.flags().items()}
        out["hopf_excluded"] = self.hopf_excluded
        out["scope"] = self.scope
        out["notes"] = list(self.notes)
        out["theorems"] = {k: v.to_dict() for k, v in sorted(self.theorems.items())}
        return out


def spectral_conclusions(
    A: RationalMatrix | SignPattern,
    bspec,
    oracle_trials: int = 0,
    seed: int = 0,
    tol: float = REAL_TOL,
) -> SpectralConclusion:
    """Assemble spectral flags for AB with B from ``bspec``.

    Graph certificates come first (DSR odd* for the product, DSR² odd* for
    the compound, and the same on the transposed pair), then the specialised
    theorems.  For a concrete B the remaining flags are decided on the
    instance.  With ``oracle_trials`` every flag is also checked on samples
    of the class the certificate covers.
    """
    bspec = BSpec.of(bspec)
    B = _representative(A, bspec)
    n, m = A.shape
    out = SpectralConclusion(scope=bspec.describe())
    via_class = "C6 => C10" if bspec.is_class else "C2 => C4"

    G = build_dsr(A, B)
    cls = classify_graph(G)
    if cls.odd_star:
        out.product_p0.set(Level.STRUCTURAL, f"DSR graph odd* ({via_class})")

    if n < 2:
        out.compound_p0.level = Level.NOT_APPLICABLE
        out.compound_nonsingular.level = Level.NOT_APPLICABLE
        out.notes.append("n = 1: no second compound; only product conclusions apply")
    else:
        cls2 = classify_graph(build_dsr2(A, B).graph)
        out.dsr2 = cls2
        if cls2.odd_star:
            out.compound_p0.set(Level.STRUCTURAL, "DSR² graph odd* (C2 => C4 on the factor pair)")

    # the transposed pair A^t B^t has the same nonzero spectrum as BA, hence AB
    transpose_compound = False
    if m >= 2:
        cls2t = classify_graph(build_dsr2(A.T, B.T).graph)
        out.dsr2_transpose = cls2t
        transpose_compound = cls2t.odd_star
    transpose_product = classify_graph(build_dsr(A.T, B.T)).odd_star

    out.theorems["three_vertex"] = tv = check_3species(A, bspec)
    out.theorems["low_degree"] = lv = check_low_degree(A, bspec)
    out.theorems["acyclic"] = av = check_acyclic(None, A, B)
    for thm in (tv, lv, av):
        if not thm.holds:
            continue
        for key in thm.conclusions:
            flag = getattr(out, key)
            if flag.level not in (Level.STRUCTURAL, Level.NOT_APPLICABLE):
                flag.set(Level.STRUCTURAL, f"{thm.name} theorem ({thm.route})")

    if out.compound_p0.level is Level.STRUCTURAL and not out.nonreal_avoids_left.certified:
        out.nonreal_avoids_left.set(Level.STRUCTURAL, "compound P0 => nonreal spectrum avoids C-")
    if transpose_compound and not out.nonreal_avoids_left.certified:
        out.nonreal_avoids_left.set(Level.STRUCTURAL,
                                    "DSR² of transposed pair odd*; nonzero spectra coincide")
    if out.product_p0.certified and out.compound_p0.certified \
            and out.positive_semistable.level is not Level.STRUCTURAL:
        out.positive_semistable.set(Level.STRUCTURAL, "product and compound both P0")
    if transpose_product and transpose_compound and not out.positive_semistable.certified:
        out.positive_semistable.set(Level.STRUCTURAL,
                                    "transposed pair: product and compound both P0")

    if bspec.concrete and isinstance(A, RationalMatrix):
        _decide_instance(out, A, bspec.matrix, tol)
    if oracle_trials:
        _sample_flags(out, A, bspec, oracle_trials, seed, tol)
    if n > m:
        out.notes.append(f"AB has rank at most {m} < {n}; it is singular, so positive "
                         "stability can hold at most for its nonzero spectrum")
    out.positive_stable.provenance.append(
        "not derived structurally; see connected_family_stability")
    return out


def _decide_instance(out: SpectralConclusion, A: RationalMatrix, B: RationalMatrix, tol) -> None:
    J = A @ B
    n = J.rows
    if not out.product_p0.certified:
        v = is_p0(J)
        out.product_p0.set(Level.INSTANCE if v else Level.REFUTED,
                           "exact principal minors of AB")
    if n >= 2:
        C = additive_compound_2(J)
        if not out.compound_p0.certified:
            v = is_p0(C)
            out.compound_p0.set(Level.INSTANCE if v else Level.REFUTED,
                                "exact principal minors of (AB)^[2]")
        d = det(C)
        out.compound_nonsingular.set(Level.INSTANCE if d else Level.REFUTED,
                                     "exact determinant of (AB)^[2]")
    w = numeric_spectrum(J).eigenvalues
    nonreal_left = any(z.real < -tol and abs(z.imag) > tol * max(1.0, abs(z)) for z in w)
    if not out.nonreal_avoids_left.certified:
        out.nonreal_avoids_left.set(Level.REFUTED if nonreal_left else Level.INSTANCE,
                                    "numeric eigenvalues of AB")
    if not out.positive_semistable.certified:
        semi = all(z.real >= -tol for z in w)
        out.positive_semistable.set(Level.INSTANCE if semi else Level.REFUTED,
                                    "numeric eigenvalues of AB")


def _sample_flags(out, A, bspec, trials, seed, tol) -> None:
    a_spec = _a_sampler(A)
    b_spec = _b_sampler(A, bspec)
    for key, claim in FLAG_CLAIMS.items():
        flag = getattr(out, key)
        if flag.level is Level.NOT_APPLICABLE:
            continue
        v = verify_claim(claim, a_spec, b_spec, trials, seed, tol)
        flag.oracle = v
        refuted = v.status == "counterexample"
        if flag.level is Level.STRUCTURAL:
            flag.conflict = refuted
        elif flag.level is Level.UNKNOWN:
            why = (f"oracle over {b_spec.mode.value} class: counterexample at sample "
                   f"{v.counterexample.index}" if refuted
                   else f"oracle over {b_spec.mode.value} class: {v.trials} samples passed")
            flag.set(Level.REFUTED if refuted else Level.SAMPLED, why)


# --- stability of connected families -----------------------------------------

@dataclass(frozen=True)
class StabilityVerdict:
    stable: bool
    scope: str  # "AB" or "nonzero spectrum of AB (via BA)"
    evidence: str  # "sampled-only" or "refused"
    reason: str
    trials: int = 0

    def to_dict(self) -> dict:
        return {"stable": self.stable, "scope": self.scope, "evidence": self.evidence,
                "reason": self.reason, "trials": self.trials}


def connected_family_stability(
    A: RationalMatrix | SignPattern,
    bspec,
    witness_b: RationalMatrix,
    trials: int = 200,
    seed: int = 0,
    tol: float = REAL_TOL,
) -> StabilityVerdict:
    """Positive stability over a path-connected class from one stable member.

    The class Q(A^t) is convex, hence path-connected.  Nonsingularity of
    the product and of its second compound over the class is only sampled,
    so a positive verdict is always tagged sampled-only.  When A has more
    rows than columns AB is singular and the argument is run on BA, which
    shares the nonzero spectrum.  A Q0 class contains B = 0, so it is
    replaced by Q(A^t).
    """
    bspec = BSpec.of(bspec)
    P = _pattern(A)
    n, m = P.shape
    if bspec.is_class:
        b_class = SampleSpec.q(P.T)
    else:
        b_class = SampleSpec.q(_pattern(bspec.matrix))
    if not qclass_membership(witness_b, _pattern(b_class.base)):
        raise HypothesisError("witness B is not in the class")
    a_fixed = isinstance(A, RationalMatrix)
    A0 = A if a_fixed else P.as_matrix()
    swap = n > m
    scope = "nonzero spectrum of AB (via BA)" if swap else "AB"

    def product(Am, Bm):
        return Bm @ Am if swap else Am @ Bm

    w = numeric_spectrum(product(A0, witness_b)).eigenvalues
    if not all(z.real > tol for z in w):
        return StabilityVerdict(False, scope, "refused",
                                "witness product is not positive stable")
    if min(n, m) < 2:
        compound_ok = lambda M: True  # noqa: E731
    else:
        compound_ok = lambda M: det(additive_compound_2(M)) != 0  # noqa: E731
    a_spec = SampleSpec.fixed(A) if a_fixed else SampleSpec.q(P)
    for t in range(trials):
        Am = sample_member(a_spec, t, seed, 0)
        Bm = sample_member(b_class, t, seed, 1)
        M = product(Am, Bm)
        if det(M) == 0:
            return StabilityVerdict(False, scope, "refused",
                                    f"sample {t} has a singular product", t + 1)
        if not compound_ok(M):
            return StabilityVerdict(False, scope, "refused",
                                    f"sample {t} has a singular second compound", t + 1)
    return StabilityVerdict(True, scope, "sampled-only",
                            "stable witness; product and compound nonsingular on all samples",
                            trials)


def p0_spectrum_wedge(M: RationalMatrix, tol: float = 1e-9) -> bool:
    """Every eigenvalue r e^{i theta} has r = 0 or |theta - pi| >= pi/n."""
    if not M.is_square:
        raise DimensionError("wedge test needs a square matrix")
    n = M.rows
    if n == 0:
        return True
    w = numeric_spectrum(M).eigenvalues
    scale = max(1.0, float(np.abs(w).max()))
    for z in w:
        if abs(z) <= tol * scale:
            continue
        if math.pi - abs(np.angle(z)) < math.pi / n - tol:
            return False
    return True


# --- report -------------------------------------------------------------------

def _graph_stats(G, cls: GraphClassification | None) -> dict:
    out = {"s_vertices": G.n_s, "r_vertices": G.n_r, "edges": len(G.edges)}
    if cls is not None:
        out.update(
            cycles=len(cls.cycles),
            e_cycles=len(cls.e_cycles),
            odd=cls.odd,
            odd_star=cls.odd_star,
            steady=cls.steady,
        )
    return out


@dataclass
class AnalysisReport:
    conditions: ConditionReport
    spectral: SpectralConclusion
    graphs: dict
    stability: StabilityVerdict | None = None

    def to_dict(self) -> dict:
        out = {
            "conditions": self.conditions.to_dict(),
            "spectral": self.spectral.to_dict(),
            "graphs": self.graphs,
        }
        if self.stability is not None:
            out["stability"] = self.stability.to_dict()
        return out


def analyze(
    A: RationalMatrix | SignPattern,
    bspec,
    oracle_trials: int = 0,
    seed: int = 0,
    witness_b: RationalMatrix | None = None,
) -> AnalysisReport:
    bspec = BSpec.of(bspec)
    B = _representative(A, bspec)
    conds = evaluate_conditions(A, B, oracle_trials=oracle_trials, seed=seed)
    spectral = spectral_conclusions(A, bspec, oracle_trials=oracle_trials, seed=seed)
    graphs = {
        "dsr": _graph_stats(build_dsr(A, B), conds.dsr),
        "sr": _graph_stats(build_sr(A), conds.sr),
    }
    if A.rows >= 2:
        graphs["dsr2"] = _graph_stats(build_dsr2(A, B).graph, spectral.dsr2)
    stability = None
    if witness_b is not None:
        stability = connected_family_stability(A, bspec, witness_b,
                                               trials=max(oracle_trials, 50), seed=seed)
    return AnalysisReport(conds, spectral, graphs, stability)
