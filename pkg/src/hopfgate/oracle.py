"""Sampling and brute-force checks of claims over qualitative classes.

Every random sample is a rational matrix, so P0 and determinant claims are
decided exactly; only spectral claims go through floating point.  A trial
is fully determined by ``(seed, index)``, which makes counterexamples
replayable and parallel runs identical to serial ones.
"""

from __future__ import annotations

import enum
import itertools
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .compounds import additive_compound_2, det_compound_via_cb, MAX_CB_PAIRS
from .linalg import (
    DimensionError,
    LinalgError,
    RationalMatrix,
    SignPattern,
    SizeLimitError,
    det,
    is_p0,
)

__all__ = [
    "Mode",
    "SampleSpec",
    "sample_member",
    "Spectrum",
    "numeric_spectrum",
    "Claim",
    "Counterexample",
    "OracleVerdict",
    "evaluate_claim",
    "verify_claim",
    "exhaustive_small",
    "thread_count",
    "REAL_TOL",
]

REAL_TOL = 1e-9


class Mode(str, enum.Enum):
    Q = "Q"
    Q0 = "Q0"
    FIXED = "fixed"


@dataclass(frozen=True)
class SampleSpec:
    """How to draw members of a class.

    Magnitudes are log-uniform on ``[low, high]`` and rounded to the nearest
    fraction with denominator at most ``max_denominator``.  In Q0 mode each
    nonzero position is zeroed independently with probability ``zero_prob``.
    """

    base: SignPattern | RationalMatrix
    mode: Mode = Mode.Q
    low: float = 1e-3
    high: float = 1e3
    max_denominator: int = 2**20
    zero_prob: float = 0.2

    @classmethod
    def fixed(cls, M: RationalMatrix) -> "SampleSpec":
        return cls(M, Mode.FIXED)

    @classmethod
    def q(cls, P: SignPattern | RationalMatrix, **kw) -> "SampleSpec":
        return cls(_pattern(P), Mode.Q, **kw)

    @classmethod
    def q0(cls, P: SignPattern | RationalMatrix, **kw) -> "SampleSpec":
        return cls(_pattern(P), Mode.Q0, **kw)

    @property
    def shape(self) -> tuple[int, int]:
        return self.base.shape

    def transpose(self) -> "SampleSpec":
        return SampleSpec(self.base.T, self.mode, self.low, self.high,
                          self.max_denominator, self.zero_prob)


def _pattern(P) -> SignPattern:
    return SignPattern.of(P) if isinstance(P, RationalMatrix) else P


def _rng(seed: int, index: int, stream: int) -> np.random.Generator:
    return np.random.default_rng([seed, index, stream])


def sample_member(spec: SampleSpec, index: int, seed: int = 0, stream: int = 0) -> RationalMatrix:
    """Deterministic member of the class for trial ``index``."""
    if spec.mode is Mode.FIXED:
        base = spec.base
        return base if isinstance(base, RationalMatrix) else base.as_matrix()
    P = _pattern(spec.base)
    rng = _rng(seed, index, stream)
    size = len(P.signs)
    logs = rng.uniform(math.log(spec.low), math.log(spec.high), size=size)
    drop = rng.random(size) < spec.zero_prob
    out = []
    for s, lg, z in zip(P.signs, logs, drop):
        if not s or (spec.mode is Mode.Q0 and z):
            out.append(Fraction(0))
            continue
        mag = Fraction(math.exp(lg)).limit_denominator(spec.max_denominator)
        if not mag:
            mag = Fraction(1, spec.max_denominator)
        out.append(s * mag)
    return RationalMatrix.from_flat(P.rows, P.cols, out)


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: np.ndarray
    residual: float  # max relative residual ||Mv - lv|| / (||M|| ||v||)

    def min_real(self) -> float:
        return float(self.eigenvalues.real.min()) if self.eigenvalues.size else math.inf


def numeric_spectrum(M: RationalMatrix | np.ndarray) -> Spectrum:
    X = M.to_numpy() if isinstance(M, RationalMatrix) else np.asarray(M, dtype=float)
    if X.ndim != 2 or X.shape[0] != X.shape[1]:
        raise DimensionError("spectrum needs a square matrix")
    w, V = np.linalg.eig(X)
    norm = max(np.linalg.norm(X, 2), 1e-300)
    res = np.linalg.norm(X @ V - V * w, axis=0) / (norm * np.linalg.norm(V, axis=0))
    return Spectrum(w, float(res.max()) if res.size else 0.0)


class Claim(str, enum.Enum):
    PRODUCT_P0 = "product-p0"
    COMPOUND_P0 = "compound-p0"
    COMPOUND_NONSINGULAR = "compound-nonsingular"
    NONREAL_AVOIDS_LEFT = "nonreal-avoids-left"
    SEMISTABLE = "semistable"
    DET_COMPOUND_POSITIVE = "det-compound-positive"


def _is_nonreal(z: complex, tol: float) -> bool:
    return abs(z.imag) > tol * max(1.0, abs(z))


def evaluate_claim(claim: Claim, A: RationalMatrix, B: RationalMatrix, tol: float = REAL_TOL):
    """Check one instance.  Returns None if the claim holds, otherwise a
    short description of the violated quantity."""
    claim = Claim(claim)
    J = A @ B
    if claim is Claim.PRODUCT_P0:
        v = is_p0(J)
        return None if v else f"principal minor {_one_based(v.witness)} = {v.value}"
    if claim in (Claim.NONREAL_AVOIDS_LEFT, Claim.SEMISTABLE):
        for z in numeric_spectrum(J).eigenvalues:
            if z.real < -tol and (claim is Claim.SEMISTABLE or _is_nonreal(z, tol)):
                return f"eigenvalue {complex(z):.6g}"
        return None
    if J.rows < 2:
        raise DimensionError("compound claims need n >= 2")
    if claim is Claim.COMPOUND_P0:
        v = is_p0(additive_compound_2(J))
        return None if v else f"compound principal minor {_one_based(v.witness)} = {v.value}"
    if claim is Claim.COMPOUND_NONSINGULAR:
        d = det(additive_compound_2(J))
        return None if d else "det of compound = 0"
    if claim is Claim.DET_COMPOUND_POSITIVE:
        if math.comb(J.rows, 2) <= MAX_CB_PAIRS:
            d = det_compound_via_cb(A, B)
        else:
            d = det(additive_compound_2(J))
        return None if d > 0 else f"det of compound = {d}"
    raise ValueError(claim)


def _one_based(idx) -> tuple[int, ...]:
    return tuple(i + 1 for i in idx)


@dataclass(frozen=True)
class Counterexample:
    index: int
    A: RationalMatrix
    B: RationalMatrix
    violation: str


@dataclass(frozen=True)
class OracleVerdict:
    claim: str
    trials: int  # number of trials examined
    status: str  # "all-passed" | "counterexample" | "error"
    seed: int | None = None
    counterexample: Counterexample | None = None
    error: str | None = None
    wall_time: float = field(default=0.0, compare=False)

    @property
    def passed(self) -> bool:
        return self.status == "all-passed"

    def to_dict(self) -> dict:
        out = {
            "claim": self.claim,
            "trials": self.trials,
            "status": self.status,
            "seed": self.seed,
        }
        if self.counterexample is not None:
            c = self.counterexample
            out["counterexample"] = {
                "index": c.index,
                "A": [[str(x) for x in row] for row in c.A.tolist()],
                "B": [[str(x) for x in row] for row in c.B.tolist()],
                "violation": c.violation,
            }
        if self.error is not None:
            out["error"] = self.error
        return out


def thread_count() -> int:
    raw = os.environ.get("HOPFGATE_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _trial(args):
    claim, a_spec, b_spec, seed, index, tol = args
    A = sample_member(a_spec, index, seed, stream=0)
    B = sample_member(b_spec, index, seed, stream=1)
    return index, evaluate_claim(claim, A, B, tol), A, B


def verify_claim(
    claim: Claim | str,
    a_spec: SampleSpec | RationalMatrix,
    b_spec: SampleSpec | RationalMatrix,
    trials: int = 200,
    seed: int = 0,
    tol: float = REAL_TOL,
    threads: int | None = None,
) -> OracleVerdict:
    """Sample (A, B) pairs and stop at the first one violating the claim.

    With several workers, trials run in ordered chunks and the lowest
    failing index wins, so the verdict never depends on the worker count.
    """
    claim = Claim(claim)
    if isinstance(a_spec, RationalMatrix):
        a_spec = SampleSpec.fixed(a_spec)
    if isinstance(b_spec, RationalMatrix):
        b_spec = SampleSpec.fixed(b_spec)
    n, m = a_spec.shape
    if b_spec.shape != (m, n):
        raise DimensionError(f"B class must be {m}x{n}, got {b_spec.shape}")
    threads = threads or thread_count()
    t0 = time.perf_counter()
    jobs = ((claim, a_spec, b_spec, seed, i, tol) for i in range(trials))
    try:
        if threads == 1:
            for job in jobs:
                index, bad, A, B = _trial(job)
                if bad is not None:
                    return _found(claim, index, A, B, bad, seed, t0)
        else:
            chunk = threads * 8
            with ProcessPoolExecutor(max_workers=threads) as pool:
                while True:
                    batch = list(itertools.islice(jobs, chunk))
                    if not batch:
                        break
                    hits = [r for r in pool.map(_trial, batch) if r[1] is not None]
                    if hits:
                        index, bad, A, B = min(hits, key=lambda r: r[0])
                        return _found(claim, index, A, B, bad, seed, t0)
    except (LinalgError, np.linalg.LinAlgError) as exc:
        return OracleVerdict(claim.value, 0, "error", seed, error=str(exc),
                             wall_time=time.perf_counter() - t0)
    return OracleVerdict(claim.value, trials, "all-passed", seed,
                         wall_time=time.perf_counter() - t0)


def _found(claim, index, A, B, bad, seed, t0) -> OracleVerdict:
    return OracleVerdict(
        claim.value, index + 1, "counterexample", seed,
        Counterexample(index, A, B, bad), wall_time=time.perf_counter() - t0,
    )


# --- exhaustive grids -------------------------------------------------------

MAX_GRID_DIM = 4
MAX_GRID_MEMBERS = 2**20


def _grid_values(grid: str, closed: bool) -> list[int]:
    if grid == "sign":
        vals = [1]
    elif grid == "dyadic":
        vals = [1, 2]
    else:
        raise ValueError(f"unknown grid {grid!r}")
    return ([0] + vals) if closed else vals


def _integer_image(M: RationalMatrix) -> np.ndarray:
    """Positive multiple of M with integer entries."""
    d = 1
    for x in M.entries:
        d = math.lcm(d, x.denominator)
    return np.array([int(x * d) for x in M.entries], dtype=np.int64).reshape(M.shape)


def _member_grid(spec: SampleSpec, grid: str) -> tuple[np.ndarray, np.ndarray]:
    """All grid members of a class as an integer array, shape (N, r, c),
    together with the per-position magnitude choices for replay."""
    if spec.mode is Mode.FIXED:
        M = spec.base if isinstance(spec.base, RationalMatrix) else spec.base.as_matrix()
        return _integer_image(M)[None], np.zeros((1, 0), dtype=np.int64)
    P = _pattern(spec.base)
    pos = [t for t, s in enumerate(P.signs) if s]
    vals = _grid_values(grid, spec.mode is Mode.Q0)
    count = len(vals) ** len(pos)
    if count > MAX_GRID_MEMBERS:
        raise SizeLimitError(f"{count} grid members exceed the limit {MAX_GRID_MEMBERS}")
    choice = np.array(list(itertools.product(vals, repeat=len(pos))), dtype=np.int64)
    choice = choice.reshape(count, len(pos))
    out = np.zeros((count, P.rows * P.cols), dtype=np.int64)
    signs = np.array([P.signs[t] for t in pos], dtype=np.int64)
    out[:, pos] = choice * signs
    return out.reshape(count, P.rows, P.cols), choice


_PERMS: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _perms(k: int) -> tuple[np.ndarray, np.ndarray]:
    if k not in _PERMS:
        P = np.array(list(itertools.permutations(range(k))), dtype=np.int64).reshape(-1, k)
        sg = np.array([
            -1 if sum(a > b for a, b in itertools.combinations(p, 2)) % 2 else 1 for p in P
        ], dtype=np.int64)
        _PERMS[k] = (P, sg)
    return _PERMS[k]


def _batch_det(M: np.ndarray) -> np.ndarray:
    """Exact determinants of a stack of small int64 matrices (Leibniz)."""
    k = M.shape[-1]
    P, sg = _perms(k)
    terms = M[:, np.arange(k)[None, :], P].prod(axis=-1)
    return terms @ sg


def _batch_first_p0_failure(M: np.ndarray) -> np.ndarray:
    """Per matrix: True where some principal minor is negative."""
    n = M.shape[-1]
    bad = np.zeros(M.shape[0], dtype=bool)
    for k in range(1, n + 1):
        for alpha in itertools.combinations(range(n), k):
            idx = np.array(alpha)
            bad |= _batch_det(M[:, idx[:, None], idx[None, :]]) < 0
    return bad


def _batch_compound(J: np.ndarray) -> np.ndarray:
    n = J.shape[-1]
    P = list(itertools.combinations(range(n), 2))
    N = len(P)
    out = np.zeros((J.shape[0], N, N), dtype=np.int64)
    for r, (i, j) in enumerate(P):
        for c, (k, l) in enumerate(P):
            v = np.zeros(J.shape[0], dtype=np.int64)
            if l == j:
                v += J[:, i, k]
            if l == i:
                v -= J[:, j, k]
            if k == i:
                v += J[:, j, l]
            if k == j:
                v -= J[:, i, l]
            out[:, r, c] = v
    return out


def _safe_bound(J: np.ndarray, k: int) -> bool:
    """Whether every k x k determinant of entries bounded like J fits int64."""
    top = int(np.abs(J).max()) if J.size else 0
    return top == 0 or (top ** k) * math.factorial(k) < 2**62


def _batch_violations(claim: Claim, A: np.ndarray, B: np.ndarray, tol: float) -> np.ndarray:
    J = np.einsum("bij,bjk->bik", A, B)
    n = J.shape[-1]
    if claim is Claim.PRODUCT_P0:
        if not _safe_bound(J, n):
            raise SizeLimitError("grid entries too large for exact int64 minors")
        return _batch_first_p0_failure(J)
    if claim in (Claim.NONREAL_AVOIDS_LEFT, Claim.SEMISTABLE):
        w = np.linalg.eigvals(J.astype(float))
        left = w.real < -tol
        if claim is Claim.NONREAL_AVOIDS_LEFT:
            left &= np.abs(w.imag) > tol * np.maximum(1.0, np.abs(w))
        return left.any(axis=-1)
    if n < 2:
        raise DimensionError("compound claims need n >= 2")
    C = _batch_compound(J)
    N = C.shape[-1]
    if not _safe_bound(C, N):
        raise SizeLimitError("grid entries too large for exact int64 minors")
    if claim is Claim.COMPOUND_P0:
        return _batch_first_p0_failure(C)
    d = _batch_det(C)
    if claim is Claim.COMPOUND_NONSINGULAR:
        return d == 0
    if claim is Claim.DET_COMPOUND_POSITIVE:
        return d <= 0
    raise ValueError(claim)


def exhaustive_small(
    claim: Claim | str,
    a_spec: SampleSpec | RationalMatrix,
    b_spec: SampleSpec | RationalMatrix,
    grid: str = "dyadic",
    tol: float = REAL_TOL,
    chunk: int = 4096,
) -> OracleVerdict:
    """Check the claim on every grid member of the A and B classes.

    The ``sign`` grid uses magnitude 1 and the ``dyadic`` grid magnitudes
    1 and 2; Q0 classes add 0.  Fixed matrices are scaled to integers,
    which changes no sign of a minor and no sign of an eigenvalue's real
    part.  Arithmetic is exact int64 except for spectral claims.
    """
    claim = Claim(claim)
    if isinstance(a_spec, RationalMatrix):
        a_spec = SampleSpec.fixed(a_spec)
    if isinstance(b_spec, RationalMatrix):
        b_spec = SampleSpec.fixed(b_spec)
    n, m = a_spec.shape
    if b_spec.shape != (m, n):
        raise DimensionError(f"B class must be {m}x{n}, got {b_spec.shape}")
    if max(n, m) > MAX_GRID_DIM:
        raise SizeLimitError(f"exhaustive search limited to {MAX_GRID_DIM}x{MAX_GRID_DIM}")
    t0 = time.perf_counter()
    As, _ = _member_grid(a_spec, grid)
    Bs, _ = _member_grid(b_spec, grid)
    total = len(As) * len(Bs)
    if total > MAX_GRID_MEMBERS:
        raise SizeLimitError(f"{total} grid pairs exceed the limit {MAX_GRID_MEMBERS}")
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total))
        ia, ib = np.divmod(idx, len(Bs))
        bad = _batch_violations(claim, As[ia], Bs[ib], tol)
        if bad.any():
            t = int(np.argmax(bad))
            A = RationalMatrix(As[ia[t]].tolist())
            B = RationalMatrix(Bs[ib[t]].tolist())
            violation = evaluate_claim(claim, A, B, tol) or "grid violation"
            return OracleVerdict(
                claim.value, int(idx[t]) + 1, "counterexample", None,
                Counterexample(int(idx[t]), A, B, violation),
                wall_time=time.perf_counter() - t0,
            )
    return OracleVerdict(claim.value, total, "all-passed", None,
                         wall_time=time.perf_counter() - t0)
