"""Executable checkers for the auxiliary matrix facts, plus an exact
brute-force expectation engine for finite-support sums that serves as ground
truth for the probabilistic estimates.

Eight fact kinds are covered.  Inequalities:

  heinz             lam^t mu^(1-t) + lam^(1-t) mu^t <= lam + mu
  gm_am_trace       tr[H W^q H Y^(2r-q)] + tr[H W^(2r-q) H Y^q]
                        <= tr[H^2 (W^2r + Y^2r)]
  sum_squares       ||sum A_i^2|| <= max_i ||A_i|| * ||sum A_i||   (A_i PSD)
  trace_product     tr[H A] <= ||H|| tr[A]                         (A PSD)
  monotonicity      A below H in Loewner order  =>  lmax(A) <= lmax(H)
  double_factorial  (2p-1)!! <= ((2p+1)/e)^p

Identities (checked to a Frobenius deviation):

  diff_powers       W^(2p-1) - Y^(2p-1) = sum_q W^q (W - Y) Y^(2p-2-q)
  dilation_square   dilation(B)^2 = blockdiag(B B*, B* B)

All facts are exact in real arithmetic; tolerances absorb rounding only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .linalg import HermitianMatrix, as_hermitian, as_rect, dilation, spectral_norm

KINDS = (
    "heinz",
    "gm_am_trace",
    "sum_squares",
    "trace_product",
    "monotonicity",
    "diff_powers",
    "double_factorial",
    "dilation_square",
)

_IDENTITY_KINDS = frozenset({"diff_powers", "dilation_square"})
_REL_TOL = 1e-9
_PSD_TOL_REL = 1e-10

DEFAULT_ENUMERATION_CAP = 1 << 20
_ENUM_CHUNK = 1 << 14


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one fact evaluation.

    For inequality kinds, holds iff lhs <= rhs + tolerance.  For identity
    kinds, lhs is the Frobenius deviation between the two sides, rhs is 0,
    and holds iff |lhs - rhs| <= tolerance.  slack is rhs - lhs.
    """

    holds: bool
    lhs: float
    rhs: float
    slack: float
    tolerance: float
    kind: str = ""
    detail: dict = field(default_factory=dict)


class FiniteSummand:
    """A random matrix with finite support: outcomes [(probability, matrix)].

    Probabilities must be positive and sum to 1 within 1e-12; all outcome
    matrices share one shape.
    """

    __slots__ = ("probabilities", "matrices")

    def __init__(self, outcomes):
        pairs = list(outcomes)
        if not pairs:
            raise ValueError("FiniteSummand needs at least one outcome")
        probs = np.array([float(p) for p, _ in pairs], dtype=np.float64)
        if np.any(probs <= 0.0):
            raise ValueError("outcome probabilities must be positive")
        if abs(float(probs.sum()) - 1.0) > 1e-12:
            raise ValueError(f"probabilities sum to {probs.sum()!r}, expected 1")
        mats = np.stack([as_rect(m).array for _, m in pairs])
        if mats.ndim != 3:
            raise ValueError("outcome matrices must share one shape")
        probs.setflags(write=False)
        mats.setflags(write=False)
        object.__setattr__(self, "probabilities", probs)
        object.__setattr__(self, "matrices", mats)

    def __setattr__(self, name, value):
        raise AttributeError("FiniteSummand is immutable")

    @property
    def support_size(self) -> int:
        return self.matrices.shape[0]

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrices.shape[1], self.matrices.shape[2]

    def outcomes(self) -> list[tuple[float, np.ndarray]]:
        return [(float(p), m) for p, m in zip(self.probabilities, self.matrices)]

    def mean(self) -> np.ndarray:
        return np.tensordot(self.probabilities, self.matrices, axes=(0, 0))

    def outcome_norms(self) -> np.ndarray:
        return np.array([spectral_norm(m) for m in self.matrices])

    def centered(self) -> "FiniteSummand":
        mu = self.mean()
        return FiniteSummand(
            [(p, m - mu) for p, m in zip(self.probabilities, self.matrices)]
        )

    def sign_modulated(self) -> "FiniteSummand":
        """Support of eps * S for an independent fair sign eps."""
        out = []
        for p, m in zip(self.probabilities, self.matrices):
            out.append((p / 2.0, m))
            out.append((p / 2.0, -m))
        return FiniteSummand(out)


def as_finite_summand(s) -> FiniteSummand:
    return s if isinstance(s, FiniteSummand) else FiniteSummand(s)


def _require_psd(a: np.ndarray, what: str) -> None:
    smallest = float(np.linalg.eigvalsh(a)[0])
    limit = _PSD_TOL_REL * max(1.0, float(np.linalg.norm(a, ord="fro")))
    if smallest < -limit:
        raise ValueError(f"{what} must be PSD; smallest eigenvalue {smallest:.3e}")


@dataclass(frozen=True)
class FactCase:
    """One concrete instance of a checkable fact.

    Build through the named constructors, which validate the hypotheses each
    fact actually needs; violated hypotheses raise instead of producing a
    false CheckResult.
    """

    kind: str
    payload: dict

    @classmethod
    def heinz(cls, lam: float, mu: float, theta: float) -> "FactCase":
        lam, mu, theta = float(lam), float(mu), float(theta)
        if lam < 0 or mu < 0:
            raise ValueError("heinz needs lam, mu >= 0")
        if not 0.0 <= theta <= 1.0:
            raise ValueError("heinz needs theta in [0, 1]")
        return cls("heinz", {"lam": lam, "mu": mu, "theta": theta})

    @classmethod
    def gm_am_trace(cls, H, W, Y, r: int, q: int) -> "FactCase":
        H, W, Y = as_hermitian(H), as_hermitian(W), as_hermitian(Y)
        if not (H.dim == W.dim == Y.dim):
            raise ValueError("gm_am_trace needs equal dimensions")
        r, q = int(r), int(q)
        if r < 0 or not 0 <= q <= 2 * r:
            raise ValueError("gm_am_trace needs r >= 0 and 0 <= q <= 2r")
        return cls("gm_am_trace", {"H": H, "W": W, "Y": Y, "r": r, "q": q})

    @classmethod
    def sum_squares(cls, mats) -> "FactCase":
        ms = [as_hermitian(m) for m in mats]
        if not ms:
            raise ValueError("sum_squares needs at least one matrix")
        if len({m.dim for m in ms}) != 1:
            raise ValueError("sum_squares needs equal dimensions")
        for k, m in enumerate(ms):
            _require_psd(m.array, f"sum_squares matrix {k}")
        return cls("sum_squares", {"mats": tuple(ms)})

    @classmethod
    def trace_product(cls, H, A) -> "FactCase":
        H, A = as_hermitian(H), as_hermitian(A)
        if H.dim != A.dim:
            raise ValueError("trace_product needs equal dimensions")
        _require_psd(A.array, "trace_product right factor")
        return cls("trace_product", {"H": H, "A": A})

    @classmethod
    def monotonicity(cls, A, H) -> "FactCase":
        A, H = as_hermitian(A), as_hermitian(H)
        if A.dim != H.dim:
            raise ValueError("monotonicity needs equal dimensions")
        _require_psd(H.array - A.array, "monotonicity difference H - A")
        return cls("monotonicity", {"A": A, "H": H})

    @classmethod
    def diff_powers(cls, W, Y, p: int) -> "FactCase":
        W, Y = as_hermitian(W), as_hermitian(Y)
        if W.dim != Y.dim:
            raise ValueError("diff_powers needs equal dimensions")
        p = int(p)
        if p < 1:
            raise ValueError("diff_powers needs p >= 1")
        return cls("diff_powers", {"W": W, "Y": Y, "p": p})

    @classmethod
    def double_factorial(cls, p: int) -> "FactCase":
        p = int(p)
        if p < 0:
            raise ValueError("double_factorial needs p >= 0")
        return cls("double_factorial", {"p": p})

    @classmethod
    def dilation_square(cls, B) -> "FactCase":
        return cls("dilation_square", {"B": as_rect(B)})


def odd_double_factorial(p: int) -> int:
    """(2p-1)!! as an exact integer; the empty product for p = 0 is 1."""
    return math.prod(range(1, 2 * p, 2))


def _npow(a: np.ndarray, k: int) -> np.ndarray:
    out = np.eye(a.shape[0], dtype=np.complex128)
    for _ in range(k):
        out = out @ a
    return out


def _power_list(a: np.ndarray, top: int) -> list[np.ndarray]:
    powers = [np.eye(a.shape[0], dtype=np.complex128)]
    for _ in range(top):
        powers.append(powers[-1] @ a)
    return powers


def _ineq_result(kind: str, lhs: float, rhs: float, detail=None) -> CheckResult:
    tol = _REL_TOL * max(1.0, abs(rhs))
    return CheckResult(
        holds=bool(lhs <= rhs + tol),
        lhs=float(lhs),
        rhs=float(rhs),
        slack=float(rhs - lhs),
        tolerance=tol,
        kind=kind,
        detail=detail or {},
    )


def _identity_result(kind: str, deviation: float, scale: float, detail=None) -> CheckResult:
    tol = _REL_TOL * max(1.0, scale)
    return CheckResult(
        holds=bool(abs(deviation) <= tol),
        lhs=float(deviation),
        rhs=0.0,
        slack=float(-deviation),
        tolerance=tol,
        kind=kind,
        detail=detail or {},
    )


def verify_fact(case: FactCase, inject_fault: bool = False) -> CheckResult:
    """Evaluate both sides of the fact numerically.

    inject_fault is a self-test hook: it deliberately mis-evaluates the
    gm_am_trace right-hand side (halving it, as if the two-term sum had been
    averaged) so harnesses can confirm they detect planted violations.
    """
    p = case.payload
    if case.kind == "heinz":
        lam, mu, theta = p["lam"], p["mu"], p["theta"]
        lhs = lam**theta * mu ** (1.0 - theta) + lam ** (1.0 - theta) * mu**theta
        return _ineq_result(case.kind, lhs, lam + mu)

    if case.kind == "gm_am_trace":
        H, W, Y = p["H"].array, p["W"].array, p["Y"].array
        r, q = p["r"], p["q"]
        wq, w2rq, w2r = _npow(W, q), _npow(W, 2 * r - q), _npow(W, 2 * r)
        yq, y2rq, y2r = _npow(Y, q), _npow(Y, 2 * r - q), _npow(Y, 2 * r)
        lhs = float(np.trace(H @ wq @ H @ y2rq).real)
        lhs += float(np.trace(H @ w2rq @ H @ yq).real)
        rhs = float(np.trace(H @ H @ (w2r + y2r)).real)
        if inject_fault:
            rhs = rhs / 2.0
        return _ineq_result(case.kind, lhs, rhs)

    if case.kind == "sum_squares":
        mats = [m.array for m in p["mats"]]
        lhs = spectral_norm(sum(m @ m for m in mats))
        rhs = max(spectral_norm(m) for m in mats) * spectral_norm(sum(mats))
        return _ineq_result(case.kind, lhs, rhs)

    if case.kind == "trace_product":
        H, A = p["H"].array, p["A"].array
        lhs = float(np.trace(H @ A).real)
        rhs = spectral_norm(H) * float(np.trace(A).real)
        return _ineq_result(case.kind, lhs, rhs)

    if case.kind == "monotonicity":
        lhs = float(np.linalg.eigvalsh(p["A"].array)[-1])
        rhs = float(np.linalg.eigvalsh(p["H"].array)[-1])
        return _ineq_result(case.kind, lhs, rhs)

    if case.kind == "diff_powers":
        W, Y, pw = p["W"].array, p["Y"].array, p["p"]
        top = 2 * pw - 2
        wpows = _power_list(W, top + 1)
        ypows = _power_list(Y, top + 1)
        left = wpows[2 * pw - 1] - ypows[2 * pw - 1]
        diff = W - Y
        right = np.zeros_like(left)
        for k in range(top + 1):
            right += wpows[k] @ diff @ ypows[top - k]
        scale = max(
            float(np.linalg.norm(left, ord="fro")),
            float(np.linalg.norm(right, ord="fro")),
        )
        deviation = float(np.linalg.norm(left - right, ord="fro"))
        return _identity_result(case.kind, deviation, scale)

    if case.kind == "double_factorial":
        pw = p["p"]
        lhs = float(odd_double_factorial(pw))
        rhs = ((2.0 * pw + 1.0) / math.e) ** pw
        return _ineq_result(case.kind, lhs, rhs)

    if case.kind == "dilation_square":
        B = p["B"].array
        d1, d2 = B.shape
        D = dilation(B).array
        square = D @ D
        target = np.zeros_like(square)
        target[:d1, :d1] = B @ B.conj().T
        target[d1:, d1:] = B.conj().T @ B
        deviation = float(np.linalg.norm(square - target, ord="fro"))
        scale = max(
            float(np.linalg.norm(square, ord="fro")),
            float(np.linalg.norm(target, ord="fro")),
        )
        detail = {
            "upper_block_deviation": float(
                np.linalg.norm(square[:d1, :d1] - target[:d1, :d1], ord="fro")
            ),
            "lower_block_deviation": float(
                np.linalg.norm(square[d1:, d1:] - target[d1:, d1:], ord="fro")
            ),
            "offdiagonal_mass": float(np.linalg.norm(square[:d1, d1:], ord="fro"))
            + float(np.linalg.norm(square[d1:, :d1], ord="fro")),
        }
        return _identity_result(case.kind, deviation, scale, detail)

    raise ValueError(f"unknown fact kind: {case.kind!r}")


def brute_force_expected_norm(summands, r: int, cap: int = DEFAULT_ENUMERATION_CAP) -> float:
    """E||sum_i S_i||^r by exact enumeration of the product distribution.

    Summands must have finite support and equal shapes; the total number of
    outcome combinations must not exceed cap.  Enumeration follows a
    mixed-radix counter over outcome indices (row-major, last summand fastest).
    """
    ss = [as_finite_summand(s) for s in summands]
    if not ss:
        raise ValueError("need at least one summand")
    if len({s.shape for s in ss}) != 1:
        raise ValueError("summand shapes differ")
    if not isinstance(r, (int, np.integer)) or r < 1:
        raise ValueError("moment order r must be a positive integer")
    counts = [s.support_size for s in ss]
    total = math.prod(counts)
    if total > cap:
        raise ValueError(f"enumeration needs {total} combinations, cap is {cap}")

    d1, d2 = ss[0].shape
    acc = 0.0
    for start in range(0, total, _ENUM_CHUNK):
        ranks = np.arange(start, min(start + _ENUM_CHUNK, total))
        idx = np.unravel_index(ranks, counts)
        z = np.zeros((len(ranks), d1, d2), dtype=np.complex128)
        probs = np.ones(len(ranks))
        for s, ix in zip(ss, idx):
            z += s.matrices[ix]
            probs *= s.probabilities[ix]
        norms = np.linalg.svd(z, compute_uv=False)[:, 0]
        acc += float(np.dot(probs, norms ** int(r)))
    return acc


def symmetrization_check(summands, r: int, cap: int = DEFAULT_ENUMERATION_CAP) -> CheckResult:
    """Exact two-sided symmetrization comparison.

    Computes M = (E||sum (S_i - E S_i)||^r)^(1/r) on the centered summands and
    R = (E||sum eps_i S_i||^r)^(1/r) with independent fair signs applied to the
    raw summands, both by full enumeration.  Holds iff R/2 - tol <= M <= 2R + tol.
    """
    ss = [as_finite_summand(s) for s in summands]
    M = brute_force_expected_norm([s.centered() for s in ss], r, cap) ** (1.0 / r)
    R = brute_force_expected_norm([s.sign_modulated() for s in ss], r, cap) ** (1.0 / r)
    violation = max(R / 2.0 - M, M - 2.0 * R)
    tol = _REL_TOL * max(1.0, R)
    return CheckResult(
        holds=bool(violation <= tol),
        lhs=float(violation),
        rhs=0.0,
        slack=float(-violation),
        tolerance=tol,
        kind="symmetrization",
        detail={"centered_moment": float(M), "signed_moment": float(R)},
    )


# ---------------------------------------------------------------------------
# Seeded random case generation for the sweep suites.  Every case is keyed by
# (seed, kind, case index) so any failure replays from the printed triple.
# ---------------------------------------------------------------------------

_KIND_INDEX = {k: i for i, k in enumerate(KINDS)}


def random_hermitian(rng: np.random.Generator, d: int, scale: float = 1.0) -> np.ndarray:
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return np.asarray(scale * (g + g.conj().T) / 2.0)


def random_psd(rng: np.random.Generator, d: int, scale: float = 1.0) -> np.ndarray:
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return np.asarray(scale * (g @ g.conj().T) / d)


def random_fact_case(
    kind: str,
    rng: np.random.Generator,
    max_dim: int = 6,
    max_r: int = 3,
    max_p: int = 6,
) -> FactCase:
    """One random valid case of the given kind."""
    if kind == "heinz":
        lam = 0.0 if rng.random() < 0.1 else float(rng.uniform(0.0, 10.0))
        mu = 0.0 if rng.random() < 0.1 else float(rng.uniform(0.0, 10.0))
        u = rng.random()
        theta = 0.0 if u < 0.05 else 1.0 if u < 0.1 else float(rng.random())
        return FactCase.heinz(lam, mu, theta)
    if kind == "gm_am_trace":
        d = int(rng.integers(1, max_dim + 1))
        r = int(rng.integers(0, max_r + 1))
        q = int(rng.integers(0, 2 * r + 1))
        return FactCase.gm_am_trace(
            random_hermitian(rng, d),
            random_hermitian(rng, d),
            random_hermitian(rng, d),
            r,
            q,
        )
    if kind == "sum_squares":
        d = int(rng.integers(1, max_dim + 1))
        n = int(rng.integers(1, 6))
        return FactCase.sum_squares([random_psd(rng, d) for _ in range(n)])
    if kind == "trace_product":
        d = int(rng.integers(1, max_dim + 1))
        return FactCase.trace_product(random_hermitian(rng, d), random_psd(rng, d))
    if kind == "monotonicity":
        d = int(rng.integers(1, max_dim + 1))
        a = random_hermitian(rng, d)
        return FactCase.monotonicity(a, a + random_psd(rng, d))
    if kind == "diff_powers":
        d = int(rng.integers(1, max_dim + 1))
        p = int(rng.integers(1, max_p + 1))
        return FactCase.diff_powers(
            random_hermitian(rng, d), random_hermitian(rng, d), p
        )
    if kind == "double_factorial":
        return FactCase.double_factorial(int(rng.integers(0, max_p + 1)))
    if kind == "dilation_square":
        d1 = int(rng.integers(1, max_dim + 1))
        d2 = int(rng.integers(1, max_dim + 1))
        g = rng.standard_normal((d1, d2)) + 1j * rng.standard_normal((d1, d2))
        return FactCase.dilation_square(g)
    raise ValueError(f"unknown fact kind: {kind!r}")


def case_rng(seed: int, kind: str, index: int) -> np.random.Generator:
    """The generator that (re)produces sweep case `index` of `kind`."""
    return np.random.default_rng([int(seed) % (1 << 64), _KIND_INDEX[kind], int(index)])


@dataclass(frozen=True)
class SweepResult:
    kind: str
    cases: int
    failures: tuple  # (index, CheckResult) pairs

    @property
    def passed(self) -> int:
        return self.cases - len(self.failures)

    @property
    def ok(self) -> bool:
        return not self.failures


def sweep_fact_kind(
    kind: str,
    cases: int,
    seed: int,
    max_dim: int = 6,
    max_r: int = 3,
    max_p: int = 6,
    inject_fault: bool = False,
) -> SweepResult:
    if kind not in _KIND_INDEX:
        raise ValueError(f"unknown fact kind {kind!r}; expected one of {KINDS}")
    failures = []
    for i in range(cases):
        case = random_fact_case(kind, case_rng(seed, kind, i), max_dim, max_r, max_p)
        result = verify_fact(case, inject_fault=inject_fault)
        if not result.holds:
            failures.append((i, result))
    return SweepResult(kind=kind, cases=cases, failures=tuple(failures))


def random_zero_mean_summands(
    rng: np.random.Generator, max_n: int = 5, max_dim: int = 3
) -> list[FiniteSummand]:
    """A random family of centered two-outcome summands with a common shape.

    Outcomes are {(p, A), (1-p, -p/(1-p) A)}, which has mean exactly zero;
    the two-sided symmetrization comparison is false for uncentered summands
    (a deterministic nonzero summand already breaks the lower half), so the
    sweep generates mean-zero instances by construction.
    """
    n = int(rng.integers(1, max_n + 1))
    d1 = int(rng.integers(1, max_dim + 1))
    d2 = int(rng.integers(1, max_dim + 1))
    out = []
    for _ in range(n):
        p = float(rng.uniform(0.1, 0.9))
        a = rng.standard_normal((d1, d2)) + 1j * rng.standard_normal((d1, d2))
        if rng.random() < 0.2:
            a = np.zeros((d1, d2), dtype=np.complex128)
        out.append(FiniteSummand([(p, a), (1.0 - p, -(p / (1.0 - p)) * a)]))
    return out


def random_hermitian_family(
    rng: np.random.Generator, max_n: int = 10, max_dim: int = 6
) -> list[np.ndarray]:
    """Random fixed Hermitian family with a common dimension."""
    n = int(rng.integers(1, max_n + 1))
    d = int(rng.integers(1, max_dim + 1))
    return [random_hermitian(rng, d) for _ in range(n)]


def symmetrization_rng(seed: int, index: int) -> np.random.Generator:
    """Generator for symmetrization sweep instance `index` (stream 9; fact
    kinds occupy streams 0-7 and the domination sweep stream 8)."""
    return np.random.default_rng([int(seed) % (1 << 64), 9, int(index)])


def sweep_symmetrization(cases: int, seed: int, max_n: int = 5) -> SweepResult:
    """Exact two-sided symmetrization comparison on random centered
    two-outcome instances, r alternating between 1 and 2."""
    failures = []
    for i in range(cases):
        g = symmetrization_rng(seed, i)
        summands = random_zero_mean_summands(g, max_n=max_n)
        r = 1 + int(g.integers(0, 2))
        result = symmetrization_check(summands, r)
        if not result.holds:
            failures.append((i, result))
    return SweepResult(kind="symmetrization", cases=cases, failures=tuple(failures))
