"""Nominal linear complementarity problems: find z >= 0 with
w = M z + q >= 0 and z^T w = 0.

solve_lemke runs complementary pivoting with the all-ones covering
vector. The ratio test is lexicographic over (rhs | initial identity
columns), which breaks every degenerate tie deterministically and
prevents cycling. Ray termination certifies that no solution exists only
for positive semidefinite (more generally copositive-plus) M; for other
matrices a ray is reported as such and the caller decides.

describe_solution_set encodes, for PSD M, the full solution set as a
polyhedron around any one solution; compute_support_P maximizes each
coordinate over that polyhedron to find which coordinates are positive
somewhere in the set.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .lp import INF, LinearProgram, IterationLimitError, solve_lp
from .tolerances import TOL_COMP, TOL_FEAS, TOL_SUPPORT

__all__ = [
    "NominalLcp",
    "LcpSolution",
    "LemkeOutcome",
    "lcp_residuals",
    "solve_lemke",
    "describe_solution_set",
    "compute_support_P",
]


@dataclass
class NominalLcp:
    m: np.ndarray
    q: np.ndarray

    def __post_init__(self):
        self.m = linalg.as_matrix(self.m, square=True)
        self.q = linalg.as_vector(self.q, self.m.shape[0])

    @property
    def n(self) -> int:
        return self.q.size


@dataclass
class LcpSolution:
    z: np.ndarray
    comp_residual: float


@dataclass
class LemkeOutcome:
    status: str  # "solution" | "ray"
    solution: LcpSolution | None = None
    iterations: int = 0


def lcp_residuals(prob: NominalLcp, z) -> tuple[float, float, float]:
    """(most negative z entry, most negative w entry, |z . w|), computed
    straight from the problem data."""
    z = linalg.as_vector(z, prob.n)
    w = prob.m @ z + prob.q
    return (
        float(np.min(z, initial=0.0)),
        float(np.min(w, initial=0.0)),
        abs(float(z @ w)),
    )


def _validate_solution(prob: NominalLcp, z, tol: float) -> LcpSolution:
    zmin, wmin, comp = lcp_residuals(prob, z)
    qscale = 1.0 + float(np.max(np.abs(prob.q), initial=0.0))
    zscale = 1.0 + float(np.max(np.abs(z), initial=0.0))
    if zmin < -tol:
        raise RuntimeError(f"pivoting produced z with entry {zmin:.3e}")
    if wmin < -tol * qscale:
        raise RuntimeError(f"pivoting produced M z + q with entry {wmin:.3e}")
    if comp > TOL_COMP * qscale * zscale:
        raise RuntimeError(f"complementarity residual {comp:.3e} too large")
    return LcpSolution(z=z, comp_residual=comp)


def solve_lemke(prob: NominalLcp, max_iterations: int | None = None,
                tol: float = TOL_FEAS) -> LemkeOutcome:
    """Complementary pivoting from the all-ones covering vector.

    Returns status "solution" with a validated LcpSolution, or "ray" when
    the entering column has no positive entries (secondary ray). The
    returned solution is re-checked against the original data,
    independently of the tableau arithmetic.
    """
    n = prob.n
    if max_iterations is None:
        max_iterations = max(200, 25 * n * n)
    if np.all(prob.q >= 0):
        return LemkeOutcome("solution", _validate_solution(prob, np.zeros(n), tol), 0)

    # tableau columns: w (n) | z (n) | z0 | rhs; lexicographic part is the
    # w block, which starts as the identity
    t = np.zeros((n, 2 * n + 2))
    t[:, :n] = np.eye(n)
    t[:, n : 2 * n] = -prob.m
    t[:, 2 * n] = -1.0
    t[:, 2 * n + 1] = prob.q
    basis = list(range(n))  # w_i basic
    z0 = 2 * n
    rhs = 2 * n + 1

    def lex_min_row(col, candidates):
        # minimize (rhs, w-part) / pivot entry lexicographically
        best = None
        best_key = None
        for i in candidates:
            piv = t[i, col]
            key = np.concatenate(([t[i, rhs]], t[i, :n])) / piv
            if best is None or _lex_less(key, best_key):
                best, best_key = i, key
        return best

    def _lex_less(a, b):
        for x, y in zip(a, b):
            if x < y - 1e-12:
                return True
            if x > y + 1e-12:
                return False
        return False

    # initial pivot: bring z0 in against the lexicographic minimum of
    # (q_i, e_i) / 1 over rows with q_i < 0 (the most negative q wins;
    # the identity part breaks ties deterministically)
    neg = [i for i in range(n) if prob.q[i] < 0]
    row = None
    best_key = None
    for i in neg:
        key = np.concatenate(([t[i, rhs]], t[i, :n]))
        if row is None or _lex_less(key, best_key):
            row, best_key = i, key
    entering = z0
    iterations = 0
    while True:
        iterations += 1
        if iterations > max_iterations:
            raise IterationLimitError(
                f"lemke pivoting exceeded {max_iterations} iterations"
            )
        if row is None:
            piv_candidates = [i for i in range(n) if t[i, entering] > 1e-10]
            if not piv_candidates:
                return LemkeOutcome("ray", None, iterations)
            row = lex_min_row(entering, piv_candidates)
        # pivot on (row, entering)
        leaving = basis[row]
        t[row] /= t[row, entering]
        for i in range(n):
            if i != row and t[i, entering] != 0.0:
                t[i] -= t[i, entering] * t[row]
        basis[row] = entering
        if leaving == z0:
            z = np.zeros(n)
            for i, var in enumerate(basis):
                if n <= var < 2 * n:
                    z[var - n] = max(0.0, t[i, rhs])
            return LemkeOutcome("solution", _validate_solution(prob, z, tol), iterations)
        entering = leaving + n if leaving < n else leaving - n  # complement
        row = None


def describe_solution_set(prob: NominalLcp, zbar, tol: float = TOL_FEAS) -> LinearProgram:
    """Polyhedral description of the full solution set of a PSD instance
    around the known solution zbar:

        z >= 0,  M z + q >= 0,  q.(z - zbar) = 0,  (M + M^T)(z - zbar) = 0.

    The returned LinearProgram has a zero objective; callers set one.
    Raises ValueError when M is not positive semidefinite or zbar fails
    to solve the instance.
    """
    if not linalg.is_psd(prob.m):
        raise ValueError("solution-set description requires a PSD matrix")
    zbar = linalg.as_vector(zbar, prob.n)
    zmin, wmin, comp = lcp_residuals(prob, zbar)
    qscale = 1.0 + float(np.max(np.abs(prob.q), initial=0.0))
    zscale = 1.0 + float(np.max(np.abs(zbar), initial=0.0))
    if zmin < -tol or wmin < -tol * qscale or comp > TOL_COMP * qscale * zscale:
        raise ValueError("zbar does not solve the instance")
    n = prob.n
    sym = prob.m + prob.m.T
    lhs = np.vstack([prob.m, prob.q.reshape(1, n), sym])
    rhs = np.concatenate([-prob.q, [float(prob.q @ zbar)], sym @ zbar])
    senses = [">="] * n + ["="] * (n + 1)
    return LinearProgram(
        objective=np.zeros(n),
        lhs=lhs,
        senses=senses,
        rhs=rhs,
        lower=np.zeros(n),
        upper=np.full(n, np.inf),
    )


def compute_support_P(prob: NominalLcp, zbar, tol: float = TOL_SUPPORT) -> np.ndarray:
    """Indices j whose coordinate is positive somewhere in the solution
    set of a PSD instance (one LP maximizing z_j per coordinate;
    unbounded coordinates count as positive)."""
    skeleton = describe_solution_set(prob, zbar)
    members = []
    for j in range(prob.n):
        obj = np.zeros(prob.n)
        obj[j] = -1.0  # maximize z_j
        lp = LinearProgram(obj, skeleton.lhs, skeleton.senses, skeleton.rhs,
                           skeleton.lower, skeleton.upper)
        out = solve_lp(lp)
        if out.status == "unbounded" or (out.status == "optimal" and -out.objective > tol):
            members.append(j)
        elif out.status == "infeasible":
            raise RuntimeError("solution-set polyhedron reported infeasible")
    return np.array(members, dtype=int)
