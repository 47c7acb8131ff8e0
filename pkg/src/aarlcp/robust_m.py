"""Robust affine rules when the matrix itself is uncertain.

Here the matrix wanders, M(zeta) = m0 + sum_i zeta_i P_i for zeta in
[-1, 1]^k, while q stays fixed. A rule z(zeta) = D zeta + r with
support J = {j : r_j > 0} solves every realization exactly when

  * the J block of the expanded residual vanishes identically, which
    pins r_J and the J rows of D in closed form once m0_J inverts and
    forces a kernel condition that cancels the quadratic terms, and
  * two sign conditions hold over the whole box: the J rows of z stay
    nonnegative (affine in zeta, minimized at a vertex) and the
    remaining rows of M(zeta) z(zeta) + q stay nonnegative (quadratic
    in zeta, minimized exactly by face enumeration up to a dimension
    cap and by vertex-plus-sample search beyond it).

Rows outside J carry r_j = 0 and zero D rows, so their z component is
identically zero. The first h coordinates are here-and-now decisions:
their D rows must be zero, which is checked on each closed-form
candidate and rejects supports whose rows refuse to comply.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .boxopt import min_affine_over_box, min_quadratic_over_box
from .robust_q import ConditionCheck, SizeLimitError, VerificationReport
from .tolerances import TOL_FEAS, TOL_PSD, TOL_SUPPORT

__all__ = [
    "UncertainLcpM",
    "AffineSolutionM",
    "EnumerationOutcomeM",
    "mtilde",
    "check_necessary_m",
    "characterize_for_J",
    "check_kernel_condition",
    "check_box_conditions",
    "verify_affine_m",
    "solve_enumeration_m",
    "solve_enumeration_m_detailed",
    "uniqueness_m",
    "sample_violation_m",
]

# subset enumeration guard, matching the uncertain-q pathway
ENUMERATION_SIZE_CAP_M = 20
# hard cap on the total subset count 2^n regardless of h
TOTAL_SIZE_CAP_M = 24


@dataclass
class UncertainLcpM:
    """LCP data with M(zeta) = m0 + sum_i zeta_i perturbations[i] on
    zeta in [-1, 1]^k; q is certain and the first h coordinates of z
    are here-and-now."""

    m0: np.ndarray
    perturbations: list
    q: np.ndarray
    h: int = 0

    def __post_init__(self):
        self.m0 = linalg.as_matrix(self.m0, square=True)
        n = self.m0.shape[0]
        if len(self.perturbations) < 1:
            raise ValueError("at least one perturbation matrix is required")
        self.perturbations = [linalg.as_matrix(p, square=True)
                              for p in self.perturbations]
        for p in self.perturbations:
            if p.shape != (n, n):
                raise ValueError("perturbation shape differs from m0")
        self.q = linalg.as_vector(self.q, n)
        self.h = int(self.h)
        if not 0 <= self.h <= n:
            raise ValueError(f"h must lie in [0, {n}]")

    @property
    def n(self) -> int:
        return self.q.size

    @property
    def k(self) -> int:
        return len(self.perturbations)

    def matrix_at(self, zeta) -> np.ndarray:
        """M(zeta) for one realization."""
        zeta = linalg.as_vector(zeta, self.k)
        m = self.m0.copy()
        for zi, p in zip(zeta, self.perturbations):
            m += zi * p
        return m


@dataclass
class AffineSolutionM:
    """Affine rule z(zeta) = d zeta + r with d of shape (n, k)."""

    d: np.ndarray
    r: np.ndarray

    def __post_init__(self):
        self.d = linalg.as_matrix(self.d)
        self.r = linalg.as_vector(self.r, self.d.shape[0])

    def support(self, tol: float = TOL_SUPPORT) -> np.ndarray:
        """J: coordinates with strictly positive r."""
        return np.flatnonzero(self.r > tol)

    def evaluate(self, zeta) -> np.ndarray:
        return self.d @ np.asarray(zeta, dtype=float) + self.r


def mtilde(inst: UncertainLcpM, j_set, i: int) -> np.ndarray:
    """(m0_J)^-1 P_J (m0_J)^-1 for perturbation i, the kernel of the
    closed-form D columns: D_{J,i} = mtilde(inst, J, i) @ q_J."""
    j = linalg.index_set(j_set, inst.n)
    inv0 = linalg.invert(linalg.submatrix(inst.m0, j, j))
    return inv0 @ linalg.submatrix(inst.perturbations[i], j, j) @ inv0


def _residual_coefficients(inst: UncertainLcpM, sol: AffineSolutionM,
                           rows: np.ndarray):
    """Coefficients of w(zeta) = M(zeta) z(zeta) + q on the given rows,
    as (constant, linear columns, quadratic dict keyed by (i, j) with
    i <= j). w is quadratic in zeta because both M and z are affine."""
    const = inst.m0[rows] @ sol.r + inst.q[rows]
    k = inst.k
    lin = np.empty((rows.size, k))
    for i, p in enumerate(inst.perturbations):
        lin[:, i] = p[rows] @ sol.r + inst.m0[rows] @ sol.d[:, i]
    quad = {}
    for i, pi in enumerate(inst.perturbations):
        quad[(i, i)] = pi[rows] @ sol.d[:, i]
        for j in range(i + 1, k):
            quad[(i, j)] = pi[rows] @ sol.d[:, j] + inst.perturbations[j][rows] @ sol.d[:, i]
    return const, lin, quad


def check_necessary_m(inst: UncertainLcpM, sol: AffineSolutionM,
                      tol: float = TOL_FEAS) -> bool:
    """Whether the support rows of M(zeta) z(zeta) + q vanish as a
    polynomial in zeta: constant, linear and quadratic coefficients all
    zero. Necessary for any solution; with an invertible m0_J it pins
    the closed form."""
    if sol.r.size != inst.n or sol.d.shape != (inst.n, inst.k):
        raise ValueError("solution dimensions do not match the instance")
    j_set = sol.support(tol=TOL_SUPPORT)
    scale = 1.0 + float(np.max(np.abs(inst.q), initial=0.0))
    const, lin, quad = _residual_coefficients(inst, sol, j_set)
    worst = float(np.max(np.abs(const), initial=0.0))
    worst = max(worst, float(np.max(np.abs(lin), initial=0.0)))
    for block in quad.values():
        worst = max(worst, float(np.max(np.abs(block), initial=0.0)))
    return worst <= tol * scale


def characterize_for_J(inst: UncertainLcpM, j_set) -> AffineSolutionM | None:
    """Closed-form candidate for a support: r_J = -(m0_J)^-1 q_J and
    D_{J,i} = (m0_J)^-1 P_J (m0_J)^-1 q_J, zeros elsewhere. Returns
    None when m0_J is singular (no characterization available). The
    candidate is unvalidated: positivity of r_J, the kernel condition
    and the box conditions are separate checks."""
    j = linalg.index_set(j_set, inst.n)
    n, k = inst.n, inst.k
    d = np.zeros((n, k))
    r = np.zeros(n)
    if j.size == 0:
        return AffineSolutionM(d, r)
    try:
        inv0 = linalg.invert(linalg.submatrix(inst.m0, j, j))
    except linalg.SingularMatrixError:
        return None
    qj = inst.q[j]
    v = inv0 @ qj  # equals -r_J
    r[j] = -v
    for i, p in enumerate(inst.perturbations):
        d[j, i] = inv0 @ (linalg.submatrix(p, j, j) @ v)
    return AffineSolutionM(d, r)


def check_kernel_condition(inst: UncertainLcpM, j_set,
                           tol: float = TOL_FEAS) -> bool:
    """Whether (P_i_J mtilde_j + P_j_J mtilde_i) q_J = 0 for all pairs
    i <= j. Substituting the closed-form D into the quadratic residual
    coefficients gives exactly these products, so the condition is what
    cancels the zeta_i zeta_j terms. Raises on a singular m0_J."""
    j = linalg.index_set(j_set, inst.n)
    if j.size == 0:
        return True
    inv0 = linalg.invert(linalg.submatrix(inst.m0, j, j))
    qj = inst.q[j]
    scale = 1.0 + float(np.max(np.abs(qj), initial=0.0))
    blocks = [linalg.submatrix(p, j, j) for p in inst.perturbations]
    tilde_q = [inv0 @ (b @ (inv0 @ qj)) for b in blocks]  # mtilde_i q_J
    for i in range(inst.k):
        for jj in range(i, inst.k):
            res = blocks[i] @ tilde_q[jj] + blocks[jj] @ tilde_q[i]
            if float(np.max(np.abs(res), initial=0.0)) > tol * scale:
                return False
    return True


def check_box_conditions(inst: UncertainLcpM, j_set, cand: AffineSolutionM,
                         tol: float = TOL_FEAS) -> VerificationReport:
    """The two quantified sign conditions for a closed-form candidate.

      support-rows-nonnegative      min over the box of z_j(zeta), j in J
                                    (affine, vertex minimum, exact)
      off-support-rows-nonnegative  min over the box of w_t(zeta), t not
                                    in J (quadratic; exact by face
                                    enumeration for small k, sampled
                                    beyond with certified=False)
    """
    j = linalg.index_set(j_set, inst.n)
    n_set = linalg.complement(j, inst.n)
    k = inst.k
    scale = 1.0 + float(np.max(np.abs(inst.q), initial=0.0))
    ones = np.ones(k)
    checks = []
    certified = True

    worst_val, worst_pt = np.inf, np.zeros(k)
    for row in j:
        val, arg = min_affine_over_box(cand.d[row], cand.r[row], ones)
        if val < worst_val:
            worst_val, worst_pt = val, arg
    if j.size == 0:
        worst_val = 0.0
    checks.append(ConditionCheck(
        "support-rows-nonnegative", bool(worst_val >= -tol * scale),
        float(worst_val), worst_pt))

    const, lin, quad = _residual_coefficients(inst, cand, n_set)
    worst_val, worst_pt = np.inf, np.zeros(k)
    exact_all = True
    for t in range(n_set.size):
        qmat = np.zeros((k, k))
        for (i, jj), block in quad.items():
            qmat[i, jj] = block[t]
        val, arg, exact = min_quadratic_over_box(qmat, lin[t], float(const[t]))
        exact_all = exact_all and exact
        if val < worst_val:
            worst_val, worst_pt = val, arg
    if n_set.size == 0:
        worst_val = 0.0
    certified = certified and exact_all
    checks.append(ConditionCheck(
        "off-support-rows-nonnegative", bool(worst_val >= -tol * scale),
        float(worst_val), worst_pt))

    overall = all(c.passed for c in checks)
    return VerificationReport(overall, checks, certified)


def _structural_check_m(inst: UncertainLcpM, sol: AffineSolutionM, tol: float):
    if sol.r.size != inst.n or sol.d.shape != (inst.n, inst.k):
        raise ValueError("solution dimensions do not match the instance")
    if np.any(sol.r < -tol):
        raise ValueError("r must be nonnegative")
    if inst.h and np.max(np.abs(sol.d[: inst.h, :]), initial=0.0) > tol:
        raise ValueError("here-and-now rows of D must be zero")


def verify_affine_m(inst: UncertainLcpM, sol: AffineSolutionM,
                    tol: float = TOL_FEAS) -> VerificationReport:
    """Direct check of an arbitrary rule against every realization.

      z-nonnegative            min over the box of z_i(zeta), every row
      active-rows-vanish       support rows of M(zeta) z(zeta) + q are
                               identically zero (all polynomial
                               coefficients vanish; exact for any k)
      inactive-rows-nonneg     min over the box of w_t(zeta), the other
                               rows (quadratic, exact or sampled)

    Structural violations (wrong shapes, negative r, nonzero
    here-and-now rows of D) raise ValueError.
    """
    _structural_check_m(inst, sol, tol)
    n, k = inst.n, inst.k
    j_set = sol.support()
    n_set = linalg.complement(j_set, n)
    scale = 1.0 + float(np.max(np.abs(inst.q), initial=0.0))
    ones = np.ones(k)
    checks = []

    worst_val, worst_pt = np.inf, np.zeros(k)
    for i in range(n):
        val, arg = min_affine_over_box(sol.d[i], sol.r[i], ones)
        if val < worst_val:
            worst_val, worst_pt = val, arg
    if n == 0:
        worst_val = 0.0
    checks.append(ConditionCheck(
        "z-nonnegative", bool(worst_val >= -tol), float(worst_val), worst_pt))

    const, lin, quad = _residual_coefficients(inst, sol, j_set)
    worst = float(np.max(np.abs(const), initial=0.0))
    worst = max(worst, float(np.max(np.abs(lin), initial=0.0)))
    for block in quad.values():
        worst = max(worst, float(np.max(np.abs(block), initial=0.0)))
    checks.append(ConditionCheck(
        "active-rows-vanish", bool(worst <= tol * scale), float(worst),
        np.zeros(k)))

    const, lin, quad = _residual_coefficients(inst, sol, n_set)
    worst_val, worst_pt = np.inf, np.zeros(k)
    certified = True
    for t in range(n_set.size):
        qmat = np.zeros((k, k))
        for (i, jj), block in quad.items():
            qmat[i, jj] = block[t]
        val, arg, exact = min_quadratic_over_box(qmat, lin[t], float(const[t]))
        certified = certified and exact
        if val < worst_val:
            worst_val, worst_pt = val, arg
    if n_set.size == 0:
        worst_val = 0.0
    checks.append(ConditionCheck(
        "inactive-rows-nonnegative", bool(worst_val >= -tol * scale),
        float(worst_val), worst_pt))

    overall = all(c.passed for c in checks)
    return VerificationReport(overall, checks, certified)


@dataclass
class EnumerationOutcomeM:
    """Everything the subset sweep learned."""

    solutions: list = field(default_factory=list)
    reports: list = field(default_factory=list)  # parallel to solutions
    singular_supports: list = field(default_factory=list)


def solve_enumeration_m_detailed(inst: UncertainLcpM,
                                 tol: float = TOL_FEAS) -> EnumerationOutcomeM:
    """Sweep supports J by cardinality; keep candidates that pass every
    gate. Supports with a singular m0_J have no characterization and
    are collected, not searched (the caller may report the caveat)."""
    n = inst.n
    if n - inst.h > ENUMERATION_SIZE_CAP_M or n > TOTAL_SIZE_CAP_M:
        raise SizeLimitError(
            f"enumeration over 2^{n} supports refused "
            f"(limit n - h <= {ENUMERATION_SIZE_CAP_M}, n <= {TOTAL_SIZE_CAP_M})")
    out = EnumerationOutcomeM()
    for size in range(n + 1):
        for j_tuple in itertools.combinations(range(n), size):
            j = np.array(j_tuple, dtype=int)
            cand = characterize_for_J(inst, j)
            if cand is None:
                out.singular_supports.append(j)
                continue
            if j.size and np.min(cand.r[j]) <= TOL_SUPPORT:
                continue  # support demands strictly positive r
            if inst.h:
                rows = j[j < inst.h]
                if rows.size and np.max(np.abs(cand.d[rows, :]), initial=0.0) > tol:
                    continue  # here-and-now rows refuse to stay fixed
                cand.d[: inst.h, :] = 0.0
            if not check_kernel_condition(inst, j, tol):
                continue
            report = check_box_conditions(inst, j, cand, tol)
            if not report.overall:
                continue
            if sample_violation_m(inst, cand, count=1000, seed=0) > tol * 10:
                continue  # sampling backstop against tolerance leaks
            out.solutions.append(cand)
            out.reports.append(report)
    return out


def solve_enumeration_m(inst: UncertainLcpM,
                        tol: float = TOL_FEAS) -> list:
    """All affine rules the support sweep certifies, ordered by support
    cardinality then lexicographically."""
    return solve_enumeration_m_detailed(inst, tol).solutions


def uniqueness_m(inst: UncertainLcpM) -> str:
    """"unique-if-exists" when the symmetric part of m0 is positive
    definite, else "unknown"."""
    sym = 0.5 * (inst.m0 + inst.m0.T)
    if inst.n and linalg.min_symmetric_eigenvalue(sym) > TOL_PSD:
        return "unique-if-exists"
    return "unknown"


def sample_violation_m(inst: UncertainLcpM, sol: AffineSolutionM,
                       count: int = 1000, seed: int = 0) -> float:
    """Largest violation of the LCP conditions over `count` uniform box
    samples: max of -z_i, -w_i and |z . w| with w = M(zeta) z + q."""
    rng = np.random.default_rng(seed)
    pts = rng.uniform(-1.0, 1.0, (count, inst.k))
    worst = 0.0
    for zeta in pts:
        z = sol.evaluate(zeta)
        w = inst.matrix_at(zeta) @ z + inst.q
        worst = max(worst,
                    float(np.max(-z, initial=0.0)),
                    float(np.max(-w, initial=0.0)),
                    float(np.max(np.abs(z * w), initial=0.0)))
    return worst
