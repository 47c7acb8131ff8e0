"""Robust solutions of LCPs whose constant vector q is uncertain.

The instance is M z + q(u) with q(u) = qbar + u and u ranging over the
box |u_i| <= ubar_i. A robust solution is an affine rule z(u) = D u + r
that solves the complementarity problem for every u in the box, where
the first h coordinates of z are here-and-now decisions (their D rows
are zero) and coordinates with ubar_i = 0 never vary (their D columns
are zero).

Index-set conventions (0-based internally):
    U = {i : ubar_i > 0}        uncertain coordinates
    S = {i : ubar_i = 0}        certain coordinates
    K = {i : r_i != 0}          rows active at the nominal point
    N = complement of K
    I = K within the here-and-now block, J = K outside it

Three solvers cover the pathways: support-set enumeration (complete for
S empty), a big-M mixed-binary encoding (general, with an exactness
caveat tied to the big-M constant), and a single linear program for
positive semidefinite M (exact both ways).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .boxopt import min_affine_over_box
from .lcp import NominalLcp, compute_support_P, describe_solution_set, solve_lemke
from .lp import LinearProgram, solve_lp, check_feasibility
from .mip import DEFAULT_NODE_LIMIT, MixedBinaryProgram, solve_mip_feasibility
from .tolerances import TOL_DEDUP, TOL_FEAS, TOL_SUPPORT

__all__ = [
    "SizeLimitError",
    "UncertainLcpQ",
    "AffineSolutionQ",
    "ConditionCheck",
    "VerificationReport",
    "verify_affine_q",
    "check_char_system",
    "solve_enumeration",
    "default_big_m",
    "build_mip",
    "MipVariableLayout",
    "solve_mip_q",
    "MipPathOutcome",
    "solve_psd",
    "PsdPathOutcome",
    "uniqueness_check_psd",
    "sample_violation_q",
]

ENUMERATION_SIZE_CAP = 20


class SizeLimitError(RuntimeError):
    """Instance exceeds a solver's combinatorial size guard."""


@dataclass
class UncertainLcpQ:
    """LCP data (m, qbar) with box half-widths ubar and h here-and-now
    coordinates (the first h)."""

    m: np.ndarray
    qbar: np.ndarray
    ubar: np.ndarray
    h: int = 0

    def __post_init__(self):
        self.m = linalg.as_matrix(self.m, square=True)
        n = self.m.shape[0]
        self.qbar = linalg.as_vector(self.qbar, n)
        self.ubar = linalg.as_vector(self.ubar, n)
        if np.any(self.ubar < 0):
            raise ValueError("box half-widths must be nonnegative")
        self.h = int(self.h)
        if not 0 <= self.h <= n:
            raise ValueError(f"h must lie in [0, {n}]")

    @property
    def n(self) -> int:
        return self.qbar.size

    def uncertain_set(self) -> np.ndarray:
        """U: coordinates with positive half-width."""
        return np.flatnonzero(self.ubar > 0)

    def certain_set(self) -> np.ndarray:
        """S: coordinates with zero half-width."""
        return np.flatnonzero(self.ubar == 0)


@dataclass
class AffineSolutionQ:
    """Affine rule z(u) = d u + r."""

    d: np.ndarray
    r: np.ndarray

    def __post_init__(self):
        self.d = linalg.as_matrix(self.d, square=True)
        self.r = linalg.as_vector(self.r, self.d.shape[0])

    def support(self, tol: float = TOL_SUPPORT) -> np.ndarray:
        """K: coordinates where r is (numerically) nonzero."""
        return np.flatnonzero(np.abs(self.r) > tol)

    def evaluate(self, u) -> np.ndarray:
        return self.d @ np.asarray(u, dtype=float) + self.r


@dataclass
class ConditionCheck:
    condition: str
    passed: bool
    worst_value: float
    worst_point: np.ndarray


@dataclass
class VerificationReport:
    overall: bool
    checks: list = field(default_factory=list)
    certified: bool = True  # False when a sampling fallback was involved


def _structural_check(inst: UncertainLcpQ, sol: AffineSolutionQ, tol: float):
    n = inst.n
    if sol.r.size != n:
        raise ValueError("solution dimension does not match the instance")
    if np.any(sol.r < -tol):
        raise ValueError("r must be nonnegative")
    if inst.h and np.max(np.abs(sol.d[: inst.h, :]), initial=0.0) > tol:
        raise ValueError("here-and-now rows of D must be zero")
    s = inst.certain_set()
    if s.size and np.max(np.abs(sol.d[:, s]), initial=0.0) > tol:
        raise ValueError("columns of D on certain coordinates must be zero")


def verify_affine_q(inst: UncertainLcpQ, sol: AffineSolutionQ,
                    tol: float = TOL_FEAS) -> VerificationReport:
    """Check the three robust-solution conditions over the whole box.

    All three are decided analytically: the worst case of an affine
    expression over a box is attained at a sign vertex.

      z-nonnegative        min over the box of z_i(u), every row i
      active-rows-vanish   (M z(u) + q(u))_i identically zero, rows with
                           r_i != 0 (constant and u-coefficients vanish)
      inactive-rows-nonneg min over the box of (M z(u) + q(u))_i, other rows

    Structural violations (nonzero here-and-now rows, nonzero columns on
    certain coordinates, negative r) raise ValueError; the report is
    reserved for the box conditions themselves. Running the first check
    over every row (not only the support) also pins the rows outside the
    support to a zero affine part, which the support-only reading would
    let slip.
    """
    _structural_check(inst, sol, tol)
    n = inst.n
    u_set = inst.uncertain_set()
    k_set = sol.support()
    n_set = linalg.complement(k_set, n)
    wscale = 1.0 + float(np.max(np.abs(inst.qbar), initial=0.0))
    checks = []

    # z_i(u) >= 0 for all rows
    worst_val, worst_row_u = np.inf, np.zeros(n)
    for i in range(n):
        val, arg = min_affine_over_box(sol.d[i, u_set], sol.r[i], inst.ubar[u_set])
        if val < worst_val:
            worst_val = val
            worst_row_u = np.zeros(n)
            worst_row_u[u_set] = arg
    if n == 0:
        worst_val = 0.0
    checks.append(ConditionCheck(
        "z-nonnegative", bool(worst_val >= -tol), float(worst_val), worst_row_u))

    # (M z(u) + q(u)) = (M d + I) u + (M r + qbar); rows split by support
    coeff = inst.m @ sol.d + np.eye(n)
    const = inst.m @ sol.r + inst.qbar

    worst_val, worst_row_u = 0.0, np.zeros(n)
    for i in k_set:
        resid = max(abs(const[i]), float(np.max(np.abs(coeff[i, u_set]), initial=0.0)))
        if resid > worst_val:
            worst_val = resid
            sign = 1.0 if const[i] >= 0 else -1.0
            worst_row_u = np.zeros(n)
            worst_row_u[u_set] = sign * np.sign(coeff[i, u_set]) * inst.ubar[u_set]
    checks.append(ConditionCheck(
        "active-rows-vanish", bool(worst_val <= tol * wscale), float(worst_val),
        worst_row_u))

    worst_val, worst_row_u = np.inf, np.zeros(n)
    for i in n_set:
        val, arg = min_affine_over_box(coeff[i, u_set], const[i], inst.ubar[u_set])
        if val < worst_val:
            worst_val = val
            worst_row_u = np.zeros(n)
            worst_row_u[u_set] = arg
    if n_set.size == 0:
        worst_val = 0.0
    checks.append(ConditionCheck(
        "inactive-rows-nonnegative", bool(worst_val >= -tol * wscale),
        float(worst_val), worst_row_u))

    return VerificationReport(overall=all(c.passed for c in checks), checks=checks)


def check_char_system(inst: UncertainLcpQ, sol: AffineSolutionQ,
                      tol: float = TOL_FEAS) -> bool:
    """Evaluate the support-set characterization equations on a candidate.

    With K the support of r, J its adjustable part, N the complement,
    U/S the uncertain/certain coordinates:

        M[K&S, J] D[J, U]    = 0
        M[K&U, J] D[J, K&U]  = -Identity
        M[K&U, J] D[J, N&U]  = 0
        M[K, K] r[K]         = -qbar[K]
    """
    n = inst.n
    u_set = inst.uncertain_set()
    s_set = inst.certain_set()
    k_set = sol.support()
    n_set = linalg.complement(k_set, n)
    j_set = k_set[k_set >= inst.h]
    ks = np.intersect1d(k_set, s_set)
    ku = np.intersect1d(k_set, u_set)
    nu = np.intersect1d(n_set, u_set)
    wscale = 1.0 + float(np.max(np.abs(inst.qbar), initial=0.0))

    def block(rows, cols):
        return inst.m[np.ix_(rows, j_set)] @ sol.d[np.ix_(j_set, cols)]

    resid = 0.0
    if ks.size and u_set.size:
        resid = max(resid, float(np.max(np.abs(block(ks, u_set)), initial=0.0)))
    if ku.size:
        resid = max(resid, float(np.max(np.abs(block(ku, ku) + np.eye(ku.size)))))
        if nu.size:
            resid = max(resid, float(np.max(np.abs(block(ku, nu)))))
    if k_set.size:
        lhs = inst.m[np.ix_(k_set, k_set)] @ sol.r[k_set]
        resid = max(resid, float(np.max(np.abs(lhs + inst.qbar[k_set]))))
    return resid <= tol * wscale


def solve_enumeration(inst: UncertainLcpQ, size_cap: int = ENUMERATION_SIZE_CAP,
                      tol: float = TOL_FEAS) -> list:
    """All robust solutions of an instance with every coordinate
    uncertain (S empty), by enumerating adjustable support sets J.

    For each J with invertible block M[J, J] the candidate is
    D[J, J] = -inv(M[J, J]), r[J] = -inv(M[J, J]) qbar[J], zeros
    elsewhere; it is kept when the two analytic box conditions hold:
    the candidate's own rows stay nonnegative over the box, and the rows
    outside J keep M z(u) + q(u) nonnegative over the box. Duplicates
    within 1e-9 entrywise are dropped. Deterministic: subsets by
    increasing cardinality, lexicographic within each size.

    Instances with S nonempty are not covered by this characterization;
    they raise ValueError and belong to the MIP pathway.
    """
    n = inst.n
    if inst.certain_set().size:
        raise ValueError(
            "enumeration requires every coordinate uncertain (ubar > 0); "
            "use the MIP pathway for instances with certain coordinates"
        )
    if n - inst.h > size_cap:
        raise SizeLimitError(
            f"enumeration over {n - inst.h} adjustable coordinates exceeds "
            f"the cap of {size_cap}"
        )
    wscale = 1.0 + float(np.max(np.abs(inst.qbar), initial=0.0))
    adjustable = list(range(inst.h, n))
    found: list[AffineSolutionQ] = []
    for size in range(len(adjustable) + 1):
        for j_tuple in itertools.combinations(adjustable, size):
            j = np.array(j_tuple, dtype=int)
            try:
                inv = linalg.invert(inst.m[np.ix_(j, j)])
            except linalg.SingularMatrixError:
                continue
            r_j = -inv @ inst.qbar[j]
            # own rows: min z_J(u) = r_J - |inv| ubar_J rowwise
            if np.any(r_j - np.abs(inv) @ inst.ubar[j] < -tol):
                continue
            n_rows = linalg.complement(j, n)
            if n_rows.size:
                g = inst.m[np.ix_(n_rows, j)] @ inv
                margin = (inst.qbar[n_rows] - g @ inst.qbar[j]
                          - inst.ubar[n_rows] - np.abs(g) @ inst.ubar[j])
                if np.any(margin < -tol * wscale):
                    continue
            d = np.zeros((n, n))
            r = np.zeros(n)
            if j.size:
                d[np.ix_(j, j)] = -inv
                d += 0.0  # normalize -0.0 entries
                r[j] = r_j
            sol = AffineSolutionQ(d, r)
            if not any(np.max(np.abs(sol.d - s.d)) <= TOL_DEDUP
                       and np.max(np.abs(sol.r - s.r)) <= TOL_DEDUP
                       for s in found):
                found.append(sol)
    return found


def default_big_m(inst: UncertainLcpQ) -> float:
    """100 (1 + |qbar|_inf + |ubar|_inf) (1 + max |M_ij|)."""
    return float(
        100.0
        * (1.0 + np.max(np.abs(inst.qbar), initial=0.0)
           + np.max(np.abs(inst.ubar), initial=0.0))
        * (1.0 + np.max(np.abs(inst.m), initial=0.0))
    )


@dataclass
class MipVariableLayout:
    """Column indices of each variable group in the mixed-binary
    encoding: binaries x, nominal values r, rule coefficients d, and the
    two envelope grids a (on z) and c (on M z + q)."""

    n: int
    x: np.ndarray
    r: np.ndarray
    d: np.ndarray
    a: np.ndarray
    c: np.ndarray

    @property
    def columns(self) -> int:
        return 2 * self.n + 3 * self.n * self.n

    def extract(self, point: np.ndarray) -> AffineSolutionQ:
        """Read the affine rule out of a feasible point."""
        d = point[self.d.reshape(-1)].reshape(self.n, self.n)
        r = point[self.r]
        return AffineSolutionQ(d.copy(), r.copy())


def build_mip(inst: UncertainLcpQ, big_m: float):
    """Mixed-binary feasibility encoding of the robust-solution
    conditions with indicator binaries x_i (x_i = 1 marks r_i free to be
    positive, x_i = 0 pins r_i = 0 and relaxes the paired row).

    Returns (MixedBinaryProgram, MipVariableLayout). Feasible points map
    to robust solutions for any big_m; only the nonexistence direction
    depends on big_m being large enough.
    """
    if big_m <= 0:
        raise ValueError("big_m must be positive")
    n = inst.n
    u_set = inst.uncertain_set()
    s_set = inst.certain_set()
    m = inst.m
    ncols = 2 * n + 3 * n * n
    idx = np.arange(ncols)
    lay = MipVariableLayout(
        n=n,
        x=idx[:n],
        r=idx[n : 2 * n],
        d=idx[2 * n : 2 * n + n * n].reshape(n, n),
        a=idx[2 * n + n * n : 2 * n + 2 * n * n].reshape(n, n),
        c=idx[2 * n + 2 * n * n :].reshape(n, n),
    )

    lower = np.full(ncols, -np.inf)
    upper = np.full(ncols, np.inf)
    lower[lay.x] = 0.0
    upper[lay.x] = 1.0
    lower[lay.r] = 0.0
    # unused grid columns are pinned at zero
    for grid in (lay.d, lay.a, lay.c):
        if s_set.size:
            lower[grid[:, s_set].reshape(-1)] = 0.0
            upper[grid[:, s_set].reshape(-1)] = 0.0
    if inst.h:
        lower[lay.d[: inst.h, :].reshape(-1)] = 0.0
        upper[lay.d[: inst.h, :].reshape(-1)] = 0.0

    rows, senses, rhs = [], [], []

    def add(cols, coefs, sense, b):
        row = np.zeros(ncols)
        row[np.asarray(cols, dtype=int)] = coefs
        rows.append(row)
        senses.append(sense)
        rhs.append(float(b))

    for i in range(n):
        # r_i <= big_m x_i
        add([lay.r[i], lay.x[i]], [1.0, -big_m], "<=", 0.0)
        # 0 <= M_i r + qbar_i <= big_m (1 - x_i)
        add(lay.r, m[i], ">=", -inst.qbar[i])
        add(np.concatenate([lay.r, [lay.x[i]]]), np.concatenate([m[i], [big_m]]),
            "<=", big_m - inst.qbar[i])

    for j in u_set:
        dcol = lay.d[:, j]
        for i in range(n):
            md = m[i]  # coefficients of M_i . D_col_j over the d grid
            if i in s_set:
                add(np.concatenate([dcol, [lay.x[i]]]), np.concatenate([md, [big_m]]),
                    "<=", big_m)
                add(np.concatenate([dcol, [lay.x[i]]]), np.concatenate([md, [-big_m]]),
                    ">=", -big_m)
            elif i == j:
                add(np.concatenate([dcol, [lay.x[i]]]), np.concatenate([md, [big_m]]),
                    "<=", big_m - 1.0)
                add(np.concatenate([dcol, [lay.x[i]]]), np.concatenate([md, [-big_m]]),
                    ">=", -big_m - 1.0)
            else:
                add(np.concatenate([dcol, [lay.x[i]]]), np.concatenate([md, [big_m]]),
                    "<=", big_m)
                add(np.concatenate([dcol, [lay.x[i]]]), np.concatenate([md, [-big_m]]),
                    ">=", -big_m)

    ub = inst.ubar
    for i in range(n):
        for j in u_set:
            # a_ij <= -+ d_ij ubar_j
            add([lay.a[i, j], lay.d[i, j]], [1.0, ub[j]], "<=", 0.0)
            add([lay.a[i, j], lay.d[i, j]], [1.0, -ub[j]], "<=", 0.0)
            # c_ij <= -+ (M_i . D_col_j + delta_ij) ubar_j
            delta = 1.0 if i == j else 0.0
            add(np.concatenate([[lay.c[i, j]], lay.d[:, j]]),
                np.concatenate([[1.0], ub[j] * m[i]]), "<=", -delta * ub[j])
            add(np.concatenate([[lay.c[i, j]], lay.d[:, j]]),
                np.concatenate([[1.0], -ub[j] * m[i]]), "<=", delta * ub[j])
        if u_set.size:
            add(np.concatenate([lay.a[i, u_set], [lay.r[i]]]),
                np.concatenate([np.ones(u_set.size), [1.0]]), ">=", 0.0)
            add(np.concatenate([lay.c[i, u_set], lay.r]),
                np.concatenate([np.ones(u_set.size), m[i]]), ">=", -inst.qbar[i])
        else:
            add([lay.r[i]], [1.0], ">=", 0.0)
            add(lay.r, m[i], ">=", -inst.qbar[i])

    lp = LinearProgram(np.zeros(ncols), np.vstack(rows), senses,
                       np.array(rhs), lower, upper)
    return MixedBinaryProgram(lp, lay.x), lay


@dataclass
class MipPathOutcome:
    status: str  # "solution" | "no-solution"
    solution: AffineSolutionQ | None = None
    verification: VerificationReport | None = None
    certificate: str = "verified"  # "verified" | "exact" | "big-M bounded"
    big_m_final: float = 0.0
    doublings: int = 0
    nodes: int = 0
    fallback_used: bool = False


def solve_mip_q(inst: UncertainLcpQ, big_m: float | None = None,
                max_doublings: int = 20, node_limit: int = DEFAULT_NODE_LIMIT,
                tol: float = TOL_FEAS) -> MipPathOutcome:
    """General pathway: mixed-binary search over supports via big-M.

    A feasible point is extracted and re-verified analytically; on
    verification failure or infeasibility the big-M constant doubles, up
    to max_doublings. Nonexistence claims from the big-M search alone
    carry the certificate "big-M bounded"; when the instance fits the
    enumeration pathway (S empty, n - h small) enumeration is run last
    as the definitive fallback and the answer becomes exact.
    """
    b = default_big_m(inst) if big_m is None else float(big_m)
    enumeration_fits = (inst.certain_set().size == 0
                        and inst.n - inst.h <= ENUMERATION_SIZE_CAP)
    nodes_total = 0
    doublings = 0
    last_b = b
    for attempt in range(max_doublings + 1):
        doublings = attempt
        last_b = b
        prob, lay = build_mip(inst, b)
        out = solve_mip_feasibility(prob, node_limit=node_limit, tol=tol)
        nodes_total += out.nodes
        if out.status == "feasible":
            sol = lay.extract(out.x)
            sol = _clean_solution(inst, sol, tol)
            report = verify_affine_q(inst, sol, tol)
            if report.overall:
                return MipPathOutcome("solution", sol, report, "verified",
                                      b, doublings, nodes_total)
        elif enumeration_fits:
            # infeasible at finite B is inconclusive, and climbing the
            # ladder cannot beat the exact check available below
            break
        b *= 2.0

    if enumeration_fits:
        sols = solve_enumeration(inst, tol=tol)
        if sols:
            report = verify_affine_q(inst, sols[0], tol)
            return MipPathOutcome("solution", sols[0], report, "verified",
                                  last_b, doublings, nodes_total, fallback_used=True)
        return MipPathOutcome("no-solution", None, None, "exact",
                              last_b, doublings, nodes_total, fallback_used=True)
    return MipPathOutcome("no-solution", None, None, "big-M bounded",
                          last_b, doublings, nodes_total)


def _clean_solution(inst: UncertainLcpQ, sol: AffineSolutionQ,
                    tol: float) -> AffineSolutionQ:
    """Snap numerical dust to the structural zeros before verification."""
    d = sol.d.copy()
    r = sol.r.copy()
    r[np.abs(r) <= tol] = 0.0
    r[r < 0] = 0.0
    d[np.abs(d) <= tol] = 0.0
    d[: inst.h, :] = 0.0
    s = inst.certain_set()
    if s.size:
        d[:, s] = 0.0
    return AffineSolutionQ(d, r)


@dataclass
class PsdPathOutcome:
    status: str  # "solution" | "no-solution"
    solution: AffineSolutionQ | None = None
    verification: VerificationReport | None = None
    support_p: np.ndarray | None = None
    support_l: np.ndarray | None = None
    nominal: np.ndarray | None = None


def solve_psd(inst: UncertainLcpQ, tol: float = TOL_FEAS) -> PsdPathOutcome:
    """Exact pathway for positive semidefinite M via one linear program.

    The nominal problem is solved by complementary pivoting (a ray
    certifies nonexistence outright for PSD data). P collects the
    coordinates positive somewhere in the nominal solution set, L the
    rest; a robust rule exists iff the feasibility LP below has a point:
    r ranges over the nominal solution set, rows of D outside P vanish,
    the P-rows of M z(u) + q(u) vanish identically, and envelope
    variables enforce z_P(u) >= 0 and (M z(u) + q(u))_L >= 0 on the box.
    Infeasibility is a proof of nonexistence (no big-M caveat).
    """
    if not linalg.is_psd(inst.m):
        raise ValueError("psd pathway requires a positive semidefinite matrix")
    n = inst.n
    nominal = solve_lemke(NominalLcp(inst.m, inst.qbar))
    if nominal.status == "ray":
        return PsdPathOutcome("no-solution")
    zbar = nominal.solution.z
    p_set = compute_support_P(NominalLcp(inst.m, inst.qbar), zbar)
    l_set = linalg.complement(p_set, n)
    u_set = inst.uncertain_set()
    s_set = inst.certain_set()
    m = inst.m

    # columns: r (n) | d (n^2) | a (P x U) | c (L x U)
    na = p_set.size * u_set.size
    nc = l_set.size * u_set.size
    ncols = n + n * n + na + nc
    r_idx = np.arange(n)
    d_idx = (n + np.arange(n * n)).reshape(n, n)
    a_idx = (n + n * n + np.arange(na)).reshape(p_set.size, u_set.size)
    c_idx = (n + n * n + na + np.arange(nc)).reshape(l_set.size, u_set.size)

    lower = np.full(ncols, -np.inf)
    upper = np.full(ncols, np.inf)
    lower[r_idx] = 0.0
    dead = np.zeros((n, n), dtype=bool)
    dead[l_set, :] = True
    dead[: inst.h, :] = True
    dead[:, s_set] = True
    pin = d_idx[dead]
    lower[pin] = 0.0
    upper[pin] = 0.0

    rows, senses, rhs = [], [], []

    def add(cols, coefs, sense, b):
        row = np.zeros(ncols)
        row[np.asarray(cols, dtype=int)] = coefs
        rows.append(row)
        senses.append(sense)
        rhs.append(float(b))

    # r in the nominal solution set
    for i in range(n):
        add(r_idx, m[i], ">=", -inst.qbar[i])
    add(r_idx, inst.qbar, "=", float(inst.qbar @ zbar))
    sym = m + m.T
    for i in range(n):
        add(r_idx, sym[i], "=", float(sym[i] @ zbar))

    # P-rows of the affine part: M_i . D_col_j = -delta_ij on P x U
    for i in p_set:
        for j in u_set:
            delta = 1.0 if (i == j) else 0.0
            add(d_idx[:, j], m[i], "=", -delta)

    # envelopes: z_P(u) >= 0
    for pi, i in enumerate(p_set):
        for uj, j in enumerate(u_set):
            add([a_idx[pi, uj], d_idx[i, j]], [1.0, inst.ubar[j]], "<=", 0.0)
            add([a_idx[pi, uj], d_idx[i, j]], [1.0, -inst.ubar[j]], "<=", 0.0)
        if u_set.size:
            add(np.concatenate([a_idx[pi], [r_idx[i]]]),
                np.concatenate([np.ones(u_set.size), [1.0]]), ">=", 0.0)

    # envelopes: (M z(u) + q(u))_L >= 0
    for li, i in enumerate(l_set):
        for uj, j in enumerate(u_set):
            delta = 1.0 if (i == j) else 0.0
            add(np.concatenate([[c_idx[li, uj]], d_idx[:, j]]),
                np.concatenate([[1.0], inst.ubar[j] * m[i]]), "<=",
                -delta * inst.ubar[j])
            add(np.concatenate([[c_idx[li, uj]], d_idx[:, j]]),
                np.concatenate([[1.0], -inst.ubar[j] * m[i]]), "<=",
                delta * inst.ubar[j])
        if u_set.size:
            add(np.concatenate([c_idx[li], r_idx]),
                np.concatenate([np.ones(u_set.size), m[i]]), ">=", -inst.qbar[i])

    lp = LinearProgram(np.zeros(ncols), np.vstack(rows), senses,
                       np.array(rhs), lower, upper)
    out = check_feasibility(lp)
    if out.status != "optimal":
        return PsdPathOutcome("no-solution", support_p=p_set, support_l=l_set,
                              nominal=zbar)
    d = out.x[d_idx.reshape(-1)].reshape(n, n)
    r = out.x[r_idx]
    sol = _clean_solution(inst, AffineSolutionQ(d, r), tol)
    report = verify_affine_q(inst, sol, tol)
    if not report.overall:
        raise RuntimeError("psd pathway produced a point that fails verification")
    return PsdPathOutcome("solution", sol, report, p_set, l_set, zbar)


def uniqueness_check_psd(inst: UncertainLcpQ, tol: float = TOL_FEAS) -> str:
    """Uniqueness verdict for PSD instances with every coordinate
    uncertain: "multiple-nominal-no-aar" when the nominal solution set
    has more than one point (then no robust rule exists), otherwise
    "unique-if-exists". Instances outside that class: "not-applicable".
    """
    if not linalg.is_psd(inst.m) or inst.certain_set().size:
        return "not-applicable"
    nominal = solve_lemke(NominalLcp(inst.m, inst.qbar))
    if nominal.status == "ray":
        return "unique-if-exists"  # vacuous: no nominal solution at all
    zbar = nominal.solution.z
    skeleton = describe_solution_set(NominalLcp(inst.m, inst.qbar), zbar)
    for j in range(inst.n):
        for sense in (-1.0, 1.0):
            obj = np.zeros(inst.n)
            obj[j] = sense
            lp = LinearProgram(obj, skeleton.lhs, skeleton.senses, skeleton.rhs,
                               skeleton.lower, skeleton.upper)
            out = solve_lp(lp)
            if out.status == "unbounded":
                return "multiple-nominal-no-aar"
            if out.status == "optimal" and abs(out.x[j] - zbar[j]) > TOL_SUPPORT:
                return "multiple-nominal-no-aar"
    return "unique-if-exists"


def sample_violation_q(inst: UncertainLcpQ, sol: AffineSolutionQ,
                       count: int = 1000, seed: int = 0) -> float:
    """Largest violation of the LCP conditions over `count` uniform box
    samples: max of -z_i(u), -(M z(u) + q(u))_i and |z(u) . w(u)|."""
    rng = np.random.default_rng(seed)
    pts = rng.uniform(-1.0, 1.0, (count, inst.n)) * inst.ubar
    zs = pts @ sol.d.T + sol.r
    ws = zs @ inst.m.T + inst.qbar + pts
    comp = np.abs(np.einsum("ij,ij->i", zs, ws))
    return float(max(np.max(-zs, initial=0.0), np.max(-ws, initial=0.0),
                     np.max(comp, initial=0.0)))
