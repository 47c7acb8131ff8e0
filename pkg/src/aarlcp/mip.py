"""Feasibility search for linear programs with binary variables by
depth-first branch and bound.

Each node solves the phase-1 LP relaxation with some binaries fixed.
Infeasible relaxations prune; a relaxation point whose binaries are all
integral terminates. Otherwise the most fractional binary is branched
(ties to the lowest variable index), exploring the nearer integer value
first. Runs are deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .lp import LinearProgram, check_feasibility, check_point
from .tolerances import TOL_FEAS, TOL_INT

__all__ = [
    "NodeLimitError",
    "MixedBinaryProgram",
    "MipOutcome",
    "solve_mip_feasibility",
]

DEFAULT_NODE_LIMIT = 100_000


class NodeLimitError(RuntimeError):
    """Branch and bound exhausted its node budget undecided."""

    def __init__(self, nodes: int):
        super().__init__(f"node limit reached after {nodes} nodes")
        self.nodes = nodes


@dataclass
class MixedBinaryProgram:
    """A LinearProgram plus the indices of its binary variables.

    Binary columns must have bounds within [0, 1].
    """

    lp: LinearProgram
    binaries: np.ndarray

    def __post_init__(self):
        n = self.lp.lhs.shape[1]
        self.binaries = linalg.index_set(self.binaries, n)
        lo = self.lp.lower[self.binaries]
        up = self.lp.upper[self.binaries]
        if np.any(lo < -1e-12) or np.any(up > 1.0 + 1e-12):
            raise ValueError("binary variables must have bounds inside [0, 1]")


@dataclass
class MipOutcome:
    status: str  # "feasible" | "infeasible"
    x: np.ndarray | None = None
    nodes: int = 0


def solve_mip_feasibility(
    prob: MixedBinaryProgram,
    node_limit: int = DEFAULT_NODE_LIMIT,
    tol_int: float = TOL_INT,
    tol: float = TOL_FEAS,
) -> MipOutcome:
    """Find any point satisfying all constraints with integral binaries.

    Returns MipOutcome("feasible", x, nodes) or MipOutcome("infeasible",
    None, nodes). Raises NodeLimitError if the budget runs out first.
    Every feasible answer is re-checked against the original rows and
    bounds directly, independent of the simplex bookkeeping.
    """
    lp = prob.lp
    bins = prob.binaries
    scale = 1.0 + float(np.max(np.abs(lp.rhs), initial=0.0))

    def node_solve(blo, bup):
        lo = lp.lower.copy()
        up = lp.upper.copy()
        lo[bins] = blo
        up[bins] = bup
        node_lp = LinearProgram(lp.objective, lp.lhs, lp.senses, lp.rhs, lo, up)
        return node_lp, check_feasibility(node_lp, tol)

    nodes = 0
    # stack entries: (lower-override, upper-override) for the binaries only
    stack = [(lp.lower[bins].copy(), lp.upper[bins].copy())]
    while stack:
        blo, bup = stack.pop()
        if nodes >= node_limit:
            raise NodeLimitError(nodes)
        nodes += 1
        node_lp, out = node_solve(blo, bup)
        if out.status != "optimal":
            continue  # prune
        xb = out.x[bins]
        frac = np.abs(xb - np.round(xb))
        worst = float(frac.max()) if frac.size else 0.0
        unfixed = np.flatnonzero(bup - blo > 0.5)
        if worst <= tol_int:
            if unfixed.size == 0:
                x = out.x.copy()
                x[bins] = np.round(xb)  # bounds pin these already
                if check_point(node_lp, x, tol) <= tol * scale:
                    return MipOutcome("feasible", x, nodes)
                continue
            # nearly integral: try pinning every binary at its rounding
            nodes += 1
            flo = np.round(xb)
            flp, fout = node_solve(flo, flo.copy())
            if fout.status == "optimal":
                x = fout.x.copy()
                x[bins] = flo
                if check_point(flp, x, tol) <= tol * scale:
                    return MipOutcome("feasible", x, nodes)
            j = int(unfixed[0])  # pinning failed: split on an unfixed binary
        else:
            j = int(np.argmax(frac))  # most fractional; ties -> lowest index
        near = float(np.round(np.clip(xb[j], 0.0, 1.0)))
        far = 1.0 - near
        for value in (far, near):  # pushed far-first so near pops first
            clo, cup = blo.copy(), bup.copy()
            clo[j] = cup[j] = value
            stack.append((clo, cup))
    return MipOutcome("infeasible", None, nodes)
