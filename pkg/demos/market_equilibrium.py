"""
Robust dispatch in a small production market
=============================================

Two producers serve one price-responsive market under a shared capacity
row. The demand offset is only known up to a box; production, the
capacity dual and the price may all react to it.
"""

import numpy as np

from aarlcp import MarketModel, build_lcp, dispatch_solve, is_psd

mm = MarketModel(
    costs=[1.0, 2.0],
    technology=[[1.0, 1.0]],   # joint capacity on both producers
    capacity=[-10.0],
    demand_matrix=[[1.0, 1.0]],
    sensitivity=[[-1.0]],      # demand falls one unit per unit of price
    demand=[5.0],
    demand_halfwidth=[0.5],    # the offset floats in [4.5, 5.5]
)

inst, bmap = build_lcp(mm)
print("LCP size:", inst.n, " here-and-now coordinates:", inst.h)
print("producer positions:", [int(i) for i in bmap.producer_positions])
print("M is positive semidefinite:", is_psd(inst.m))

report = dispatch_solve(mm)
print("\npathway:", report.pathway, " status:", report.status)

rule = report.solutions[0].solution
print("r =", rule.r.round(6))
print("D =", rule.d.round(6).tolist())

# read the rule back in market terms at the demand extremes: the cheap
# producer absorbs the whole swing while the price stays put
for shift in (-0.5, 0.0, 0.5):
    u = np.zeros(inst.n)
    u[np.flatnonzero(inst.ubar)] = shift
    z = bmap.to_canonical(rule.evaluate(u))
    x, lam, p = z[:2], z[2], z[3]
    print(f"demand offset {5.0 - shift}: production {x.round(4)}, "
          f"dual {lam:.4f}, price {p:.4f}")

# committing the cheap producer before demand reveals itself leaves no
# robust rule at all: a fixed x1 > 0 pins the price, and a pinned price
# cannot clear a moving demand
committed = MarketModel(
    costs=mm.costs, technology=mm.technology, capacity=mm.capacity,
    demand_matrix=mm.demand_matrix, sensitivity=mm.sensitivity,
    demand=mm.demand, demand_halfwidth=mm.demand_halfwidth,
    nonadjustable_producers=(0,))
print("\nwith producer 1 committed:", dispatch_solve(committed).status)
