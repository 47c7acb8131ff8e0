"""
Support enumeration on a 2x2 instance with box uncertainty
==========================================================

"""

import numpy as np

from aarlcp import UncertainLcpQ, solve_enumeration, verify_affine_q

# every coordinate of q may move by +/-1 around its nominal value
inst = UncertainLcpQ(m=np.array([[4.0, 10.0], [1.0, 2.0]]),
                     qbar=np.array([-100.0, -22.0]),
                     ubar=np.array([1.0, 1.0]), h=0)

rules = solve_enumeration(inst)
print(f"{len(rules)} affine rules survive the support enumeration\n")

for k, rule in enumerate(rules, start=1):
    print(f"rule {k}: support {[int(i) for i in rule.support() + 1]}")
    print("  r =", rule.r)
    print("  D =", rule.d.tolist())
    report = verify_affine_q(inst, rule)
    for check in report.checks:
        print(f"  {check.condition}: worst {check.worst_value:.2e}")
    print()

# the rule must solve the LCP at every box corner, not just on average
rule = rules[0]
for corner in ([1, 1], [1, -1], [-1, 1], [-1, -1]):
    u = np.array(corner, dtype=float) * inst.ubar
    z = rule.evaluate(u)
    w = inst.m @ z + inst.qbar + u
    print(f"u = {corner}: z = {z}, Mz+q = {w}, z.w = {z @ w:.2e}")
