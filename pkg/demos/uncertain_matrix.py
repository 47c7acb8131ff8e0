"""Matrix uncertainty: M itself moves inside an interval family."""

import numpy as np

from aarlcp import (UncertainLcpM, characterize_for_J,
                    sample_violation_m, solve_enumeration_m)

# M(zeta) = M0 + zeta * P with zeta in [-1, 1]
inst = UncertainLcpM(m0=np.array([[4.0, 1.0], [0.0, 4.0]]),
                     perturbations=[np.array([[0.0, 1.0], [0.0, 0.0]])],
                     q=np.array([-8.0, -16.0]), h=0)

rules = solve_enumeration_m(inst)
print(f"{len(rules)} affine rule(s) found")
rule = rules[0]
print("r =", rule.r)
print("D =", rule.d.tolist())

# closed form on the full support, shown step by step
char = characterize_for_J(inst, np.array([0, 1]))
print("characterized r:", char.r)
print("characterized D:", char.d.tolist())

# z(zeta) solves LCP(q, M(zeta)) for every zeta: spot-check a sweep
for zeta in np.linspace(-1.0, 1.0, 5):
    m = inst.matrix_at([zeta])
    z = rule.r + rule.d @ [zeta]
    w = m @ z + inst.q
    print(f"zeta={zeta:+.2f}  z={np.round(z, 6)}  Mz+q={np.round(w, 9)}"
          f"  z.w={z @ w:.1e}")

print("worst sampled violation:",
      f"{sample_violation_m(inst, rule, count=5000):.2e}")
