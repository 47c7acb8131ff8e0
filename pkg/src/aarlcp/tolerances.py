"""Default numerical tolerances shared across the package.

Every solver routine takes explicit tolerance arguments; these are the
defaults they fall back to. Keeping them in one place makes the contract
between layers auditable.
"""

# feasibility slack on linear constraints and sign conditions
TOL_FEAS = 1e-8

# objective-value agreement (duality gaps, oracle comparisons)
TOL_OBJ = 1e-8

# threshold above which a coordinate counts as support (r_i > 0 etc.)
TOL_SUPPORT = 1e-7

# complementarity residual |z^T w| scale factor
TOL_COMP = 1e-7

# integrality tolerance for binaries in branch and bound
TOL_INT = 1e-6

# pivot magnitude threshold factor: a pivot below this times the largest
# absolute entry of the matrix is treated as zero
TOL_PIVOT_FACTOR = 1e-10

# eigenvalue tolerance for positive semidefiniteness tests
TOL_PSD = 1e-9

# entrywise distance below which two solutions count as duplicates
TOL_DEDUP = 1e-9
