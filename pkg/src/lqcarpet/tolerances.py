"""Central numeric tolerances.

Every module pulls its thresholds from here so the three classes of
tolerance stay distinguishable: eigenvalue convergence, root location,
and post-hoc consistency checks.
"""

# Relative tolerance for Perron roots / eigenvector convergence.
EIGEN_RTOL = 1e-12

# Absolute tolerance on the free coordinate in rho(...) = 1 solves.
ROOT_ATOL = 1e-12

# Tolerance for internal invariant assertions (duality, rho-at-one, ...).
CHECK_TOL = 1e-9

# Decision band for regime / branch-certificate comparisons.
BRANCH_BAND = 1e-12

# Agreement required between a closed-form branch value and the
# grid-refined minimum that cross-checks it.
CROSS_CHECK_TOL = 1e-8
