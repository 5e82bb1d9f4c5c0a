"""Exact computations on the depth of p-th powers in the Nottingham group.

Subpackages and modules:

- ``coeffring``: F_p, Z, Q, sparse polynomials, rational functions in K
- ``nottingham``: truncated series, composition, inverse, powers, depth
- ``bounds``: e(k, n) and the closed-form depth bounds
- ``generic``: series with polynomial coefficients and witness search
- ``matrixcalc``: the A_h / Pi_h matrices and the composition matrix
- ``identities``: the phi_jab recurrences and generating function checks
- ``suites``, ``report``, ``cli``: verification suites and the command line
"""

__version__ = "0.1.0"
