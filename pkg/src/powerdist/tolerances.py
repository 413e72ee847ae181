"""Numerical thresholds shared across modules."""

# Relative spread (max - min) / mean below which a sum counts as constant.
CONSTANT_RTOL = 1e-9
# Relative spread above which a sum counts as non-constant. Values in between
# are reported as indeterminate.
NONCONSTANT_RTOL = 1e-6
# Fourier bins 1..L must be below this times the DC bin for exact constancy.
DFT_RTOL = 1e-10
# Angular distance (radians) for matching a point to a candidate orbit.
ORBIT_ATOL = 1e-6
