"""Frozen golden values; regenerate with tests/oracles/generate_goldens.py."""

# benchmark calibration, rho = 0.89
AC_INTERCEPT = -1.416553801775773
T_STAR = 2.8597577479299106
P_STAR = 1.1286305938818473

# degenerate-information limits (f_e0 = f_n + 3, f_b_bar = 3)
MELITZ_ZERO_P_STAR = -0.560226552317962
MELITZ_PERFECT_P_STAR = 2.7827431188225695

# quadrature oracle: expected profit at sigma=2, f=0.15, rho=0.89, p*=0.5, t=1
PI_TILDE_QUAD = 0.1019211060933276
