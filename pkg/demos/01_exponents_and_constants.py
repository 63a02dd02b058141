#!/usr/bin/env python3
"""Tour of the parameter layer: the supercritical window, every derived
exponent, and the two gamma-function constants.

Run:  python demos/01_exponents_and_constants.py
"""

import numpy as np

from aggdiff import (
    ModelParams,
    RegimeError,
    derive_exponents,
    hls_sharp_constant,
    riesz_constant,
    validate,
)

params = ModelParams(d=3, s=1.1, m=1.2)
validate(params)
exps = derive_exponents(params)

print("Laboratory parameters: d = 3, s = 1.1, m = 1.2")
print(f"  supercritical window for m: ({2*3/(3+2*1.1):.6f}, {2 - 2*1.1/3:.6f})")
print()
print("Derived exponents")
print(f"  p    (invariant-norm exponent)   = {exps.p:.12g}   (= 12/11)")
print(f"  a    (threshold exponent)        = {exps.a:.12g}")
print(f"  a0   (mass exponent of bound)    = {exps.a0:.12g}")
print(f"  b0   (L^m exponent of bound)     = {exps.b0:.12g}")
print(f"  beta (barrier homogeneity)       = {exps.beta:.12g}  (= 4/3)")
print(f"  lam  (kernel power d - 2s)       = {exps.lam:.12g}")
print()
print("Exact identities (must hold to machine precision)")
print(f"  b0 - m*beta      = {exps.b0 - exps.m*exps.beta:+.3e}")
print(f"  a + a0 - a*beta  = {exps.a + exps.a0 - exps.a*exps.beta:+.3e}")
print()
print("Constants")
print(f"  riesz normalization c_ds        = {exps.c_ds:.12g}")
print(f"  sharp interaction bound C(3,.8) = {hls_sharp_constant(3, exps.lam):.12g}")
print(f"  c_ds limit as s -> 1            = {riesz_constant(3, 1.0 + 1e-12):.12g}")
print()

print("The window is open only for 1 < s < d/2; boundary cases are rejected:")
for bad in (ModelParams(3, 1.0, 1.2), ModelParams(3, 1.1, 1.3), ModelParams(3, 1.5, 1.2)):
    try:
        validate(bad)
    except RegimeError as exc:
        print(f"  {bad.d=} {bad.s=} {bad.m=}: {exc}")

print()
print("How the window and exponents move with s (at d = 3):")
print("  s      m-window              a (at midpoint)   beta")
for s in (1.05, 1.1, 1.2, 1.3, 1.4):
    lo, hi = 2 * 3 / (3 + 2 * s), 2 - 2 * s / 3
    mid = 0.5 * (lo + hi)
    e = derive_exponents(ModelParams(3, s, mid))
    print(f"  {s:.2f}   ({lo:.4f}, {hi:.4f})    {e.a:8.4f}        {e.beta:.4f}")
