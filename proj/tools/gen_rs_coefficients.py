#!/usr/bin/env python3
"""Emit the Taylor table of the Riemann-Siegel kernel used by core/src/rs_core.cpp.

Psi(p) = cos(2*pi*(p^2 - p - 1/16)) / cos(2*pi*p). With u = p - 1/2 this is
Psi = -cos(2*pi*u^2 - 5*pi/8) / cos(2*pi*u), an even entire function of u.
The series is obtained by exact power-series division in v = u^2 at high
precision, so no numerical differentiation is involved.

Usage: gen_rs_coefficients.py > core/src/rs_coefficients.inc
"""
import mpmath as mp

TERMS = 64  # coefficients of v^0 .. v^63, i.e. u^0 .. u^126

mp.mp.dps = 250
two_pi = 2 * mp.pi
a = 5 * mp.pi / 8

n = TERMS + 4
# numerator: -(cos(a) cos(2 pi v) + sin(a) sin(2 pi v))
num = [mp.mpf(0)] * n
for k in range(n):
    if 2 * k < n:
        num[2 * k] += mp.cos(a) * (-1) ** k * two_pi ** (2 * k) / mp.factorial(2 * k)
    if 2 * k + 1 < n:
        num[2 * k + 1] += mp.sin(a) * (-1) ** k * two_pi ** (2 * k + 1) / mp.factorial(2 * k + 1)
num = [-c for c in num]
# denominator: cos(2 pi u) = sum (-1)^k (2 pi)^(2k) v^k / (2k)!
den = [(-1) ** k * two_pi ** (2 * k) / mp.factorial(2 * k) for k in range(n)]

q = []
for k in range(TERMS):
    acc = num[k] - sum(q[j] * den[k - j] for j in range(k))
    q.append(acc / den[0])

# sanity check against direct evaluation
for u in (mp.mpf("0.1"), mp.mpf("0.37"), mp.mpf("0.5")):
    direct = -mp.cos(two_pi * u * u - a) / mp.cos(two_pi * u) if abs(mp.cos(two_pi * u)) > 1e-30 else None
    series = sum(q[k] * u ** (2 * k) for k in range(TERMS))
    if direct is not None:
        assert abs(direct - series) < mp.mpf(10) ** -40, (u, direct, series)

print("// Generated by tools/gen_rs_coefficients.py; do not edit.")
print("// Taylor coefficients of Psi in powers of u^2, u = p - 1/2.")
print("inline constexpr int kPsiTerms = %d;" % TERMS)
print("inline constexpr double kPsiSeries[kPsiTerms] = {")
for c in q:
    print("    %s," % mp.nstr(c, 25, min_fixed=1, max_fixed=0))
print("};")
