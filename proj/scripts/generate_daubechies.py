#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
# Copyright 2026 ewspec Project Contributors
"""Generate Daubechies filter coefficient tables for core/src/daubechies_tables.cpp.

Spectral factorization of the Daubechies polynomial at 60 decimal digits
(mpmath), followed by root selection:

  extremal phase  -- all roots inside the unit circle (minimum phase)
  least asymmetric -- per conjugate-reciprocal root group, the inside/outside
                      choice minimizing squared deviation of the transfer
                      function phase from linear phase

Coefficients are normalized so that sum(h) = sqrt(2).  The script verifies
orthonormality (sum_n h[n] h[n+2m] = delta_m), vanishing moments of the
quadrature-mirror high-pass, and the closed form for the 2-tap and 4-tap
extremal-phase filters before emitting anything.

Usage: python3 scripts/generate_daubechies.py > core/src/daubechies_tables.cpp
"""

import sys
import mpmath as mp

mp.mp.dps = 60


def poly_mul(a, b):
    out = [mp.mpc(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return out


def daubechies_y_roots(p):
    if p == 1:
        return []
    # P(y) = sum_{k=0}^{p-1} binom(p-1+k, k) y^k, descending order for polyroots
    coeffs = [mp.binomial(p - 1 + k, k) for k in range(p)]
    return mp.polyroots(list(reversed(coeffs)), maxsteps=500, extraprec=300)


def z_pair(y):
    # (2 - z - 1/z)/4 = y  =>  z^2 - (2 - 4y) z + 1 = 0; roots are reciprocal
    b = 2 - 4 * y
    disc = mp.sqrt(b * b - 4)
    z1 = (b + disc) / 2
    z2 = (b - disc) / 2
    if abs(z1) > abs(z2):
        z1, z2 = z2, z1
    return z1, z2  # inside, outside


def build_filter(p, inside_sets):
    """Expand sqrt(2) ((1+z)/2)^p prod (z - r)/(1 - r) for the chosen roots."""
    h = [mp.mpc(mp.sqrt(2))]
    for _ in range(p):
        h = poly_mul(h, [mp.mpc(0.5), mp.mpc(0.5)])
    for r in inside_sets:
        h = poly_mul(h, [mp.mpc(-r) / (1 - r), mp.mpc(1) / (1 - r)])
    worst_imag = max(abs(mp.im(c)) for c in h)
    assert worst_imag < mp.mpf(10) ** (-35), f"p={p}: imag residue {worst_imag}"
    return [mp.re(c) for c in h]


def root_groups(p):
    """Conjugate-closed groups, each offering an inside or outside choice."""
    groups = []
    used = []
    yroots = daubechies_y_roots(p)
    for y in yroots:
        if any(abs(y - u) < mp.mpf(10) ** -40 for u in used):
            continue
        zi, zo = z_pair(y)
        if abs(mp.im(y)) < mp.mpf(10) ** -40:
            used.append(y)
            groups.append(([zi], [zo]))
        else:
            used.append(y)
            used.append(mp.conj(y))
            zic, zoc = z_pair(mp.conj(y))
            groups.append(([zi, zic], [zo, zoc]))
    return groups


def phase_badness(h):
    L = len(h)
    n_grid = 512
    prev = mp.mpf(0)
    total = mp.mpf(0)
    for i in range(1, n_grid):
        w = mp.pi * i / n_grid * (1 - mp.mpf(1) / (2 * n_grid))
        H = sum(h[n] * mp.e ** (-1j * w * n) for n in range(L))
        ang = mp.arg(H)
        while ang - prev > mp.pi:
            ang -= 2 * mp.pi
        while ang - prev < -mp.pi:
            ang += 2 * mp.pi
        prev = ang
        d = ang + w * (L - 1) / 2
        total += d * d
    return total


def extremal_phase(p):
    groups = root_groups(p)
    h = build_filter(p, [r for ins, _ in groups for r in ins])
    # orient energy toward the front, the classical table convention
    com = sum(n * c * c for n, c in enumerate(h))
    if com > mp.mpf(len(h) - 1) / 2:
        h = h[::-1]
    return h


def least_asymmetric(p):
    groups = root_groups(p)
    best = None
    for mask in range(1 << len(groups)):
        roots = []
        for gi, (ins, outs) in enumerate(groups):
            roots.extend(ins if (mask >> gi) & 1 == 0 else outs)
        h = build_filter(p, roots)
        bad = phase_badness(h)
        if best is None or bad < best[0] - mp.mpf(10) ** -30:
            best = (bad, h)
        elif abs(bad - best[0]) < mp.mpf(10) ** -20:
            # reflection tie: keep the right-leaning orientation
            com_new = sum(n * c * c for n, c in enumerate(h))
            com_old = sum(n * c * c for n, c in enumerate(best[1]))
            if com_new > com_old:
                best = (bad, h)
    return best[1]


def verify(h, p):
    L = len(h)
    assert L == 2 * p
    s = sum(h)
    assert abs(s - mp.sqrt(2)) < mp.mpf(10) ** -40, f"sum(h) off: {s}"
    for m in range(1, p):
        dot = sum(h[n] * h[n + 2 * m] for n in range(L - 2 * m))
        assert abs(dot) < mp.mpf(10) ** -38, f"orthonormality m={m}: {dot}"
    norm = sum(c * c for c in h)
    assert abs(norm - 1) < mp.mpf(10) ** -38, f"norm off: {norm}"
    g = [(-1) ** n * h[L - 1 - n] for n in range(L)]
    for mom in range(p):
        v = sum(g[n] * mp.mpf(n) ** mom for n in range(L))
        assert abs(v) < mp.mpf(10) ** -30, f"moment {mom}: {v}"


def fmt(h):
    return ", ".join(mp.nstr(c, 17, strip_zeros=False) for c in h)


def main():
    ep = {p: extremal_phase(p) for p in range(1, 11)}
    la = {p: least_asymmetric(p) for p in range(4, 11)}

    # spot checks against closed forms
    assert abs(ep[1][0] - 1 / mp.sqrt(2)) < mp.mpf(10) ** -40
    s3 = mp.sqrt(3)
    ep2_ref = [(1 + s3) / (4 * mp.sqrt(2)), (3 + s3) / (4 * mp.sqrt(2)),
               (3 - s3) / (4 * mp.sqrt(2)), (1 - s3) / (4 * mp.sqrt(2))]
    for a, b in zip(ep[2], ep2_ref):
        assert abs(a - b) < mp.mpf(10) ** -40, "ep2 mismatch"

    for p, h in ep.items():
        verify(h, p)
    for p, h in la.items():
        verify(h, p)

    w = sys.stdout.write
    w("// SPDX-License-Identifier: Apache-2.0\n")
    w("// Copyright 2026 ewspec Project Contributors\n")
    w("//\n")
    w("// Daubechies low-pass filter coefficients, normalized to sum = sqrt(2).\n")
    w("// Generated by scripts/generate_daubechies.py (spectral factorization at\n")
    w("// 60 decimal digits); do not edit by hand.  Orthonormality and moment\n")
    w("// conditions are re-verified at runtime by WaveletFilter's constructor.\n\n")
    w('#include "ewspec/wavelet.hpp"\n\n')
    w("#include <stdexcept>\n\n")
    w("namespace ewspec::detail {\nnamespace {\n\n")
    for p, h in ep.items():
        w(f"constexpr double kEp{p}[] = {{\n    {fmt(h)}}};\n")
    w("\n")
    for p, h in la.items():
        w(f"constexpr double kLa{p}[] = {{\n    {fmt(h)}}};\n")
    w("\n}  // namespace\n\n")
    w("std::span<const double> daubechies_lowpass(WaveletFamily family, int vanishing_moments) {\n")
    w("    if (family == WaveletFamily::ExtremalPhase) {\n")
    w("        switch (vanishing_moments) {\n")
    for p in ep:
        w(f"            case {p}: return {{kEp{p}, {2 * p}}};\n")
    w("        }\n")
    w("    } else {\n")
    w("        switch (vanishing_moments) {\n")
    for p in la:
        w(f"            case {p}: return {{kLa{p}, {2 * p}}};\n")
    w("        }\n")
    w("    }\n")
    w('    throw std::invalid_argument("no stored coefficients for requested filter");\n')
    w("}\n\n")
    w("}  // namespace ewspec::detail\n")


if __name__ == "__main__":
    main()
