// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 ewspec Project Contributors
#pragma once

// Variance-stabilizing Haar-Fisz transform for nonnegative sequences.
//
// The forward transform runs a mean-convention Haar pyramid on the input
// (detail d = (a - b) / 2, smooth c = (a + b) / 2), divides each detail by
// its sibling smooth (f = d / c, with 0 / 0 := 0), and rebuilds the output
// additively from the top: child pair (c + f, c - f).  For nonnegative
// input every quotient satisfies |f| <= 1 and the inverse below is exact.
//
// The inverse runs the additive pyramid to recover the quotients and
// rebuilds multiplicatively.  It is only defined where the quotients are
// valid: |f| <= 1 at every node and a nonnegative root.  Inputs breaking
// either bound (beyond a small rounding tolerance) throw std::domain_error
// naming the offending level; try_haar_fisz_inverse reports the same
// condition as a return code for callers that expect rejection, and
// haar_fisz_inverse_clamped instead projects onto the valid set — the
// right move when a smoother has nudged a sequence just outside the
// transform's range (quotients pinned at +-1 correspond to a zero child).

#include <span>
#include <vector>

namespace ewspec {

// Forward transform. Requires a power-of-two length and nonnegative,
// finite entries; throws std::invalid_argument otherwise.
std::vector<double> haar_fisz_forward(std::span<const double> x);

// Exact inverse of haar_fisz_forward. Throws std::domain_error when the
// input is not in the transform's range (quotient out of [-1, 1] or a
// negative root).
std::vector<double> haar_fisz_inverse(std::span<const double> f);

// Non-throwing inverse: returns false (leaving `out` unspecified) where
// haar_fisz_inverse would throw std::domain_error.
bool try_haar_fisz_inverse(std::span<const double> f, std::vector<double>& out);

// Total inverse: out-of-range quotients are clamped into [-1, 1] and a
// negative root smooth is floored at zero, so every input maps to a
// nonnegative sequence. Coincides with haar_fisz_inverse on valid input.
std::vector<double> haar_fisz_inverse_clamped(std::span<const double> f);

}  // namespace ewspec
