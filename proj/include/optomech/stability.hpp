#pragma once

#include <array>
#include <complex>

#include "optomech/common.hpp"

namespace optomech {

// Monic characteristic polynomial coefficients, c[0]=1 for lambda^6 down to
// c[6] = det(-A). Computed by the Faddeev-LeVerrier recursion.
using CharPoly = std::array<double, 7>;

CharPoly characteristic_polynomial(const Mat6& a);

// Roots by Aberth-Ehrlich simultaneous iteration in long double.
std::array<std::complex<double>, 6> polynomial_roots(const CharPoly& c);

// Routh array first-column sign test for the degree-6 polynomial.
// *marginal is set when a near-zero pivot had to be perturbed.
bool routh_hurwitz_stable(const CharPoly& c, bool* marginal = nullptr);

struct StabilityResult {
    bool stable = false;
    bool marginal = false;
    double margin = 0.0;  // -max Re(root), rad/s; positive when stable
};

// Verdict from the Routh array; margin from the polynomial roots.
StabilityResult classify_stability(const Mat6& a);

}  // namespace optomech
