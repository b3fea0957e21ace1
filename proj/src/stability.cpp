#include "optomech/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace optomech {

CharPoly characteristic_polynomial(const Mat6& a) {
    CharPoly c{};
    c[0] = 1.0;
    Mat6 m = a;
    for (int k = 1; k <= 6; ++k) {
        c[k] = -m.trace() / static_cast<double>(k);
        if (k < 6) m = a * (m + c[k] * Mat6::Identity());
    }
    return c;
}

std::array<std::complex<double>, 6> polynomial_roots(const CharPoly& c) {
    using C = std::complex<long double>;
    std::array<long double, 7> p;
    for (int i = 0; i < 7; ++i) p[i] = static_cast<long double>(c[i]);

    auto eval = [&](const C& z, C& val, C& der) {
        val = p[0];
        der = 0.0L;
        for (int i = 1; i < 7; ++i) {
            der = der * z + val;
            val = val * z + p[i];
        }
    };

    // Cauchy-style bound for the initial circle.
    long double radius = 0.0L;
    for (int i = 1; i < 7; ++i) radius = std::max(radius, std::abs(p[i]));
    radius = 1.0L + radius;

    std::array<C, 6> z;
    for (int k = 0; k < 6; ++k) {
        const long double th = 2.0L * 3.14159265358979323846L * k / 6.0L + 0.4L;
        z[k] = 0.5L * radius * C(std::cos(th), std::sin(th));
    }

    for (int iter = 0; iter < 500; ++iter) {
        long double worst = 0.0L;
        for (int k = 0; k < 6; ++k) {
            C val, der;
            eval(z[k], val, der);
            C w = der == C(0.0L) ? C(0.0L) : val / der;
            C s(0.0L);
            for (int j = 0; j < 6; ++j) {
                if (j != k) s += 1.0L / (z[k] - z[j]);
            }
            const C denom = 1.0L - w * s;
            const C corr = denom == C(0.0L) ? w : w / denom;
            z[k] -= corr;
            worst = std::max(worst, std::abs(corr) / (1.0L + std::abs(z[k])));
        }
        if (worst < 1e-18L) break;
    }

    std::array<std::complex<double>, 6> out;
    for (int k = 0; k < 6; ++k) {
        out[k] = {static_cast<double>(z[k].real()), static_cast<double>(z[k].imag())};
    }
    return out;
}

bool routh_hurwitz_stable(const CharPoly& c, bool* marginal) {
    bool marg = false;
    double scale = 0.0;
    for (double v : c) scale = std::max(scale, std::abs(v));
    const double eps = Tolerances::routh_marginal_rel * scale;

    // Rows of the Routh array, 4 columns suffice for degree 6.
    std::array<std::array<double, 4>, 7> rows{};
    rows[0] = {c[0], c[2], c[4], c[6]};
    rows[1] = {c[1], c[3], c[5], 0.0};
    for (int i = 2; i < 7; ++i) {
        bool all_zero = true;
        for (double v : rows[i - 1]) {
            if (v != 0.0) all_zero = false;
        }
        if (all_zero) {
            // Derivative of the auxiliary polynomial from the row above.
            const int order = 6 - (i - 2);
            for (int j = 0; j < 4; ++j) {
                const int power = order - 2 * j;
                rows[i - 1][j] = power > 0 ? rows[i - 2][j] * power : 0.0;
            }
            marg = true;
        }
        double pivot = rows[i - 1][0];
        if (std::abs(pivot) < eps) {
            pivot = eps;
            rows[i - 1][0] = eps;
            marg = true;
        }
        for (int j = 0; j < 3; ++j) {
            rows[i][j] =
                (pivot * rows[i - 2][j + 1] - rows[i - 2][0] * rows[i - 1][j + 1]) / pivot;
        }
        rows[i][3] = 0.0;
    }

    int sign_changes = 0;
    double prev = rows[0][0];
    for (int i = 1; i < 7; ++i) {
        double v = rows[i][0];
        if (std::abs(v) < eps) {
            v = eps;
            marg = true;
        }
        if ((prev > 0.0) != (v > 0.0)) ++sign_changes;
        prev = v;
    }
    if (marginal) *marginal = marg;
    return sign_changes == 0;
}

StabilityResult classify_stability(const Mat6& a) {
    if (!a.allFinite()) throw NumericalError("classify_stability: non-finite matrix");
    // Scale to O(1) entries; root real-part signs are scale-covariant.
    double s = a.cwiseAbs().maxCoeff();
    if (s == 0.0) s = 1.0;
    const Mat6 a_scaled = a / s;

    StabilityResult res;
    const CharPoly poly = characteristic_polynomial(a_scaled);
    res.stable = routh_hurwitz_stable(poly, &res.marginal);

    const auto roots = polynomial_roots(poly);
    double max_re = -std::numeric_limits<double>::infinity();
    for (const auto& r : roots) max_re = std::max(max_re, r.real());
    res.margin = -max_re * s;
    return res;
}

}  // namespace optomech
