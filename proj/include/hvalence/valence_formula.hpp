#pragma once

// Closed-form side of the zero count: k_max(n), n^2 - 2n + 2 + 4 k_max(n),
// and the asymptotic slope 1/4 - X/(2 pi) with X = cos X.

#include <cassert>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "hvalence/errors.hpp"

namespace hvalence {

struct KmaxResult {
    int n = 0;
    int k_max = 0;
    /// margins[k-1] for k = 1 .. floor(n/2)
    std::vector<double> margins;
    /// Some margin was exactly zero after certification; it was counted as not positive.
    bool margin_tie = false;
};

struct ValenceReport {
    int n = 0;
    int k_max = 0;
    long long predicted = 0;
    long long baseline = 0;
    std::optional<long long> verified;
    bool agree = false;
    bool margin_tie = false;
};

namespace detail {

inline void check_formula_n(int n) {
    if (n < 4)
        throw precondition_error("n must be >= 4 (the construction needs n >= 4), got " +
                                 std::to_string(n));
}

inline double cot(double x) { return std::cos(x) / std::sin(x); }

}  // namespace detail

/// (n-2) cot((2k-1) pi / (2n-4)) - n cot(pi k / n), for 1 <= k <= floor(n/2).
inline double kmax_margin(int n, int k) {
    detail::check_formula_n(n);
    if (k < 1 || k > n / 2)
        throw precondition_error("k must lie in [1, floor(n/2)], got k=" + std::to_string(k));
    constexpr double pi = std::numbers::pi;
    return (n - 2) * detail::cot((2.0 * k - 1.0) * pi / (2.0 * n - 4.0)) - n * detail::cot(pi * k / n);
}

/// Numerator of the margin after the cotangent-difference identity:
/// (n-1) sin((n-4k) pi / (2n^2-4n)) - sin((k-1/2) pi/(n-2) + pi k/n).
/// Same sign as kmax_margin (the dropped denominator is a product of positive sines).
inline long double margin_sine_form(int n, int k) {
    detail::check_formula_n(n);
    if (k < 1 || k > n / 2)
        throw precondition_error("k must lie in [1, floor(n/2)], got k=" + std::to_string(k));
    constexpr long double pi = std::numbers::pi_v<long double>;
    const long double nn = n, kk = k;
    return (nn - 1) * std::sin((nn - 4 * kk) * pi / (2 * nn * nn - 4 * nn)) -
           std::sin((kk - 0.5L) * pi / (nn - 2) + pi * kk / nn);
}

/// Sign of the margin, rechecked in extended precision when the double value is tiny.
inline int certified_margin_sign(int n, int k) {
    const double m = kmax_margin(n, k);
    if (std::abs(m) >= 1e-9) return m > 0 ? 1 : -1;
    const long double s = margin_sine_form(n, k);
    return s > 0 ? 1 : (s < 0 ? -1 : 0);
}

inline KmaxResult k_max(int n) {
    detail::check_formula_n(n);
    KmaxResult r;
    r.n = n;
    r.margins.reserve(static_cast<std::size_t>(n / 2));
    bool counting = true;
    for (int k = 1; k <= n / 2; ++k) {
        r.margins.push_back(kmax_margin(n, k));
        const int sign = certified_margin_sign(n, k);
        if (sign == 0) r.margin_tie = true;
        if (counting && sign > 0)
            r.k_max = k;
        else
            counting = false;
    }
    return r;
}

inline long long baseline_count(int n) {
    detail::check_formula_n(n);
    const long long nn = n;
    return nn * nn - 2 * nn + 2;
}

inline ValenceReport predict_count(int n) {
    const KmaxResult km = k_max(n);
    ValenceReport rep;
    rep.n = n;
    rep.k_max = km.k_max;
    rep.baseline = baseline_count(n);
    rep.predicted = rep.baseline + 4LL * km.k_max;
    rep.margin_tie = km.margin_tie;
    return rep;
}

/// Root of g(X) = X - cos X by bisection on [0, 1]; independent of the Newton route.
inline double solve_cos_fixed_point_bisection() {
    double lo = 0.0, hi = 1.0;  // g(0) = -1, g(1) = 1 - cos 1 > 0
    for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (mid - std::cos(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

/// Unique real X with X = cos X (the Dottie number).
inline double solve_cos_fixed_point() {
    double x = 0.75;
    for (int it = 0; it < 100; ++it) {
        const double g = x - std::cos(x);
        const double dg = 1.0 + std::sin(x);
        const double next = x - g / dg;
        if (!(next > 0.0 && next < 1.0)) return solve_cos_fixed_point_bisection();
        if (next == x) return x;
        if (std::abs(next - x) < 1e-16) return next;
        x = next;
    }
    assert(false && "Newton on X - cos X failed to settle in 100 iterations");
    return solve_cos_fixed_point_bisection();
}

/// 1/4 - X/(2 pi): limiting value of k_max(n)/n.
inline double asymptotic_slope() {
    return 0.25 - solve_cos_fixed_point() / (2.0 * std::numbers::pi);
}

/// pi/2 - 2 pi gamma - sin(2 pi gamma), the large-n limit of the sine form at gamma = k/n.
inline double gamma_leading_term(double gamma) {
    if (!(gamma > 0.0 && gamma < 0.25))
        throw precondition_error("gamma must lie in (0, 1/4)");
    constexpr double pi = std::numbers::pi;
    return pi / 2.0 - 2.0 * pi * gamma - std::sin(2.0 * pi * gamma);
}

}  // namespace hvalence
