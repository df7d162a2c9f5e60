#pragma once

// Per-ray zero counting for the standard construction.
//
// Re S vanishes exactly on the 2n rays arg z = pi k / n, so every zero of
// p + conj(q) sits on one of them. On ray k (1 <= k <= n-1) the zeros are
// in bijection with the roots of
//
//     A(theta) = tan((n-1) theta) + (n-1) / tan(theta) - n cot(pi k / n)
//
// for theta in (0, pi k / n), where theta = arg(r e^{i pi k/n} + 1). The poles
// of A and all of its critical points are known in closed form, so between
// consecutive poles/critical points A is strictly monotone and every root is
// isolated by a sign change between two known angles. Roots are then refined
// by bisection and mapped back to radii with theta_to_r.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "hvalence/construction.hpp"
#include "hvalence/detail/parallel.hpp"
#include "hvalence/errors.hpp"
#include "hvalence/zero.hpp"

namespace hvalence {

struct RayProfile {
    int n = 0;
    int k = 0;
    /// pi k / n
    double alpha = 0.0;
    std::vector<double> poles;
    /// (j - 1/2) pi / n, j = 1..k
    std::vector<double> critical_family1;
    /// (j - 1/2) pi / (n-2), j = 1..k_crit
    std::vector<double> critical_family2;
    /// A at alpha; +infinity when k = n/2
    double boundary_value = 0.0;
    std::vector<double> roots_theta;
    std::vector<double> roots_r;
    /// Root count per segment; segment 0 is (0, first pole), the last one ends at alpha.
    std::vector<int> roots_per_segment;
    int N_k = 0;
};

struct RayCountOptions {
    /// Also count sign changes on a uniform grid in each segment and fail if
    /// the grid sees more roots than the bracket structure.
    bool dense_check = false;
    int dense_samples = 10000;
};

namespace detail {

inline void check_ray(int n, int k) {
    check_n(n);
    if (k < 1 || k > n - 1)
        throw precondition_error("ray index k must lie in [1, n-1], got k=" + std::to_string(k));
}

inline double ray_cot(double x) { return std::cos(x) / std::sin(x); }

/// A(theta) with the constant term n cot(alpha) precomputed.
struct RayFunction {
    int n;
    double shift;

    double operator()(double theta) const {
        return std::tan((n - 1) * theta) + (n - 1) / std::tan(theta) - shift;
    }
    double derivative(double theta) const {
        const double c = std::cos((n - 1) * theta);
        const double s = std::sin(theta);
        return (n - 1) * (1.0 / (c * c) - 1.0 / (s * s));
    }
};

inline RayFunction make_ray_function(int n, int k) {
    return {n, n * ray_cot(std::numbers::pi * k / n)};
}

inline int sign_of(double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); }

}  // namespace detail

/// Largest j with (j - 1/2)/(n-1) < k/n.
inline int k_poles(int n, int k) {
    detail::check_ray(n, k);
    int j = 0;
    while ((2 * (j + 1) - 1) * n < 2 * k * (n - 1)) ++j;
    return j;
}

/// Largest j with (j - 1/2)/(n-2) < k/n.
inline int k_crit(int n, int k) {
    detail::check_ray(n, k);
    int j = 0;
    while ((2 * (j + 1) - 1) * n < 2 * k * (n - 2)) ++j;
    return j;
}

inline double ray_function(double theta, int n, int k) {
    detail::check_ray(n, k);
    const double alpha = std::numbers::pi * k / n;
    if (!(theta > 0.0 && theta < alpha))
        throw precondition_error("theta must lie in (0, pi k / n)");
    return detail::make_ray_function(n, k)(theta);
}

inline double ray_function_derivative(double theta, int n, int k) {
    detail::check_ray(n, k);
    const double alpha = std::numbers::pi * k / n;
    if (!(theta > 0.0 && theta < alpha))
        throw precondition_error("theta must lie in (0, pi k / n)");
    return detail::make_ray_function(n, k).derivative(theta);
}

inline std::vector<double> pole_angles(int n, int k) {
    const int count = k_poles(n, k);
    std::vector<double> poles;
    poles.reserve(static_cast<std::size_t>(count));
    for (int j = 1; j <= count; ++j) poles.push_back((j - 0.5) * std::numbers::pi / (n - 1));
    return poles;
}

inline std::pair<std::vector<double>, std::vector<double>> critical_points(int n, int k) {
    const int kc = k_crit(n, k);
    std::vector<double> fam1, fam2;
    for (int j = 1; j <= k; ++j) fam1.push_back((j - 0.5) * std::numbers::pi / n);
    for (int j = 1; j <= kc; ++j) fam2.push_back((j - 0.5) * std::numbers::pi / (n - 2));
    return {std::move(fam1), std::move(fam2)};
}

/// -2 / sin(2 pi k / n); +infinity for k = n/2.
inline double boundary_value(int n, int k) {
    detail::check_ray(n, k);
    if (2 * k == n) return std::numeric_limits<double>::infinity();
    return -2.0 / std::sin(2.0 * std::numbers::pi * k / n);
}

/// Inverse of theta(r) = arg(r e^{i alpha} + 1): r = sin(theta) / sin(alpha - theta).
inline double theta_to_r(double theta, int n, int k) {
    detail::check_ray(n, k);
    const double alpha = std::numbers::pi * k / n;
    if (!(theta > 0.0 && theta < alpha))
        throw precondition_error("theta must lie in (0, pi k / n)");
    return std::sin(theta) / std::sin(alpha - theta);
}

inline RayProfile count_ray(int n, int k, const RayCountOptions& opts = {}) {
    detail::check_ray(n, k);
    RayProfile prof;
    prof.n = n;
    prof.k = k;
    prof.alpha = std::numbers::pi * k / n;
    prof.poles = pole_angles(n, k);
    std::tie(prof.critical_family1, prof.critical_family2) = critical_points(n, k);
    prof.boundary_value = boundary_value(n, k);

    const double alpha = prof.alpha;
    const auto A = detail::make_ray_function(n, k);
    constexpr double inf = std::numeric_limits<double>::infinity();

    std::vector<double> crit = prof.critical_family1;
    crit.insert(crit.end(), prof.critical_family2.begin(), prof.critical_family2.end());
    std::sort(crit.begin(), crit.end());

    std::vector<double> edges{0.0};
    edges.insert(edges.end(), prof.poles.begin(), prof.poles.end());
    edges.push_back(alpha);
    const int segments = static_cast<int>(edges.size()) - 1;

    // Known sign of A just inside a segment end: +inf at 0+, -inf right of a
    // pole, +inf left of a pole, and the boundary value at alpha.
    struct Node {
        double theta;
        double value;  // +-inf at poles and at 0
    };

    for (int s = 0; s < segments; ++s) {
        const double lo = edges[static_cast<std::size_t>(s)];
        const double hi = edges[static_cast<std::size_t>(s) + 1];
        const double len = hi - lo;
        const bool last = s == segments - 1;

        std::vector<Node> nodes;
        nodes.push_back({lo, s == 0 ? inf : -inf});
        for (double c : crit) {
            if (c > lo && c < hi) {
                const double v = A(c);
                if (v == 0.0)
                    throw structural_violation(n, k, s, "A vanishes at a critical angle (double root)");
                nodes.push_back({c, v});
            }
        }
        nodes.push_back({hi, last ? prof.boundary_value : inf});
        if (last && prof.boundary_value == 0.0)
            throw structural_violation(n, k, s, "A vanishes at the ray angle");

        // Step inward from an infinite end until A shows its asymptotic sign.
        auto inward = [&](double edge, double direction, int expected) {
            double delta = 1e-10 * len;
            for (int attempt = 0; attempt <= 20; ++attempt, delta *= 2.0) {
                const double t = edge + direction * delta;
                if (detail::sign_of(A(t)) == expected) return t;
            }
            throw structural_violation(n, k, s, "A does not show its limiting sign near a segment end");
        };

        int found = 0;
        for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
            const Node& left = nodes[i];
            const Node& right = nodes[i + 1];
            const int sl = detail::sign_of(left.value);
            const int sr = detail::sign_of(right.value);
            if (sl == sr) continue;

            double a = std::isinf(left.value) ? inward(left.theta, +1.0, sl) : left.theta;
            double b = std::isinf(right.value) ? inward(right.theta, -1.0, sr) : right.theta;
            if (b >= alpha) b = alpha;  // A(alpha) is finite here; sign known from boundary_value
            const double bracket_lo = a, bracket_hi = b;
            while (b - a > 1e-13) {
                const double mid = 0.5 * (a + b);
                if (mid <= a || mid >= b) break;
                const double fm = A(mid);
                if (fm == 0.0) {
                    a = b = mid;
                    break;
                }
                (detail::sign_of(fm) == sl ? a : b) = mid;
            }
            double root = 0.5 * (a + b);
            const double slope = A.derivative(root);
            if (std::abs(slope) > 1.0) {
                const double polished = root - A(root) / slope;
                if (polished > bracket_lo && polished < bracket_hi && polished < alpha) root = polished;
            }
            prof.roots_theta.push_back(root);
            ++found;
        }

        int expected = 0;
        if (s == 0) {
            expected = 0;
        } else if (!last) {
            expected = 1;
        } else if (2 * k >= n) {
            expected = 1;
        } else if (4 * k >= n) {
            expected = 0;
        } else {
            expected = A((k - 0.5) * std::numbers::pi / (n - 2)) > 0.0 ? 2 : 0;
        }
        if (found != expected)
            throw structural_violation(n, k, s,
                                       "found " + std::to_string(found) + " roots, structure predicts " +
                                           std::to_string(expected));

        if (opts.dense_check) {
            const int m = std::max(2, opts.dense_samples);
            int prev = detail::sign_of(nodes.front().value);
            int changes = 0;
            for (int i = 0; i < m; ++i) {
                const double t = lo + len * (i + 0.5) / m;
                const int sg = detail::sign_of(A(t));
                if (sg != 0 && sg != prev) {
                    ++changes;
                    prev = sg;
                }
            }
            const int end_sign = detail::sign_of(nodes.back().value);
            if (end_sign != prev) ++changes;
            if (changes > found)
                throw structural_violation(n, k, s,
                                           "dense sampling sees " + std::to_string(changes) +
                                               " sign changes, bracketing found " + std::to_string(found));
        }
        prof.roots_per_segment.push_back(found);
    }

    prof.roots_r.reserve(prof.roots_theta.size());
    for (double t : prof.roots_theta) prof.roots_r.push_back(std::sin(t) / std::sin(alpha - t));
    prof.N_k = static_cast<int>(prof.roots_theta.size());
    return prof;
}

/// Zero counts on the positive (k = 0) and negative (k = n) real half-axes.
/// Im T(r) = (r+1)^(n-1) (r-(n-1)) has the single root r = n-1; Im T(-r) has
/// r = 1 as a root of multiplicity n-1.
inline std::pair<int, int> special_ray_counts(int n) {
    detail::check_n(n);
    return {1, n - 1};
}

/// count_ray for k = 1..n-1, fanned out over workers.
inline std::vector<RayProfile> ray_profiles(int n, const RayCountOptions& opts = {}) {
    detail::check_n(n);
    std::vector<RayProfile> out(static_cast<std::size_t>(n - 1));
    detail::parallel_for(out.size(), [&](std::size_t i) {
        out[i] = count_ray(n, static_cast<int>(i) + 1, opts);
    });
    return out;
}

/// N_0 + N_n + 2 sum_{k=1}^{n-1} N_k, using N_k = N_{-k}.
inline long long total_from_rays(int n, const RayCountOptions& opts = {}) {
    const auto [n0, nn] = special_ray_counts(n);
    long long total = n0 + nn;
    for (const auto& prof : ray_profiles(n, opts)) total += 2LL * prof.N_k;
    return total;
}

namespace detail {

inline void sort_zeros(std::vector<Zero>& zeros) {
    std::sort(zeros.begin(), zeros.end(), [](const Zero& a, const Zero& b) {
        if (a.location.real() != b.location.real()) return a.location.real() < b.location.real();
        return a.location.imag() < b.location.imag();
    });
}

}  // namespace detail

/// Every zero of the standard construction, located on the rays. z = -1 is
/// reported once with multiplicity n-1; sorted by (re, im).
inline std::vector<Zero> ray_zero_locations(int n, const RayCountOptions& opts = {}) {
    const HarmonicMap f = build_standard(n);
    auto make = [&](complex z, int multiplicity) {
        return Zero{z, jacobian_sign(f, z), std::abs(eval(f, z)), multiplicity};
    };

    std::vector<Zero> zeros;
    zeros.push_back(make(complex{static_cast<double>(n - 1), 0.0}, 1));
    zeros.push_back(make(complex{-1.0, 0.0}, n - 1));
    for (const auto& prof : ray_profiles(n, opts)) {
        const complex dir = std::polar(1.0, prof.alpha);
        for (double r : prof.roots_r) {
            const complex z = r * dir;
            zeros.push_back(make(z, 1));
            zeros.push_back(make(std::conj(z), 1));
        }
    }
    detail::sort_zeros(zeros);
    return zeros;
}

/// C_n = n (2n-1) / (4 (n-1)).
inline double lemma2_Cn(int n) { return n * (2.0 * n - 1.0) / (4.0 * (n - 1.0)); }

/// (n-1) sin((3n-4k) pi / (2n^2-4n)) - sin((k-3/2) pi/(n-2) + pi k/n); has the sign of lemma2_margin for k < 3n/4.
inline double lemma2_F1(int n, int k) {
    constexpr double pi = std::numbers::pi;
    const double nn = n;
    return (nn - 1) * std::sin((3 * nn - 4.0 * k) * pi / (2 * nn * nn - 4 * nn)) -
           std::sin((k - 1.5) * pi / (nn - 2) + pi * k / nn);
}

/// As lemma2_F1 with k' = k-2; has the sign of lemma2_margin for k >= 3n/4.
inline double lemma2_F2(int n, int k) {
    constexpr double pi = std::numbers::pi;
    const double nn = n;
    return (nn - 1) * std::sin((5 * nn - 4.0 * k) * pi / (2 * nn * nn - 4 * nn)) -
           std::sin((k - 2.5) * pi / (nn - 2) + pi * k / nn);
}

/// A((k' - 1/2) pi / (n-2)) with k' = min(k_crit, k-1): the smallest
/// family-2 critical value that has to stay positive on ray k.
inline double lemma2_margin(int n, int k) {
    detail::check_ray(n, k);
    if (k < 2) throw precondition_error("lemma2_margin needs k >= 2");
    const int kp = std::min(k_crit(n, k), k - 1);
    constexpr double pi = std::numbers::pi;
    return (n - 2) * detail::ray_cot((kp - 0.5) * pi / (n - 2)) - n * detail::ray_cot(pi * k / n);
}

/// (n-2) cot t1 - n cot t2 minus [(n-1) sin(t2-t1) - sin(t1+t2)] / (sin t1 sin t2).
inline double cot_identity_residual(double theta1, double theta2, int n) {
    constexpr double pi = std::numbers::pi;
    if (!(theta1 > 0.0 && theta1 < pi && theta2 > 0.0 && theta2 < pi))
        throw precondition_error("angles must lie strictly inside (0, pi)");
    const double left = (n - 2) * detail::ray_cot(theta1) - n * detail::ray_cot(theta2);
    const double right = ((n - 1) * std::sin(theta2 - theta1) - std::sin(theta1 + theta2)) /
                         (std::sin(theta1) * std::sin(theta2));
    return left - right;
}

}  // namespace hvalence
