#pragma once

// Construction-agnostic zero finder for f = p + conj(q) with deg p > deg q.
//
// Zeros are located by damped Newton iteration on (Re f, Im f) started from
// every node of a square grid, merged, and classified by the sign of the
// Jacobian determinant |p'|^2 - |q'|^2. Completeness is checked against the
// argument principle: the signed index sum over all zeros equals the winding
// number of f around a large contour, which is deg p.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "hvalence/construction.hpp"
#include "hvalence/detail/parallel.hpp"
#include "hvalence/errors.hpp"
#include "hvalence/ray_analysis.hpp"
#include "hvalence/valence_formula.hpp"
#include "hvalence/zero.hpp"

namespace hvalence {

/// Axis-aligned square [center +- half_width]^2 sampled at grid_density nodes per unit length.
struct SearchRegion {
    complex center{0.0, 0.0};
    double half_width = 1.0;
    double grid_density = 8.0;
};

/// Analytic description of a known degenerate zero (singular Jacobian).
struct DegenerateAnnotation {
    complex location;
    int multiplicity = 1;
    /// Poincare index of f at location; enters the argument-principle sum.
    int index_contribution = 0;
    /// Newton candidates this close to location are attributed to it.
    double capture_radius = 0.0;
};

struct FindOptions {
    std::vector<DegenerateAnnotation> degenerate;
    int max_iterations = 60;
    /// Extra start grids on [center +- h / 2^j]^2 at density * 2^j, j = 1..levels.
    /// Zeros crowd toward the origin (spacing ~ |z| pi / n), so the base grid alone misses some.
    int refinement_levels = 3;
    /// Further levels are added one at a time while the index sum is short.
    int max_refinement_levels = 10;
};

inline SearchRegion default_region(int n) { return {complex{0.0, 0.0}, 1.5 * (n - 1), 8.0}; }

/// The z = -1 zero of the standard construction: multiplicity n-1 (the order
/// of the root r = 1 of Im T on the negative axis); its Poincare index is +1
/// for even n and 0 for odd n. Capture radius is a quarter of the distance
/// from -1 to the nearest neighbouring ray.
inline DegenerateAnnotation standard_degenerate_annotation(int n) {
    return {complex{-1.0, 0.0}, n - 1, n % 2 == 0 ? 1 : 0, 0.25 * std::sin(std::numbers::pi / n)};
}

namespace detail {

/// Accumulates the change of arg f along a polyline, subdividing any step
/// whose argument increment reaches pi/4.
class ArgumentTracker {
public:
    template <class Path>
    void add_edge(const Path& path, double t0, double t1, int initial_steps) {
        double t_prev = t0;
        complex f_prev = path(t0);
        note(f_prev);
        for (int i = 1; i <= initial_steps; ++i) {
            const double t = t0 + (t1 - t0) * i / initial_steps;
            const complex fv = path(t);
            note(fv);
            refine(path, t_prev, f_prev, t, fv, 0);
            t_prev = t;
            f_prev = fv;
        }
    }

    double total() const { return total_; }
    double min_abs() const { return min_abs_; }
    double max_abs() const { return max_abs_; }

private:
    template <class Path>
    void refine(const Path& path, double ta, complex fa, double tb, complex fb, int depth) {
        const double step = fa == complex{} || fb == complex{} ? 0.0 : std::arg(fb / fa);
        if (std::abs(step) < std::numbers::pi / 4 || depth >= 48) {
            total_ += step;
            return;
        }
        const double tm = 0.5 * (ta + tb);
        const complex fm = path(tm);
        note(fm);
        refine(path, ta, fa, tm, fm, depth + 1);
        refine(path, tm, fm, tb, fb, depth + 1);
    }

    void note(complex v) {
        const double a = std::abs(v);
        min_abs_ = std::min(min_abs_, a);
        max_abs_ = std::max(max_abs_, a);
    }

    double total_ = 0.0;
    double min_abs_ = std::numeric_limits<double>::infinity();
    double max_abs_ = 0.0;
};

inline int finish_winding(const ArgumentTracker& tracker, const char* where, double rel_floor) {
    if (!(tracker.min_abs() > rel_floor * tracker.max_abs()) || tracker.min_abs() == 0.0)
        throw boundary_zero_error(std::string("f (nearly) vanishes on the ") + where +
                                  "; perturb the contour");
    const double turns = tracker.total() / (2.0 * std::numbers::pi);
    const double rounded = std::round(turns);
    if (std::abs(turns - rounded) > 1e-6)
        throw boundary_zero_error(std::string("argument change along the ") + where +
                                  " is not a whole number of turns");
    return static_cast<int>(rounded);
}

}  // namespace detail

/// Winding number of f along the positively oriented boundary of the region.
inline int winding_number(const HarmonicMap& f, const SearchRegion& region) {
    const double h = region.half_width;
    const complex corners[4] = {region.center + complex{h, -h}, region.center + complex{h, h},
                                region.center + complex{-h, h}, region.center + complex{-h, -h}};
    detail::ArgumentTracker tracker;
    const int steps = std::max(64, 16 * f.degree());
    for (int e = 0; e < 4; ++e) {
        const complex a = corners[e], b = corners[(e + 1) % 4];
        tracker.add_edge([&](double t) { return eval(f, t >= 1.0 ? b : a + t * (b - a)); }, 0.0, 1.0, steps);
    }
    return detail::finish_winding(tracker, "region boundary", 1e-9);
}

/// Poincare index of f at z from the winding on a small circle; the slow
/// certification path for degenerate zeros. Only an exact zero on the circle
/// is rejected, since near a high-order zero |f| legitimately spans many
/// orders of magnitude around the circle.
inline int local_index(const HarmonicMap& f, complex z, double radius = 1e-4) {
    detail::ArgumentTracker tracker;
    // Parameter in quarter turns, so the four axis points are exact: on the
    // real axis through z a real-symmetric f may be nonzero only by a tiny
    // imaginary part that sin(pi) != 0 would swamp. t = 4 reuses t = 0.
    auto on_circle = [&](double t) {
        const double q = std::floor(t);
        const double phase = (t - q) * (std::numbers::pi / 2);
        complex u{std::cos(phase), std::sin(phase)};
        if (t - q == 0.0) u = complex{1.0, 0.0};
        switch (static_cast<int>(q) % 4) {
            case 1: u = complex{-u.imag(), u.real()}; break;
            case 2: u = -u; break;
            case 3: u = complex{u.imag(), -u.real()}; break;
            default: break;
        }
        return eval(f, z + radius * u);
    };
    const int steps = 4 * std::max(16, 4 * f.degree());
    tracker.add_edge(on_circle, 0.0, 4.0, steps);
    return detail::finish_winding(tracker, "index circle", 0.0);
}

namespace detail {

inline double residual_scale(complex z, int degree) { return std::pow(1.0 + std::abs(z), degree); }


struct NewtonOutcome {
    bool converged = false;
    complex z;
    double residual = 0.0;
    /// Length of the last accepted step.
    double last_step = 0.0;
};

/// Damped Newton on (Re f, Im f). Once the residual test passes, keeps
/// stepping while the step is still shrinking the residual so that linearly
/// converging (degenerate) starts get pulled close to their limit.
inline NewtonOutcome newton(const HarmonicMap& f, complex z, int max_iterations, double escape_radius) {
    const int deg = f.degree();
    complex fz = eval(f, z);
    double res = std::abs(fz);
    double last_step = std::numeric_limits<double>::infinity();
    for (int it = 0; it < max_iterations; ++it) {
        if (res == 0.0) break;
        const Jacobian J = jacobian(f, z);
        if (!(std::isfinite(J.det)) || J.det == 0.0) break;
        const double dx = -(J.m[1][1] * fz.real() - J.m[0][1] * fz.imag()) / J.det;
        const double dy = -(-J.m[1][0] * fz.real() + J.m[0][0] * fz.imag()) / J.det;
        const complex step{dx, dy};
        if (!std::isfinite(dx) || !std::isfinite(dy)) break;

        // Line search on the row-equilibrated residual: Re f and Im f can have
        // Jacobian rows of wildly different size (near a split degenerate zero
        // Im f is ~1e-11 times flatter), and plain |f| cannot see progress in
        // the flat component once the steep one hits its rounding floor.
        const double w0 = std::hypot(J.m[0][0], J.m[0][1]), w1 = std::hypot(J.m[1][0], J.m[1][1]);
        auto merit = [&](complex v) {
            return std::hypot(w0 > 0.0 ? v.real() / w0 : v.real(), w1 > 0.0 ? v.imag() / w1 : v.imag());
        };
        const double current = merit(fz);
        double lambda = 1.0;
        bool improved = false;
        for (int halving = 0; halving <= 8; ++halving, lambda *= 0.5) {
            const complex trial = z + lambda * step;
            const complex ft = eval(f, trial);
            const double rt = std::abs(ft);
            if (merit(ft) < current) {
                last_step = std::abs(lambda * step);
                z = trial;
                fz = ft;
                res = rt;
                improved = true;
                break;
            }
        }
        if (!improved) break;
        if (std::abs(z) > escape_radius) return {};
        if (last_step <= 1e-15 * (1.0 + std::abs(z))) break;
    }
    if (res == 0.0) last_step = 0.0;
    return {res < 1e-11 * residual_scale(z, deg), z, res, last_step};
}

}  // namespace detail

/// All zeros of f inside the region, with multiplicity taken from annotations
/// for degenerate ones. Sorted by (re, im).
inline std::vector<Zero> find_zeros(const HarmonicMap& f, const SearchRegion& region,
                                    const FindOptions& opts = {}) {
    const int deg = f.degree();
    if (f.coanalytic.degree() >= deg && !f.coanalytic.is_zero())
        throw precondition_error("find_zeros needs deg p > deg q");
    const int winding = winding_number(f, region);
    if (winding != deg)
        throw precondition_error("winding number on the region boundary is " + std::to_string(winding) +
                                 ", expected deg p = " + std::to_string(deg) +
                                 "; the region does not contain every zero");

    const int side = std::max(2, static_cast<int>(std::ceil(2.0 * region.half_width * region.grid_density)) + 1);
    const double escape = 4.0 * (std::abs(region.center) + region.half_width) + 1.0;
    const std::size_t per_level = static_cast<std::size_t>(side) * side;

    // Level L covers half-width h / 2^L with the same number of starts.
    std::vector<detail::NewtonOutcome> outcomes;
    auto run_levels = [&](int first, int last) {
        outcomes.resize(per_level * static_cast<std::size_t>(last + 1));
        const std::size_t rows = static_cast<std::size_t>(side) * (last - first + 1);
        detail::parallel_for(rows, [&](std::size_t job) {
            const int level = first + static_cast<int>(job / side);
            const std::size_t row = job % side;
            const double h = region.half_width / static_cast<double>(1 << level);
            const double spacing = 2.0 * h / (side - 1);
            const complex origin = region.center - complex{h, h};
            for (int col = 0; col < side; ++col) {
                const complex start = origin + complex{col * spacing, static_cast<double>(row) * spacing};
                outcomes[level * per_level + row * side + col] = detail::newton(f, start, opts.max_iterations, escape);
            }
        });
    };

    auto collect = [&](int& signed_sum) {
        std::vector<bool> annotation_hit(opts.degenerate.size(), false);
        std::vector<Zero> candidates;
        for (const auto& o : outcomes) {
            if (!o.converged) continue;
            bool captured = false;
            for (std::size_t a = 0; a < opts.degenerate.size(); ++a) {
                if (std::abs(o.z - opts.degenerate[a].location) <= opts.degenerate[a].capture_radius) {
                    annotation_hit[a] = true;
                    captured = true;
                }
            }
            // A start still creeping toward a flat zero passes the residual test
            // long before it settles; only settled points count as new zeros.
            if (!captured && o.last_step <= 1e-8 * (1.0 + std::abs(o.z)))
                candidates.push_back({o.z, 0, o.residual, 1});
        }
        detail::sort_zeros(candidates);

        // Single pass: merge into an earlier survivor within 1e-7 (1 + |z|).
        std::vector<Zero> zeros;
        for (const auto& c : candidates) {
            const double radius = 1e-7 * (1.0 + std::abs(c.location));
            bool merged = false;
            for (auto it = zeros.rbegin(); it != zeros.rend(); ++it) {
                if (c.location.real() - it->location.real() > radius) break;
                if (std::abs(c.location - it->location) <= radius) {
                    if (c.residual < it->residual) *it = c;
                    merged = true;
                    break;
                }
            }
            if (!merged) zeros.push_back(c);
        }

        signed_sum = 0;
        for (auto& z : zeros) {
            z.index = jacobian_sign(f, z.location);
            if (z.index == 0) {
                std::ostringstream msg;
                msg << "degenerate zero at (" << z.location.real() << ", " << z.location.imag()
                    << ") has no analytic annotation";
                throw degenerate_unexplained(msg.str());
            }
            signed_sum += z.index;
        }
        for (std::size_t a = 0; a < opts.degenerate.size(); ++a) {
            const auto& ann = opts.degenerate[a];
            const double res = std::abs(eval(f, ann.location));
            if (!annotation_hit[a] && !(res < 1e-11 * detail::residual_scale(ann.location, deg))) continue;
            zeros.push_back({ann.location, jacobian_sign(f, ann.location), res, ann.multiplicity});
            signed_sum += ann.index_contribution;
        }
        detail::sort_zeros(zeros);
        return zeros;
    };

    int level = std::max(0, opts.refinement_levels);
    run_levels(0, level);
    int signed_sum = 0;
    auto zeros = collect(signed_sum);
    // Zeros crowd toward the center as n grows; keep halving until the index sum closes.
    while (signed_sum != deg && level < opts.max_refinement_levels) {
        ++level;
        run_levels(level, level);
        zeros = collect(signed_sum);
    }

    if (signed_sum != deg) {
        const int deficit = deg - signed_sum;
        throw completeness_failure(deficit, "signed index sum " + std::to_string(signed_sum) +
                                                " != deg p = " + std::to_string(deg) +
                                                " (deficit " + std::to_string(deficit) +
                                                "); try a denser grid");
    }
    return zeros;
}

inline long long multiplicity_total(const std::vector<Zero>& zeros) {
    long long total = 0;
    for (const auto& z : zeros) total += z.multiplicity;
    return total;
}

namespace detail {

/// Zeros of `from` with no partner in `to` within tol (greedy nearest matching).
inline std::vector<Zero> unmatched(const std::vector<Zero>& from, const std::vector<Zero>& to, double tol) {
    std::vector<bool> used(to.size(), false);
    std::vector<Zero> missing;
    for (const auto& z : from) {
        std::size_t best = to.size();
        double best_d = tol;
        for (std::size_t j = 0; j < to.size(); ++j) {
            const double d = std::abs(z.location - to[j].location);
            if (!used[j] && d <= best_d) {
                best = j;
                best_d = d;
            }
        }
        if (best == to.size())
            missing.push_back(z);
        else
            used[best] = true;
    }
    return missing;
}

}  // namespace detail

/// Closed form vs ray bracketing vs planar Newton for the standard construction.
inline ValenceReport cross_validate(int n, const SearchRegion& region, double match_tol = 1e-6) {
    ValenceReport report = predict_count(n);
    const auto ray_zeros = ray_zero_locations(n);
    const long long ray_total = multiplicity_total(ray_zeros);

    FindOptions opts;
    opts.degenerate.push_back(standard_degenerate_annotation(n));
    const auto planar = find_zeros(build_standard(n), region, opts);

    const auto only_planar = detail::unmatched(planar, ray_zeros, match_tol);
    const auto only_ray = detail::unmatched(ray_zeros, planar, match_tol);
    if (!only_planar.empty() || !only_ray.empty()) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "planar and ray zero sets differ for n=" << n << ":";
        for (const auto& z : only_planar) msg << " planar-only " << z.location;
        for (const auto& z : only_ray) msg << " ray-only " << z.location;
        throw mismatch_error(msg.str());
    }
    const long long planar_total = multiplicity_total(planar);
    report.verified = planar_total;
    report.agree = planar_total == ray_total && ray_total == report.predicted;
    return report;
}

inline ValenceReport cross_validate(int n) { return cross_validate(n, default_region(n)); }

}  // namespace hvalence
