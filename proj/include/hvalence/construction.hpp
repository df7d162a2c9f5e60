#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <optional>
#include <string>

#include "hvalence/errors.hpp"
#include "hvalence/poly.hpp"

namespace hvalence {

/// z^e by repeated squaring; exact zero at z = 0.
inline complex ipow(complex z, int e) {
    complex result{1.0, 0.0};
    while (e > 0) {
        if (e & 1) result *= z;
        z *= z;
        e >>= 1;
    }
    return result;
}

/// Parameters of the S/T family: S(z) = i z^n, T(z) = i (z+a)^(n-1) (z-(n-1)a).
/// a = 1 is the standard construction; other unit a give the rotated variant.
struct ConstructionParams {
    int n = 4;
    complex a{1.0, 0.0};
};

/// Unexpanded evaluator for S and T. Expanded coefficients of (z+a)^(n-1)
/// grow like 2^n, so everything downstream evaluates through this form
/// whenever a HarmonicMap carries it.
struct SplitForm {
    int n;
    complex a;

    complex S(complex z) const { return complex{0.0, 1.0} * ipow(z, n); }
    complex T(complex z) const {
        return complex{0.0, 1.0} * ipow(z + a, n - 1) * (z - static_cast<double>(n - 1) * a);
    }
    complex dS(complex z) const { return complex{0.0, static_cast<double>(n)} * ipow(z, n - 1); }
    // T'(z) = i n (z+a)^(n-2) (z - (n-2)a)
    complex dT(complex z) const {
        return complex{0.0, static_cast<double>(n)} * ipow(z + a, n - 2) *
               (z - static_cast<double>(n - 2) * a);
    }
};

/// f(z) = p(z) + conj(q(z)).
struct HarmonicMap {
    ComplexPoly analytic;    // p
    ComplexPoly coanalytic;  // q
    std::optional<SplitForm> split;

    int degree() const noexcept { return analytic.degree(); }
};

/// Real Jacobian of (x, y) -> (Re f, Im f); rows are (Re f, Im f), columns (d/dx, d/dy).
struct Jacobian {
    std::array<std::array<double, 2>, 2> m{};
    double det = 0.0;
};

namespace detail {

inline void check_n(int n) {
    if (n < 4)
        throw precondition_error("n must be >= 4 (the construction needs n >= 4), got " +
                                 std::to_string(n));
}

inline ComplexPoly expand_T(int n, complex a) {
    const ComplexPoly linear_plus(std::vector<complex>{a, complex{1.0, 0.0}});
    ComplexPoly power(std::vector<complex>{complex{1.0, 0.0}});
    for (int i = 0; i < n - 1; ++i) power = power * linear_plus;
    const ComplexPoly tail(std::vector<complex>{-static_cast<double>(n - 1) * a, complex{1.0, 0.0}});
    // [z^(n-1)] is (n-1) a - (n-1) a for every a; keep it exactly zero so q has degree n-2.
    const ComplexPoly full = power * tail;
    std::vector<complex> c(full.coeffs().begin(), full.coeffs().end());
    c[static_cast<std::size_t>(n - 1)] = complex{};
    return complex{0.0, 1.0} * ComplexPoly(std::move(c));
}

}  // namespace detail

inline HarmonicMap build_perturbed(const ConstructionParams& params) {
    detail::check_n(params.n);
    if (std::abs(std::abs(params.a) - 1.0) > 1e-12)
        throw precondition_error("perturbation center a must have unit modulus");

    const int n = params.n;
    const ComplexPoly S = ComplexPoly::monomial(n, complex{0.0, 1.0});
    const ComplexPoly T = detail::expand_T(n, params.a);
    HarmonicMap f;
    f.analytic = S + T;
    f.coanalytic = S - T;
    f.split = SplitForm{n, params.a};
    return f;
}

inline HarmonicMap build_standard(int n) { return build_perturbed({n, complex{1.0, 0.0}}); }

/// Values p(z), q(z).
inline std::pair<complex, complex> eval_parts(const HarmonicMap& f, complex z) {
    if (f.split) {
        const complex s = f.split->S(z), t = f.split->T(z);
        return {s + t, s - t};
    }
    return {f.analytic(z), f.coanalytic(z)};
}

/// Derivatives p'(z), q'(z).
inline std::pair<complex, complex> eval_derivatives(const HarmonicMap& f, complex z) {
    if (f.split) {
        const complex s = f.split->dS(z), t = f.split->dT(z);
        return {s + t, s - t};
    }
    // Horner on the derivative coefficients without materializing them.
    auto horner_prime = [z](const ComplexPoly& p) {
        complex acc{};
        for (int j = p.degree(); j >= 1; --j) acc = acc * z + p[j] * static_cast<double>(j);
        return acc;
    };
    return {horner_prime(f.analytic), horner_prime(f.coanalytic)};
}

inline complex eval(const HarmonicMap& f, complex z) {
    if (f.split) {
        // p + conj(q) = 2 Re S + 2i Im T, without the cancellation.
        return {2.0 * f.split->S(z).real(), 2.0 * f.split->T(z).imag()};
    }
    return f.analytic(z) + std::conj(f.coanalytic(z));
}

namespace detail {

/// s = (p' + q') / 2 and t = (p' - q') / 2 (S' and T' for the S/T family).
/// In these terms f_x = 2 Re s + 2i Im t and det = 4 Re(s conj(t)), which
/// avoids the cancellation in |p'|^2 - |q'|^2 when |p'| ~ |q'|.
inline std::pair<complex, complex> half_sum_difference(const HarmonicMap& f, complex z) {
    if (f.split) return {f.split->dS(z), f.split->dT(z)};
    const auto [dp, dq] = eval_derivatives(f, z);
    return {0.5 * (dp + dq), 0.5 * (dp - dq)};
}

}  // namespace detail

inline Jacobian jacobian(const HarmonicMap& f, complex z) {
    const auto [s, t] = detail::half_sum_difference(f, z);
    Jacobian J;
    J.m = {{{2.0 * s.real(), -2.0 * s.imag()}, {2.0 * t.imag(), 2.0 * t.real()}}};
    J.det = 4.0 * (s.real() * t.real() + s.imag() * t.imag());
    return J;
}

/// Sign of the Jacobian determinant |p'|^2 - |q'|^2 at z, or 0 when the zero
/// is degenerate: det = 4 |s||t| cos(angle between s and t), and the zero
/// counts as degenerate when that cosine is below 1e-9 (or s or t vanishes).
inline int jacobian_sign(const HarmonicMap& f, complex z) {
    const auto [s, t] = detail::half_sum_difference(f, z);
    const double det = 4.0 * (s.real() * t.real() + s.imag() * t.imag());
    if (std::abs(det) <= 1e-9 * 4.0 * std::abs(s) * std::abs(t)) return 0;
    return det > 0.0 ? 1 : -1;
}

}  // namespace hvalence
