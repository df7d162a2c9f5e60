#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace hvalence {

using complex = std::complex<double>;

/// Dense polynomial with complex coefficients; coeffs()[j] multiplies z^j.
///
/// Trailing zero coefficients are stripped on construction so the leading
/// coefficient is nonzero. The zero polynomial is stored as a single 0
/// coefficient and reports degree 0 with is_zero() == true.
class ComplexPoly {
public:
    ComplexPoly() : coeffs_{complex{0.0, 0.0}} {}

    explicit ComplexPoly(std::vector<complex> coeffs) : coeffs_(std::move(coeffs)) {
        trim();
    }

    static ComplexPoly monomial(int degree, complex c = {1.0, 0.0}) {
        std::vector<complex> v(static_cast<std::size_t>(degree) + 1, complex{});
        v.back() = c;
        return ComplexPoly(std::move(v));
    }

    int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const noexcept { return coeffs_.size() == 1 && coeffs_[0] == complex{}; }
    std::span<const complex> coeffs() const noexcept { return coeffs_; }
    complex operator[](int j) const {
        return j >= 0 && j <= degree() ? coeffs_[static_cast<std::size_t>(j)] : complex{};
    }
    complex leading() const noexcept { return coeffs_.back(); }

    /// Horner evaluation.
    complex operator()(complex z) const noexcept {
        complex acc{};
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
        return acc;
    }

    /// Term-by-term summation with explicit powers; slower, used as a cross-check.
    complex eval_terms(complex z) const noexcept {
        complex acc{};
        complex power{1.0, 0.0};
        for (const auto& c : coeffs_) {
            acc += c * power;
            power *= z;
        }
        return acc;
    }

    /// Sum of |c_j| |z|^j, the natural magnitude scale for rounding error of p(z).
    double magnitude_bound(complex z) const noexcept {
        const double r = std::abs(z);
        double acc = 0.0;
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * r + std::abs(*it);
        return acc;
    }

    ComplexPoly derivative() const {
        if (degree() == 0) return ComplexPoly{};
        std::vector<complex> d(coeffs_.size() - 1);
        for (std::size_t j = 1; j < coeffs_.size(); ++j) d[j - 1] = coeffs_[j] * static_cast<double>(j);
        return ComplexPoly(std::move(d));
    }

    /// Zero every coefficient below rel_tol * max|coeff|, then re-trim.
    friend ComplexPoly operator+(const ComplexPoly& a, const ComplexPoly& b) {
        std::vector<complex> v(static_cast<std::size_t>(std::max(a.degree(), b.degree())) + 1);
        for (int j = 0; j <= a.degree(); ++j) v[static_cast<std::size_t>(j)] += a[j];
        for (int j = 0; j <= b.degree(); ++j) v[static_cast<std::size_t>(j)] += b[j];
        return ComplexPoly(std::move(v));
    }

    friend ComplexPoly operator-(const ComplexPoly& a, const ComplexPoly& b) {
        std::vector<complex> v(static_cast<std::size_t>(std::max(a.degree(), b.degree())) + 1);
        for (int j = 0; j <= a.degree(); ++j) v[static_cast<std::size_t>(j)] += a[j];
        for (int j = 0; j <= b.degree(); ++j) v[static_cast<std::size_t>(j)] -= b[j];
        return ComplexPoly(std::move(v));
    }

    friend ComplexPoly operator*(const ComplexPoly& a, const ComplexPoly& b) {
        std::vector<complex> v(a.coeffs_.size() + b.coeffs_.size() - 1, complex{});
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
            for (std::size_t j = 0; j < b.coeffs_.size(); ++j) v[i + j] += a.coeffs_[i] * b.coeffs_[j];
        return ComplexPoly(std::move(v));
    }

    friend ComplexPoly operator*(complex s, const ComplexPoly& a) {
        std::vector<complex> v = a.coeffs_;
        for (auto& c : v) c *= s;
        return ComplexPoly(std::move(v));
    }

    friend bool operator==(const ComplexPoly&, const ComplexPoly&) = default;

private:
    void trim() {
        while (coeffs_.size() > 1 && coeffs_.back() == complex{}) coeffs_.pop_back();
        if (coeffs_.empty()) coeffs_.push_back(complex{});
    }

    std::vector<complex> coeffs_;
};

}  // namespace hvalence
