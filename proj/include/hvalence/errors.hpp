#pragma once

#include <stdexcept>
#include <string>

namespace hvalence {

/// Input violates an operation's precondition (bad n, k, angle, ...).
class precondition_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The sign pattern of A(theta) on some segment does not match the
/// pole/critical-point structure the valence count relies on.
class structural_violation : public std::runtime_error {
public:
    structural_violation(int n, int k, int segment, const std::string& what)
        : std::runtime_error("structural violation (n=" + std::to_string(n) +
                             ", k=" + std::to_string(k) + ", segment=" +
                             std::to_string(segment) + "): " + what),
          n_(n), k_(k), segment_(segment) {}

    int n() const noexcept { return n_; }
    int k() const noexcept { return k_; }
    int segment() const noexcept { return segment_; }

private:
    int n_;
    int k_;
    int segment_;
};

/// f vanishes (numerically) on the boundary of a winding contour.
class boundary_zero_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Signed index sum of the zeros found does not equal deg p.
class completeness_failure : public std::runtime_error {
public:
    completeness_failure(int deficit, const std::string& what)
        : std::runtime_error(what), deficit_(deficit) {}
    int deficit() const noexcept { return deficit_; }

private:
    int deficit_;
};

/// A zero with singular Jacobian that no caller annotation accounts for.
class degenerate_unexplained : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Two independent zero counters disagree.
class mismatch_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace hvalence
