#pragma once

#include <complex>

namespace hvalence {

/// A zero of a harmonic map in the plane.
struct Zero {
    std::complex<double> location;
    /// Sign of the Jacobian determinant |p'|^2 - |q'|^2; 0 marks a degenerate zero.
    int index = 0;
    /// |f(location)|
    double residual = 0.0;
    int multiplicity = 1;

    bool degenerate() const noexcept { return index == 0; }
};

}  // namespace hvalence
