#pragma once

// Geometry for drawing the two zero sets whose intersections are the zeros:
// the 2n rays of Re S = 0 and the level set Im T = 0.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

namespace hvalence {

struct Segment {
    double x1, y1, x2, y2;
};

/// The 2n rays arg z = pi k / n (k = -n+1..n), clipped to the square [-window, window]^2.
inline std::vector<Segment> ray_segments(int n, double window) {
    std::vector<Segment> out;
    out.reserve(static_cast<std::size_t>(2 * n));
    for (int k = -n + 1; k <= n; ++k) {
        const double angle = std::numbers::pi * k / n;
        const double c = std::cos(angle), s = std::sin(angle);
        const double length = window / std::max(std::abs(c), std::abs(s));
        out.push_back({0.0, 0.0, length * c, length * s});
    }
    return out;
}

/// Zero level set of field(x, y) on [-window, window]^2 by marching squares
/// over cells x cells square cells, with linear interpolation along cell
/// edges. Saddle cells are resolved by the sign of the mean corner value.
/// Exact zeros at nodes are treated as positive.
template <class Field>
std::vector<Segment> marching_squares(Field&& field, double window, int cells) {
    const int nodes = cells + 1;
    const double h = 2.0 * window / cells;
    auto coord = [&](int i) { return -window + h * i; };

    std::vector<double> v(static_cast<std::size_t>(nodes) * nodes);
    for (int j = 0; j < nodes; ++j)
        for (int i = 0; i < nodes; ++i) v[static_cast<std::size_t>(j) * nodes + i] = field(coord(i), coord(j));
    auto at = [&](int i, int j) { return v[static_cast<std::size_t>(j) * nodes + i]; };

    std::vector<Segment> out;
    struct Point {
        double x, y;
    };
    auto lerp = [](double p, double q, double vp, double vq) { return p + (q - p) * (vp / (vp - vq)); };

    for (int j = 0; j < cells; ++j) {
        for (int i = 0; i < cells; ++i) {
            const double va = at(i, j), vb = at(i + 1, j), vc = at(i + 1, j + 1), vd = at(i, j + 1);
            const int mask = (va >= 0 ? 1 : 0) | (vb >= 0 ? 2 : 0) | (vc >= 0 ? 4 : 0) | (vd >= 0 ? 8 : 0);
            if (mask == 0 || mask == 15) continue;

            const double x0 = coord(i), x1 = coord(i + 1), y0 = coord(j), y1 = coord(j + 1);
            // bottom a-b, right b-c, top d-c, left a-d
            auto edge = [&](int e) -> Point {
                switch (e) {
                    case 0: return {lerp(x0, x1, va, vb), y0};
                    case 1: return {x1, lerp(y0, y1, vb, vc)};
                    case 2: return {lerp(x0, x1, vd, vc), y1};
                    default: return {x0, lerp(y0, y1, va, vd)};
                }
            };
            auto emit = [&](int e1, int e2) {
                const Point p = edge(e1), q = edge(e2);
                out.push_back({p.x, p.y, q.x, q.y});
            };

            const bool center_positive = (va + vb + vc + vd) >= 0;
            switch (mask) {
                case 1: case 14: emit(0, 3); break;
                case 2: case 13: emit(0, 1); break;
                case 3: case 12: emit(1, 3); break;
                case 4: case 11: emit(1, 2); break;
                case 6: case 9: emit(0, 2); break;
                case 7: case 8: emit(2, 3); break;
                case 5:
                    if (center_positive) { emit(0, 1); emit(2, 3); }
                    else { emit(0, 3); emit(1, 2); }
                    break;
                case 10:
                    if (center_positive) { emit(0, 3); emit(1, 2); }
                    else { emit(0, 1); emit(2, 3); }
                    break;
                default: break;
            }
        }
    }
    return out;
}

}  // namespace hvalence
