#pragma once

#include <cmath>
#include <stdexcept>

namespace persuasion {

/// Promise grid {k*delta : 0 <= k <= floor(H/delta)} covering [0, H].
struct GridSpec {
    double delta = 0.0;
    int num_points = 0;

    static GridSpec for_horizon(int horizon, double delta) {
        if (delta <= 0.0) throw std::invalid_argument("grid delta must be positive");
        GridSpec g;
        g.delta = delta;
        // Tolerant floor so exact multiples (e.g. 3/0.1) land on the grid.
        g.num_points = static_cast<int>(std::floor(horizon / delta + 1e-9)) + 1;
        return g;
    }

    static GridSpec for_epsilon(int horizon, double epsilon) {
        if (epsilon <= 0.0) throw std::invalid_argument("epsilon must be positive");
        return for_horizon(horizon, epsilon / (2.0 * horizon));
    }

    double value(int k) const { return k * delta; }
    double max_value() const { return value(num_points - 1); }
};

/// Largest grid index k with k*delta <= x; exact multiples (within 1e-12 in
/// index units) map to themselves. Result clamped to [0, num_points-1].
inline int floor_to_grid(double x, const GridSpec& grid) {
    const double m = x / grid.delta;
    const double r = std::round(m);
    int k = (std::abs(m - r) <= 1e-12) ? static_cast<int>(r)
                                       : static_cast<int>(std::floor(m));
    if (k < 0) k = 0;
    if (k > grid.num_points - 1) k = grid.num_points - 1;
    return k;
}

/// Smallest grid index k with k*delta >= x, with the same exact-multiple
/// tolerance and clamping as floor_to_grid.
inline int ceil_to_grid(double x, const GridSpec& grid) {
    const double m = x / grid.delta;
    const double r = std::round(m);
    int k = (std::abs(m - r) <= 1e-12) ? static_cast<int>(r)
                                       : static_cast<int>(std::ceil(m));
    if (k < 0) k = 0;
    if (k > grid.num_points - 1) k = grid.num_points - 1;
    return k;
}

}  // namespace persuasion
