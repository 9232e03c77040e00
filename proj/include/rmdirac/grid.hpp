#pragma once

#include <stdexcept>
#include <vector>

namespace rmdirac {

/// Uniform radial grid on [r_min, r_max] (fm).
struct RadialGrid
{
    double r_min = 1e-4;
    double r_max = 40.0;
    int points = 8000;

    double spacing() const { return (r_max - r_min) / (points - 1); }
    double at(int i) const { return r_min + i * spacing(); }

    void validate() const
    {
        if (!(r_min > 0.0) || !(r_max > r_min) || points < 2) {
            throw std::domain_error("RadialGrid: require 0 < r_min < r_max and points >= 2");
        }
    }

    std::vector<double> nodes() const
    {
        std::vector<double> r(static_cast<std::size_t>(points));
        for (int i = 0; i < points; ++i) {
            r[static_cast<std::size_t>(i)] = at(i);
        }
        return r;
    }
};

} // namespace rmdirac
