// numdiff.hpp: finite-difference helpers used by the numerical oracles.

#pragma once

#include <cmath>

namespace usc::numdiff {

template <class F>
double central(F&& f, double x0, double h) {
    return (f(x0 + h) - f(x0 - h)) / (2.0 * h);
}

// One Richardson step over h and h/2; error O(h^4).
template <class F>
double richardson(F&& f, double x0, double h) {
    const double coarse = central(f, x0, h);
    const double fine = central(f, x0, 0.5 * h);
    return (4.0 * fine - coarse) / 3.0;
}

// |a-b| / max(|a|, |b|, floor). floor keeps the measure finite when both
// values vanish.
inline double relative_deviation(double a, double b, double floor = 1e-300) {
    const double scale = std::fmax(std::fmax(std::fabs(a), std::fabs(b)), floor);
    return std::fabs(a - b) / scale;
}

}  // namespace usc::numdiff
