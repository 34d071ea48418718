#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace ornstein {

// Ordinary least-squares line fit with R^2 and slope standard error.
struct LinFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    double slope_stderr = 0.0;
    std::size_t points = 0;
    bool available = false;
};

inline LinFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
    LinFit fit;
    const std::size_t n = x.size();
    if (n != y.size() || n < 2) return fit;
    fit.points = n;

    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);

    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0) return fit;  // degenerate abscissae

    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;

    double ss_res = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (fit.intercept + fit.slope * x[i]);
        ss_res += r * r;
    }
    fit.r2 = (syy == 0.0) ? (ss_res == 0.0 ? 1.0 : 0.0) : 1.0 - ss_res / syy;
    fit.slope_stderr = (n > 2) ? std::sqrt(ss_res / static_cast<double>(n - 2) / sxx) : 0.0;
    fit.available = true;
    return fit;
}

}  // namespace ornstein
