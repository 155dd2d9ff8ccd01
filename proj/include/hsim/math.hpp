#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <vector>

namespace hsim {

using cplx = std::complex<double>;
inline constexpr cplx I{0.0, 1.0};

/// Surface area of the unit sphere S^{d-1} in R^d.
inline double sphere_area(int d) {
    return 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
}

/// log_+ x = max(0, log x), with log_+ 0 = 0.
inline double log_plus(double x) { return x > 1.0 ? std::log(x) : 0.0; }

inline double vee(double a, double b) { return a > b ? a : b; }
inline double wedge(double a, double b) { return a < b ? a : b; }

/// Japanese bracket <x> = (1 + |x|^2)^{1/2}.
inline double jbracket(double x) { return std::sqrt(1.0 + x * x); }

/// Convergence-rate exponent: d - m for m < d <= 2m, m for d > 2m.
inline double rate_exponent(int d, double m) {
    return d <= 2.0 * m ? d - m : m;
}

inline double norm2(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
};

/// Ordinary least squares y = intercept + slope * x.
inline LinearFit least_squares(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    LinearFit f;
    f.slope = sxx > 0.0 ? sxy / sxx : 0.0;
    f.intercept = my - f.slope * mx;
    if (n > 2 && sxx > 0.0) {
        double rss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = y[i] - f.intercept - f.slope * x[i];
            rss += r * r;
        }
        f.slope_stderr = std::sqrt(rss / (n - 2) / sxx);
    }
    return f;
}

/// Slope of log(y) against log(x).
inline LinearFit loglog_fit(std::span<const double> x, std::span<const double> y) {
    std::vector<double> lx(x.size()), ly(y.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        lx[i] = std::log(x[i]);
        ly[i] = std::log(y[i]);
    }
    return least_squares(lx, ly);
}

}  // namespace hsim
