#include "hsim/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <limits>
#include <numbers>

#include "hsim/errors.hpp"

namespace hsim::quad {

namespace bq = boost::math::quadrature;

namespace {

template <class T, class F>
Result<T> gk(const F& f, double a, double b, double rel_tol, unsigned max_depth) {
    Result<T> r;
    if (a == b) return r;
    double l1 = 0.0;
    r.value = bq::gauss_kronrod<double, 31>::integrate(f, a, b, max_depth, rel_tol, &r.error, &l1);
    return r;
}

template <class T, class F>
Result<T> pieces(const F& f, std::span<const double> breaks, double rel_tol, unsigned max_depth) {
    Result<T> total;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        if (!(breaks[i + 1] > breaks[i])) continue;
        auto r = gk<T>(f, breaks[i], breaks[i + 1], rel_tol, max_depth);
        total.value += r.value;
        total.error += r.error;
    }
    return total;
}

template <int N>
void append_panels(NodeSet& out, double a, double b, int panels) {
    const auto& xs = bq::gauss<double, N>::abscissa();
    const auto& ws = bq::gauss<double, N>::weights();
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * h;
        const double half = 0.5 * h;
        for (std::size_t k = 0; k < xs.size(); ++k) {
            if (xs[k] == 0.0) {
                out.x.push_back(mid);
                out.w.push_back(half * ws[k]);
                continue;
            }
            out.x.push_back(mid - half * xs[k]);
            out.w.push_back(half * ws[k]);
            out.x.push_back(mid + half * xs[k]);
            out.w.push_back(half * ws[k]);
        }
    }
}

}  // namespace

Result<double> adaptive(const RealFn& f, double a, double b, double rel_tol, unsigned max_depth) {
    return gk<double>(f, a, b, rel_tol, max_depth);
}

Result<cplx> adaptive_complex(const ComplexFn& f, double a, double b, double rel_tol, unsigned max_depth) {
    return gk<cplx>(f, a, b, rel_tol, max_depth);
}

Result<double> adaptive_pieces(const RealFn& f, std::span<const double> breaks, double rel_tol,
                               unsigned max_depth) {
    return pieces<double>(f, breaks, rel_tol, max_depth);
}

Result<cplx> adaptive_pieces_complex(const ComplexFn& f, std::span<const double> breaks, double rel_tol,
                             unsigned max_depth) {
    return pieces<cplx>(f, breaks, rel_tol, max_depth);
}

Result<double> endpoint_singular(const RealFn& f, double a, double b, double rel_tol) {
    Result<double> r;
    if (a == b) return r;
    bq::tanh_sinh<double> rule;
    double l1 = 0.0;
    r.value = rule.integrate(f, a, b, rel_tol, &r.error, &l1);
    return r;
}

NodeSet gauss_legendre_panels(double a, double b, int panels, int order) {
    NodeSet out;
    if (panels <= 0 || !(b > a)) return out;
    out.x.reserve(static_cast<std::size_t>(panels) * order);
    out.w.reserve(static_cast<std::size_t>(panels) * order);
    switch (order) {
        case 8: append_panels<8>(out, a, b, panels); break;
        case 16: append_panels<16>(out, a, b, panels); break;
        case 20: append_panels<20>(out, a, b, panels); break;
        case 30: append_panels<30>(out, a, b, panels); break;
        default: throw DomainError("gauss_legendre_panels: unsupported order");
    }
    return out;
}

double shell_average(const RealFn& profile, double r, double e, int d, double rel_tol) {
    if (d < 1) throw DomainError("shell_average: dimension must be positive");
    if (d == 1) return profile(std::abs(r - e)) + profile(r + e);
    if (r == 0.0 || e == 0.0) return sphere_area(d) * profile(std::max(r, e));
    auto integrand = [&](double theta) {
        const double s2 = std::max(0.0, r * r + e * e - 2.0 * r * e * std::cos(theta));
        return profile(std::sqrt(s2)) * std::pow(std::sin(theta), d - 2);
    };
    const auto res = gk<double>(integrand, 0.0, std::numbers::pi, rel_tol, 25);
    return sphere_area(d - 1) * res.value;
}

}  // namespace hsim::quad
