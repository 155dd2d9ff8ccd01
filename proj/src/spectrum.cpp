#include "hsim/spectrum.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <cmath>
#include <numbers>

#include "hsim/errors.hpp"
#include "hsim/math.hpp"
#include "hsim/quadrature.hpp"

namespace hsim {

SpectrumKind parse_spectrum_kind(const std::string& name) {
    if (name == "gaussian") return SpectrumKind::gaussian;
    if (name == "bump") return SpectrumKind::bump;
    throw DomainError("unknown spectrum kind '" + name + "'");
}

std::string to_string(SpectrumKind kind) {
    return kind == SpectrumKind::gaussian ? "gaussian" : "bump";
}

void SpectrumModel::validate() const {
    if (!(amplitude >= 0.0) || !std::isfinite(amplitude))
        throw DomainError("spectrum amplitude must be finite and non-negative");
    if (!(width > 0.0) || !std::isfinite(width)) throw DomainError("spectrum width must be positive");
    if (dimension < 1) throw DomainError("spectrum dimension must be positive");
}

SpectrumModel SpectrumModel::scaled(double factor) const {
    SpectrumModel m = *this;
    m.amplitude *= factor;
    return m;
}

double radial_spectrum(const SpectrumModel& model, double radius) {
    const double r = std::abs(radius);
    switch (model.kind) {
        case SpectrumKind::gaussian:
            return model.amplitude * std::exp(-r * r / (2.0 * model.width * model.width));
        case SpectrumKind::bump: {
            const double s = r / model.width;
            if (s >= 1.0) return 0.0;
            return model.amplitude * std::exp(1.0 - 1.0 / (1.0 - s * s));
        }
    }
    return 0.0;
}

namespace {

double checked_norm(const SpectrumModel& model, std::span<const double> v, const char* what) {
    if (static_cast<int>(v.size()) != model.dimension)
        throw DomainError(std::string(what) + ": vector dimension does not match the spectrum");
    for (double c : v)
        if (!std::isfinite(c)) throw DomainError(std::string(what) + ": non-finite component");
    return norm2(v);
}

}  // namespace

double eval_power_spectrum(const SpectrumModel& model, std::span<const double> xi) {
    return radial_spectrum(model, checked_norm(model, xi, "eval_power_spectrum"));
}

double eval_sqrt_spectrum(const SpectrumModel& model, std::span<const double> xi) {
    return std::sqrt(eval_power_spectrum(model, xi));
}

double total_power(const SpectrumModel& model) {
    const int d = model.dimension;
    if (model.kind == SpectrumKind::gaussian)
        return model.amplitude * std::pow(2.0 * std::numbers::pi * model.width * model.width, 0.5 * d);
    auto f = [&](double r) { return radial_spectrum(model, r) * std::pow(r, d - 1); };
    return sphere_area(d) * quad::adaptive(f, 0.0, model.width, 1e-13).value;
}

double eval_correlation(const SpectrumModel& model, std::span<const double> x) {
    const double rx = checked_norm(model, x, "eval_correlation");
    const int d = model.dimension;
    if (model.kind == SpectrumKind::gaussian) {
        const double s = model.width;
        return total_power(model) * std::exp(-0.5 * s * s * rx * rx);
    }
    if (rx == 0.0) return total_power(model);
    // R(x) = (2 pi)^{d/2} |x|^{1-d/2} \int R^(r) J_{d/2-1}(r|x|) r^{d/2} dr
    const double nu = 0.5 * d - 1.0;
    auto f = [&](double r) {
        if (r == 0.0) return 0.0;
        return radial_spectrum(model, r) * boost::math::cyl_bessel_j(nu, r * rx) * std::pow(r, 0.5 * d);
    };
    double err = 0.0, l1 = 0.0;
    const double integral = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        f, 0.0, model.width, 30, 1e-12, &err, &l1);
    if (err > 1e-8 * l1)
        throw NumericError("eval_correlation: radial quadrature did not converge");
    return std::pow(2.0 * std::numbers::pi, 0.5 * d) * std::pow(rx, 1.0 - 0.5 * d) * integral;
}

double support_radius(const SpectrumModel& model, double rel) {
    if (model.kind == SpectrumKind::bump) return model.width;
    return model.width * std::sqrt(2.0 * std::log(1.0 / rel));
}

double tail_fraction(const SpectrumModel& model, double radius) {
    if (model.amplitude == 0.0) return 0.0;
    const int d = model.dimension;
    const double rmax = support_radius(model);
    if (radius >= rmax) return 0.0;
    auto f = [&](double r) { return radial_spectrum(model, r) * std::pow(r, d - 1); };
    const double outside = quad::adaptive(f, std::max(radius, 0.0), rmax, 1e-12).value;
    const double all = quad::adaptive(f, 0.0, rmax, 1e-12).value;
    return outside / all;
}

double shifted_shell(const SpectrumModel& model, double r, double e) {
    const int d = model.dimension;
    r = std::abs(r);
    e = std::abs(e);
    if (model.kind == SpectrumKind::gaussian && (d == 3 || d == 1)) {
        const double s2 = model.width * model.width;
        const double a = model.amplitude;
        if (d == 1)
            return a * (std::exp(-(r - e) * (r - e) / (2 * s2)) + std::exp(-(r + e) * (r + e) / (2 * s2)));
        const double kappa = r * e / s2;
        // 4 pi A exp(-(r^2+e^2)/2s^2) sinh(kappa)/kappa, written without overflow
        double shape;
        if (kappa < 1e-6)
            shape = std::exp(-(r * r + e * e) / (2 * s2)) * (1.0 + kappa * kappa / 6.0);
        else
            shape = std::exp(-(r - e) * (r - e) / (2 * s2)) * (-std::expm1(-2.0 * kappa)) / (2.0 * kappa);
        return 4.0 * std::numbers::pi * a * shape;
    }
    return quad::shell_average([&](double s) { return radial_spectrum(model, s); }, r, e, d);
}

}  // namespace hsim
