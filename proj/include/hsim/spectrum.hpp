#pragma once

#include <span>
#include <string>

namespace hsim {

enum class SpectrumKind { gaussian, bump };

SpectrumKind parse_spectrum_kind(const std::string& name);
std::string to_string(SpectrumKind kind);

/// Radially symmetric power spectrum of the stationary potential q.
///
/// gaussian: R^(xi) = amplitude * exp(-|xi|^2 / (2 width^2))
/// bump:     R^(xi) = amplitude * exp(1 - 1 / (1 - (|xi|/width)^2)) for |xi| < width, 0 beyond
///
/// Fourier convention: R(x) = E{q(y) q(x+y)} = \int R^(xi) e^{i xi.x} dxi, so that
/// E{q^(xi) conj q^(xi')} = R^(xi) delta(xi - xi') with q = \int q^ e^{i xi.x}.
struct SpectrumModel {
    SpectrumKind kind = SpectrumKind::gaussian;
    double amplitude = 1.0;
    double width = 1.0;
    int dimension = 3;

    /// Throws DomainError unless amplitude >= 0, width > 0, dimension >= 1.
    void validate() const;
    /// Same model with the amplitude multiplied by `factor`.
    SpectrumModel scaled(double factor) const;
};

/// R^ as a function of the radius |xi|.
double radial_spectrum(const SpectrumModel& model, double radius);

double eval_power_spectrum(const SpectrumModel& model, std::span<const double> xi);
double eval_sqrt_spectrum(const SpectrumModel& model, std::span<const double> xi);

/// R(x). Closed form for the gaussian kind, radial Hankel quadrature for bump.
double eval_correlation(const SpectrumModel& model, std::span<const double> x);

/// \int R^ dxi = R(0).
double total_power(const SpectrumModel& model);

/// Radius beyond which R^ < rel * amplitude.
double support_radius(const SpectrumModel& model, double rel = 1e-18);

/// Fraction of \int R^ carried by |xi| > radius.
double tail_fraction(const SpectrumModel& model, double radius);

/// \int_{S^{d-1}} R^(|r w - e u|) dw for a unit vector u: the angular factor of
/// integrals of R^(xi_1 - shift) against radial weights in xi_1, with e = |shift|.
double shifted_shell(const SpectrumModel& model, double r, double e);

}  // namespace hsim
