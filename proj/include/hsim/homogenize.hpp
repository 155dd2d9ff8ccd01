#pragma once

#include <span>
#include <string>
#include <vector>

#include "hsim/grid.hpp"
#include "hsim/spectrum.hpp"

namespace hsim {

struct EffectivePotential {
    double rho = 0.0;
    double quadrature_error = 0.0;
    int d = 3;
    double m_order = 2.0;
    SpectrumModel spectrum;
};

/// rho = \int R^(xi) / |xi|^m dxi. Throws RegimeError for d <= m and
/// NumericError unless the estimated relative error is <= 1e-8.
EffectivePotential compute_rho(const SpectrumModel& spectrum, int d, double m_order);

/// rho_eps(xi) = \int R^(xi_1 - eps xi) / |xi_1|^m dxi_1; depends on eps |xi| only.
double compute_rho_eps(const SpectrumModel& spectrum, int d, double m_order, double epsilon,
                       std::span<const double> xi);
/// Same as a function of e = eps |xi|.
double rho_shifted(const SpectrumModel& spectrum, int d, double m_order, double e);

/// e^{i(|xi|^m - rho) t} u0^(xi) per lattice mode. Returned in frequency representation.
WaveFunction homogenized_solution(const WaveFunction& u0hat, double t, double rho, double m_order);

/// Memory kernel of the simple-graph equation on a uniform tau grid:
/// g(tau) = \int eps^{d-m} R^(eps(xi_1 - xi)) e^{i tau |xi_1|^m} dxi_1.
struct VolterraKernel {
    double epsilon = 1.0;
    double xi_norm = 0.0;
    double m_order = 2.0;
    int d = 3;
    double step = 0.0;
    std::vector<cplx> g;  ///< g[j] = g(j * step)

    double sup_abs() const;
};

VolterraKernel tabulate_volterra_kernel(const SpectrumModel& spectrum, int d, double m_order, double epsilon,
                                        double xi_norm, double step, std::size_t count);

/// Writes rows "tau,re,im".
void write_kernel_csv(const std::string& path, const VolterraKernel& kernel);

struct VolterraResult {
    std::vector<double> t;
    std::vector<cplx> U;
    double internal_step = 0.0;
    /// max over t of |U_h - U_2h| / 3, the Richardson error estimate.
    double truncation_estimate = 0.0;
    double kernel_sup = 0.0;
};

/// Solves U(t) = e^{it|xi|^m} u0 + A_eps U(t) by marching the equivalent
/// U' = i|xi|^m U - \int_0^t g(s) U(t - s) ds with trapezoid memory, step
/// eps^m / 40 (Richardson-extrapolated against 2x the step), and reports U at t_grid.
VolterraResult solve_volterra_simple(cplx u0hat_at_xi, std::span<const double> xi,
                                     std::span<const double> t_grid, const SpectrumModel& spectrum, int d,
                                     double m_order, double epsilon);

/// e^{it(|xi|^m - rho_eps(xi))} u0.
cplx homogenized_mode(cplx u0hat_at_xi, double xi_norm, double t, double rho, double m_order);

}  // namespace hsim
