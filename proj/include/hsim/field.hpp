#pragma once

#include <cstdint>
#include <vector>

#include "hsim/grid.hpp"
#include "hsim/spectrum.hpp"

namespace hsim {

/// One draw of V_eps(x) = eps^{-m/2} q(x/eps) sampled on a grid.
struct FieldRealization {
    Grid grid;
    double epsilon = 1.0;
    std::vector<double> values;
    std::uint64_t seed = 0;
    SpectrumModel spectrum;
    double m_order = 0.0;
    /// max |Im| of the synthesis transform relative to the field RMS.
    double imag_residue = 0.0;
    /// R_eps(L/2) / R_eps(0): covariance wrap-around at half the box.
    double periodization_ratio = 0.0;

    double max_abs() const;
    double rms() const;
};

/// Potential equal to `value` everywhere (oracle tests).
FieldRealization constant_field(const Grid& grid, double value);

/// Smallest even N for which the scaled spectrum eps^{d-m} R^(eps xi) keeps
/// all but `tol` of its mass inside the resolved frequency ball.
int minimal_resolving_points(const SpectrumModel& spectrum, double box_length, double epsilon,
                             double tol = 1e-6);

/// Synthesizes a real Gaussian field with discrete power spectrum
/// (2 pi / L)^d eps^{d-m} R^(eps xi_k) per lattice mode.
/// Throws DomainError for eps outside (0, 1], ResolutionError when the grid
/// loses more than 1e-6 of the spectral mass.
FieldRealization sample_scaled_potential(const Grid& grid, const SpectrumModel& spectrum,
                                         double epsilon, double m_order, std::uint64_t seed);

struct CovarianceEstimate {
    std::vector<int> lag;
    double estimate = 0.0;
    double standard_error = 0.0;
};

/// Spatial average of V(y) V(y + lag) per draw, then mean and standard error
/// across draws. Needs >= 2 realizations on one grid / epsilon / spectrum.
std::vector<CovarianceEstimate> estimate_covariance(const std::vector<FieldRealization>& realizations,
                                                    const std::vector<std::vector<int>>& lags);

}  // namespace hsim
