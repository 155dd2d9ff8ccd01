#include "hsim/field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "hsim/errors.hpp"
#include "hsim/rng.hpp"

namespace hsim {

double FieldRealization::max_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

double FieldRealization::rms() const {
    double s = 0.0;
    for (double v : values) s += v * v;
    return values.empty() ? 0.0 : std::sqrt(s / values.size());
}

FieldRealization constant_field(const Grid& grid, double value) {
    FieldRealization f;
    f.grid = grid;
    f.values.assign(grid.size(), value);
    f.spectrum.amplitude = 0.0;
    f.spectrum.dimension = grid.dimension();
    return f;
}

int minimal_resolving_points(const SpectrumModel& spectrum, double box_length, double epsilon,
                             double tol) {
    if (spectrum.amplitude == 0.0) return 2;
    // tail_fraction is decreasing in the radius: bisect for the needed radius
    double lo = 0.0, hi = support_radius(spectrum);
    if (tail_fraction(spectrum, lo) < tol) return 2;
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        (tail_fraction(spectrum, mid) < tol ? hi : lo) = mid;
    }
    // need eps * 2 pi (N/2 - 1) / L >= hi
    const double half = hi * box_length / (2.0 * std::numbers::pi * epsilon) + 1.0;
    int n = 2 * static_cast<int>(std::ceil(half));
    return std::max(n, 2);
}

FieldRealization sample_scaled_potential(const Grid& grid, const SpectrumModel& spectrum,
                                         double epsilon, double m_order, std::uint64_t seed) {
    spectrum.validate();
    if (!(epsilon > 0.0) || epsilon > 1.0) throw DomainError("epsilon must lie in (0, 1]");
    if (spectrum.dimension != grid.dimension())
        throw DomainError("spectrum dimension does not match the grid");

    const int d = grid.dimension();
    const double resolved = epsilon * grid.inner_frequency_radius();
    if (spectrum.amplitude > 0.0 && tail_fraction(spectrum, resolved) >= 1e-6) {
        const int nmin = minimal_resolving_points(spectrum, grid.length(), epsilon);
        throw ResolutionError("grid does not resolve the scaled spectrum at eps=" +
                                  std::to_string(epsilon) + "; need N >= " + std::to_string(nmin),
                              nmin);
    }

    FieldRealization f;
    f.grid = grid;
    f.epsilon = epsilon;
    f.seed = seed;
    f.spectrum = spectrum;
    f.m_order = m_order;

    const double prefactor = std::pow(grid.dxi(), d) * std::pow(epsilon, d - m_order);
    std::vector<cplx> c(grid.size());
    std::vector<double> xi(d);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const std::size_t nk = grid.negate(k);
        if (nk < k) continue;  // filled from its canonical partner
        const double s = prefactor * radial_spectrum(spectrum, epsilon * std::sqrt(grid.xi_squared(k)));
        if (s == 0.0) continue;
        CounterRng rng(seed, k);
        std::normal_distribution<double> normal;
        if (nk == k) {
            c[k] = std::sqrt(s) * normal(rng);
        } else {
            const double a = normal(rng), b = normal(rng);
            c[k] = std::sqrt(0.5 * s) * cplx(a, b);
            c[nk] = std::conj(c[k]);
        }
    }
    fft_backward(grid, c);

    f.values.resize(grid.size());
    double imag_max = 0.0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        f.values[j] = c[j].real();
        imag_max = std::max(imag_max, std::abs(c[j].imag()));
    }
    const double rms = f.rms();
    f.imag_residue = rms > 0.0 ? imag_max / rms : 0.0;
    if (f.imag_residue > 1e-10) throw NumericError("field synthesis left an imaginary residue");

    if (spectrum.amplitude > 0.0) {
        // scaled covariance R_eps(x) = eps^{-m} R(x / eps)
        std::vector<double> lag(d, 0.0);
        const double r0 = eval_correlation(spectrum, lag);
        lag[0] = 0.5 * grid.length() / epsilon;
        f.periodization_ratio = std::abs(eval_correlation(spectrum, lag)) / r0;
    }
    return f;
}

std::vector<CovarianceEstimate> estimate_covariance(const std::vector<FieldRealization>& realizations,
                                                    const std::vector<std::vector<int>>& lags) {
    if (realizations.size() < 2) throw DomainError("estimate_covariance needs at least 2 realizations");
    const FieldRealization& ref = realizations.front();
    for (const auto& r : realizations) {
        require_same_grid(ref.grid, r.grid, "estimate_covariance");
        if (r.epsilon != ref.epsilon || r.m_order != ref.m_order ||
            r.spectrum.kind != ref.spectrum.kind || r.spectrum.amplitude != ref.spectrum.amplitude ||
            r.spectrum.width != ref.spectrum.width)
            throw DomainError("estimate_covariance: realizations differ in epsilon or spectrum");
    }
    const Grid& g = ref.grid;
    const int d = g.dimension();
    std::vector<CovarianceEstimate> out;
    std::vector<int> idx(d), shifted(d);
    for (const auto& lag : lags) {
        if (static_cast<int>(lag.size()) != d) throw DomainError("estimate_covariance: lag dimension");
        std::vector<std::size_t> partner(g.size());
        for (std::size_t j = 0; j < g.size(); ++j) {
            g.unflatten(j, idx);
            for (int a = 0; a < d; ++a) shifted[a] = idx[a] + lag[a];
            partner[j] = g.flatten(shifted);
        }
        const double n = static_cast<double>(realizations.size());
        double sum = 0.0, sum2 = 0.0;
        for (const auto& r : realizations) {
            double s = 0.0;
            for (std::size_t j = 0; j < g.size(); ++j) s += r.values[j] * r.values[partner[j]];
            s /= static_cast<double>(g.size());
            sum += s;
            sum2 += s * s;
        }
        const double mean = sum / n;
        const double var = std::max(0.0, (sum2 - n * mean * mean) / (n - 1.0));
        out.push_back({lag, mean, std::sqrt(var / n)});
    }
    return out;
}

}  // namespace hsim
