#include "hsim/homogenize.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>

#include "hsim/errors.hpp"
#include "hsim/quadrature.hpp"

namespace hsim {

namespace {

void require_regime(int d, double m_order) {
    if (!(d > m_order)) throw RegimeError("effective potential requires d > m");
}

double power_symbol(double r, double m) { return r == 0.0 ? 0.0 : std::pow(r, m); }

}  // namespace

EffectivePotential compute_rho(const SpectrumModel& spectrum, int d, double m_order) {
    spectrum.validate();
    require_regime(d, m_order);
    EffectivePotential out;
    out.d = d;
    out.m_order = m_order;
    out.spectrum = spectrum;
    if (spectrum.amplitude == 0.0) return out;
    const double p = d - 1.0 - m_order;
    auto f = [&](double r) { return radial_spectrum(spectrum, r) * std::pow(r, p); };
    const auto res = quad::endpoint_singular(f, 0.0, support_radius(spectrum), 1e-13);
    out.rho = sphere_area(d) * res.value;
    out.quadrature_error = sphere_area(d) * res.error;
    if (!(out.quadrature_error <= 1e-8 * out.rho)) throw NumericError("compute_rho: quadrature not certified");
    return out;
}

double rho_shifted(const SpectrumModel& spectrum, int d, double m_order, double e) {
    spectrum.validate();
    require_regime(d, m_order);
    if (spectrum.amplitude == 0.0) return 0.0;
    e = std::abs(e);
    const double p = d - 1.0 - m_order;
    auto f = [&](double r) { return shifted_shell(spectrum, r, e) * std::pow(r, p); };
    const double top = e + support_radius(spectrum);
    double value = 0.0, error = 0.0;
    if (e > 0.0) {
        const auto a = quad::endpoint_singular(f, 0.0, e, 1e-12);
        const auto b = quad::adaptive(f, e, top, 1e-12);
        value = a.value + b.value;
        error = a.error + b.error;
    } else {
        const auto a = quad::endpoint_singular(f, 0.0, top, 1e-12);
        value = a.value;
        error = a.error;
    }
    if (!(error <= 1e-7 * std::abs(value))) throw NumericError("compute_rho_eps: quadrature not certified");
    return value;
}

double compute_rho_eps(const SpectrumModel& spectrum, int d, double m_order, double epsilon,
                       std::span<const double> xi) {
    if (!(epsilon > 0.0)) throw DomainError("compute_rho_eps: epsilon must be positive");
    if (static_cast<int>(xi.size()) != d) throw DomainError("compute_rho_eps: xi dimension");
    return rho_shifted(spectrum, d, m_order, epsilon * norm2(xi));
}

WaveFunction homogenized_solution(const WaveFunction& u0hat, double t, double rho, double m_order) {
    WaveFunction w = u0hat.in_frequency();
    for (std::size_t k = 0; k < w.values.size(); ++k) {
        const double a = power_symbol(std::sqrt(w.grid.xi_squared(k)), m_order);
        w.values[k] *= std::polar(1.0, (a - rho) * t);
    }
    return w;
}

cplx homogenized_mode(cplx u0hat_at_xi, double xi_norm, double t, double rho, double m_order) {
    return std::polar(1.0, (power_symbol(xi_norm, m_order) - rho) * t) * u0hat_at_xi;
}

double VolterraKernel::sup_abs() const {
    double s = 0.0;
    for (const cplx& z : g) s = std::max(s, std::abs(z));
    return s;
}

VolterraKernel tabulate_volterra_kernel(const SpectrumModel& spectrum, int d, double m_order, double epsilon,
                                        double xi_norm, double step, std::size_t count) {
    VolterraKernel k;
    k.epsilon = epsilon;
    k.xi_norm = xi_norm;
    k.m_order = m_order;
    k.d = d;
    k.step = step;
    k.g.assign(count, cplx(0.0));
    if (spectrum.amplitude == 0.0 || count == 0) return k;

    // zeta = eps xi_1: g(tau) = eps^{-m} \int_0^inf r^{d-1} Ang(r, eps|xi|) e^{i tau r^m / eps^m} dr
    const double e = epsilon * xi_norm;
    const double top = e + support_radius(spectrum, 1e-16);
    const double em = std::pow(epsilon, m_order);
    const double tau_max = step * static_cast<double>(count - 1);
    const double total_phase = tau_max * power_symbol(top, m_order) / em;
    const int panels = std::max(16, static_cast<int>(std::ceil(total_phase / 4.0)) + static_cast<int>(4 * top));
    const auto nodes = quad::gauss_legendre_panels(0.0, top, panels, 16);

    const std::size_t n = nodes.x.size();
    std::vector<cplx> base(n), rot(n), cur(n, cplx(1.0));
    for (std::size_t i = 0; i < n; ++i) {
        const double r = nodes.x[i];
        base[i] = nodes.w[i] * std::pow(r, d - 1) * shifted_shell(spectrum, r, e) / em;
        rot[i] = std::polar(1.0, step * power_symbol(r, m_order) / em);
    }
    for (std::size_t j = 0; j < count; ++j) {
        cplx s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            s += base[i] * cur[i];
            cur[i] *= rot[i];
        }
        k.g[j] = s;
        if (j % 256 == 255)
            for (auto& c : cur) c /= std::abs(c);
    }
    return k;
}

void write_kernel_csv(const std::string& path, const VolterraKernel& kernel) {
    std::ofstream out(path);
    if (!out) throw DomainError("cannot open " + path);
    out << "tau,re,im\n" << std::setprecision(17);
    for (std::size_t j = 0; j < kernel.g.size(); ++j)
        out << kernel.step * j << ',' << kernel.g[j].real() << ',' << kernel.g[j].imag() << '\n';
}

namespace {

/// Marches W' = -\int_0^t G~(s) W(t - s) ds, G~(s) = g(s) e^{-ias}, on t_n = n h
/// using every `stride`-th kernel sample (h = stride * kernel step).
std::vector<cplx> march(const VolterraKernel& k, double a, std::size_t stride, std::size_t steps, cplx w0) {
    const double h = k.step * stride;
    std::vector<cplx> gt(steps + 1);
    for (std::size_t j = 0; j <= steps; ++j) gt[j] = k.g[j * stride] * std::polar(1.0, -a * h * j);
    std::vector<cplx> w(steps + 1);
    w[0] = w0;
    cplx mem = 0.0;  // M_n
    const cplx denom = 1.0 + 0.25 * h * h * gt[0];
    for (std::size_t n = 0; n < steps; ++n) {
        // R_{n+1} = h [sum_{j=1}^{n} G~_j W_{n+1-j} + G~_{n+1} W_0 / 2]
        cplx r = 0.5 * gt[n + 1] * w[0];
        for (std::size_t j = 1; j <= n; ++j) r += gt[j] * w[n + 1 - j];
        r *= h;
        w[n + 1] = (w[n] - 0.5 * h * (mem + r)) / denom;
        mem = 0.5 * h * gt[0] * w[n + 1] + r;
    }
    return w;
}

/// Four-point Lagrange interpolation of samples on t_n = n h.
cplx interpolate(const std::vector<cplx>& w, double h, double t) {
    const double x = t / h;
    const long last = static_cast<long>(w.size()) - 1;
    if (last < 3) {
        const long i = std::clamp<long>(static_cast<long>(std::floor(x)), 0, std::max<long>(last - 1, 0));
        if (last == 0) return w[0];
        const double f = x - i;
        return (1.0 - f) * w[i] + f * w[i + 1];
    }
    long i0 = std::clamp<long>(static_cast<long>(std::floor(x)) - 1, 0, last - 3);
    cplx s = 0.0;
    for (int a = 0; a < 4; ++a) {
        double l = 1.0;
        for (int b = 0; b < 4; ++b)
            if (b != a) l *= (x - (i0 + b)) / static_cast<double>(a - b);
        s += l * w[i0 + a];
    }
    return s;
}

}  // namespace

VolterraResult solve_volterra_simple(cplx u0hat_at_xi, std::span<const double> xi,
                                     std::span<const double> t_grid, const SpectrumModel& spectrum, int d,
                                     double m_order, double epsilon) {
    spectrum.validate();
    require_regime(d, m_order);
    if (!(epsilon > 0.0)) throw DomainError("solve_volterra_simple: epsilon must be positive");
    if (static_cast<int>(xi.size()) != d) throw DomainError("solve_volterra_simple: xi dimension");
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        if (!(t_grid[i] >= 0.0) || (i > 0 && !(t_grid[i] > t_grid[i - 1])))
            throw DomainError("solve_volterra_simple: t_grid must be non-negative and increasing");
    }
    VolterraResult out;
    out.t.assign(t_grid.begin(), t_grid.end());
    out.U.resize(t_grid.size());
    if (t_grid.empty()) return out;

    const double xn = norm2(xi);
    const double a = power_symbol(xn, m_order);
    if (spectrum.amplitude == 0.0) {
        for (std::size_t i = 0; i < t_grid.size(); ++i) out.U[i] = std::polar(1.0, a * t_grid[i]) * u0hat_at_xi;
        return out;
    }

    const double tmax = t_grid.back();
    double h = std::pow(epsilon, m_order) / 40.0;
    if (a > 0.0) h = std::min(h, 0.1 / a);
    std::size_t coarse = std::max<std::size_t>(4, static_cast<std::size_t>(std::ceil(tmax / (2.0 * h))));
    const std::size_t fine = 2 * coarse;
    h = tmax > 0.0 ? tmax / static_cast<double>(fine) : h;
    out.internal_step = h;

    const auto kernel = tabulate_volterra_kernel(spectrum, d, m_order, epsilon, xn, h, fine + 1);
    out.kernel_sup = kernel.sup_abs();
    const auto wf = march(kernel, a, 1, fine, u0hat_at_xi);
    const auto wc = march(kernel, a, 2, coarse, u0hat_at_xi);
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        const double t = t_grid[i];
        const cplx f = interpolate(wf, h, t);
        const cplx c = interpolate(wc, 2.0 * h, t);
        out.U[i] = std::polar(1.0, a * t) * (4.0 * f - c) / 3.0;
        out.truncation_estimate = std::max(out.truncation_estimate, std::abs(f - c) / 3.0);
    }
    return out;
}

}  // namespace hsim
