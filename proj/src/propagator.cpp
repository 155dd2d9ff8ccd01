#include "hsim/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "hsim/errors.hpp"

namespace hsim {

namespace {

double symbol(double xi2, double m) {
    if (m == 2.0) return xi2;
    return xi2 == 0.0 ? 0.0 : std::pow(xi2, 0.5 * m);
}

/// e^{it|xi_k|^m} / N^d for every mode: the unnormalized FFT pair folded in.
std::vector<cplx> kinetic_phases(const Grid& g, double t, double m) {
    std::vector<cplx> ph(g.size());
    const double scale = 1.0 / static_cast<double>(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) ph[k] = scale * std::polar(1.0, t * symbol(g.xi_squared(k), m));
    return ph;
}

std::vector<cplx> potential_phases(const FieldRealization& V, double t) {
    std::vector<cplx> ph(V.values.size());
    for (std::size_t j = 0; j < ph.size(); ++j) ph[j] = std::polar(1.0, -t * V.values[j]);
    return ph;
}

void multiply(std::vector<cplx>& u, const std::vector<cplx>& ph) {
    for (std::size_t j = 0; j < u.size(); ++j) u[j] *= ph[j];
}

void free_inplace(const Grid& g, std::vector<cplx>& u, const std::vector<cplx>& ph) {
    fft_forward(g, u);
    multiply(u, ph);
    fft_backward(g, u);
}

void check_guard(const FieldRealization& V, double dt, double m) {
    const double adm = admissible_dt(V, m);
    if (dt > adm * (1.0 + 1e-12))
        throw ConfigurationError("time step " + std::to_string(dt) + " violates the accuracy guards; use dt <= " +
                                     std::to_string(adm),
                                 adm);
}

}  // namespace

WaveFunction init_packet(const Grid& grid, double sigma0, std::span<const double> center,
                         std::span<const double> momentum) {
    const int d = grid.dimension();
    if (static_cast<int>(center.size()) != d || static_cast<int>(momentum.size()) != d)
        throw DomainError("init_packet: center/momentum dimension mismatch");
    if (!(sigma0 >= 4.0 * grid.spacing()))
        throw ResolutionError("init_packet: sigma0 must be at least 4 grid spacings",
                              2 * static_cast<int>(std::ceil(grid.length() / (8.0 * sigma0))));
    WaveFunction u(grid);
    std::vector<double> x(d);
    const double L = grid.length();
    for (std::size_t j = 0; j < grid.size(); ++j) {
        grid.position(j, x);
        double r2 = 0.0, phase = 0.0;
        for (int a = 0; a < d; ++a) {
            const double dx = std::remainder(x[a] - center[a], L);
            r2 += dx * dx;
            phase += momentum[a] * x[a];
        }
        u.values[j] = std::polar(std::exp(-r2 / (2.0 * sigma0 * sigma0)), phase);
    }
    const double n = u.norm();
    for (cplx& z : u.values) z /= n;
    return u;
}

WaveFunction free_step(const WaveFunction& u, double t, double m_order) {
    WaveFunction w = u.in_frequency();
    for (std::size_t k = 0; k < w.values.size(); ++k)
        w.values[k] *= std::polar(1.0, t * symbol(w.grid.xi_squared(k), m_order));
    if (u.rep == Representation::physical) w.to_physical();
    return w;
}

WaveFunction potential_step(const WaveFunction& u, const FieldRealization& V, double t) {
    require_same_grid(u.grid, V.grid, "potential_step");
    WaveFunction w = u.in_physical();
    multiply(w.values, potential_phases(V, t));
    if (u.rep == Representation::frequency) w.to_frequency();
    return w;
}

double admissible_dt(const FieldRealization& V, double m_order) {
    const double vmax = V.max_abs();
    const double kmax = symbol(V.grid.max_abs_xi() * V.grid.max_abs_xi(), m_order);
    double dt = kmax > 0.0 ? std::numbers::pi / kmax : INFINITY;
    if (vmax > 0.0) dt = std::min(dt, 0.2 / vmax);
    return dt;
}

StepPlan plan_steps(double T, double dt) {
    if (!(T >= 0.0) || !(dt > 0.0)) throw DomainError("plan_steps: need T >= 0 and dt > 0");
    StepPlan p;
    p.steps = std::max<long>(1, static_cast<long>(std::ceil(T / dt - 1e-9)));
    p.dt = T / static_cast<double>(p.steps);
    return p;
}

WaveFunction evolve(const WaveFunction& u0, const FieldRealization& V, double T, const SolverConfig& cfg) {
    require_same_grid(u0.grid, V.grid, "evolve");
    const StepPlan plan = plan_steps(T, cfg.dt);
    check_guard(V, plan.dt, cfg.m_order);
    const Grid& g = u0.grid;
    WaveFunction u = u0.in_physical();
    if (T == 0.0) return u;
    const auto half = potential_phases(V, 0.5 * plan.dt);
    const auto full = potential_phases(V, plan.dt);
    const auto kin = kinetic_phases(g, plan.dt, cfg.m_order);
    multiply(u.values, half);
    for (long s = 1; s <= plan.steps; ++s) {
        free_inplace(g, u.values, kin);
        multiply(u.values, s < plan.steps ? full : half);
    }
    return u;
}

WaveFunction duhamel_term(int n, const WaveFunction& u0, const FieldRealization& V, double T,
                          const SolverConfig& cfg) {
    if (n < 0 || n > 4) throw UnsupportedOrderError("duhamel_term supports 0 <= n <= 4");
    require_same_grid(u0.grid, V.grid, "duhamel_term");
    const Grid& g = u0.grid;
    if (n == 0) return free_step(u0.in_physical(), T, cfg.m_order);
    const StepPlan plan = plan_steps(T, cfg.dt);
    check_guard(V, plan.dt, cfg.m_order);
    const auto kin = kinetic_phases(g, plan.dt, cfg.m_order);
    const std::size_t size = g.size();

    // psi[k]: order-k part of the node-weighted splitting product after each node
    std::vector<std::vector<cplx>> psi(n + 1, std::vector<cplx>(size));
    psi[0] = u0.in_physical().values;
    auto apply_node = [&](double w) {
        // psi^(k) <- sum_mu (-i w dt V)^mu / mu! psi^(k - mu), highest order first
        for (int k = n; k >= 1; --k) {
            for (std::size_t j = 0; j < size; ++j) {
                const cplx a = -I * (w * plan.dt * V.values[j]);
                cplx term = 1.0, acc = psi[k][j];
                for (int mu = 1; mu <= k; ++mu) {
                    term *= a / static_cast<double>(mu);
                    acc += term * psi[k - mu][j];
                }
                psi[k][j] = acc;
            }
        }
    };
    apply_node(0.5);
    for (long s = 1; s <= plan.steps; ++s) {
        for (int k = 0; k <= n; ++k) free_inplace(g, psi[k], kin);
        apply_node(s < plan.steps ? 1.0 : 0.5);
    }
    WaveFunction out(g);
    out.values = std::move(psi[n]);
    return out;
}

double l2_error(const WaveFunction& u, const WaveFunction& v) {
    require_same_grid(u.grid, v.grid, "l2_error");
    const WaveFunction* b = &v;
    WaveFunction tmp;
    if (u.rep != v.rep) {
        tmp = u.rep == Representation::physical ? v.in_physical() : v.in_frequency();
        b = &tmp;
    }
    double s = 0.0;
    for (std::size_t j = 0; j < u.values.size(); ++j) s += std::norm(u.values[j] - b->values[j]);
    return std::sqrt(u.grid.cell_volume() * s);
}

}  // namespace hsim
