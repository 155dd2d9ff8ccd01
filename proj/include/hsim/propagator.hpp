#pragma once

#include <span>

#include "hsim/field.hpp"
#include "hsim/grid.hpp"

namespace hsim {

enum class Scheme { strang };

struct SolverConfig {
    double dt = 1e-3;
    double m_order = 2.0;
    Scheme scheme = Scheme::strang;
};

/// Normalized Gaussian packet exp(-|x - c|^2 / (2 sigma0^2) + i p.x), distances
/// taken periodically. Throws ResolutionError if sigma0 < 4h.
WaveFunction init_packet(const Grid& grid, double sigma0, std::span<const double> center,
                         std::span<const double> momentum);

/// e^{it|D|^m}: multiplies each mode by e^{it|xi_k|^m}. Output keeps the input representation.
WaveFunction free_step(const WaveFunction& u, double t, double m_order);

/// Pointwise phase e^{-itV(x)}.
WaveFunction potential_step(const WaveFunction& u, const FieldRealization& V, double t);

/// Largest dt meeting dt max|V| <= 0.2 and dt max|xi_k|^m <= pi.
double admissible_dt(const FieldRealization& V, double m_order);

/// Number of steps and effective step used for a run of length T.
struct StepPlan {
    long steps = 0;
    double dt = 0.0;
};
StepPlan plan_steps(double T, double dt);

/// Strang splitting for e^{iT(P(D) - V)} u0. Throws ConfigurationError if the
/// effective step violates the accuracy guards. Output is in physical space.
WaveFunction evolve(const WaveFunction& u0, const FieldRealization& V, double T, const SolverConfig& cfg);

/// n-th Duhamel iterate at time T (n <= 4), discretized on the evolve time
/// nodes: sum over n of these terms reproduces evolve order by order in V.
WaveFunction duhamel_term(int n, const WaveFunction& u0, const FieldRealization& V, double T,
                          const SolverConfig& cfg);

/// Discrete L2 distance sqrt(h^d sum |u - v|^2).
double l2_error(const WaveFunction& u, const WaveFunction& v);

/// True inside the range d > m >= 2 covered by the convergence theorem.
inline bool in_theorem_regime(int d, double m_order) { return d > m_order && m_order >= 2.0; }

}  // namespace hsim
