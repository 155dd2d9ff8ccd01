#pragma once

#include <array>
#include <span>
#include <utility>
#include <vector>

#include "hsim/math.hpp"
#include "hsim/spectrum.hpp"

namespace hsim {

enum class GraphClass { crossing, simple, noncrossing_nonsimple };
const char* to_string(GraphClass c);

/// Perfect matching of vertices 1..n_left+n_right (pairs (k, l), k < l).
struct PairingGraph {
    int n_left = 0;
    int n_right = 0;
    std::vector<std::pair<int, int>> pairs;
    GraphClass cls = GraphClass::simple;
    std::vector<int> A0;  ///< first indices k, increasing
    std::vector<int> B0;  ///< second indices l, in the same order
    /// Pairs linking the two sides with a gap: k <= n_left and l >= n_left + 2.
    int side_links = 0;
};

/// Crossing when two pairs interleave (k1 < k2 < l1 < l2); simple when every
/// pair joins neighbours (l = k + 1); otherwise non-crossing non-simple.
GraphClass classify(const std::vector<std::pair<int, int>>& pairs);

/// All (total-1)!! pairings, split n_left = total/2 unless given. total even, 2..12.
std::vector<PairingGraph> enumerate_pairings(int total, int n_left = -1);

struct ClassCounts {
    long total = 0;
    long crossing = 0;
    long noncrossing_nonsimple = 0;
    long simple = 0;
};
ClassCounts count_classes(int total);

/// Simplex kernel K(t; a_0..a_n) = (-1)^n f[a_0, ..., a_n] for f(z) = e^{itz},
/// evaluated at a_k + i eta when eta > 0. |K| <= t^n / n!.
cplx eval_K(double t, std::span<const double> freqs, double eta = 0.0);

struct KResolvent {
    cplx direct;
    cplx contour;
    double discrepancy = 0.0;
    /// Bound on the neglected part of the alpha integral.
    double truncation_estimate = 0.0;
    double cutoff = 0.0;
};

/// Compares eval_K(t, freqs) with (i e^{t eta} / 2 pi) \int e^{-i alpha t} prod (alpha + a_k + i eta)^{-1} d alpha.
/// The alpha range is [-cutoff, cutoff] (automatic when cutoff <= 0); with
/// tails = true the remainder is added from its asymptotic expansion.
/// Needs 1 <= |freqs| <= 3, t > 0 and eta > 0.
KResolvent verify_K_resolvent(double t, std::span<const double> freqs, double eta, double cutoff = 0.0,
                              bool tails = true);

/// Mean of the second-order Duhamel term at xi0 for the single pairing:
/// \int K(t; |xi0|^m, |xi1|^m, |xi0|^m) eps^{d-m} R^(eps(xi1 - xi0)) dxi1 * u0(xi0).
cplx mean_wavefunction_order2(double t, std::span<const double> xi0, const SpectrumModel& spectrum, int d,
                              double m_order, double epsilon, cplx u0hat_at_xi0);

/// Theta_{alpha,eta}(xi0) = \int R^(z - eps xi0) / (eps^m alpha + |z|^m + i eps^m eta) dz, eta > 0.
cplx compute_Theta(double alpha, double eta, std::span<const double> xi0, const SpectrumModel& spectrum, int d,
                   double m_order, double epsilon);

/// Theta(xi0): limit eta -> 0+ of Theta_{-|xi0|^m, eta}(xi0).
cplx compute_Theta_limit(std::span<const double> xi0, const SpectrumModel& spectrum, int d, double m_order,
                         double epsilon);

/// (-it)^{n/2} / (n/2)! e^{it|xi0|^m} Theta(xi0)^{n/2} u0(xi0) for even n <= 8.
cplx simple_leading_term(int n, double t, std::span<const double> xi0, const SpectrumModel& spectrum, int d,
                         double m_order, double epsilon, cplx u0hat_at_xi0);

}  // namespace hsim
