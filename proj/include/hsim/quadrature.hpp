#pragma once

#include <functional>
#include <span>
#include <vector>

#include "hsim/math.hpp"

namespace hsim::quad {

template <class T>
struct Result {
    T value{};
    double error = 0.0;  ///< absolute error estimate
};

using RealFn = std::function<double(double)>;
using ComplexFn = std::function<cplx(double)>;

/// Adaptive Gauss-Kronrod on [a, b] (b may be +infinity). `rel_tol` is
/// relative to the L1 norm of the integrand on the interval.
Result<double> adaptive(const RealFn& f, double a, double b, double rel_tol = 1e-10,
                        unsigned max_depth = 20);
Result<cplx> adaptive_complex(const ComplexFn& f, double a, double b, double rel_tol = 1e-10,
                      unsigned max_depth = 20);

/// Sum of adaptive integrals over consecutive intervals of `breaks`
/// (sorted, duplicates skipped).
Result<double> adaptive_pieces(const RealFn& f, std::span<const double> breaks,
                               double rel_tol = 1e-10, unsigned max_depth = 20);
Result<cplx> adaptive_pieces_complex(const ComplexFn& f, std::span<const double> breaks,
                             double rel_tol = 1e-10, unsigned max_depth = 20);

/// Double-exponential rule for integrands with endpoint singularities.
Result<double> endpoint_singular(const RealFn& f, double a, double b, double rel_tol = 1e-12);

/// Composite Gauss-Legendre rule: `panels` equal panels on [a, b], `order`
/// points each (order in {8, 16, 20, 30}).
struct NodeSet {
    std::vector<double> x;
    std::vector<double> w;
};
NodeSet gauss_legendre_panels(double a, double b, int panels, int order = 16);

/// Integral of F(|r w - e u|) over the unit sphere w in R^d, u a fixed unit
/// vector: the angular part of a shifted radial integrand.
double shell_average(const RealFn& profile, double r, double e, int d, double rel_tol = 1e-12);

}  // namespace hsim::quad
