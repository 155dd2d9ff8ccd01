#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hsim/math.hpp"

namespace hsim {

/// Periodic lattice of N^d points on the box [-L/2, L/2)^d, flattened row-major
/// (last axis fastest). Point j sits at h * signed_index(j) per axis.
class Grid {
public:
    Grid() = default;
    /// Throws DomainError for odd N, N < 2, L <= 0, d < 1 or more than 2^27 points.
    Grid(int dimension, int points_per_axis, double box_length);

    int dimension() const { return d_; }
    int points() const { return n_; }
    double length() const { return l_; }
    double spacing() const { return l_ / n_; }
    std::size_t size() const { return size_; }
    /// h^d, the quadrature weight of one grid point.
    double cell_volume() const;
    /// 2 pi / L, the frequency lattice spacing.
    double dxi() const;

    /// Signed lattice index of axis component k in {0..N-1}: k or k - N.
    int signed_index(int k) const { return k < n_ / 2 ? k : k - n_; }
    /// Per-axis components of a flat index.
    void unflatten(std::size_t flat, std::span<int> out) const;
    std::size_t flatten(std::span<const int> idx) const;
    /// Flat index of the lattice mode -k.
    std::size_t negate(std::size_t flat) const;

    /// |xi_k|^2 for flat index k.
    double xi_squared(std::size_t flat) const;
    void xi(std::size_t flat, std::span<double> out) const;
    void position(std::size_t flat, std::span<double> out) const;

    /// Largest radius of a ball inside the resolved frequency box: 2 pi (N/2 - 1) / L.
    double inner_frequency_radius() const;
    double max_abs_xi() const;

    bool operator==(const Grid& o) const { return d_ == o.d_ && n_ == o.n_ && l_ == o.l_; }

private:
    int d_ = 1;
    int n_ = 2;
    double l_ = 1.0;
    std::size_t size_ = 2;
};

/// In-place unnormalized DFT over the grid. forward: sum u_j e^{-i xi_k x_j};
/// backward: sum c_k e^{+i xi_k x_j}. Thread-safe.
void fft_forward(const Grid& g, std::span<cplx> data);
void fft_backward(const Grid& g, std::span<cplx> data);

enum class Representation { physical, frequency };

/// Complex field on a grid. Frequency coefficients use the unitary DFT, so the
/// discrete L2 norm sqrt(h^d sum |u|^2) is the same in both representations.
struct WaveFunction {
    Grid grid;
    std::vector<cplx> values;
    Representation rep = Representation::physical;

    WaveFunction() = default;
    WaveFunction(const Grid& g, Representation r = Representation::physical)
        : grid(g), values(g.size()), rep(r) {}

    double norm() const;
    WaveFunction& to_frequency();
    WaveFunction& to_physical();
    WaveFunction in_frequency() const;
    WaveFunction in_physical() const;
};

/// Throws DomainError unless both live on the same grid.
void require_same_grid(const Grid& a, const Grid& b, const char* what);

}  // namespace hsim
