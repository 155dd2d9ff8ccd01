#include "hsim/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

#include "hsim/errors.hpp"

namespace hsim {

Grid::Grid(int dimension, int points_per_axis, double box_length)
    : d_(dimension), n_(points_per_axis), l_(box_length) {
    if (d_ < 1) throw DomainError("grid dimension must be positive");
    if (n_ < 2 || n_ % 2 != 0) throw DomainError("grid points per axis must be even and >= 2");
    if (!(l_ > 0.0) || !std::isfinite(l_)) throw DomainError("grid box length must be positive");
    double total = std::pow(static_cast<double>(n_), d_);
    if (total > static_cast<double>(1u << 27)) throw DomainError("grid too large");
    size_ = static_cast<std::size_t>(total);
}

double Grid::cell_volume() const { return std::pow(spacing(), d_); }
double Grid::dxi() const { return 2.0 * std::numbers::pi / l_; }

void Grid::unflatten(std::size_t flat, std::span<int> out) const {
    for (int a = d_ - 1; a >= 0; --a) {
        out[a] = static_cast<int>(flat % n_);
        flat /= n_;
    }
}

std::size_t Grid::flatten(std::span<const int> idx) const {
    std::size_t flat = 0;
    for (int a = 0; a < d_; ++a) {
        const int k = ((idx[a] % n_) + n_) % n_;
        flat = flat * n_ + static_cast<std::size_t>(k);
    }
    return flat;
}

std::size_t Grid::negate(std::size_t flat) const {
    std::size_t out = 0, stride = 1;
    for (int a = 0; a < d_; ++a) {
        const std::size_t k = flat % n_;
        flat /= n_;
        out += ((n_ - k) % n_) * stride;
        stride *= n_;
    }
    return out;
}

double Grid::xi_squared(std::size_t flat) const {
    const double c = dxi();
    double s = 0.0;
    for (int a = 0; a < d_; ++a) {
        const double x = c * signed_index(static_cast<int>(flat % n_));
        flat /= n_;
        s += x * x;
    }
    return s;
}

void Grid::xi(std::size_t flat, std::span<double> out) const {
    const double c = dxi();
    for (int a = d_ - 1; a >= 0; --a) {
        out[a] = c * signed_index(static_cast<int>(flat % n_));
        flat /= n_;
    }
}

void Grid::position(std::size_t flat, std::span<double> out) const {
    const double h = spacing();
    for (int a = d_ - 1; a >= 0; --a) {
        out[a] = h * signed_index(static_cast<int>(flat % n_));
        flat /= n_;
    }
}

double Grid::inner_frequency_radius() const { return dxi() * (n_ / 2 - 1); }
double Grid::max_abs_xi() const { return dxi() * (n_ / 2) * std::sqrt(static_cast<double>(d_)); }

namespace {

std::mutex plan_mutex;

fftw_plan get_plan(const Grid& g, int sign) {
    static std::map<std::tuple<int, int, int>, fftw_plan> cache;
    std::lock_guard<std::mutex> lock(plan_mutex);
    const auto key = std::make_tuple(g.dimension(), g.points(), sign);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
    std::vector<int> dims(g.dimension(), g.points());
    fftw_complex* buf = fftw_alloc_complex(g.size());
    fftw_plan p = fftw_plan_dft(g.dimension(), dims.data(), buf, buf, sign,
                                FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(buf);
    if (!p) throw NumericError("FFTW plan creation failed");
    cache.emplace(key, p);
    return p;
}

void run(const Grid& g, std::span<cplx> data, int sign) {
    if (data.size() != g.size()) throw DomainError("fft: buffer size does not match grid");
    auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(get_plan(g, sign), ptr, ptr);
}

}  // namespace

void fft_forward(const Grid& g, std::span<cplx> data) { run(g, data, FFTW_FORWARD); }
void fft_backward(const Grid& g, std::span<cplx> data) { run(g, data, FFTW_BACKWARD); }

double WaveFunction::norm() const {
    double s = 0.0;
    for (const cplx& z : values) s += std::norm(z);
    return std::sqrt(grid.cell_volume() * s);
}

WaveFunction& WaveFunction::to_frequency() {
    if (rep == Representation::frequency) return *this;
    fft_forward(grid, values);
    const double scale = 1.0 / std::sqrt(static_cast<double>(grid.size()));
    for (cplx& z : values) z *= scale;
    rep = Representation::frequency;
    return *this;
}

WaveFunction& WaveFunction::to_physical() {
    if (rep == Representation::physical) return *this;
    fft_backward(grid, values);
    const double scale = 1.0 / std::sqrt(static_cast<double>(grid.size()));
    for (cplx& z : values) z *= scale;
    rep = Representation::physical;
    return *this;
}

WaveFunction WaveFunction::in_frequency() const {
    WaveFunction w = *this;
    return std::move(w.to_frequency());
}

WaveFunction WaveFunction::in_physical() const {
    WaveFunction w = *this;
    return std::move(w.to_physical());
}

void require_same_grid(const Grid& a, const Grid& b, const char* what) {
    if (!(a == b)) throw DomainError(std::string(what) + ": grid mismatch");
}

}  // namespace hsim
