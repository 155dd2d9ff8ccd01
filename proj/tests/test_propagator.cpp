#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "hsim/errors.hpp"
#include "hsim/propagator.hpp"

using namespace hsim;

namespace {

const SpectrumModel kGauss1{SpectrumKind::gaussian, 1.0, 1.0 / std::numbers::sqrt2, 1};

WaveFunction plane_wave(const Grid& g, std::size_t mode) {
    WaveFunction u(g, Representation::frequency);
    u.values[mode] = 1.0;
    return u;
}

double max_diff(const WaveFunction& a, const WaveFunction& b) {
    const auto pa = a.in_physical(), pb = b.in_physical();
    double m = 0.0;
    for (std::size_t j = 0; j < pa.values.size(); ++j) m = std::max(m, std::abs(pa.values[j] - pb.values[j]));
    return m;
}

FieldRealization scaled(FieldRealization V, double a) {
    for (double& v : V.values) v *= a;
    return V;
}

}  // namespace

TEST_CASE("packet normalization and symmetry") {
    const Grid g(3, 64, 16.0);
    std::array<double, 3> c{0, 0, 0}, p{0, 0, 0};
    const auto u = init_packet(g, 1.0, c, p);
    CHECK(u.norm() == doctest::Approx(1.0).epsilon(1e-12));
    const auto uh = u.in_frequency();
    CHECK(uh.norm() == doctest::Approx(1.0).epsilon(1e-12));
    double peak = 0.0;
    for (const auto& v : uh.values) peak = std::max(peak, std::abs(v));
    double max_imag = 0.0;
    int negative = 0;
    for (const auto& v : uh.values) {
        max_imag = std::max(max_imag, std::abs(v.imag()));
        if (std::abs(v) > 1e-8 * peak && v.real() <= 0.0) ++negative;
    }
    CHECK(max_imag <= 1e-12 * peak);
    CHECK(negative == 0);
    // radial on the lattice: permuted axes give the same value
    std::array<int, 3> idx{1, 3, 5}, perm{5, 1, 3};
    CHECK(std::abs(uh.values[g.flatten(idx)] - uh.values[g.flatten(perm)]) <= 1e-14 * peak);
}

TEST_CASE("packet momentum sits at the nearest lattice frequency") {
    const Grid g(2, 32, 10.0);
    std::array<double, 2> c{0.5, -1.0}, p{3.3, -1.4};
    const auto uh = init_packet(g, 1.3, c, p).to_frequency();
    const auto it = std::max_element(uh.values.begin(), uh.values.end(),
                                     [](cplx a, cplx b) { return std::abs(a) < std::abs(b); });
    std::array<double, 2> xi{};
    g.xi(static_cast<std::size_t>(it - uh.values.begin()), xi);
    for (int a = 0; a < 2; ++a) CHECK(std::abs(xi[a] - p[a]) <= 0.5 * g.dxi() + 1e-12);
}

TEST_CASE("unresolved packet") {
    const Grid g(2, 16, 16.0);
    std::array<double, 2> c{0, 0}, p{0, 0};
    CHECK_THROWS_AS(init_packet(g, 3.9, c, p), ResolutionError);
    CHECK_NOTHROW(init_packet(g, 4.0, c, p));
}

TEST_CASE("free step: identity, plane wave phase, semigroup, unitarity") {
    const Grid g(2, 32, 5.0);
    std::array<double, 2> c{0.3, 0}, p{1.0, 2.0};
    const auto u = init_packet(g, 0.8, c, p);
    CHECK(max_diff(free_step(u, 0.0, 2.0), u) <= 1e-15);

    const std::size_t mode = 37;
    const double m = 1.5;
    const auto w = free_step(plane_wave(g, mode), 0.7, m);
    const cplx expected = std::exp(I * 0.7 * std::pow(g.xi_squared(mode), m / 2));
    CHECK(std::abs(w.values[mode] - expected) <= 1e-15);

    const auto a = free_step(free_step(u, 0.31, m), 0.45, m);
    const auto b = free_step(u, 0.76, m);
    CHECK(max_diff(a, b) <= 1e-12);
    CHECK(b.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(b.rep == Representation::physical);

    const auto ah = u.in_frequency(), bh = free_step(ah, 0.76, m);
    for (std::size_t k = 0; k < ah.values.size(); ++k)
        CHECK(std::abs(bh.values[k]) == doctest::Approx(std::abs(ah.values[k])).epsilon(1e-13));
}

TEST_CASE("potential step") {
    const Grid g(1, 128, 20.0);
    std::array<double, 1> c{0}, p{0};
    const auto u = init_packet(g, 1.0, c, p);
    CHECK(max_diff(potential_step(u, constant_field(g, 0.0), 0.8), u) == 0.0);
    const auto w = potential_step(u, constant_field(g, 2.5), 0.8);
    for (std::size_t j = 0; j < u.values.size(); ++j)
        CHECK(std::abs(w.values[j] - std::exp(-I * 2.0) * u.values[j]) <= 1e-15);
    const auto V = sample_scaled_potential(g, kGauss1, 0.5, 2.0, 3);
    CHECK(potential_step(u, V, 1.3).norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(potential_step(u, constant_field(Grid(1, 64, 20.0), 1.0), 1.0), DomainError);
}

TEST_CASE("evolve oracles and guards") {
    const Grid g(2, 32, 8.0);
    std::array<double, 2> c{0, 0}, p{1, 0};
    const auto u = init_packet(g, 1.0, c, p);
    SolverConfig cfg{0.002, 2.0};
    CHECK(max_diff(evolve(u, constant_field(g, 0.0), 0.5, cfg), free_step(u, 0.5, 2.0)) <= 1e-12);

    const auto vc = evolve(u, constant_field(g, 3.0), 0.5, cfg);
    auto ref = free_step(u, 0.5, 2.0);
    for (auto& v : ref.values) v *= std::exp(-I * 1.5);
    CHECK(max_diff(vc, ref) <= 1e-12);

    try {
        evolve(u, constant_field(g, 1000.0), 0.5, cfg);
        FAIL("expected a configuration error");
    } catch (const ConfigurationError& e) {
        CHECK(e.admissible_dt() == doctest::Approx(admissible_dt(constant_field(g, 1000.0), 2.0)));
        CHECK(e.admissible_dt() <= 0.2 / 1000.0);
    }
    const double max_xi2 = std::pow(g.max_abs_xi(), 2);
    CHECK(admissible_dt(constant_field(g, 0.0), 2.0) == doctest::Approx(std::numbers::pi / max_xi2));
}

TEST_CASE("plan_steps") {
    const auto p = plan_steps(1.0, 0.3);
    CHECK(p.steps == 4);
    CHECK(p.dt == doctest::Approx(0.25));
    CHECK(plan_steps(1.0, 0.25).steps == 4);
    CHECK_THROWS_AS(plan_steps(1.0, 0.0), DomainError);
}

TEST_CASE("Strang splitting is second order") {
    const Grid g(1, 128, 20.0);
    std::array<double, 1> c{0}, p{1.0};
    const auto u = init_packet(g, 1.0, c, p);
    const auto V = sample_scaled_potential(g, kGauss1, 0.5, 2.0, 11);
    const double T = 0.5, dt = 0.004;
    const auto ref = evolve(u, V, T, {dt / 16, 2.0});
    const double e1 = l2_error(evolve(u, V, T, {dt, 2.0}), ref);
    const double e2 = l2_error(evolve(u, V, T, {dt / 2, 2.0}), ref);
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("time reversal with conjugated dynamics") {
    const Grid g(2, 32, 8.0);
    std::array<double, 2> c{0, 0}, p{1, -1};
    const auto u = init_packet(g, 1.0, c, p);
    const SpectrumModel s2{SpectrumKind::gaussian, 1.0, 1.0 / std::numbers::sqrt2, 2};
    const auto V = sample_scaled_potential(g, s2, 0.5, 2.0, 5);
    const SolverConfig cfg{0.002, 2.0};
    auto back = evolve(u, V, 0.3, cfg);
    for (auto& v : back.values) v = std::conj(v);
    back = evolve(back, V, 0.3, cfg);
    for (auto& v : back.values) v = std::conj(v);
    CHECK(l2_error(back, u) <= 1e-10);
}

TEST_CASE("Duhamel terms") {
    const Grid g(1, 64, 20.0);
    std::array<double, 1> c{0}, p{0.5};
    const auto u = init_packet(g, 1.3, c, p);
    const SolverConfig cfg{0.01, 2.0};
    const auto V = sample_scaled_potential(g, kGauss1, 1.0, 2.0, 21);
    CHECK(max_diff(duhamel_term(0, u, V, 0.4, cfg), free_step(u, 0.4, 2.0)) <= 1e-14);
    for (int n = 1; n <= 3; ++n) CHECK(duhamel_term(n, u, constant_field(g, 0.0), 0.4, cfg).norm() == 0.0);
    for (int n = 1; n <= 3; ++n) {
        const auto base = duhamel_term(n, u, V, 0.4, cfg);
        const auto sc = duhamel_term(n, u, scaled(V, 0.37), 0.4, cfg);
        const double f = std::pow(0.37, n);
        double num = 0.0, den = 0.0;
        for (std::size_t j = 0; j < base.values.size(); ++j) {
            num += std::norm(sc.values[j] - f * base.values[j]);
            den += std::norm(f * base.values[j]);
        }
        CHECK(std::sqrt(num / den) <= 1e-10);
    }
    CHECK_THROWS_AS(duhamel_term(5, u, V, 0.4, cfg), UnsupportedOrderError);
}

TEST_CASE("l2 error closed forms") {
    const Grid g(2, 16, 4.0);
    auto a = plane_wave(g, 3), b = plane_wave(g, 40);
    a.to_physical();
    b.to_physical();
    const double na = a.norm();
    for (auto& v : a.values) v /= na;
    for (auto& v : b.values) v /= na;
    CHECK(l2_error(a, a) == 0.0);
    CHECK(l2_error(a, b) == doctest::Approx(std::numbers::sqrt2).epsilon(1e-13));
    CHECK(l2_error(a, b) == l2_error(b, a));
    auto r = a;
    const double theta = 0.9;
    for (auto& v : r.values) v *= std::exp(I * theta);
    CHECK(l2_error(a, r) == doctest::Approx(2 * std::abs(std::sin(theta / 2))).epsilon(1e-13));
    CHECK_THROWS_AS(l2_error(a, WaveFunction(Grid(2, 8, 4.0))), DomainError);
}

TEST_CASE("theorem regime flag") {
    CHECK(in_theorem_regime(3, 2.0));
    CHECK_FALSE(in_theorem_regime(2, 2.0));
    CHECK_FALSE(in_theorem_regime(3, 1.5));
}
