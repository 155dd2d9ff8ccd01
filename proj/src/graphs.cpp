#include "hsim/graphs.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hsim/errors.hpp"
#include "hsim/quadrature.hpp"

namespace hsim {

const char* to_string(GraphClass c) {
    switch (c) {
        case GraphClass::crossing: return "crossing";
        case GraphClass::simple: return "simple";
        case GraphClass::noncrossing_nonsimple: return "noncrossing_nonsimple";
    }
    return "?";
}

GraphClass classify(const std::vector<std::pair<int, int>>& pairs) {
    for (std::size_t i = 0; i < pairs.size(); ++i)
        for (std::size_t j = 0; j < pairs.size(); ++j) {
            const auto [k1, l1] = pairs[i];
            const auto [k2, l2] = pairs[j];
            if (k1 < k2 && k2 < l1 && l1 < l2) return GraphClass::crossing;
        }
    for (const auto& [k, l] : pairs)
        if (l != k + 1) return GraphClass::noncrossing_nonsimple;
    return GraphClass::simple;
}

namespace {

void enumerate(std::vector<int>& free, std::vector<std::pair<int, int>>& cur,
               std::vector<std::vector<std::pair<int, int>>>& out) {
    if (free.empty()) {
        out.push_back(cur);
        return;
    }
    const int first = free.front();
    for (std::size_t j = 1; j < free.size(); ++j) {
        const int partner = free[j];
        std::vector<int> rest;
        rest.reserve(free.size() - 2);
        for (std::size_t i = 1; i < free.size(); ++i)
            if (i != j) rest.push_back(free[i]);
        cur.emplace_back(first, partner);
        enumerate(rest, cur, out);
        cur.pop_back();
    }
}

}  // namespace

std::vector<PairingGraph> enumerate_pairings(int total, int n_left) {
    if (total < 2 || total % 2 != 0) throw DomainError("enumerate_pairings: total must be even and positive");
    if (total > 12) throw DomainError("enumerate_pairings: total > 12 is not supported");
    if (n_left < 0) n_left = total / 2;
    if (n_left > total) throw DomainError("enumerate_pairings: n_left exceeds total");
    std::vector<int> free(total);
    for (int i = 0; i < total; ++i) free[i] = i + 1;
    std::vector<std::pair<int, int>> cur;
    std::vector<std::vector<std::pair<int, int>>> raw;
    enumerate(free, cur, raw);

    std::vector<PairingGraph> out;
    out.reserve(raw.size());
    for (auto& pairs : raw) {
        PairingGraph g;
        g.n_left = n_left;
        g.n_right = total - n_left;
        g.pairs = pairs;
        g.cls = classify(pairs);
        for (const auto& [k, l] : pairs) {
            g.A0.push_back(k);
            g.B0.push_back(l);
            if (k <= n_left && l >= n_left + 2) ++g.side_links;
        }
        out.push_back(std::move(g));
    }
    return out;
}

ClassCounts count_classes(int total) {
    ClassCounts c;
    for (const auto& g : enumerate_pairings(total)) {
        ++c.total;
        switch (g.cls) {
            case GraphClass::crossing: ++c.crossing; break;
            case GraphClass::simple: ++c.simple; break;
            case GraphClass::noncrossing_nonsimple: ++c.noncrossing_nonsimple; break;
        }
    }
    return c;
}

namespace {

using Matrix = std::vector<std::vector<cplx>>;

Matrix matmul(const Matrix& a, const Matrix& b) {
    const std::size_t n = a.size();
    Matrix c(n, std::vector<cplx>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k <= i; ++k) {
            if (a[i][k] == 0.0) continue;
            for (std::size_t j = 0; j <= k; ++j) c[i][j] += a[i][k] * b[k][j];
        }
    return c;
}

/// exp[w_0..w_n] as the (n, 0) entry of exp of the lower bidiagonal matrix
/// with diagonal w and unit subdiagonal.
cplx divided_exp_matrix(const std::vector<cplx>& w) {
    const std::size_t n = w.size();
    cplx mu = 0.0;
    for (const auto& z : w) mu += z;
    mu /= static_cast<double>(n);
    double norm = 1.0;
    for (const auto& z : w) norm = std::max(norm, std::abs(z - mu) + 1.0);
    const int s = std::max(0, static_cast<int>(std::ceil(std::log2(norm))) + 1);
    const double scale = std::ldexp(1.0, -s);
    Matrix j(n, std::vector<cplx>(n));
    for (std::size_t i = 0; i < n; ++i) {
        j[i][i] = (w[i] - mu) * scale;
        if (i + 1 < n) j[i + 1][i] = scale;
    }
    Matrix e(n, std::vector<cplx>(n)), term(n, std::vector<cplx>(n));
    for (std::size_t i = 0; i < n; ++i) e[i][i] = term[i][i] = 1.0;
    for (int k = 1; k <= 24; ++k) {
        term = matmul(term, j);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b <= a; ++b) {
                term[a][b] /= static_cast<double>(k);
                e[a][b] += term[a][b];
            }
    }
    for (int k = 0; k < s; ++k) e = matmul(e, e);
    return std::exp(mu) * e[n - 1][0];
}

cplx divided_exp_newton(std::vector<cplx> w) {
    const std::size_t n = w.size();
    std::vector<cplx> dd(n);
    for (std::size_t i = 0; i < n; ++i) dd[i] = std::exp(w[i]);
    for (std::size_t j = 1; j < n; ++j)
        for (std::size_t i = n - 1; i >= j; --i) dd[i] = (dd[i] - dd[i - 1]) / (w[i] - w[i - j]);
    return dd[n - 1];
}

}  // namespace

cplx eval_K(double t, std::span<const double> freqs, double eta) {
    if (freqs.empty()) throw DomainError("eval_K: need at least one frequency");
    if (!(t >= 0.0)) throw DomainError("eval_K: t must be non-negative");
    if (!(eta >= 0.0)) throw DomainError("eval_K: eta must be non-negative");
    const std::size_t n = freqs.size() - 1;
    if (t == 0.0) return n == 0 ? cplx(1.0) : cplx(0.0);
    // K = (-it)^n exp[w_0..w_n], w_k = it(a_k + i eta)
    std::vector<cplx> w(n + 1);
    for (std::size_t k = 0; k <= n; ++k) w[k] = I * t * cplx(freqs[k], eta);
    bool separated = true;
    for (std::size_t i = 0; i <= n && separated; ++i)
        for (std::size_t j = i + 1; j <= n; ++j)
            if (t * std::abs(freqs[i] - freqs[j]) < 1.0) {
                separated = false;
                break;
            }
    const cplx g = n == 0 ? std::exp(w[0]) : separated ? divided_exp_newton(w) : divided_exp_matrix(w);
    const cplx k = std::pow(-I * t, static_cast<int>(n)) * g;
    const double bound = std::pow(t, static_cast<double>(n)) / std::tgamma(n + 1.0);
    if (std::abs(k) > bound * (1.0 + 1e-8) + 1e-13) throw NumericError("eval_K: simplex bound violated");
    return k;
}

KResolvent verify_K_resolvent(double t, std::span<const double> freqs, double eta, double cutoff, bool tails) {
    if (freqs.empty() || freqs.size() > 3) throw PreconditionError("verify_K_resolvent: need 1 to 3 frequencies");
    if (!(eta > 0.0)) throw DomainError("verify_K_resolvent: eta must be positive");
    if (!(t > 0.0)) throw DomainError("verify_K_resolvent: t must be positive");
    const std::size_t n = freqs.size();
    std::vector<cplx> c(n);
    double amax = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        c[k] = cplx(freqs[k], eta);
        amax = std::max(amax, std::abs(freqs[k]));
    }
    KResolvent out;
    out.direct = eval_K(t, freqs, 0.0);
    const double lambda = cutoff > 0.0 ? cutoff : std::max(50.0 * (amax + eta + 1.0), 400.0 / t);
    out.cutoff = lambda;

    auto h = [&](double a) {
        cplx p = 1.0;
        for (const auto& ck : c) p *= a + ck;
        return 1.0 / p;
    };
    auto integrand = [&](double a) { return std::exp(-I * a * t) * h(a); };

    std::vector<double> breaks;
    const double panel = std::min(4.0 * std::numbers::pi / t, lambda);
    for (double b = -lambda; b < lambda; b += panel) breaks.push_back(b);
    breaks.push_back(lambda);
    for (double a : freqs)
        for (double f : {-10.0, -1.0, 0.0, 1.0, 10.0}) {
            const double b = -a + f * eta;
            if (b > -lambda && b < lambda) breaks.push_back(b);
        }
    std::sort(breaks.begin(), breaks.end());
    const auto mid = quad::adaptive_pieces_complex(integrand, breaks, 1e-12, 18);

    // F(alpha) = -e^{-i alpha t} sum_j h^{(j)}(alpha) / (it)^{j+1} is an antiderivative
    auto series = [&](double a, double& last) {
        cplx p1 = 0.0, p2 = 0.0, p3 = 0.0;
        for (const auto& ck : c) {
            const cplx z = 1.0 / (a + ck);
            p1 += z;
            p2 += z * z;
            p3 += z * z * z;
        }
        const cplx h0 = h(a);
        const cplx d[4] = {h0, -h0 * p1, h0 * (p1 * p1 + p2), -h0 * (p1 * p1 * p1 + 3.0 * p1 * p2 + 2.0 * p3)};
        cplx s = 0.0, it = I * t, pw = it;
        for (int j = 0; j < 4; ++j) {
            s += d[j] / pw;
            pw *= it;
        }
        last = std::abs(d[3] / (pw / it));
        return -std::exp(-I * a * t) * s;
    };
    double last_up = 0.0, last_lo = 0.0;
    const cplx upper = -series(lambda, last_up);
    const cplx lower = series(-lambda, last_lo);
    cplx total = mid.value;
    if (tails) {
        total += upper + lower;
        out.truncation_estimate = last_up + last_lo;
    } else {
        out.truncation_estimate = std::abs(upper) + std::abs(lower);
    }
    const cplx pref = I * std::exp(t * eta) / (2.0 * std::numbers::pi);
    out.contour = pref * total;
    out.truncation_estimate *= std::abs(pref);
    out.discrepancy = std::abs(out.contour - out.direct);
    return out;
}

namespace {

double symbol(double r, double m) { return r == 0.0 ? 0.0 : std::pow(r, m); }

void require_regime(int d, double m_order) {
    if (!(d > m_order)) throw RegimeError("requires d > m");
}

}  // namespace

cplx mean_wavefunction_order2(double t, std::span<const double> xi0, const SpectrumModel& spectrum, int d,
                              double m_order, double epsilon, cplx u0hat_at_xi0) {
    spectrum.validate();
    require_regime(d, m_order);
    if (static_cast<int>(xi0.size()) != d) throw DomainError("mean_wavefunction_order2: xi0 dimension");
    if (!(epsilon > 0.0)) throw DomainError("mean_wavefunction_order2: epsilon must be positive");
    if (spectrum.amplitude == 0.0 || u0hat_at_xi0 == 0.0 || t == 0.0) return 0.0;
    const double x0 = norm2(xi0);
    const double a0 = symbol(x0, m_order);
    const double top = (epsilon * x0 + support_radius(spectrum)) / epsilon;
    const double em = std::pow(epsilon, d - m_order);

    auto integrate = [&](int panels) {
        const auto nodes = quad::gauss_legendre_panels(0.0, top, panels, 16);
        cplx s = 0.0;
        for (std::size_t i = 0; i < nodes.x.size(); ++i) {
            const double r = nodes.x[i];
            const double shell = shifted_shell(spectrum, epsilon * r, epsilon * x0);
            if (shell == 0.0) continue;
            const double f[3] = {a0, symbol(r, m_order), a0};
            s += nodes.w[i] * std::pow(r, d - 1) * em * shell * eval_K(t, f, 0.0);
        }
        return s;
    };
    const double phase = t * symbol(top, m_order);
    int panels = 32 + static_cast<int>(std::ceil(phase / 3.0)) +
                 static_cast<int>(std::ceil(8.0 * top * epsilon / spectrum.width));
    cplx prev = integrate(panels);
    for (int it = 0; it < 6; ++it) {
        panels *= 2;
        const cplx next = integrate(panels);
        if (std::abs(next - prev) <= 1e-6 * std::abs(next)) return next * u0hat_at_xi0;
        prev = next;
    }
    throw NumericError("mean_wavefunction_order2: quadrature did not converge");
}

namespace {

/// \int_0^inf N(r) / (c + r^m + i delta) dr with N(r) = r^{d-1} Ang(r, e), delta >= 0.
cplx theta_integral(double c, double delta, double e, const SpectrumModel& spectrum, int d, double m) {
    auto num = [&](double r) { return std::pow(r, d - 1) * shifted_shell(spectrum, r, e); };
    auto full = [&](double r) { return num(r) / cplx(c + symbol(r, m), delta); };
    const double top = e + support_radius(spectrum);
    const double rel = 1e-10;
    cplx value = 0.0;
    double error = 0.0;
    auto add = [&](const quad::Result<cplx>& r) {
        value += r.value;
        error += r.error;
    };
    const double rstar = c < 0.0 ? std::pow(-c, 1.0 / m) : -1.0;
    if (rstar > 0.0 && rstar < top) {
        const double w = 0.5 * std::min(rstar, top - rstar);
        const double c1 = m * std::pow(rstar, m - 1.0);
        const double nstar = num(rstar);
        // c + (r* + s)^m without cancellation
        auto near = [&](double s) {
            const double den = -c * std::expm1(m * std::log1p(s / rstar));
            return num(rstar + s) / cplx(den, delta) - nstar / cplx(c1 * s, delta);
        };
        std::vector<double> outer_lo = {0.0, std::min(e, rstar - w), rstar - w};
        std::vector<double> outer_hi = {rstar + w, std::max(e, rstar + w), top};
        add(quad::adaptive_pieces_complex(full, outer_lo, rel, 14));
        // symmetric pairs around r* cancel the pole; geometric panels toward r*
        auto pair = [&](double s) { return near(s) + near(-s); };
        auto window_sum = [&](int order) {
            cplx acc = 0.0;
            double hi = w;
            for (int k = 0; k < 16; ++k) {
                const double lo = k == 15 ? 0.0 : 0.25 * hi;
                const auto g = quad::gauss_legendre_panels(lo, hi, 1, order);
                for (std::size_t i = 0; i < g.x.size(); ++i) acc += g.w[i] * pair(g.x[i]);
                hi = lo;
            }
            return acc;
        };
        const cplx win_hi = window_sum(30);
        value += win_hi;
        error += std::abs(win_hi - window_sum(20));
        add(quad::adaptive_pieces_complex(full, outer_hi, rel, 14));
        const cplx window =
            (std::log(cplx(c1 * w, delta)) - std::log(cplx(-c1 * w, delta))) / c1;
        value += nstar * window;
    } else {
        std::vector<double> br = {0.0, std::min(e, top), top};
        add(quad::adaptive_pieces_complex(full, br, rel, 14));
    }
    if (!(error <= 1e-6 * std::abs(value) + 1e-300))
        throw NumericError("compute_Theta: quadrature not certified");
    return value;
}

}  // namespace

cplx compute_Theta(double alpha, double eta, std::span<const double> xi0, const SpectrumModel& spectrum, int d,
                   double m_order, double epsilon) {
    spectrum.validate();
    require_regime(d, m_order);
    if (!(eta > 0.0)) throw DomainError("compute_Theta: eta must be positive");
    if (static_cast<int>(xi0.size()) != d) throw DomainError("compute_Theta: xi0 dimension");
    if (spectrum.amplitude == 0.0) return 0.0;
    const double em = std::pow(epsilon, m_order);
    return theta_integral(em * alpha, em * eta, epsilon * norm2(xi0), spectrum, d, m_order);
}

cplx compute_Theta_limit(std::span<const double> xi0, const SpectrumModel& spectrum, int d, double m_order,
                         double epsilon) {
    spectrum.validate();
    require_regime(d, m_order);
    if (static_cast<int>(xi0.size()) != d) throw DomainError("compute_Theta_limit: xi0 dimension");
    if (spectrum.amplitude == 0.0) return 0.0;
    const double e = epsilon * norm2(xi0);
    return theta_integral(-symbol(e, m_order), 0.0, e, spectrum, d, m_order);
}

cplx simple_leading_term(int n, double t, std::span<const double> xi0, const SpectrumModel& spectrum, int d,
                         double m_order, double epsilon, cplx u0hat_at_xi0) {
    if (n < 0 || n % 2 != 0 || n > 8) throw DomainError("simple_leading_term: n must be even, 0..8");
    if (static_cast<int>(xi0.size()) != d) throw DomainError("simple_leading_term: xi0 dimension");
    const int half = n / 2;
    const cplx phase = std::polar(1.0, t * symbol(norm2(xi0), m_order));
    if (half == 0) return phase * u0hat_at_xi0;
    const cplx theta = compute_Theta_limit(xi0, spectrum, d, m_order, epsilon);
    return std::pow(-I * t, half) / std::tgamma(half + 1.0) * phase * std::pow(theta, half) * u0hat_at_xi0;
}

}  // namespace hsim
