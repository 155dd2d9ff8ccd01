#include "hsim/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>

#include <json.hpp>

#include "hsim/errors.hpp"
#include "hsim/graphs.hpp"
#include "hsim/math.hpp"
#include "hsim/quadrature.hpp"

namespace hsim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double symbol(double r, double m) { return std::pow(r, m); }

// Breakpoints geometrically graded away from c: c, c +- s 4^k, c +- reach.
void graded(std::vector<double>& br, double c, double s, double reach) {
    br.push_back(c);
    if (!(s > 0.0)) return;
    for (double h = s; h < reach; h *= 4.0) {
        br.push_back(c - h);
        br.push_back(c + h);
    }
    br.push_back(c - reach);
    br.push_back(c + reach);
}

void tidy(std::vector<double>& br, double lo = -kInf) {
    std::erase_if(br, [&](double x) { return !(x >= lo) || !std::isfinite(x); });
    std::sort(br.begin(), br.end());
    br.erase(std::unique(br.begin(), br.end()), br.end());
}

double certify(const quad::Result<double>& r, const char* what) {
    if (!std::isfinite(r.value) || !(r.error <= 1e-5 * std::abs(r.value) + 1e-300))
        throw NumericError(std::string(what) + ": quadrature failure");
    return r.value;
}

// Tail from x0 != 0 out to sign(x0) infinity, mapped by x = x0 / u so the
// mapping scale matches the decay scale; log decay leaves an endpoint
// singularity at u = 0.
quad::Result<double> tail(const quad::RealFn& f, double x0, double rel_tol) {
    auto g = [&](double u) {
        const double x = x0 / u;
        return std::abs(x) < 1e60 ? f(x) * x * (x / std::abs(x0)) : 0.0;
    };
    return quad::endpoint_singular(g, 0.0, 1.0, rel_tol);
}

// Integral over the whole line: graded finite pieces plus two tails.
quad::Result<double> line_integral(const quad::RealFn& f, std::vector<double> br, double rel_tol) {
    tidy(br);
    br.insert(br.begin(), std::min(br.front(), -1.0) - 1.0);
    br.push_back(std::max(br.back(), 1.0) + 1.0);
    auto r = quad::adaptive_pieces(f, br, rel_tol, 15);
    for (auto t : {tail(f, br.front(), rel_tol), tail(f, br.back(), rel_tol)}) {
        r.value += t.value;
        r.error += t.error;
    }
    return r;
}

// Integral over [0, inf): graded pieces plus one infinite tail.
quad::Result<double> half_line_integral(const quad::RealFn& f, std::vector<double> br, double rel_tol) {
    br.push_back(0.0);
    br.push_back(1.0);
    tidy(br, 0.0);
    auto r = quad::adaptive_pieces(f, br, rel_tol, 15);
    const auto t = tail(f, br.back(), rel_tol);
    r.value += t.value;
    r.error += t.error;
    return r;
}

// Surface integral of (1 + |r w - v|^2)^{-d} over the unit sphere, |v| = omega.
double bracket_shell(double r, double omega, int d) {
    if (d == 3) {
        const double p = r * omega;
        if (p < 1e-6) return 4.0 * std::numbers::pi * std::pow(1.0 + r * r + omega * omega, -3.0);
        const double lo = 1.0 + (r - omega) * (r - omega);
        const double hi = 1.0 + (r + omega) * (r + omega);
        return std::numbers::pi / (2.0 * p) * (1.0 / (lo * lo) - 1.0 / (hi * hi));
    }
    return quad::shell_average([d](double s) { return std::pow(1.0 + s * s, -d); }, r, omega, d);
}

void require_regime(int d, double m) {
    if (!(d > m)) throw RegimeError("bounds: requires d > m");
}

ExponentFit fit_exponent(std::span<const double> x, std::span<const double> y, double lo, double hi) {
    if (x.size() < 5) throw DomainError("bounds: exponent fits need at least 5 points");
    const auto f = loglog_fit(x, y);
    return {f.slope, f.slope_stderr, lo, hi};
}

double resolve_ceiling(const BoundsOptions& opt, const std::map<std::string, double>& file, LemmaId id) {
    if (opt.ceiling > 0.0) return opt.ceiling;
    const auto it = file.find(to_string(id));
    return it == file.end() ? 0.0 : it->second;
}

void add_point(EnvelopeReport& rep, std::map<std::string, double> params, double lhs, double env) {
    SweepPoint p;
    p.params = std::move(params);
    p.lhs = lhs;
    p.envelope = env;
    p.ratio = lhs / env;
    rep.max_ratio = std::max(rep.max_ratio, p.ratio);
    if (!std::isfinite(p.ratio)) rep.max_ratio = p.ratio;
    rep.sweep.push_back(std::move(p));
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

}  // namespace

std::string to_string(LemmaId id) {
    switch (id) {
        case LemmaId::L5_2: return "L5_2";
        case LemmaId::P5_3: return "P5_3";
        case LemmaId::L5_4: return "L5_4";
        case LemmaId::P5_5: return "P5_5";
        case LemmaId::P5_6: return "P5_6";
        case LemmaId::L5_7: return "L5_7";
        case LemmaId::L5_9: return "L5_9";
    }
    return "?";
}

void EnvelopeReport::finalize() {
    pass = std::isfinite(max_ratio) && ceiling > 0.0 && max_ratio <= 1.05 * ceiling && failures.empty();
    if (!(ceiling > 0.0)) failures.push_back("no calibrated ceiling");
    for (const auto& [name, fit] : fitted_exponents)
        if (!fit.within()) pass = false;
}

std::string EnvelopeReport::to_json() const {
    nlohmann::ordered_json j;
    j["lemma_id"] = to_string(lemma_id);
    j["max_ratio"] = max_ratio;
    j["ceiling"] = ceiling;
    auto& fits = j["fitted_exponents"];
    fits = nlohmann::ordered_json::object();
    for (const auto& [name, f] : fitted_exponents)
        fits[name] = {{"value", f.value}, {"stderr", f.stderr_}, {"window", {f.lo, f.hi}}};
    j["failures"] = failures;
    j["pass"] = pass;
    auto& sw = j["sweep"];
    sw = nlohmann::ordered_json::array();
    for (const auto& p : sweep) {
        nlohmann::ordered_json e;
        for (const auto& [k, v] : p.params) e[k] = v;
        e["lhs"] = p.lhs;
        e["envelope"] = p.envelope;
        e["ratio"] = p.ratio;
        sw.push_back(e);
    }
    return j.dump(2);
}

void EnvelopeReport::write_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out.precision(17);
    if (sweep.empty()) return;
    for (const auto& [k, v] : sweep.front().params) out << k << ',';
    out << "lhs,envelope,ratio\n";
    for (const auto& p : sweep) {
        for (const auto& [k, v] : p.params) out << v << ',';
        out << p.lhs << ',' << p.envelope << ',' << p.ratio << '\n';
    }
}

std::map<std::string, double> load_ceilings(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read ceilings file " + path);
    const auto j = nlohmann::json::parse(in);
    std::map<std::string, double> out;
    for (const auto& [k, v] : j.items())
        if (v.is_number()) out[k] = v.get<double>();
    return out;
}

// ---------------------------------------------------------------------------
// Left-hand sides

double lorentz_pair(double a, double da, double b, double db, double rel_tol) {
    if (!(da > 0.0) || !(db > 0.0)) throw DomainError("lorentz_pair: widths must be positive");
    const double gap = std::abs(a - b);
    // well separated peaks: relative error O(((da + db) / gap)^2)
    if (gap > 1e5 * (da + db)) return 2.0 * (std::log(2.0 * gap / da) + std::log(2.0 * gap / db)) / gap;
    auto f = [=](double x) { return 1.0 / (std::hypot(x - a, da) * std::hypot(x - b, db)); };
    const double reach = std::abs(a - b) + 4.0 * (da + db) + 1.0;
    std::vector<double> br;
    graded(br, a, da, reach);
    graded(br, b, db, reach);
    return certify(line_integral(f, br, rel_tol), "lorentz_pair");
}

double lhs_lemma_5_2(double A, double B, double eta, double rel_tol) {
    if (!(eta > 0.0)) throw DomainError("lemma 5.2: eta must be positive");
    return lorentz_pair(-A, eta, -B, eta, rel_tol);
}

double lhs_prop_5_3(double A, double B, double eta, double eta_t, double rel_tol) {
    if (!(eta > 0.0) || !(eta_t > 2.0 * eta)) throw PreconditionError("prop 5.3: requires eta_t > 2 eta > 0");
    const double gap = eta_t - eta;
    auto f = [=](double alpha) {
        return lorentz_pair(alpha, gap, -A, eta, 0.1 * rel_tol) / std::hypot(alpha + B, eta_t);
    };
    const double reach = std::abs(A - B) + 4.0 * eta_t + 1.0;
    std::vector<double> br;
    graded(br, -B, eta_t, reach);
    graded(br, -A, gap, reach);
    return certify(line_integral(f, br, rel_tol), "prop 5.3");
}

double lhs_lemma_5_4(double alpha, double eta, double epsilon, int d, double m_order, int log_power,
                     double rel_tol) {
    require_regime(d, m_order);
    if (!(eta > 0.0) || !(epsilon > 0.0)) throw DomainError("lemma 5.4: eta, epsilon must be positive");
    const double em = std::pow(epsilon, m_order);
    auto f = [=](double r) {
        const double rm = symbol(r, m_order);
        const double re = em * alpha + rm;
        double v = em * std::pow(r, d - 1) * std::pow(1.0 + r * r, -d) / (re * re + em * em * eta * eta);
        if (log_power > 0) v *= std::pow(1.0 + log_plus(std::abs((alpha + rm / em) / eta)), log_power);
        return v;
    };
    std::vector<double> br;
    graded(br, 0.0, epsilon * std::pow(std::abs(alpha) + eta, 1.0 / m_order), 1.0);
    if (alpha < 0.0) {
        const double rstar = epsilon * std::pow(-alpha, 1.0 / m_order);
        graded(br, rstar, em * eta / (m_order * std::pow(rstar, m_order - 1.0)), rstar);
    }
    if (log_power > 0)
        for (double s : {-eta, eta})
            if (s - alpha > 0.0) br.push_back(epsilon * std::pow(s - alpha, 1.0 / m_order));
    br.push_back(10.0);
    return sphere_area(d) * certify(half_line_integral(f, br, rel_tol), "lemma 5.4");
}

double lhs_lemma_5_7(double alpha, double eta, double omega_norm, int d, double m_order, double rel_tol) {
    if (!(eta > 0.0)) throw DomainError("lemma 5.7: eta must be positive");
    auto f = [=](double r) {
        return std::pow(r, d - 1) * std::pow(1.0 + r * r, -d) * bracket_shell(r, omega_norm, d) /
               std::hypot(alpha + symbol(r, m_order), eta);
    };
    std::vector<double> br = {1.0};
    if (alpha < 0.0) {
        const double rstar = std::pow(-alpha, 1.0 / m_order);
        graded(br, rstar, eta / (m_order * std::pow(rstar, m_order - 1.0)), 0.5 * rstar);
    }
    if (omega_norm > 0.0) graded(br, omega_norm, 1.0, 8.0);
    return certify(half_line_integral(f, br, rel_tol), "lemma 5.7");
}

double lhs_lemma_5_9(double epsilon, double xi_norm, const SpectrumModel& spectrum, int d, double m_order,
                     double rel_tol) {
    require_regime(d, m_order);
    spectrum.validate();
    if (!(epsilon > 0.0)) throw DomainError("lemma 5.9: epsilon must be positive");
    const double em = std::pow(epsilon, m_order);
    const double q = em * symbol(xi_norm, m_order);
    const double e = epsilon * xi_norm;
    auto f = [=, &spectrum](double r) {
        const double dist = std::abs(symbol(r, m_order) - q);
        const double clip = dist < em ? 1.0 / em : 1.0 / dist;
        return em * std::pow(r, d - 1.0 - m_order) * clip * shifted_shell(spectrum, r, e);
    };
    const double top = e + support_radius(spectrum);
    std::vector<double> br = {0.0, e, std::pow(q + em, 1.0 / m_order), top};
    if (q > em) br.push_back(std::pow(q - em, 1.0 / m_order));
    tidy(br, 0.0);
    return certify(quad::adaptive_pieces(f, br, rel_tol, 15), "lemma 5.9");
}

// ---------------------------------------------------------------------------
// Envelopes

double envelope_lemma_5_2(double A, double B, double eta) {
    return (1.0 + log_plus(std::abs(A - B) / eta)) / std::hypot(A - B, eta);
}

double envelope_prop_5_3(double A, double B, double eta_t) {
    const double l = 1.0 + log_plus(std::abs(A - B) / eta_t);
    return l * l / std::hypot(A - B, eta_t);
}

double envelope_lemma_5_4(double alpha, double epsilon, double exponent, double m_order) {
    return std::pow(epsilon, exponent) * vee(std::pow(std::abs(alpha), exponent / m_order), 1.0);
}

double envelope_lemma_5_7(double alpha, double eta) { return std::abs(std::log(eta)) / jbracket(alpha); }

double envelope_lemma_5_9(double epsilon, double xi_norm, int d, double m_order) {
    const double base = symbol(xi_norm, m_order) + 1.0;
    const double edm = std::pow(epsilon, d - m_order);
    return std::max({std::pow(epsilon, m_order), edm * std::abs(std::log(epsilon)) * std::pow(base, d / m_order - 2.0),
                     edm * std::pow(base, d / m_order - 1.0)});
}

// ---------------------------------------------------------------------------
// Verifiers

EnvelopeReport verify_lemma_5_2(std::span<const double> A_range, std::span<const double> B_range,
                                std::span<const double> eta_range, const BoundsOptions& opt) {
    EnvelopeReport rep;
    rep.lemma_id = LemmaId::L5_2;
    rep.ceiling = opt.ceiling;
    for (double eta : eta_range)
        if (!(eta > 0.0)) throw DomainError("lemma 5.2: eta must be positive");
    for (double A : A_range)
        for (double B : B_range)
            for (double eta : eta_range)
                add_point(rep, {{"A", A}, {"B", B}, {"eta", eta}}, lhs_lemma_5_2(A, B, eta, opt.rel_tol),
                          envelope_lemma_5_2(A, B, eta));
    rep.finalize();
    return rep;
}

EnvelopeReport verify_prop_5_3(std::span<const double> A_range, std::span<const double> B_range,
                               std::span<const EtaPair> eta_pairs, const BoundsOptions& opt) {
    for (const auto& p : eta_pairs)
        if (!(p.eta > 0.0) || !(p.eta_t > 2.0 * p.eta))
            throw PreconditionError("prop 5.3: every pair needs eta_t > 2 eta > 0");
    EnvelopeReport rep;
    rep.lemma_id = LemmaId::P5_3;
    rep.ceiling = opt.ceiling;
    for (double A : A_range)
        for (double B : B_range)
            for (const auto& p : eta_pairs)
                add_point(rep, {{"A", A}, {"B", B}, {"eta", p.eta}, {"eta_t", p.eta_t}},
                          lhs_prop_5_3(A, B, p.eta, p.eta_t, opt.rel_tol), envelope_prop_5_3(A, B, p.eta_t));
    rep.finalize();
    return rep;
}

EnvelopeReport verify_lemma_5_4(std::span<const double> alpha_range, double eta,
                                std::span<const double> epsilon_range, int d, double m_order,
                                const Lemma54Variant& variant, const BoundsOptions& opt) {
    require_regime(d, m_order);
    if (!(eta >= 0.01)) throw DomainError("lemma 5.4: sweeps keep eta >= 0.01");
    if (variant.id != LemmaId::L5_4 && variant.id != LemmaId::P5_5 && variant.id != LemmaId::P5_6)
        throw DomainError("lemma 5.4: variant must be L5_4, P5_5 or P5_6");
    EnvelopeReport rep;
    rep.lemma_id = variant.id;
    rep.ceiling = opt.ceiling;
    const double lambda = rate_exponent(d, m_order);
    const double exponent = variant.id == LemmaId::P5_5 ? lambda * (1.0 - variant.delta) : lambda;
    const int k = variant.id == LemmaId::P5_6 ? variant.log_power : 0;
    double fit_alpha = alpha_range.empty() ? 1.0 : alpha_range.front();
    for (double a : alpha_range)
        if (a == 1.0) fit_alpha = 1.0;
    std::vector<double> fx, fy;
    for (double alpha : alpha_range)
        for (double eps : epsilon_range) {
            const double lhs = lhs_lemma_5_4(alpha, eta, eps, d, m_order, k, opt.rel_tol);
            add_point(rep, {{"alpha", alpha}, {"epsilon", eps}, {"eta", eta}, {"d", double(d)}, {"m", m_order}},
                      lhs, envelope_lemma_5_4(alpha, eps, exponent, m_order));
            if (alpha == fit_alpha) {
                fx.push_back(eps);
                fy.push_back(lhs);
            }
        }
    const std::string name = "lambda_d" + std::to_string(d);
    if (variant.id == LemmaId::P5_5)
        rep.fitted_exponents[name] = fit_exponent(fx, fy, exponent - 0.15, lambda + 0.15);
    else
        rep.fitted_exponents[name] = fit_exponent(fx, fy, lambda - 0.15, lambda + 0.15);
    rep.finalize();
    return rep;
}

EnvelopeReport verify_lemma_5_7(std::span<const double> alpha_range, std::span<const double> eta_range,
                                std::span<const double> omega_samples, int d, double m_order,
                                const BoundsOptions& opt) {
    for (double eta : eta_range)
        if (!(eta > 0.0 && eta < 1.0)) throw DomainError("lemma 5.7: eta must lie in (0, 1)");
    if (omega_samples.empty()) throw DomainError("lemma 5.7: need at least one omega sample");
    EnvelopeReport rep;
    rep.lemma_id = LemmaId::L5_7;
    rep.ceiling = opt.ceiling;
    for (double alpha : alpha_range) {
        std::vector<double> x, y;
        for (double eta : eta_range) {
            double lhs = 0.0;
            for (double w : omega_samples) lhs = std::max(lhs, lhs_lemma_5_7(alpha, eta, w, d, m_order, opt.rel_tol));
            add_point(rep, {{"alpha", alpha}, {"eta", eta}}, lhs, envelope_lemma_5_7(alpha, eta));
            x.push_back(std::abs(std::log(eta)));
            y.push_back(lhs * jbracket(alpha));
        }
        if (x.size() >= 5) {
            const auto f = least_squares(x, y);
            const double hi = opt.ceiling > 0.0 ? opt.ceiling : kInf;
            rep.fitted_exponents["log_slope_alpha" + fmt(alpha)] = {f.slope, f.slope_stderr, 0.0, hi};
            if (!(f.slope > 0.0)) rep.failures.push_back("non-positive |log eta| slope at alpha=" + fmt(alpha));
        }
    }
    rep.finalize();
    return rep;
}

EnvelopeReport verify_lemma_5_9(std::span<const double> epsilon_range, std::span<const double> xi_samples,
                                const SpectrumModel& spectrum, int d, double m_order, const BoundsOptions& opt) {
    require_regime(d, m_order);
    if (xi_samples.empty()) throw DomainError("lemma 5.9: need at least one xi sample");
    EnvelopeReport rep;
    rep.lemma_id = LemmaId::L5_9;
    rep.ceiling = opt.ceiling;
    std::vector<double> fx, fy;
    for (double xi : xi_samples)
        for (double eps : epsilon_range) {
            const double lhs = lhs_lemma_5_9(eps, xi, spectrum, d, m_order, opt.rel_tol);
            add_point(rep, {{"epsilon", eps}, {"xi", xi}}, lhs, envelope_lemma_5_9(eps, xi, d, m_order));
            if (xi == xi_samples.front()) {
                fx.push_back(eps);
                fy.push_back(lhs);
            }
        }
    const double target = std::min(m_order, d - m_order);
    rep.fitted_exponents["epsilon"] = fit_exponent(fx, fy, target - 0.2, target + 0.1);
    rep.finalize();
    return rep;
}

std::string ThetaSweepReport::to_json() const {
    nlohmann::ordered_json j;
    j["points"] = points;
    j["sup_abs"] = sup_abs;
    j["ceiling"] = ceiling;
    j["pass"] = pass;
    return j.dump(2);
}

ThetaSweepReport sweep_theta_bound(const SpectrumModel& spectrum, int d, double m_order, bool refined,
                                   double ceiling) {
    const std::vector<double> alphas = refined ? std::vector<double>{-6.0, -2.5, -0.5, 0.5, 2.5}
                                               : std::vector<double>{-4.0, -1.0, 0.0, 1.0, 4.0};
    const std::vector<double> etas = refined ? std::vector<double>{3e-3, 3e-2, 0.3, 0.7, 2.0}
                                             : std::vector<double>{1e-3, 1e-2, 0.1, 0.5, 1.0};
    const std::vector<double> xis = refined ? std::vector<double>{0.25, 0.75, 1.5, 3.0, 6.0}
                                            : std::vector<double>{0.0, 0.5, 1.0, 2.0, 4.0};
    ThetaSweepReport rep;
    rep.ceiling = ceiling;
    for (double alpha : alphas)
        for (double eta : etas)
            for (double xi : xis)
                for (int k = 1; k <= 8; ++k) {
                    const double eps = std::pow(2.0, -(k + (refined ? 0.5 : 0.0)));
                    std::vector<double> xi0(d, 0.0);
                    xi0[0] = xi;
                    const double v = std::abs(compute_Theta(alpha, eta, xi0, spectrum, d, m_order, eps));
                    rep.sup_abs = std::isfinite(v) ? std::max(rep.sup_abs, v) : kInf;
                    ++rep.points;
                }
    rep.pass = std::isfinite(rep.sup_abs) && ceiling > 0.0 && rep.sup_abs <= 1.05 * ceiling;
    return rep;
}

BoundsSuite run_bounds_suite(const std::map<std::string, double>& ceilings, double rel_tol) {
    const std::vector<double> ab = {-10, -3, -1, -0.3, -0.1, 0, 0.1, 0.3, 1, 3, 10};
    const std::vector<double> etas52 = {1e-4, 1e-3, 1e-2, 1e-1, 1};
    const std::vector<double> ab53 = {-3, -1, 0, 1, 3};
    const std::vector<EtaPair> pairs53 = {{0.01, 0.05}, {0.05, 0.2}, {0.1, 0.5}, {0.25, 1.0}};
    const std::vector<double> alphas54 = {-1, 0, 0.5, 1, 4, 16};
    const std::vector<double> eps54 = {0x1p-6, 0x1p-7, 0x1p-8, 0x1p-9, 0x1p-10, 0x1p-11};
    const std::vector<double> eps59 = {0x1p-2, 0x1p-3, 0x1p-4, 0x1p-5, 0x1p-6, 0x1p-7};
    const std::vector<double> alphas57 = {-4, -1, 0, 1, 10, 100};
    const std::vector<double> etas57 = {0.5, 0.1, 0.03, 0.01, 0.003, 0.001};
    const std::vector<double> omegas = {0, 1, 10, 100};
    const std::vector<double> xis59 = {0, 1, 4};
    const SpectrumModel gauss{SpectrumKind::gaussian, 1.0, std::sqrt(0.5), 3};

    auto run_all = [&](double tol) {
        std::vector<EnvelopeReport> out;
        auto opt = [&](LemmaId id) {
            BoundsOptions o;
            o.rel_tol = tol;
            o.ceiling = resolve_ceiling({}, ceilings, id);
            return o;
        };
        out.push_back(verify_lemma_5_2(ab, ab, etas52, opt(LemmaId::L5_2)));
        out.push_back(verify_prop_5_3(ab53, ab53, pairs53, opt(LemmaId::P5_3)));
        for (int d : {3, 5}) {
            out.push_back(verify_lemma_5_4(alphas54, 0.5, eps54, d, 2.0, {LemmaId::L5_4}, opt(LemmaId::L5_4)));
            out.push_back(verify_lemma_5_4(alphas54, 0.5, eps54, d, 2.0, {LemmaId::P5_5}, opt(LemmaId::P5_5)));
        }
        out.push_back(verify_lemma_5_4(alphas54, 0.5, eps54, 3, 2.0, {LemmaId::P5_6}, opt(LemmaId::P5_6)));
        out.push_back(verify_lemma_5_7(alphas57, etas57, omegas, 3, 2.0, opt(LemmaId::L5_7)));
        out.push_back(verify_lemma_5_9(eps59, xis59, gauss, 3, 2.0, opt(LemmaId::L5_9)));
        return out;
    };

    BoundsSuite suite;
    suite.reports = run_all(rel_tol);
    const auto refined = run_all(0.1 * rel_tol);
    suite.stable = true;
    for (std::size_t i = 0; i < refined.size(); ++i) {
        const double a = suite.reports[i].max_ratio;
        const double b = refined[i].max_ratio;
        suite.refined_max_ratio.push_back(b);
        if (!(std::abs(a - b) <= 0.05 * std::max(a, b))) suite.stable = false;
    }
    const auto th = ceilings.find("Theta");
    const double theta_ceiling = th == ceilings.end() ? 0.0 : th->second;
    suite.theta = sweep_theta_bound(gauss, 3, 2.0, false, theta_ceiling);
    suite.theta_refined = sweep_theta_bound(gauss, 3, 2.0, true, theta_ceiling);
    suite.pass = suite.stable && suite.theta.pass && suite.theta_refined.pass;
    for (const auto& r : suite.reports) suite.pass = suite.pass && r.pass;
    return suite;
}

}  // namespace hsim
