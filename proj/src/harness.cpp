#include "hsim/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "hsim/errors.hpp"
#include "hsim/field.hpp"
#include "hsim/homogenize.hpp"
#include "hsim/io.hpp"
#include "hsim/propagator.hpp"

namespace hsim {

using ojson = nlohmann::ordered_json;

Mode parse_mode(const std::string& s) {
    if (s == "converge") return Mode::converge;
    if (s == "volterra") return Mode::volterra;
    if (s == "graphs") return Mode::graphs;
    if (s == "bounds") return Mode::bounds;
    if (s == "rho") return Mode::rho;
    throw DomainError("unknown mode: " + s);
}

std::string to_string(Mode m) {
    switch (m) {
        case Mode::converge: return "converge";
        case Mode::volterra: return "volterra";
        case Mode::graphs: return "graphs";
        case Mode::bounds: return "bounds";
        case Mode::rho: return "rho";
    }
    return "?";
}

void ExperimentConfig::validate() const {
    if (d < 1 || d > 3) throw DomainError("config: d must be 1, 2 or 3");
    if (!(m_order > 0.0)) throw DomainError("config: m_order must be positive");
    if (N < 2 || N % 2 != 0) throw DomainError("config: N must be even and >= 2");
    if (!(L > 0.0)) throw DomainError("config: L must be positive");
    if (!(T > 0.0)) throw DomainError("config: T must be positive");
    if (!(dt_ref > 0.0)) throw DomainError("config: dt_ref must be positive");
    if (realizations_per_epsilon < 1) throw DomainError("config: realizations_per_epsilon must be >= 1");
    if (spectrum.dimension != d) throw DomainError("config: spectrum dimension must equal d");
    spectrum.validate();
    if (!(packet.sigma0 > 0.0)) throw DomainError("config: packet sigma0 must be positive");
    if (!packet.center.empty() && static_cast<int>(packet.center.size()) != d)
        throw DomainError("config: packet center dimension");
    if (!packet.momentum.empty() && static_cast<int>(packet.momentum.size()) != d)
        throw DomainError("config: packet momentum dimension");
    if (mode == Mode::converge || mode == Mode::volterra) {
        if (epsilon_list.empty()) throw DomainError("config: epsilon_list is empty");
        for (std::size_t i = 0; i < epsilon_list.size(); ++i) {
            const double e = epsilon_list[i];
            if (!(e > 0.0 && e <= 1.0)) throw DomainError("config: epsilon values must lie in (0, 1]");
            if (i > 0 && !(e < epsilon_list[i - 1])) throw DomainError("config: epsilon_list must be strictly decreasing");
        }
    }
    if (dt_check_seeds < 0) throw DomainError("config: dt_check_seeds must be >= 0");
}

int ExperimentConfig::grid_points(double epsilon) const {
    if (!adapt_grid) return N;
    // the packet needs sigma0 >= 4h as well
    int packet_points = static_cast<int>(std::ceil(4.0 * L / packet.sigma0 - 1e-12));
    packet_points += packet_points % 2;
    return std::min(N, std::max(minimal_resolving_points(spectrum, L, epsilon), packet_points));
}

namespace {

ojson to_ojson(const ExperimentConfig& c) {
    ojson j;
    j["d"] = c.d;
    j["m_order"] = c.m_order;
    j["grid"] = {{"N", c.N}, {"L", c.L}, {"adapt_grid", c.adapt_grid}};
    j["spectrum"] = {{"kind", to_string(c.spectrum.kind)}, {"amplitude", c.spectrum.amplitude},
                     {"width", c.spectrum.width}};
    j["packet"] = {{"sigma0", c.packet.sigma0}, {"center", c.packet.center}, {"momentum", c.packet.momentum}};
    j["T"] = c.T;
    j["dt_ref"] = c.dt_ref;
    j["epsilon_list"] = c.epsilon_list;
    j["realizations_per_epsilon"] = c.realizations_per_epsilon;
    j["base_seed"] = c.base_seed;
    j["output_dir"] = c.output_dir;
    j["mode"] = to_string(c.mode);
    j["dt_check_seeds"] = c.dt_check_seeds;
    j["volterra"] = {{"xi_samples", c.xi_samples}, {"t_grid", c.t_grid}};
    j["graphs"] = {{"nbar", c.nbar}};
    return j;
}

template <class T>
void read_opt(const nlohmann::json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

std::vector<double> packet_vec(const std::vector<double>& v, int d) {
    return v.empty() ? std::vector<double>(d, 0.0) : v;
}

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / v.size();
}

std::string hex64(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

template <class Task>
void run_parallel(std::size_t count, int threads, const Task& task) {
    const int workers = std::max(1, std::min<int>(threads, static_cast<int>(count)));
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                task(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = count;
            }
        }
    };
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
}

}  // namespace

ExperimentConfig config_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    ExperimentConfig c;
    read_opt(j, "d", c.d);
    read_opt(j, "m_order", c.m_order);
    if (j.contains("grid")) {
        const auto& g = j.at("grid");
        read_opt(g, "N", c.N);
        read_opt(g, "L", c.L);
        read_opt(g, "adapt_grid", c.adapt_grid);
    }
    c.spectrum.dimension = c.d;
    if (j.contains("spectrum")) {
        const auto& s = j.at("spectrum");
        if (s.contains("kind")) c.spectrum.kind = parse_spectrum_kind(s.at("kind").get<std::string>());
        read_opt(s, "amplitude", c.spectrum.amplitude);
        read_opt(s, "width", c.spectrum.width);
    }
    if (j.contains("packet")) {
        const auto& p = j.at("packet");
        read_opt(p, "sigma0", c.packet.sigma0);
        read_opt(p, "center", c.packet.center);
        read_opt(p, "momentum", c.packet.momentum);
    }
    read_opt(j, "T", c.T);
    read_opt(j, "dt_ref", c.dt_ref);
    read_opt(j, "epsilon_list", c.epsilon_list);
    read_opt(j, "realizations_per_epsilon", c.realizations_per_epsilon);
    read_opt(j, "base_seed", c.base_seed);
    read_opt(j, "output_dir", c.output_dir);
    if (j.contains("mode")) c.mode = parse_mode(j.at("mode").get<std::string>());
    read_opt(j, "dt_check_seeds", c.dt_check_seeds);
    if (j.contains("volterra")) {
        read_opt(j.at("volterra"), "xi_samples", c.xi_samples);
        read_opt(j.at("volterra"), "t_grid", c.t_grid);
    }
    if (j.contains("graphs")) read_opt(j.at("graphs"), "nbar", c.nbar);
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read config " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return config_from_json(ss.str());
    } catch (const nlohmann::json::exception& e) {
        throw DomainError("config " + path + ": " + e.what());
    }
}

std::string config_to_json(const ExperimentConfig& cfg) { return to_ojson(cfg).dump(2); }

std::string config_hash(const ExperimentConfig& cfg) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : to_ojson(cfg).dump()) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return hex64(h);
}

RunRecord run_single(const ExperimentConfig& cfg, double epsilon, std::uint64_t seed, double rho, double dt_scale,
                     const std::string& snapshot_dir) {
    const auto start = std::chrono::steady_clock::now();
    const Grid grid(cfg.d, cfg.grid_points(epsilon), cfg.L);
    const auto center = packet_vec(cfg.packet.center, cfg.d);
    const auto momentum = packet_vec(cfg.packet.momentum, cfg.d);
    const WaveFunction u0 = init_packet(grid, cfg.packet.sigma0, center, momentum);
    const FieldRealization V = sample_scaled_potential(grid, cfg.spectrum, epsilon, cfg.m_order, seed);
    double dt = cfg.dt_ref * std::pow(epsilon, 0.5 * cfg.m_order);
    dt = std::min(dt, admissible_dt(V, cfg.m_order)) * dt_scale;
    const WaveFunction u = evolve(u0, V, cfg.T, {dt, cfg.m_order, Scheme::strang});
    const WaveFunction ref = homogenized_solution(u0.in_frequency(), cfg.T, rho, cfg.m_order);
    RunRecord r;
    r.epsilon = epsilon;
    r.seed = seed;
    r.err_sq = std::pow(l2_error(u, ref), 2);
    r.norm_drift = std::abs(u.norm() - u0.norm());
    r.dt_used = plan_steps(cfg.T, dt).dt;
    r.grid_points = grid.points();
    r.valid = r.norm_drift <= 1e-8;
    if (!snapshot_dir.empty()) {
        std::filesystem::create_directories(snapshot_dir);
        const std::string stem = snapshot_dir + "/eps" + std::to_string(epsilon) + "_seed" + std::to_string(seed);
        write_field_dump(stem + "_field.bin", V);
        write_wave_snapshot(stem + "_u0.bin", u0, epsilon, seed);
        write_wave_snapshot(stem + "_uT.bin", u, epsilon, seed);
        write_wave_snapshot(stem + "_ref.bin", ref, epsilon, seed);
    }
    r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

RateFit fit_rate(const std::vector<RunRecord>& records) {
    std::map<double, std::vector<double>> by_eps;
    for (const auto& r : records)
        if (r.valid) by_eps[r.epsilon].push_back(r.err_sq);
    std::vector<double> x, y;
    for (const auto& [eps, errs] : by_eps) {
        if (errs.size() < 2) continue;
        const double m = mean_of(errs);
        if (!(m > 0.0)) throw NumericError("fit_rate: non-positive mean error");
        x.push_back(std::log(eps));
        y.push_back(std::log(m));
    }
    if (x.size() < 3) throw DomainError("fit_rate: need >= 3 distinct eps with >= 2 records each");
    const auto f = least_squares(x, y);
    return {f.slope, f.intercept, f.slope_stderr};
}

SweepResult run_convergence_sweep(const ExperimentConfig& cfg, int threads) {
    cfg.validate();
    SweepResult res;
    if (cfg.d > cfg.m_order) {
        res.rho = compute_rho(cfg.spectrum, cfg.d, cfg.m_order).rho;
    } else {
        res.regime_warning = true;
        std::fprintf(stderr, "warning: d <= m_order, homogenized reference uses rho = 0\n");
    }
    struct Task {
        double epsilon;
        std::uint64_t seed;
    };
    std::vector<Task> tasks;
    for (double eps : cfg.epsilon_list)
        for (int i = 0; i < cfg.realizations_per_epsilon; ++i) tasks.push_back({eps, cfg.base_seed + i});
    res.records.resize(tasks.size());
    run_parallel(tasks.size(), threads, [&](std::size_t i) {
        try {
            res.records[i] = run_single(cfg, tasks[i].epsilon, tasks[i].seed, res.rho);
        } catch (const ResolutionError& e) {
            throw ResolutionError(std::string(e.what()) + " (eps = " + std::to_string(tasks[i].epsilon) + ")",
                                  e.minimal_points());
        } catch (const ConfigurationError& e) {
            throw ConfigurationError(std::string(e.what()) + " (eps = " + std::to_string(tasks[i].epsilon) + ")",
                                     e.admissible_dt());
        }
    });
    std::sort(res.records.begin(), res.records.end(), [](const RunRecord& a, const RunRecord& b) {
        return a.epsilon != b.epsilon ? a.epsilon > b.epsilon : a.seed < b.seed;
    });

    for (double eps : cfg.epsilon_list) {
        EpsilonStats s;
        s.epsilon = eps;
        std::vector<double> errs;
        s.dt_min = std::numeric_limits<double>::infinity();
        for (const auto& r : res.records) {
            if (r.epsilon != eps) continue;
            s.grid_points = r.grid_points;
            s.dt_min = std::min(s.dt_min, r.dt_used);
            s.dt_max = std::max(s.dt_max, r.dt_used);
            if (!r.valid) {
                ++s.excluded;
                std::fprintf(stderr, "warning: eps %g seed %llu excluded, norm drift %.3g\n", eps,
                             static_cast<unsigned long long>(r.seed), r.norm_drift);
                continue;
            }
            errs.push_back(r.err_sq);
        }
        s.count = static_cast<int>(errs.size());
        s.mean_err_sq = mean_of(errs);
        if (errs.size() > 1) {
            double v = 0.0;
            for (double e : errs) v += (e - s.mean_err_sq) * (e - s.mean_err_sq);
            s.standard_error = std::sqrt(v / (errs.size() - 1) / errs.size());
        }
        res.invalid_count += s.excluded;
        res.stats.push_back(s);
    }
    res.decreasing = res.stats.size() >= 2;
    for (std::size_t i = 1; i < res.stats.size(); ++i)
        if (!(res.stats[i].mean_err_sq < res.stats[i - 1].mean_err_sq)) res.decreasing = false;
    try {
        res.fit = fit_rate(res.records);
        res.has_fit = true;
    } catch (const Error&) {
        res.has_fit = false;
    }

    if (cfg.dt_check_seeds > 0) {
        const double eps = cfg.epsilon_list.back();
        const int n = std::min(cfg.dt_check_seeds, cfg.realizations_per_epsilon);
        std::vector<double> change(n);
        run_parallel(n, threads, [&](std::size_t i) {
            const auto half = run_single(cfg, eps, cfg.base_seed + i, res.rho, 0.5);
            for (const auto& r : res.records)
                if (r.epsilon == eps && r.seed == cfg.base_seed + i) change[i] = std::abs(half.err_sq - r.err_sq);
        });
        res.dt_check.ran = true;
        res.dt_check.epsilon = eps;
        res.dt_check.seeds = n;
        res.dt_check.mean_abs_change = mean_of(change);
        res.dt_check.mean_err_sq = res.stats.back().mean_err_sq;
        res.dt_check.pass = res.dt_check.mean_abs_change < 0.1 * res.dt_check.mean_err_sq;
    }
    return res;
}

std::string sweep_summary_json(const ExperimentConfig& cfg, const SweepResult& res) {
    ojson j;
    j["config"] = to_ojson(cfg);
    j["config_hash"] = config_hash(cfg);
    j["rho"] = res.rho;
    j["regime_warning"] = res.regime_warning;
    j["invalid_count"] = res.invalid_count;
    auto& per = j["per_epsilon"];
    per = ojson::array();
    for (const auto& s : res.stats)
        per.push_back({{"epsilon", s.epsilon},
                       {"count", s.count},
                       {"excluded", s.excluded},
                       {"mean_err_sq", s.mean_err_sq},
                       {"standard_error", s.standard_error},
                       {"grid_points", s.grid_points},
                       {"dt_min", s.dt_min},
                       {"dt_max", s.dt_max}});
    j["strictly_decreasing"] = res.decreasing;
    if (res.has_fit)
        j["fit"] = {{"slope", res.fit.slope}, {"intercept", res.fit.intercept}, {"stderr", res.fit.stderr_}};
    else
        j["fit"] = nullptr;
    if (res.dt_check.ran)
        j["dt_check"] = {{"epsilon", res.dt_check.epsilon},
                         {"seeds", res.dt_check.seeds},
                         {"mean_abs_change", res.dt_check.mean_abs_change},
                         {"mean_err_sq", res.dt_check.mean_err_sq},
                         {"pass", res.dt_check.pass}};
    return j.dump(2);
}

void write_manifest(const ExperimentConfig& cfg, const std::string& dir, const std::vector<std::string>& artifacts) {
    ojson j;
    j["config_hash"] = config_hash(cfg);
    j["mode"] = to_string(cfg.mode);
    j["artifacts"] = artifacts;
    std::ofstream out(dir + "/manifest.json");
    if (!out) throw Error("cannot write manifest in " + dir);
    out << j.dump(2) << '\n';
}

void write_sweep_outputs(const ExperimentConfig& cfg, const SweepResult& res, const std::string& dir) {
    std::filesystem::create_directories(dir);
    {
        std::ofstream out(dir + "/runs.csv");
        if (!out) throw Error("cannot write " + dir + "/runs.csv");
        out.precision(17);
        out << "epsilon,seed,err_sq,norm_drift,wall_time,dt_used,grid_points,valid\n";
        for (const auto& r : res.records)
            out << r.epsilon << ',' << r.seed << ',' << r.err_sq << ',' << r.norm_drift << ',' << r.wall_time << ','
                << r.dt_used << ',' << r.grid_points << ',' << (r.valid ? 1 : 0) << '\n';
    }
    {
        std::ofstream out(dir + "/summary.json");
        out << sweep_summary_json(cfg, res) << '\n';
    }
    {
        std::ofstream out(dir + "/plot.dat");
        out.precision(17);
        out << "# log_epsilon log_mean_err_sq\n";
        for (const auto& s : res.stats)
            if (s.mean_err_sq > 0.0) out << std::log(s.epsilon) << ' ' << std::log(s.mean_err_sq) << '\n';
    }
    write_manifest(cfg, dir, {"runs.csv", "summary.json", "plot.dat"});
}

std::vector<VolterraRow> volterra_table(const ExperimentConfig& cfg) {
    cfg.validate();
    std::vector<double> tg = cfg.t_grid;
    if (tg.empty()) tg = {0.25 * cfg.T, 0.5 * cfg.T, 0.75 * cfg.T, cfg.T};
    std::vector<VolterraRow> rows;
    for (double eps : cfg.epsilon_list)
        for (double xn : cfg.xi_samples) {
            std::vector<double> xi(cfg.d, 0.0);
            xi[0] = xn;
            const auto sol = solve_volterra_simple(1.0, xi, tg, cfg.spectrum, cfg.d, cfg.m_order, eps);
            const double rho_eps = compute_rho_eps(cfg.spectrum, cfg.d, cfg.m_order, eps, xi);
            for (std::size_t i = 0; i < tg.size(); ++i) {
                VolterraRow r;
                r.epsilon = eps;
                r.xi = xn;
                r.t = tg[i];
                r.U = sol.U[i];
                r.homogenized = homogenized_mode(1.0, xn, tg[i], rho_eps, cfg.m_order);
                r.abs_diff = std::abs(r.U - r.homogenized);
                r.truncation_estimate = sol.truncation_estimate;
                rows.push_back(r);
            }
        }
    return rows;
}

std::vector<VolterraRate> volterra_rates(const std::vector<VolterraRow>& rows) {
    std::map<double, std::map<double, double>> worst;  // xi -> eps -> max_t diff
    for (const auto& r : rows) {
        double& w = worst[r.xi][r.epsilon];
        w = std::max(w, r.abs_diff);
    }
    std::vector<VolterraRate> out;
    for (const auto& [xi, per_eps] : worst) {
        std::vector<double> x, y;
        for (const auto& [eps, diff] : per_eps) {
            x.push_back(eps);
            y.push_back(diff);
        }
        out.push_back({xi, loglog_fit(x, y)});
    }
    return out;
}

}  // namespace hsim
