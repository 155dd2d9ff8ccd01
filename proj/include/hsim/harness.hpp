#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hsim/math.hpp"
#include "hsim/spectrum.hpp"

namespace hsim {

enum class Mode { converge, volterra, graphs, bounds, rho };

Mode parse_mode(const std::string& s);
std::string to_string(Mode m);

struct PacketConfig {
    double sigma0 = 1.0;
    std::vector<double> center;
    std::vector<double> momentum;
};

struct ExperimentConfig {
    int d = 3;
    double m_order = 2.0;
    int N = 32;
    double L = 6.0;
    SpectrumModel spectrum;
    PacketConfig packet;
    double T = 0.5;
    double dt_ref = 0.004;
    std::vector<double> epsilon_list;
    int realizations_per_epsilon = 1;
    std::uint64_t base_seed = 0;
    std::string output_dir = "out";
    Mode mode = Mode::converge;

    /// Use min(N, minimal resolving points) for each eps instead of N throughout.
    bool adapt_grid = true;
    /// Seeds rerun at dt / 2 on the smallest eps (0 disables the check).
    int dt_check_seeds = 2;
    /// volterra mode: |xi| samples and output times.
    std::vector<double> xi_samples = {0.5, 1.0, 2.0};
    std::vector<double> t_grid;
    /// graphs mode
    int nbar = 3;

    /// Throws DomainError on any violated invariant.
    void validate() const;
    /// Grid points used for a given eps: min(N, points resolving both the scaled
    /// spectrum and the packet) when adapt_grid is set.
    int grid_points(double epsilon) const;
};

ExperimentConfig load_config(const std::string& path);
ExperimentConfig config_from_json(const std::string& text);
/// Canonical JSON (fixed key order, full precision).
std::string config_to_json(const ExperimentConfig& cfg);
/// 64-bit FNV-1a of the canonical JSON, as 16 hex digits.
std::string config_hash(const ExperimentConfig& cfg);

struct RunRecord {
    double epsilon = 0.0;
    std::uint64_t seed = 0;
    double err_sq = 0.0;
    double norm_drift = 0.0;
    double wall_time = 0.0;
    double dt_used = 0.0;
    int grid_points = 0;
    bool valid = true;  ///< false when norm_drift > 1e-8
};

/// One realization: synthesize V_eps, evolve to T, compare with the
/// homogenized solution for the given rho. If `snapshot_dir` is non-empty
/// the field and the initial / final wave functions are dumped there.
RunRecord run_single(const ExperimentConfig& cfg, double epsilon, std::uint64_t seed, double rho,
                     double dt_scale = 1.0, const std::string& snapshot_dir = "");

struct EpsilonStats {
    double epsilon = 0.0;
    int count = 0;
    int excluded = 0;
    double mean_err_sq = 0.0;
    double standard_error = 0.0;
    int grid_points = 0;
    double dt_min = 0.0;
    double dt_max = 0.0;
};

struct RateFit {
    double slope = 0.0;
    double intercept = 0.0;
    double stderr_ = 0.0;
};

struct DtCheck {
    bool ran = false;
    double epsilon = 0.0;
    int seeds = 0;
    double mean_abs_change = 0.0;
    double mean_err_sq = 0.0;
    bool pass = true;  ///< mean_abs_change < 0.1 mean_err_sq
};

struct SweepResult {
    std::vector<RunRecord> records;  ///< sorted by (eps descending, seed)
    std::vector<EpsilonStats> stats;
    double rho = 0.0;
    bool regime_warning = false;
    int invalid_count = 0;
    bool has_fit = false;
    RateFit fit;
    bool decreasing = false;  ///< mean err_sq strictly decreasing along epsilon_list
    DtCheck dt_check;
};

/// Realizations run concurrently on up to `threads` workers; seeds are
/// base_seed + i for i < realizations_per_epsilon.
SweepResult run_convergence_sweep(const ExperimentConfig& cfg, int threads = 1);

/// OLS of log(mean err_sq) on log(eps) over valid records. Needs >= 3
/// distinct eps with >= 2 records each.
RateFit fit_rate(const std::vector<RunRecord>& records);

/// runs.csv, summary.json, plot.dat and manifest.json under `dir`.
void write_sweep_outputs(const ExperimentConfig& cfg, const SweepResult& result, const std::string& dir);
/// Summary JSON (no timings; byte-identical for identical config and seeds).
std::string sweep_summary_json(const ExperimentConfig& cfg, const SweepResult& result);

struct VolterraRow {
    double epsilon = 0.0;
    double xi = 0.0;
    double t = 0.0;
    cplx U;
    cplx homogenized;
    double abs_diff = 0.0;
    double truncation_estimate = 0.0;
};

/// Simple-graph Volterra solution against e^{it(|xi|^m - rho_eps)} for every
/// (eps, |xi|) pair and t in cfg.t_grid (default T/4, T/2, 3T/4, T), u0 = 1.
std::vector<VolterraRow> volterra_table(const ExperimentConfig& cfg);

struct VolterraRate {
    double xi = 0.0;
    LinearFit fit;  ///< log max_t |diff| against log eps
};
std::vector<VolterraRate> volterra_rates(const std::vector<VolterraRow>& rows);

/// Writes `manifest.json` listing `artifacts` (paths relative to dir) and the config hash.
void write_manifest(const ExperimentConfig& cfg, const std::string& dir, const std::vector<std::string>& artifacts);

}  // namespace hsim
