#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "hsim/spectrum.hpp"

namespace hsim {

enum class LemmaId { L5_2, P5_3, L5_4, P5_5, P5_6, L5_7, L5_9 };

std::string to_string(LemmaId id);

struct SweepPoint {
    std::map<std::string, double> params;
    double lhs = 0.0;
    double envelope = 0.0;
    double ratio = 0.0;
};

struct ExponentFit {
    double value = 0.0;
    double stderr_ = 0.0;
    double lo = 0.0;  ///< acceptance window
    double hi = 0.0;
    bool within() const { return value >= lo && value <= hi; }
};

struct EnvelopeReport {
    LemmaId lemma_id = LemmaId::L5_2;
    std::vector<SweepPoint> sweep;
    double max_ratio = 0.0;
    double ceiling = 0.0;
    std::map<std::string, ExponentFit> fitted_exponents;
    std::vector<std::string> failures;
    bool pass = false;

    /// pass = finite max_ratio, max_ratio <= 1.05 ceiling, every fit inside
    /// its window and no recorded failure.
    void finalize();
    std::string to_json() const;
    void write_csv(const std::string& path) const;
};

struct BoundsOptions {
    double rel_tol = 1e-8;
    double ceiling = 0.0;  ///< <= 0 means "take from the ceiling file"
};

/// Calibrated ceilings keyed by lemma name ("L5_2", ..., "Theta").
std::map<std::string, double> load_ceilings(const std::string& path = std::string(HSIM_DATA_DIR) +
                                                                      "/bound_ceilings.json");

// Left-hand sides, exposed for direct checks.

/// \int dx / (|x - a + i da| |x - b + i db|), da, db > 0.
double lorentz_pair(double a, double da, double b, double db, double rel_tol = 1e-10);
double lhs_lemma_5_2(double A, double B, double eta, double rel_tol = 1e-10);
double lhs_prop_5_3(double A, double B, double eta, double eta_t, double rel_tol = 1e-8);
/// log_power = 0 gives the plain integral; k > 0 inserts [1 + log_+|(alpha + xi^m/eps^m)/eta|]^k.
double lhs_lemma_5_4(double alpha, double eta, double epsilon, int d, double m_order, int log_power = 0,
                     double rel_tol = 1e-10);
double lhs_lemma_5_7(double alpha, double eta, double omega_norm, int d, double m_order,
                     double rel_tol = 1e-10);
double lhs_lemma_5_9(double epsilon, double xi_norm, const SpectrumModel& spectrum, int d, double m_order,
                     double rel_tol = 1e-10);

double envelope_lemma_5_2(double A, double B, double eta);
double envelope_prop_5_3(double A, double B, double eta_t);
double envelope_lemma_5_4(double alpha, double epsilon, double exponent, double m_order);
double envelope_lemma_5_7(double alpha, double eta);
double envelope_lemma_5_9(double epsilon, double xi_norm, int d, double m_order);

// Verifiers.

EnvelopeReport verify_lemma_5_2(std::span<const double> A_range, std::span<const double> B_range,
                                std::span<const double> eta_range, const BoundsOptions& opt = {});

struct EtaPair {
    double eta = 0.0;
    double eta_t = 0.0;
};
/// Throws PreconditionError unless every pair has eta_t > 2 eta.
EnvelopeReport verify_prop_5_3(std::span<const double> A_range, std::span<const double> B_range,
                               std::span<const EtaPair> eta_pairs, const BoundsOptions& opt = {});

/// Variant flags for the Lemma 5.4 family.
struct Lemma54Variant {
    LemmaId id = LemmaId::L5_4;  ///< L5_4, P5_5 or P5_6
    double delta = 0.1;          ///< P5_5: envelope exponent lambda (1 - delta)
    int log_power = 2;           ///< P5_6: k
};
/// The epsilon exponent is fitted at alpha = 1 (or the first alpha if 1 is absent).
EnvelopeReport verify_lemma_5_4(std::span<const double> alpha_range, double eta,
                                std::span<const double> epsilon_range, int d, double m_order,
                                const Lemma54Variant& variant = {}, const BoundsOptions& opt = {});

/// sup over omega is taken over the given |omega| samples. For each alpha the
/// slope of LHS <alpha> against |log eta| is fitted and must lie in (0, ceiling].
EnvelopeReport verify_lemma_5_7(std::span<const double> alpha_range, std::span<const double> eta_range,
                                std::span<const double> omega_samples, int d, double m_order,
                                const BoundsOptions& opt = {});

/// The epsilon exponent is fitted at the first xi sample; window
/// [min(m, d-m) - 0.2, min(m, d-m) + 0.1].
EnvelopeReport verify_lemma_5_9(std::span<const double> epsilon_range, std::span<const double> xi_samples,
                                const SpectrumModel& spectrum, int d, double m_order,
                                const BoundsOptions& opt = {});

struct ThetaSweepReport {
    std::size_t points = 0;
    double sup_abs = 0.0;
    double ceiling = 0.0;
    bool pass = false;
    std::string to_json() const;
};

/// sup |Theta_{alpha,eta}(xi0)| over a (alpha, eta, |xi0|, eps) product grid of
/// 5 x 5 x 5 x 8 points; `refined` shifts every axis to interleaved values.
ThetaSweepReport sweep_theta_bound(const SpectrumModel& spectrum, int d, double m_order, bool refined,
                                   double ceiling);

struct BoundsSuite {
    std::vector<EnvelopeReport> reports;
    /// max_ratio at rel_tol / 10, in the same order as reports.
    std::vector<double> refined_max_ratio;
    ThetaSweepReport theta;
    ThetaSweepReport theta_refined;
    bool stable = false;  ///< every refined max_ratio within 5%
    bool pass = false;
};

/// Runs every verifier on its default sweep, including (d, m) = (3, 2) and
/// (5, 2) for the Lemma 5.4 exponent. When `ceilings` lacks a key the
/// corresponding report records a failure.
BoundsSuite run_bounds_suite(const std::map<std::string, double>& ceilings, double rel_tol = 1e-8);

}  // namespace hsim
