#pragma once

#include "tvaraug/augment.hpp"
#include "tvaraug/matrix.hpp"
#include "tvaraug/stats.hpp"
#include "tvaraug/tvar.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace tvaraug {

struct Tolerances {
    double mean_z = 4.0;              ///< |z| bound on the mean gap
    double mean_fraction = 0.99;      ///< share of grid points that must satisfy it
    double var_rel = 0.05;            ///< relative variance error bound
    std::size_t var_min_n = 5;        ///< variance (and source mean) checked for n >= this
    double max_corr = 0.05;           ///< cross-channel |ρ| bound
    std::size_t low_confidence_below = 30;
};

/**
 * @brief Theoretical (or source) versus empirical moment comparison.
 *
 * Matrices are N×M. Entries that are not evaluated hold NaN (z where the
 * reference variance is zero, variance error below var_min_n).
 */
struct ValidationReport {
    std::string kind;  // "monte_carlo" or "source"
    std::size_t length = 0;
    std::size_t channels = 0;
    std::size_t realizations = 0;
    Tolerances tolerances;

    Matrix mean_gap;
    Matrix z_score;
    Matrix var_rel_err;

    double mean_pass_fraction = 0.0;
    double max_var_rel_err = 0.0;
    double max_abs_corr = 0.0;  ///< NaN when not evaluated
    double origin_var_max = 0.0;

    bool mean_ok = false;
    bool var_ok = false;
    bool corr_ok = false;
    bool origin_ok = false;
    bool low_confidence = false;
    bool passed = false;

    std::vector<std::string> notes;
};

/// Streaming ensemble moments of K realizations plus the largest |ρ| over (n, i<j).
struct SimulatedMoments {
    EnsembleStats stats;
    double max_abs_corr = 0.0;
    std::size_t realizations = 0;
};

SimulatedMoments simulate_moments(const TvarModel& model, std::size_t count, std::uint64_t seed,
                                  unsigned threads = 0);

/// Checks already simulated moments against the theoretical moments of `reference`.
ValidationReport moments_report(const SimulatedMoments& sim, const TvarModel& reference, const Tolerances& tol = {});

/// Generates K realizations from `model` and checks them against its own moments.
ValidationReport monte_carlo_moments(const TvarModel& model, std::size_t count, std::uint64_t seed,
                                     const Tolerances& tol = {}, unsigned threads = 0);

/// Generates from `generator`, compares against the theoretical moments of `reference`.
ValidationReport monte_carlo_moments(const TvarModel& generator, const TvarModel& reference, std::size_t count,
                                     std::uint64_t seed, const Tolerances& tol = {}, unsigned threads = 0);

/// Steady-state (n >= var_min_n) comparison of synthetic against source statistics.
ValidationReport compare_to_source(const SyntheticBatch& batch, const EnsembleStats& source,
                                   const Tolerances& tol = {});
ValidationReport compare_to_source(const EnsembleStats& synthetic, std::size_t realizations,
                                   const EnsembleStats& source, const Tolerances& tol = {});

/// PHM'08 score: Σ e^{-d/13} - 1 for d < 0, e^{d/10} - 1 otherwise; d = predicted - true.
double phm_score(std::span<const double> predicted_rul, std::span<const double> true_rul);
double rmse(std::span<const double> predicted, std::span<const double> truth);

std::string report_to_json(const ValidationReport& report);
void print_report(const ValidationReport& report, std::ostream& out);

}  // namespace tvaraug
