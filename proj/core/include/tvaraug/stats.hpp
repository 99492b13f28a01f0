#pragma once

#include "tvaraug/dataset.hpp"
#include "tvaraug/matrix.hpp"

#include <optional>
#include <span>
#include <vector>

namespace tvaraug {

/**
 * @brief Per-time-step ensemble moments across units.
 *
 * mean and var are N×M. full_cov, when present, holds one M×M matrix per
 * time step whose diagonal equals the matching row of var.
 */
struct EnsembleStats {
    Matrix mean;
    Matrix var;
    std::optional<std::vector<Matrix>> full_cov;

    std::size_t length() const noexcept { return mean.rows(); }
    std::size_t channel_count() const noexcept { return mean.cols(); }
};

struct CovResult {
    Matrix var;
    std::optional<std::vector<Matrix>> full;
};

// Population moments: divisor is the number of units, not units - 1.
Matrix ensemble_mean(std::span<const Matrix> series);
CovResult ensemble_cov(std::span<const Matrix> series, bool full);

Matrix ensemble_mean(const Dataset& ds);
CovResult ensemble_cov(const Dataset& ds, bool full);

EnsembleStats ensemble_stats(std::span<const Matrix> series, bool full = false);
EnsembleStats ensemble_stats(const Dataset& ds, bool full = false);

}  // namespace tvaraug
