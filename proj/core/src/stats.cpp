#include "tvaraug/stats.hpp"

#include "tvaraug/errors.hpp"

namespace tvaraug {
namespace {

void check_shapes(std::span<const Matrix> series) {
    if (series.empty()) throw Error(ErrorCode::EmptyUnit, "ensemble statistics need at least one series");
    const auto& first = series.front();
    for (const auto& s : series) {
        if (s.rows() != first.rows() || s.cols() != first.cols()) {
            throw Error(ErrorCode::ShapeMismatch, "ensemble members differ in shape");
        }
    }
}

}  // namespace

Matrix ensemble_mean(std::span<const Matrix> series) {
    check_shapes(series);
    const std::size_t n_steps = series.front().rows();
    const std::size_t m_ch = series.front().cols();
    const double count = static_cast<double>(series.size());
    Matrix mean(n_steps, m_ch);
    for (const auto& s : series) {
        for (std::size_t n = 0; n < n_steps; ++n) {
            for (std::size_t m = 0; m < m_ch; ++m) mean(n, m) += s(n, m);
        }
    }
    for (double& v : mean.data()) v /= count;
    return mean;
}

CovResult ensemble_cov(std::span<const Matrix> series, bool full) {
    const Matrix mean = ensemble_mean(series);
    const std::size_t n_steps = mean.rows();
    const std::size_t m_ch = mean.cols();
    const double count = static_cast<double>(series.size());

    CovResult out{Matrix(n_steps, m_ch), std::nullopt};
    if (full) out.full.emplace(n_steps, Matrix(m_ch, m_ch));

    std::vector<double> dev(m_ch);
    for (std::size_t n = 0; n < n_steps; ++n) {
        for (const auto& s : series) {
            for (std::size_t m = 0; m < m_ch; ++m) dev[m] = s(n, m) - mean(n, m);
            for (std::size_t m = 0; m < m_ch; ++m) out.var(n, m) += dev[m] * dev[m];
            if (full) {
                Matrix& c = (*out.full)[n];
                for (std::size_t a = 0; a < m_ch; ++a) {
                    for (std::size_t b = a + 1; b < m_ch; ++b) c(a, b) += dev[a] * dev[b];
                }
            }
        }
        for (std::size_t m = 0; m < m_ch; ++m) out.var(n, m) /= count;
        if (full) {
            Matrix& c = (*out.full)[n];
            for (std::size_t a = 0; a < m_ch; ++a) {
                c(a, a) = out.var(n, a);
                for (std::size_t b = a + 1; b < m_ch; ++b) {
                    c(a, b) /= count;
                    c(b, a) = c(a, b);
                }
            }
        }
    }
    return out;
}

Matrix ensemble_mean(const Dataset& ds) { return ensemble_mean(std::span<const Matrix>(ds.units)); }

CovResult ensemble_cov(const Dataset& ds, bool full) { return ensemble_cov(std::span<const Matrix>(ds.units), full); }

EnsembleStats ensemble_stats(std::span<const Matrix> series, bool full) {
    auto cov = ensemble_cov(series, full);
    return EnsembleStats{ensemble_mean(series), std::move(cov.var), std::move(cov.full)};
}

EnsembleStats ensemble_stats(const Dataset& ds, bool full) { return ensemble_stats(std::span<const Matrix>(ds.units), full); }

}  // namespace tvaraug
