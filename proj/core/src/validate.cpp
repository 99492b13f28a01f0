#include "tvaraug/validate.hpp"

#include "parallel.hpp"
#include "tvaraug/errors.hpp"
#include "tvaraug/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace tvaraug {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr std::size_t kReductionChunks = 64;

// Per-chunk sums of deviations from the theoretical mean, their squares, and
// cross products for channel pairs a < b.
struct MomentSums {
    MomentSums(std::size_t len, std::size_t m_ch)
        : dev(len, m_ch), dev2(len, m_ch), cross(len, m_ch * (m_ch - 1) / 2) {}

    void add(const MomentSums& other) {
        for (std::size_t i = 0; i < dev.data().size(); ++i) {
            dev.data()[i] += other.dev.data()[i];
            dev2.data()[i] += other.dev2.data()[i];
        }
        for (std::size_t i = 0; i < cross.data().size(); ++i) cross.data()[i] += other.cross.data()[i];
    }

    Matrix dev;
    Matrix dev2;
    Matrix cross;
};

bool gap_negligible(double gap, double reference) { return std::abs(gap) <= 1e-9 * (1.0 + std::abs(reference)); }

nlohmann::json matrix_json(const Matrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (double v : m.row(r)) {
            if (std::isfinite(v)) {
                row.push_back(v);
            } else {
                row.push_back(nullptr);
            }
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

nlohmann::json number_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

}  // namespace

SimulatedMoments simulate_moments(const TvarModel& model, std::size_t count, std::uint64_t seed, unsigned threads) {
    if (count == 0) throw Error(ErrorCode::InvalidParameter, "need at least one realization");
    const ClosedFormGenerator generator(model);
    const std::size_t len = generator.length();
    const std::size_t m_ch = generator.channel_count();
    const Matrix& mean = generator.mean();

    const std::size_t chunks = std::min(count, kReductionChunks);
    std::vector<MomentSums> partial(chunks, MomentSums(len, m_ch));
    detail::parallel_chunks(chunks, threads, [&](std::size_t c) {
        MomentSums& sums = partial[c];
        Matrix x;
        std::vector<double> dev(m_ch);
        const std::size_t begin = c * count / chunks;
        const std::size_t end = (c + 1) * count / chunks;
        for (std::size_t k = begin; k < end; ++k) {
            generator.generate_into(derive_stream_seed(seed, k), x);
            for (std::size_t n = 0; n < len; ++n) {
                for (std::size_t m = 0; m < m_ch; ++m) {
                    dev[m] = x(n, m) - mean(n, m);
                    sums.dev(n, m) += dev[m];
                    sums.dev2(n, m) += dev[m] * dev[m];
                }
                std::size_t pair = 0;
                for (std::size_t a = 0; a < m_ch; ++a) {
                    for (std::size_t b = a + 1; b < m_ch; ++b) sums.cross(n, pair++) += dev[a] * dev[b];
                }
            }
        }
    });
    MomentSums total(len, m_ch);
    for (const auto& p : partial) total.add(p);

    const double k = static_cast<double>(count);
    SimulatedMoments out;
    out.realizations = count;
    out.stats.mean = Matrix(len, m_ch);
    out.stats.var = Matrix(len, m_ch);
    for (std::size_t n = 0; n < len; ++n) {
        for (std::size_t m = 0; m < m_ch; ++m) {
            const double mu = total.dev(n, m) / k;
            out.stats.mean(n, m) = mean(n, m) + mu;
            out.stats.var(n, m) = std::max(0.0, total.dev2(n, m) / k - mu * mu);
        }
        std::size_t pair = 0;
        for (std::size_t a = 0; a < m_ch; ++a) {
            for (std::size_t b = a + 1; b < m_ch; ++b, ++pair) {
                const double va = out.stats.var(n, a);
                const double vb = out.stats.var(n, b);
                if (va <= 0.0 || vb <= 0.0) continue;
                const double cov = total.cross(n, pair) / k - (total.dev(n, a) / k) * (total.dev(n, b) / k);
                out.max_abs_corr = std::max(out.max_abs_corr, std::abs(cov) / std::sqrt(va * vb));
            }
        }
    }
    return out;
}

ValidationReport monte_carlo_moments(const TvarModel& model, std::size_t count, std::uint64_t seed,
                                     const Tolerances& tol, unsigned threads) {
    return monte_carlo_moments(model, model, count, seed, tol, threads);
}

ValidationReport monte_carlo_moments(const TvarModel& generator, const TvarModel& reference, std::size_t count,
                                     std::uint64_t seed, const Tolerances& tol, unsigned threads) {
    if (generator.length() != reference.length() || generator.channel_count() != reference.channel_count()) {
        throw Error(ErrorCode::ShapeMismatch, "generator and reference models differ in shape");
    }
    return moments_report(simulate_moments(generator, count, seed, threads), reference, tol);
}

ValidationReport moments_report(const SimulatedMoments& sim, const TvarModel& reference, const Tolerances& tol) {
    const std::size_t count = sim.realizations;
    if (count < 100) throw Error(ErrorCode::InvalidParameter, "Monte-Carlo validation needs K >= 100");
    if (sim.stats.length() != reference.length() || sim.stats.channel_count() != reference.channel_count()) {
        throw Error(ErrorCode::ShapeMismatch, "simulated moments and reference model differ in shape");
    }
    const std::size_t len = reference.length();
    const std::size_t m_ch = reference.channel_count();
    const double k = static_cast<double>(count);

    ValidationReport r;
    r.kind = "monte_carlo";
    r.length = len;
    r.channels = m_ch;
    r.realizations = count;
    r.tolerances = tol;
    r.mean_gap = Matrix(len, m_ch);
    r.z_score = Matrix(len, m_ch, kNaN);
    r.var_rel_err = Matrix(len, m_ch, kNaN);

    std::size_t mean_pass = 0;
    r.var_ok = true;
    for (std::size_t n = 0; n < len; ++n) {
        const auto idx = static_cast<std::int64_t>(n);
        const auto theo_mean = theoretical_mean(reference, idx);
        const auto theo_var = theoretical_cov_diag(reference, idx);
        for (std::size_t m = 0; m < m_ch; ++m) {
            const double gap = sim.stats.mean(n, m) - theo_mean[m];
            r.mean_gap(n, m) = gap;
            if (theo_var[m] > 0.0) {
                const double z = gap / std::sqrt(theo_var[m] / k);
                r.z_score(n, m) = z;
                mean_pass += std::abs(z) < tol.mean_z ? 1 : 0;
            } else {
                mean_pass += gap_negligible(gap, theo_mean[m]) ? 1 : 0;
            }
            if (n >= tol.var_min_n) {
                const double emp = sim.stats.var(n, m);
                const double rel = theo_var[m] > 0.0 ? std::abs(emp - theo_var[m]) / theo_var[m]
                                                     : (emp == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
                r.var_rel_err(n, m) = rel;
                r.max_var_rel_err = std::max(r.max_var_rel_err, rel);
                if (!(rel < tol.var_rel)) r.var_ok = false;
            }
        }
    }
    r.mean_pass_fraction = static_cast<double>(mean_pass) / static_cast<double>(len * m_ch);
    r.mean_ok = r.mean_pass_fraction >= tol.mean_fraction;
    if (len <= tol.var_min_n) r.notes.push_back("horizon too short for the variance check");

    r.origin_var_max = *std::max_element(sim.stats.var.row(0).begin(), sim.stats.var.row(0).end());
    r.origin_ok = r.origin_var_max == 0.0;
    r.max_abs_corr = sim.max_abs_corr;
    r.corr_ok = r.max_abs_corr < tol.max_corr;
    r.low_confidence = count < tol.low_confidence_below;
    r.passed = r.mean_ok && r.var_ok && r.origin_ok && r.corr_ok;
    return r;
}

ValidationReport compare_to_source(const SyntheticBatch& batch, const EnsembleStats& source, const Tolerances& tol) {
    if (batch.series.empty()) throw Error(ErrorCode::ShapeMismatch, "batch is empty");
    const EnsembleStats synthetic = ensemble_stats(std::span<const Matrix>(batch.series));
    return compare_to_source(synthetic, batch.series.size(), source, tol);
}

ValidationReport compare_to_source(const EnsembleStats& synthetic, std::size_t realizations,
                                   const EnsembleStats& source, const Tolerances& tol) {
    const std::size_t len = source.length();
    const std::size_t m_ch = source.channel_count();
    if (synthetic.length() != len || synthetic.channel_count() != m_ch || source.var.rows() != len ||
        synthetic.var.rows() != len) {
        throw Error(ErrorCode::ShapeMismatch, "synthetic and source statistics differ in shape");
    }
    if (realizations == 0) throw Error(ErrorCode::InvalidParameter, "need at least one realization");
    const double count = static_cast<double>(realizations);

    ValidationReport r;
    r.kind = "source";
    r.length = len;
    r.channels = m_ch;
    r.realizations = realizations;
    r.tolerances = tol;
    r.mean_gap = Matrix(len, m_ch);
    r.z_score = Matrix(len, m_ch, kNaN);
    r.var_rel_err = Matrix(len, m_ch, kNaN);

    std::size_t evaluated = 0;
    std::size_t mean_pass = 0;
    r.var_ok = true;
    for (std::size_t n = 0; n < len; ++n) {
        for (std::size_t m = 0; m < m_ch; ++m) {
            const double gap = synthetic.mean(n, m) - source.mean(n, m);
            r.mean_gap(n, m) = gap;
            if (n < tol.var_min_n) continue;
            ++evaluated;
            const double src_var = source.var(n, m);
            if (src_var > 0.0) {
                const double z = gap / std::sqrt(src_var / count);
                r.z_score(n, m) = z;
                mean_pass += std::abs(z) < tol.mean_z ? 1 : 0;
            } else {
                mean_pass += gap_negligible(gap, source.mean(n, m)) ? 1 : 0;
            }
            const double emp = synthetic.var(n, m);
            const double rel = src_var > 0.0 ? std::abs(emp - src_var) / src_var
                                             : (emp == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
            r.var_rel_err(n, m) = rel;
            r.max_var_rel_err = std::max(r.max_var_rel_err, rel);
            if (!(rel < tol.var_rel)) r.var_ok = false;
        }
    }
    if (evaluated == 0) {
        r.notes.push_back("horizon ends before the steady-state window; nothing compared");
        r.mean_pass_fraction = 1.0;
    } else {
        r.mean_pass_fraction = static_cast<double>(mean_pass) / static_cast<double>(evaluated);
    }
    r.mean_ok = r.mean_pass_fraction >= tol.mean_fraction;
    r.origin_var_max = *std::max_element(synthetic.var.row(0).begin(), synthetic.var.row(0).end());
    r.origin_ok = true;
    r.max_abs_corr = kNaN;
    r.corr_ok = true;
    r.low_confidence = realizations < tol.low_confidence_below;
    if (r.low_confidence) r.notes.push_back("few realizations; estimates are low confidence");
    r.passed = r.mean_ok && r.var_ok;
    return r;
}

double phm_score(std::span<const double> predicted_rul, std::span<const double> true_rul) {
    if (predicted_rul.size() != true_rul.size() || predicted_rul.empty()) {
        throw Error(ErrorCode::LengthMismatch, "phm_score needs two non-empty sequences of equal length");
    }
    double score = 0.0;
    for (std::size_t j = 0; j < predicted_rul.size(); ++j) {
        const double d = predicted_rul[j] - true_rul[j];
        score += d < 0.0 ? std::exp(-d / 13.0) - 1.0 : std::exp(d / 10.0) - 1.0;
    }
    return score;
}

double rmse(std::span<const double> predicted, std::span<const double> truth) {
    if (predicted.size() != truth.size() || predicted.empty()) {
        throw Error(ErrorCode::LengthMismatch, "rmse needs two non-empty sequences of equal length");
    }
    double sum = 0.0;
    for (std::size_t j = 0; j < predicted.size(); ++j) {
        const double d = predicted[j] - truth[j];
        sum += d * d;
    }
    return std::sqrt(sum / static_cast<double>(predicted.size()));
}

std::string report_to_json(const ValidationReport& r) {
    nlohmann::json doc{
        {"kind", r.kind},
        {"length", r.length},
        {"channels", r.channels},
        {"realizations", r.realizations},
        {"tolerances",
         {{"mean_z", r.tolerances.mean_z},
          {"mean_fraction", r.tolerances.mean_fraction},
          {"var_rel", r.tolerances.var_rel},
          {"var_min_n", r.tolerances.var_min_n},
          {"max_corr", r.tolerances.max_corr}}},
        {"summary",
         {{"mean_pass_fraction", r.mean_pass_fraction},
          {"max_var_rel_err", number_or_null(r.max_var_rel_err)},
          {"max_abs_corr", number_or_null(r.max_abs_corr)},
          {"origin_var_max", r.origin_var_max}}},
        {"checks",
         {{"mean", r.mean_ok}, {"variance", r.var_ok}, {"correlation", r.corr_ok}, {"origin", r.origin_ok}}},
        {"low_confidence", r.low_confidence},
        {"passed", r.passed},
        {"notes", r.notes},
        {"mean_gap", matrix_json(r.mean_gap)},
        {"z_score", matrix_json(r.z_score)},
        {"var_rel_err", matrix_json(r.var_rel_err)},
    };
    return doc.dump(2) + "\n";
}

void print_report(const ValidationReport& r, std::ostream& out) {
    auto verdict = [](bool ok) { return ok ? "PASS" : "FAIL"; };
    char line[256];
    out << "validation (" << r.kind << "): N=" << r.length << " M=" << r.channels << " K=" << r.realizations << '\n';
    std::snprintf(line, sizeof line, "  %-12s %-6s %s\n", "check", "result", "detail");
    out << line;
    std::snprintf(line, sizeof line, "  %-12s %-6s %.4f of grid points with |z| < %g (need >= %g)\n", "mean",
                  verdict(r.mean_ok), r.mean_pass_fraction, r.tolerances.mean_z, r.tolerances.mean_fraction);
    out << line;
    std::snprintf(line, sizeof line, "  %-12s %-6s max relative error %.4g for n >= %zu (need < %g)\n", "variance",
                  verdict(r.var_ok), r.max_var_rel_err, r.tolerances.var_min_n, r.tolerances.var_rel);
    out << line;
    if (std::isfinite(r.max_abs_corr)) {
        std::snprintf(line, sizeof line, "  %-12s %-6s max |rho| %.4g (need < %g)\n", "correlation", verdict(r.corr_ok),
                      r.max_abs_corr, r.tolerances.max_corr);
    } else {
        std::snprintf(line, sizeof line, "  %-12s %-6s not evaluated\n", "correlation", verdict(r.corr_ok));
    }
    out << line;
    std::snprintf(line, sizeof line, "  %-12s %-6s max variance at n=0: %.4g\n", "origin", verdict(r.origin_ok),
                  r.origin_var_max);
    out << line;
    for (const auto& note : r.notes) out << "  note: " << note << '\n';
    if (r.low_confidence) out << "  low confidence: only " << r.realizations << " realization(s)\n";
    out << "overall: " << verdict(r.passed) << '\n';
}

}  // namespace tvaraug
