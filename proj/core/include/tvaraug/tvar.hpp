#pragma once

#include "tvaraug/interp.hpp"
#include "tvaraug/matrix.hpp"
#include "tvaraug/stats.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace tvaraug {

// Convergence matrices of a single sub-process, per channel:
//   S(n) = exp(r1^n),  R(n) = 1 - r2^n,
//   g(l) = [R(l) / S(l)]^2, the cumulative noise-weight function.
double convergence_s(double r1, std::int64_t n);
double convergence_r(double r2, std::int64_t n);
double noise_weight_g(double r1, double r2, std::int64_t l);
/// g(l+1) - g(l), rearranged so no cancellation occurs; non-negative for rates in (0,1).
double noise_weight_step(double r1, double r2, std::int64_t l);

/// f_{m,0}(n) = p(n+1) e^{r1^{n+1}} / (p(n) e^{r1^n}). Throws DivisionByZero if p(n) == 0.
double basis_f0(const InterpFn& p, double r1, std::int64_t n);

/**
 * f_{m,1}(n) = λ p(n+1) e^{r1^{n+1}} sqrt((1-r2^{n+1})^2 / e^{2 r1^{n+1}} - (1-r2^n)^2 / e^{2 r1^n}).
 * Throws NegativeRadicand if the bracket is negative.
 */
double basis_f1(const InterpFn& p, double lambda, double r1, double r2, std::int64_t n);

/**
 * @brief Rates, gains and noise scale of one channel of the decoupled model.
 *
 * The mean side is sub-process 1 (rate r1_mean, initial state x_tilde0);
 * the covariance side is sub-process 2 (rates r1_cov, r2_cov, gain lambda2).
 * Sub-process 1 has zero gain and sub-process 2 zero initial state; neither
 * is stored.
 */
struct ChannelTvarParams {
    double r1_mean = 0.01;
    double r1_cov = 0.01;
    double r2_cov = 0.01;
    double lambda2 = 1.0;
    double x_tilde0 = 1.0;
    double noise_std = 0.1;

    /// Rates in (0,1), lambda2 != 0, noise_std > 0, all finite; else InvalidParameter.
    void validate() const;

    friend bool operator==(const ChannelTvarParams&, const ChannelTvarParams&) = default;
};

enum class FitMode { MomentMatching, PaperLiteral };
enum class InterpMode { Direct, Sinusoid };

struct ChannelModel {
    InterpFn p1;
    InterpFn p2;
    ChannelTvarParams params;
};

/**
 * @brief Fitted decoupled TVAR model; immutable once constructed.
 *
 * The constructor checks every channel (interpolation lengths, parameter
 * ranges, and in PaperLiteral mode p1(n), p2(n) != 0) and computes a content
 * fingerprint over everything except the warnings.
 */
class TvarModel {
public:
    TvarModel(std::size_t length, std::vector<std::string> channel_names, std::vector<ChannelModel> channels,
              FitMode fit_mode, std::int64_t time_origin = 0, std::int64_t time_step = 1,
              std::vector<std::string> warnings = {});

    std::size_t length() const noexcept { return length_; }
    std::size_t channel_count() const noexcept { return channels_.size(); }
    const ChannelModel& channel(std::size_t m) const { return channels_.at(m); }
    const std::vector<ChannelModel>& channels() const noexcept { return channels_; }
    const std::vector<std::string>& channel_names() const noexcept { return names_; }
    FitMode fit_mode() const noexcept { return fit_mode_; }
    std::int64_t time_origin() const noexcept { return time_origin_; }
    std::int64_t time_step() const noexcept { return time_step_; }
    const std::string& fingerprint() const noexcept { return fingerprint_; }
    const std::vector<std::string>& warnings() const noexcept { return warnings_; }

private:
    std::size_t length_;
    std::vector<std::string> names_;
    std::vector<ChannelModel> channels_;
    FitMode fit_mode_;
    std::int64_t time_origin_;
    std::int64_t time_step_;
    std::vector<std::string> warnings_;
    std::string fingerprint_;
};

/// E[x(n)] per channel: p1(n) e^{r1_mean^n} x_tilde0.
std::vector<double> theoretical_mean(const TvarModel& model, std::int64_t n);

/// Var[x(n)] per channel: p2(n)^2 (1 - r2_cov^n)^2 lambda2^2 noise_std^2.
std::vector<double> theoretical_cov_diag(const TvarModel& model, std::int64_t n);

struct ModelConfig {
    ChannelTvarParams defaults;
    std::map<std::string, ChannelTvarParams> channel_params;  ///< keyed by channel name
    FitMode fit_mode = FitMode::MomentMatching;
    InterpMode interp_mode = InterpMode::Direct;
    std::size_t order = 0;  ///< sinusoid order P; 0 means N
};

/**
 * Assign p1 from the mean curve and p2 from the variance curve.
 *
 * MomentMatching: p2 = sqrt(var) / (lambda2 * noise_std), so the steady-state
 * model variance equals the empirical variance. PaperLiteral: p2 = var.
 * A channel whose p2 vanishes somewhere gets a DegenerateCovariance warning.
 */
TvarModel build_model(const EnsembleStats& stats, const std::vector<std::string>& channel_names,
                      const ModelConfig& config, std::int64_t time_origin = 0, std::int64_t time_step = 1);

/**
 * @brief Precomputed decoupled closed-form generator for one model.
 *
 *   x(0)   = m(0)
 *   x(n+1) = m(n+1) + p2(n+1) S2(n+1) λ2 Σ_{l<=n} sqrt(g2(l+1) - g2(l)) v(l)
 *
 * with v(l) ~ N(0, noise_std^2) i.i.d. per channel. Noise is drawn in
 * (l, m) row-major order, l = 0..N-2.
 */
class ClosedFormGenerator {
public:
    explicit ClosedFormGenerator(const TvarModel& model);

    std::size_t length() const noexcept { return mean_.rows(); }
    std::size_t channel_count() const noexcept { return mean_.cols(); }

    Matrix generate(std::uint64_t seed) const;

    /// Same as generate() but reuses `out` (resized to N×M as needed).
    void generate_into(std::uint64_t seed, Matrix& out) const;

    /// noise holds already-scaled v(l) in row l; needs at least N-1 rows.
    Matrix generate_with_noise(const Matrix& noise) const;

    /// Fills `noise` with v(l) for the given seed (N-1 rows).
    Matrix draw_noise(std::uint64_t seed) const;

    const Matrix& mean() const noexcept { return mean_; }

private:
    Matrix mean_;      // m(n)
    Matrix scale_;     // p2(n) S2(n) λ2
    Matrix weight_;    // sqrt(g2(l+1) - g2(l)), N-1 rows
    std::vector<double> noise_std_;
};

Matrix generate_closed(const TvarModel& model, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Single sub-process form, used as the reference path for the decoupled model.

struct SubprocessChannel {
    InterpFn p;
    double scale_rate = 0.01;  ///< drives S(n)
    double ramp_rate = 0.01;   ///< drives R(n)
    double gain = 1.0;         ///< λ
    double x_tilde0 = 1.0;
    double noise_std = 0.1;
};

struct Subprocess {
    std::size_t length = 0;
    std::vector<SubprocessChannel> channels;
};

/// Sub-process 1 of the decoupled model (zero gain).
Subprocess mean_subprocess(const TvarModel& model);
/// Sub-process 2 of the decoupled model (zero initial state).
Subprocess cov_subprocess(const TvarModel& model);

/// A(n) = P(n+1) S(n+1) P^-1(n) S^-1(n), diagonal entry for channel m.
double coeff_a(const Subprocess& sub, std::size_t m, std::int64_t n);
/// B(n) = Λ P(n+1) S(n+1) [ (R(n+1)/S(n+1))^2 - (R(n)/S(n))^2 ]^{1/2}.
double coeff_b(const Subprocess& sub, std::size_t m, std::int64_t n);

/// Closed forms: m(n) = P(n) S(n) x̃(0) and C(n) = P^2(n) R^2(n) Λ^2 Φ.
std::vector<double> subprocess_mean(const Subprocess& sub, std::int64_t n);
std::vector<double> subprocess_cov_diag(const Subprocess& sub, std::int64_t n);

/// Unreduced product form ∏_{k=0}^{n} A(k) x(0); this is E[x(n+1)].
std::vector<double> mean_product_form(const Subprocess& sub, std::int64_t n);
/// Unreduced sum form {B^2(n) + Σ_{l<n} [B(l) ∏_{k=l+1}^{n} A(k)]^2} Φ; this is Var[x(n+1)].
std::vector<double> cov_sum_form(const Subprocess& sub, std::int64_t n);

/// Initial state x(0) = Γ^-1 x̃(0) with Γ = diag(e^-1 / p(0)).
std::vector<double> initial_state(const Subprocess& sub);

/// Iterates x(n+1) = A(n) x(n) + B(n) v(n) with caller-supplied v (N-1 rows used).
Matrix generate_recursive(const Subprocess& sub, const Matrix& noise);

/// Rearranged general term x(n+1) = P(n+1) S(n+1) {x̃(0) + Λ Σ sqrt(g(l+1)-g(l)) v(l)}.
Matrix generate_subprocess_closed(const Subprocess& sub, const Matrix& noise);

/// Sum of the recursively generated sub-processes driven by the same noise.
Matrix generate_recursive(const TvarModel& model, const Matrix& noise);

}  // namespace tvaraug
