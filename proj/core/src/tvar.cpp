#include "tvaraug/tvar.hpp"

#include "tvaraug/errors.hpp"
#include "tvaraug/rng.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <set>
#include <string>
#include <unordered_set>

namespace tvaraug {
namespace {

// Bumped whenever the hashed layout changes.
constexpr std::uint64_t kFingerprintSalt = 1;

std::string at(std::int64_t n) { return "n=" + std::to_string(n); }

double mean_term(const InterpFn& p1, double rate, double x_tilde0, std::int64_t n) {
    return p1(n) * convergence_s(rate, n) * x_tilde0;
}

double cov_term(const InterpFn& p, double ramp_rate, double gain, double noise_std, std::int64_t n) {
    const double pv = p(n);
    const double r = convergence_r(ramp_rate, n);
    return (pv * pv) * (r * r) * (gain * gain) * (noise_std * noise_std);
}

// sqrt(g(l+1) - g(l)), the per-step noise weight of the rearranged general term.
double step_weight(double scale_rate, double ramp_rate, std::int64_t l) {
    const double radicand = noise_weight_step(scale_rate, ramp_rate, l);
    if (radicand < 0.0) {
        throw Error(ErrorCode::NegativeRadicand, "noise weight radicand " + std::to_string(radicand) + " at l=" +
                                                     std::to_string(l));
    }
    return std::sqrt(radicand);
}

void check_noise_rows(const Matrix& noise, std::size_t length, std::size_t channels) {
    const std::size_t need = length - 1;
    if (noise.rows() < need || noise.cols() != channels) {
        throw Error(ErrorCode::ShapeMismatch, "noise must be at least " + std::to_string(need) + "x" +
                                                  std::to_string(channels) + ", got " + std::to_string(noise.rows()) +
                                                  "x" + std::to_string(noise.cols()));
    }
}

void validate_interp(const InterpFn& fn, std::size_t length, const std::string& what) {
    if (fn.length() != length) {
        throw Error(ErrorCode::ShapeMismatch,
                    what + " has length " + std::to_string(fn.length()) + ", model horizon is " + std::to_string(length));
    }
    if (fn.is_table()) {
        for (double v : fn.table().values) {
            if (!std::isfinite(v)) throw Error(ErrorCode::NonFiniteStats, what + " holds a non-finite value");
        }
        return;
    }
    const auto& s = fn.sinusoid();
    if (s.terms.size() > length) throw Error(ErrorCode::InvalidOrder, what + " has more terms than bins");
    std::unordered_set<std::size_t> seen;
    for (const auto& t : s.terms) {
        if (t.freq_index >= length || !seen.insert(t.freq_index).second) {
            throw Error(ErrorCode::InvalidParameter, what + " has an invalid or repeated frequency index");
        }
        if (!std::isfinite(t.magnitude) || t.magnitude < 0.0 || !std::isfinite(t.phase)) {
            throw Error(ErrorCode::InvalidParameter, what + " has a non-finite or negative term");
        }
    }
}

// FNV-1a, 64 bit.
class Fnv1a {
public:
    void bytes(const void* data, std::size_t size) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < size; ++i) {
            hash_ ^= p[i];
            hash_ *= 0x100000001B3ULL;
        }
    }
    void u64(std::uint64_t v) { bytes(&v, sizeof v); }
    void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
    void str(const std::string& s) {
        u64(s.size());
        bytes(s.data(), s.size());
    }
    void interp(const InterpFn& fn) {
        if (fn.is_table()) {
            u64(0);
            u64(fn.table().values.size());
            for (double v : fn.table().values) f64(v);
        } else {
            const auto& s = fn.sinusoid();
            u64(1);
            u64(s.length);
            u64(s.terms.size());
            for (const auto& t : s.terms) {
                u64(t.freq_index);
                f64(t.magnitude);
                f64(t.phase);
            }
        }
    }
    std::uint64_t value() const { return hash_; }

private:
    std::uint64_t hash_ = 0xCBF29CE484222325ULL;
};

}  // namespace

double convergence_s(double r1, std::int64_t n) { return std::exp(std::pow(r1, static_cast<double>(n))); }

double convergence_r(double r2, std::int64_t n) { return 1.0 - std::pow(r2, static_cast<double>(n)); }

double noise_weight_g(double r1, double r2, std::int64_t l) {
    const double r = convergence_r(r2, l);
    return (r * r) / std::exp(2.0 * std::pow(r1, static_cast<double>(l)));
}

double noise_weight_step(double r1, double r2, std::int64_t l) {
    // With a = r2^l, b = r1^l:
    //   g(l+1) - g(l) = e^{-2 b r1} [ a (1 - r2)(2 - a (1 + r2)) + (1 - a)^2 (1 - e^{-2 b (1 - r1)}) ]
    const double a = std::pow(r2, static_cast<double>(l));
    const double b = std::pow(r1, static_cast<double>(l));
    const double one_minus_a = convergence_r(r2, l);
    const double ramp = a * (1.0 - r2) * (2.0 - a * (1.0 + r2));
    const double decay = -std::expm1(-2.0 * b * (1.0 - r1));
    return std::exp(-2.0 * b * r1) * (ramp + one_minus_a * one_minus_a * decay);
}

double basis_f0(const InterpFn& p, double r1, std::int64_t n) {
    const double pn = p(n);
    if (pn == 0.0) throw Error(ErrorCode::DivisionByZero, "interpolation function is zero at " + at(n));
    const double next = p(n + 1) * std::exp(std::pow(r1, static_cast<double>(n + 1)));
    return next / (pn * std::exp(std::pow(r1, static_cast<double>(n))));
}

double basis_f1(const InterpFn& p, double lambda, double r1, double r2, std::int64_t n) {
    const double radicand = noise_weight_step(r1, r2, n);
    if (radicand < 0.0) {
        throw Error(ErrorCode::NegativeRadicand, "basis f1 radicand " + std::to_string(radicand) + " at " + at(n));
    }
    return lambda * p(n + 1) * std::exp(std::pow(r1, static_cast<double>(n + 1))) * std::sqrt(radicand);
}

void ChannelTvarParams::validate() const {
    auto rate = [](double r, const char* name) {
        if (!(r > 0.0 && r < 1.0)) {
            throw Error(ErrorCode::InvalidParameter, std::string(name) + "=" + std::to_string(r) + " must lie in (0, 1)");
        }
    };
    rate(r1_mean, "r1_mean");
    rate(r1_cov, "r1_cov");
    rate(r2_cov, "r2_cov");
    if (!std::isfinite(lambda2) || lambda2 == 0.0) throw Error(ErrorCode::InvalidParameter, "lambda2 must be finite and non-zero");
    if (!std::isfinite(x_tilde0)) throw Error(ErrorCode::InvalidParameter, "x_tilde0 must be finite");
    if (!(noise_std > 0.0) || !std::isfinite(noise_std)) throw Error(ErrorCode::InvalidParameter, "noise_std must be positive");
}

TvarModel::TvarModel(std::size_t length, std::vector<std::string> channel_names, std::vector<ChannelModel> channels,
                     FitMode fit_mode, std::int64_t time_origin, std::int64_t time_step,
                     std::vector<std::string> warnings)
    : length_(length),
      names_(std::move(channel_names)),
      channels_(std::move(channels)),
      fit_mode_(fit_mode),
      time_origin_(time_origin),
      time_step_(time_step),
      warnings_(std::move(warnings)) {
    if (length_ < 2) throw Error(ErrorCode::DegenerateLength, "model horizon must be at least 2");
    if (channels_.empty()) throw Error(ErrorCode::ShapeMismatch, "model has no channels");
    if (names_.size() != channels_.size()) throw Error(ErrorCode::ShapeMismatch, "channel name count differs from channel count");
    if (time_step_ <= 0) throw Error(ErrorCode::InvalidParameter, "time_step must be positive");
    std::set<std::string> seen;
    for (std::size_t m = 0; m < channels_.size(); ++m) {
        const std::string& name = names_[m];
        if (!seen.insert(name).second) throw Error(ErrorCode::DuplicateColumn, "channel '" + name + "' repeated");
        const auto& ch = channels_[m];
        validate_interp(ch.p1, length_, "p1 of channel '" + name + "'");
        validate_interp(ch.p2, length_, "p2 of channel '" + name + "'");
        ch.params.validate();
        if (fit_mode_ == FitMode::PaperLiteral) {
            for (std::size_t n = 0; n < length_; ++n) {
                const auto idx = static_cast<std::int64_t>(n);
                if (ch.p1(idx) == 0.0 || ch.p2(idx) == 0.0) {
                    throw Error(ErrorCode::R1Violation, "channel '" + name + "': interpolation function is zero at " +
                                                            at(idx) + " (p(n) != 0 is required)");
                }
            }
        }
    }

    Fnv1a h;
    h.u64(kFingerprintSalt);
    h.u64(length_);
    h.u64(channels_.size());
    h.u64(fit_mode_ == FitMode::PaperLiteral ? 1 : 0);
    h.u64(static_cast<std::uint64_t>(time_origin_));
    h.u64(static_cast<std::uint64_t>(time_step_));
    for (std::size_t m = 0; m < channels_.size(); ++m) {
        const auto& ch = channels_[m];
        h.str(names_[m]);
        h.interp(ch.p1);
        h.interp(ch.p2);
        for (double v : {ch.params.r1_mean, ch.params.r1_cov, ch.params.r2_cov, ch.params.lambda2, ch.params.x_tilde0,
                         ch.params.noise_std}) {
            h.f64(v);
        }
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(h.value()));
    fingerprint_ = buf;
}

std::vector<double> theoretical_mean(const TvarModel& model, std::int64_t n) {
    std::vector<double> out;
    out.reserve(model.channel_count());
    for (const auto& ch : model.channels()) out.push_back(mean_term(ch.p1, ch.params.r1_mean, ch.params.x_tilde0, n));
    return out;
}

std::vector<double> theoretical_cov_diag(const TvarModel& model, std::int64_t n) {
    std::vector<double> out;
    out.reserve(model.channel_count());
    for (const auto& ch : model.channels()) {
        out.push_back(cov_term(ch.p2, ch.params.r2_cov, ch.params.lambda2, ch.params.noise_std, n));
    }
    return out;
}

TvarModel build_model(const EnsembleStats& stats, const std::vector<std::string>& channel_names,
                      const ModelConfig& config, std::int64_t time_origin, std::int64_t time_step) {
    const std::size_t len = stats.length();
    const std::size_t m_ch = stats.channel_count();
    if (stats.var.rows() != len || stats.var.cols() != m_ch || channel_names.size() != m_ch) {
        throw Error(ErrorCode::ShapeMismatch, "statistics and channel names disagree in shape");
    }
    for (std::size_t n = 0; n < len; ++n) {
        for (std::size_t m = 0; m < m_ch; ++m) {
            if (!std::isfinite(stats.mean(n, m)) || !std::isfinite(stats.var(n, m)) || stats.var(n, m) < 0.0) {
                throw Error(ErrorCode::NonFiniteStats, "channel '" + channel_names[m] + "' has invalid statistics at " +
                                                           at(static_cast<std::int64_t>(n)));
            }
        }
    }
    for (const auto& [name, params] : config.channel_params) {
        if (std::find(channel_names.begin(), channel_names.end(), name) == channel_names.end()) {
            throw Error(ErrorCode::InvalidConfig, "parameters given for unknown channel '" + name + "'");
        }
    }
    const std::size_t order = config.order == 0 ? len : config.order;

    std::vector<ChannelModel> channels;
    std::vector<std::string> warnings;
    for (std::size_t m = 0; m < m_ch; ++m) {
        const auto it = config.channel_params.find(channel_names[m]);
        const ChannelTvarParams params = it != config.channel_params.end() ? it->second : config.defaults;
        params.validate();

        std::vector<double> mean_curve = stats.mean.column(m);
        std::vector<double> cov_curve = stats.var.column(m);
        if (config.fit_mode == FitMode::MomentMatching) {
            const double denom = params.lambda2 * params.noise_std;
            for (double& v : cov_curve) v = std::sqrt(v) / denom;
        }

        ChannelModel ch;
        ch.params = params;
        if (config.interp_mode == InterpMode::Sinusoid) {
            ch.p1 = fit_sinusoid(mean_curve, order);
            ch.p2 = fit_sinusoid(cov_curve, order);
        } else {
            ch.p1 = fit_direct(mean_curve);
            ch.p2 = fit_direct(cov_curve);
        }

        if (config.fit_mode == FitMode::MomentMatching) {
            std::size_t degenerate = 0;
            for (double v : ch.p2.sample()) degenerate += v <= 0.0 ? 1 : 0;
            if (degenerate > 0) {
                warnings.push_back("DegenerateCovariance: channel '" + channel_names[m] + "' has non-positive p2 at " +
                                   std::to_string(degenerate) + " of " + std::to_string(len) +
                                   " time step(s); those steps carry no noise");
            }
        }
        channels.push_back(std::move(ch));
    }
    return TvarModel(len, channel_names, std::move(channels), config.fit_mode, time_origin, time_step,
                     std::move(warnings));
}

ClosedFormGenerator::ClosedFormGenerator(const TvarModel& model)
    : mean_(model.length(), model.channel_count()),
      scale_(model.length(), model.channel_count()),
      weight_(model.length() - 1, model.channel_count()) {
    const std::size_t len = model.length();
    for (std::size_t m = 0; m < model.channel_count(); ++m) {
        const auto& ch = model.channel(m);
        const auto& pr = ch.params;
        noise_std_.push_back(pr.noise_std);
        for (std::size_t n = 0; n < len; ++n) {
            const auto idx = static_cast<std::int64_t>(n);
            mean_(n, m) = mean_term(ch.p1, pr.r1_mean, pr.x_tilde0, idx);
            scale_(n, m) = ch.p2(idx) * convergence_s(pr.r1_cov, idx) * pr.lambda2;
            if (n + 1 < len) weight_(n, m) = step_weight(pr.r1_cov, pr.r2_cov, idx);
        }
    }
}

namespace {

template <class NextNoise>
void run_closed(const Matrix& mean, const Matrix& scale, const Matrix& weight, NextNoise&& next_noise, Matrix& out) {
    const std::size_t len = mean.rows();
    const std::size_t m_ch = mean.cols();
    if (out.rows() != len || out.cols() != m_ch) out = Matrix(len, m_ch);
    std::vector<double> acc(m_ch, 0.0);
    for (std::size_t m = 0; m < m_ch; ++m) out(0, m) = mean(0, m);
    for (std::size_t n = 1; n < len; ++n) {
        for (std::size_t m = 0; m < m_ch; ++m) {
            acc[m] += weight(n - 1, m) * next_noise(n - 1, m);
            out(n, m) = mean(n, m) + scale(n, m) * acc[m];
        }
    }
}

}  // namespace

Matrix ClosedFormGenerator::draw_noise(std::uint64_t seed) const {
    GaussianStream gauss(seed);
    Matrix noise(length() - 1, channel_count());
    for (std::size_t l = 0; l + 1 < length(); ++l) {
        for (std::size_t m = 0; m < channel_count(); ++m) noise(l, m) = noise_std_[m] * gauss();
    }
    return noise;
}

void ClosedFormGenerator::generate_into(std::uint64_t seed, Matrix& out) const {
    GaussianStream gauss(seed);
    run_closed(mean_, scale_, weight_, [&](std::size_t, std::size_t m) { return noise_std_[m] * gauss(); }, out);
}

Matrix ClosedFormGenerator::generate(std::uint64_t seed) const {
    Matrix out;
    generate_into(seed, out);
    return out;
}

Matrix ClosedFormGenerator::generate_with_noise(const Matrix& noise) const {
    check_noise_rows(noise, length(), channel_count());
    Matrix out;
    run_closed(mean_, scale_, weight_, [&](std::size_t l, std::size_t m) { return noise(l, m); }, out);
    return out;
}

Matrix generate_closed(const TvarModel& model, std::uint64_t seed) { return ClosedFormGenerator(model).generate(seed); }

Subprocess mean_subprocess(const TvarModel& model) {
    Subprocess sub{model.length(), {}};
    for (const auto& ch : model.channels()) {
        sub.channels.push_back({ch.p1, ch.params.r1_mean, ch.params.r1_mean, 0.0, ch.params.x_tilde0, ch.params.noise_std});
    }
    return sub;
}

Subprocess cov_subprocess(const TvarModel& model) {
    Subprocess sub{model.length(), {}};
    for (const auto& ch : model.channels()) {
        sub.channels.push_back({ch.p2, ch.params.r1_cov, ch.params.r2_cov, ch.params.lambda2, 0.0, ch.params.noise_std});
    }
    return sub;
}

double coeff_a(const Subprocess& sub, std::size_t m, std::int64_t n) {
    const auto& ch = sub.channels.at(m);
    const double pn = ch.p(n);
    if (pn == 0.0) throw Error(ErrorCode::DivisionByZero, "interpolation function is zero at " + at(n));
    const double s_ratio = std::exp(std::pow(ch.scale_rate, static_cast<double>(n + 1)) -
                                    std::pow(ch.scale_rate, static_cast<double>(n)));
    return (ch.p(n + 1) / pn) * s_ratio;
}

double coeff_b(const Subprocess& sub, std::size_t m, std::int64_t n) {
    const auto& ch = sub.channels.at(m);
    const double s_next = convergence_s(ch.scale_rate, n + 1);
    // (R(n+1)/S(n+1))^2 - (R(n)/S(n))^2 is the noise-weight increment g(n+1) - g(n).
    const double radicand = noise_weight_step(ch.scale_rate, ch.ramp_rate, n);
    if (radicand < 0.0) throw Error(ErrorCode::NegativeRadicand, "B(n) radicand negative at " + at(n));
    return ch.gain * ch.p(n + 1) * s_next * std::sqrt(radicand);
}

std::vector<double> subprocess_mean(const Subprocess& sub, std::int64_t n) {
    std::vector<double> out;
    for (const auto& ch : sub.channels) out.push_back(mean_term(ch.p, ch.scale_rate, ch.x_tilde0, n));
    return out;
}

std::vector<double> subprocess_cov_diag(const Subprocess& sub, std::int64_t n) {
    std::vector<double> out;
    for (const auto& ch : sub.channels) out.push_back(cov_term(ch.p, ch.ramp_rate, ch.gain, ch.noise_std, n));
    return out;
}

std::vector<double> initial_state(const Subprocess& sub) {
    std::vector<double> out;
    for (const auto& ch : sub.channels) {
        const double p0 = ch.p(0);
        if (p0 == 0.0) throw Error(ErrorCode::DivisionByZero, "p(0) = 0 makes the initial-state scaling singular");
        const double gamma = std::exp(-1.0) / p0;
        out.push_back(ch.x_tilde0 / gamma);
    }
    return out;
}

std::vector<double> mean_product_form(const Subprocess& sub, std::int64_t n) {
    auto x = initial_state(sub);
    for (std::size_t m = 0; m < sub.channels.size(); ++m) {
        const auto& ch = sub.channels[m];
        double prod = 1.0;
        for (std::int64_t k = 0; k <= n; ++k) prod *= basis_f0(ch.p, ch.scale_rate, k);
        x[m] *= prod;
    }
    return x;
}

std::vector<double> cov_sum_form(const Subprocess& sub, std::int64_t n) {
    std::vector<double> out;
    for (const auto& ch : sub.channels) {
        auto b = [&](std::int64_t l) { return basis_f1(ch.p, ch.gain, ch.scale_rate, ch.ramp_rate, l); };
        const double b_n = b(n);
        double total = b_n * b_n;
        double prod = 1.0;  // ∏_{k=l+1}^{n} A(k)
        for (std::int64_t l = n - 1; l >= 0; --l) {
            prod *= basis_f0(ch.p, ch.scale_rate, l + 1);
            const double term = b(l) * prod;
            total += term * term;
        }
        out.push_back(total * ch.noise_std * ch.noise_std);
    }
    return out;
}

Matrix generate_recursive(const Subprocess& sub, const Matrix& noise) {
    const std::size_t len = sub.length;
    const std::size_t m_ch = sub.channels.size();
    check_noise_rows(noise, len, m_ch);
    Matrix x(len, m_ch);
    const auto x0 = initial_state(sub);
    for (std::size_t m = 0; m < m_ch; ++m) x(0, m) = x0[m];
    for (std::size_t n = 0; n + 1 < len; ++n) {
        const auto idx = static_cast<std::int64_t>(n);
        for (std::size_t m = 0; m < m_ch; ++m) {
            x(n + 1, m) = coeff_a(sub, m, idx) * x(n, m) + coeff_b(sub, m, idx) * noise(n, m);
        }
    }
    return x;
}

Matrix generate_subprocess_closed(const Subprocess& sub, const Matrix& noise) {
    const std::size_t len = sub.length;
    const std::size_t m_ch = sub.channels.size();
    check_noise_rows(noise, len, m_ch);
    Matrix x(len, m_ch);
    for (std::size_t m = 0; m < m_ch; ++m) {
        const auto& ch = sub.channels[m];
        double acc = 0.0;
        x(0, m) = ch.p(0) * convergence_s(ch.scale_rate, 0) * ch.x_tilde0;
        for (std::size_t n = 0; n + 1 < len; ++n) {
            const auto idx = static_cast<std::int64_t>(n);
            acc += step_weight(ch.scale_rate, ch.ramp_rate, idx) * noise(n, m);
            x(n + 1, m) = ch.p(idx + 1) * convergence_s(ch.scale_rate, idx + 1) * (ch.x_tilde0 + ch.gain * acc);
        }
    }
    return x;
}

Matrix generate_recursive(const TvarModel& model, const Matrix& noise) {
    Matrix total = generate_recursive(mean_subprocess(model), noise);
    const Matrix cov_part = generate_recursive(cov_subprocess(model), noise);
    for (std::size_t i = 0; i < total.data().size(); ++i) total.data()[i] += cov_part.data()[i];
    return total;
}

}  // namespace tvaraug
