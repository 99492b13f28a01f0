// Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on any failure.
#include "test_support.hpp"

#include <bit>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>

#include <sys/wait.h>

using namespace tvaraug;
using namespace tvaraug::testing;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass;
    std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

double open_unit(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double r = 0.0;
    while (r <= 0.0 || r >= 1.0) r = u(rng);
    return r;
}

Outcome appendix_oracles() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(20240601);
    std::uniform_int_distribution<std::size_t> len_dist(2, 50), ch_dist(1, 4);
    double worst_mean = 0.0, worst_cov = 0.0, worst_path = 0.0;
    const int draws = 200;
    for (int d = 0; d < draws; ++d) {
        const std::size_t len = len_dist(rng), m_ch = ch_dist(rng);
        Subprocess sub{len, {}};
        for (std::size_t m = 0; m < m_ch; ++m) {
            SubprocessChannel ch;
            ch.p = fit_direct(random_positive(rng, len, 0.1, 5.0));
            ch.scale_rate = open_unit(rng);
            ch.ramp_rate = open_unit(rng);
            ch.gain = random_gain(rng);
            ch.x_tilde0 = std::uniform_real_distribution<double>(-3.0, 3.0)(rng);
            ch.noise_std = std::uniform_real_distribution<double>(0.01, 2.0)(rng);
            sub.channels.push_back(std::move(ch));
        }
        for (std::int64_t n = 0; n + 1 < static_cast<std::int64_t>(len); ++n) {
            const auto prod = mean_product_form(sub, n), mean = subprocess_mean(sub, n + 1);
            const auto sum = cov_sum_form(sub, n), cov = subprocess_cov_diag(sub, n + 1);
            for (std::size_t m = 0; m < m_ch; ++m) {
                worst_mean = std::max(worst_mean, rel_diff(prod[m], mean[m]));
                worst_cov = std::max(worst_cov, rel_diff(sum[m], cov[m]));
            }
        }
        const Matrix noise = gaussian_noise(rng, len - 1, m_ch, 1.0);
        const Matrix a = generate_recursive(sub, noise), b = generate_subprocess_closed(sub, noise);
        for (std::size_t i = 0; i < a.data().size(); ++i) worst_path = std::max(worst_path, std::abs(a.data()[i] - b.data()[i]));
    }
    const double secs = seconds_since(t0);
    char buf[256];
    std::snprintf(buf, sizeof buf, "%d draws, mean rel %.2e, cov rel %.2e, path abs %.2e, %.2fs", draws, worst_mean,
                  worst_cov, worst_path, secs);
    return {worst_mean < 1e-10 && worst_cov < 1e-10 && worst_path < 1e-8 && secs < 10.0, buf};
}

Outcome telescoping() {
    std::mt19937_64 rng(77);
    double worst = 0.0, min_step = std::numeric_limits<double>::infinity();
    for (int d = 0; d < 500; ++d) {
        const double r1 = open_unit(rng), r2 = open_unit(rng);
        double sum = 0.0;
        for (std::int64_t l = 0; l <= 1000; ++l) {
            const double step = noise_weight_step(r1, r2, l);
            min_step = std::min(min_step, step);
            sum += step;
            worst = std::max(worst, std::abs(sum - noise_weight_g(r1, r2, l + 1)));
        }
    }
    char buf[160];
    std::snprintf(buf, sizeof buf, "500 rate pairs, l<=1000, max |sum - g| %.2e, min step %.2e", worst, min_step);
    return {worst <= 1e-12 && min_step >= 0.0, buf};
}

Outcome monte_carlo() {
    const auto t0 = Clock::now();
    const auto source = degradation_dataset(5, 200, 14, 4242);
    const TvarModel model = fit(source, ModelConfig{});
    const auto r = monte_carlo_moments(model, 50000, 2024);
    const double secs = seconds_since(t0);
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "N=200 M=14 K=50000: |z|<4 at %.4f, max var rel %.4f, var(0) max %g, max |rho| %.4f, %.1fs",
                  r.mean_pass_fraction, r.max_var_rel_err, r.origin_var_max, r.max_abs_corr, secs);
    const bool ok = r.mean_pass_fraction >= 0.99 && r.max_var_rel_err < 0.05 && r.origin_var_max == 0.0 &&
                    r.max_abs_corr < 0.05 && secs < 60.0;
    return {ok, buf};
}

bool bits_equal(const std::vector<double>& a, const std::vector<double>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::bit_cast<std::uint64_t>(a[i]) != std::bit_cast<std::uint64_t>(b[i])) return false;
    }
    return a.size() == b.size();
}

Outcome decoupling() {
    const std::size_t len = 12;
    std::mt19937_64 rng(5);
    const auto p_a = random_positive(rng, len), p_b = random_positive(rng, len);
    const std::vector<double> rates{0.01, 0.2, 0.5, 0.99};
    const std::vector<double> gains{1.0, -0.3, 4.0};
    const std::vector<double> sds{0.1, 1.7};
    auto model = [&](const std::vector<double>& p1, const std::vector<double>& p2, const ChannelTvarParams& q) {
        return TvarModel(len, {"x"}, {{fit_direct(p1), fit_direct(p2), q}}, FitMode::MomentMatching);
    };
    const ChannelTvarParams base;
    const TvarModel ref = model(p_a, p_a, base);
    std::size_t compared = 0, mismatched = 0;
    for (const auto* p2 : {&p_a, &p_b}) {
        for (double r1 : rates) {
            for (double r2 : rates) {
                for (double lam : gains) {
                    for (double sd : sds) {
                        ChannelTvarParams q = base;
                        q.r1_cov = r1;
                        q.r2_cov = r2;
                        q.lambda2 = lam;
                        q.noise_std = sd;
                        const TvarModel other = model(p_a, *p2, q);
                        for (std::int64_t n = 0; n < static_cast<std::int64_t>(len); ++n, ++compared) {
                            mismatched += bits_equal(theoretical_mean(ref, n), theoretical_mean(other, n)) ? 0 : 1;
                        }
                    }
                }
            }
        }
    }
    for (const auto* p1 : {&p_a, &p_b}) {
        for (double r1 : rates) {
            for (double x0 : {1.0, 0.0, -2.5, 10.0}) {
                ChannelTvarParams q = base;
                q.r1_mean = r1;
                q.x_tilde0 = x0;
                const TvarModel other = model(*p1, p_a, q);
                for (std::int64_t n = 0; n < static_cast<std::int64_t>(len); ++n, ++compared) {
                    mismatched += bits_equal(theoretical_cov_diag(ref, n), theoretical_cov_diag(other, n)) ? 0 : 1;
                }
            }
        }
    }
    return {mismatched == 0, std::to_string(compared) + " comparisons, " + std::to_string(mismatched) + " differ"};
}

Outcome sinusoid() {
    std::mt19937_64 rng(99);
    std::normal_distribution<double> g(0.0, 3.0);
    double worst_full = 0.0;
    for (std::size_t len = 2; len <= 32; ++len) {
        for (int rep = 0; rep < 10; ++rep) {
            std::vector<double> x(len);
            for (double& v : x) v = g(rng);
            const auto fn = fit_sinusoid(x, len);
            for (std::size_t n = 0; n < len; ++n) {
                worst_full = std::max(worst_full, std::abs(fn(static_cast<std::int64_t>(n)) - x[n]));
            }
        }
    }
    double worst_const = 0.0;
    for (double c : {-7.5, 0.0, 3.25}) {
        const auto fn = fit_sinusoid(std::vector<double>(11, c), 1);
        for (std::int64_t n = 0; n < 11; ++n) worst_const = std::max(worst_const, std::abs(fn(n) - c));
    }
    std::vector<double> cosine(8);
    for (std::size_t n = 0; n < 8; ++n) cosine[n] = std::cos(2.0 * std::numbers::pi * double(n) / 8.0);
    const auto fn = fit_sinusoid(cosine, 2);
    double worst_cos = 0.0;
    for (std::int64_t n = 0; n < 8; ++n) worst_cos = std::max(worst_cos, std::abs(fn(n) - cosine[n]));
    char buf[200];
    std::snprintf(buf, sizeof buf, "P=N max err %.2e, constant P=1 %.2e, cosine P=2 %.2e", worst_full, worst_const,
                  worst_cos);
    return {worst_full < 1e-9 && worst_const < 1e-9 && worst_cos < 1e-9, buf};
}

Outcome ensemble() {
    std::mt19937_64 rng(123);
    std::uniform_int_distribution<std::size_t> dim(1, 5);
    std::normal_distribution<double> g(1.0, 4.0);
    double worst = 0.0;
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t j_count = dim(rng), len = dim(rng), m_ch = dim(rng);
        std::vector<Matrix> units(j_count, Matrix(len, m_ch));
        for (auto& u : units) {
            for (double& v : u.data()) v = g(rng);
        }
        const auto st = ensemble_stats(std::span<const Matrix>(units), true);
        for (std::size_t n = 0; n < len; ++n) {
            for (std::size_t p = 0; p < m_ch; ++p) {
                double mean = 0.0;
                for (const auto& u : units) mean += u(n, p);
                mean /= static_cast<double>(j_count);
                worst = std::max(worst, rel_diff(st.mean(n, p), mean));
                for (std::size_t q = 0; q < m_ch; ++q) {
                    double c = 0.0;
                    for (const auto& a : units) {
                        for (const auto& b : units) c += (a(n, p) - b(n, p)) * (a(n, q) - b(n, q));
                    }
                    c /= 2.0 * static_cast<double>(j_count * j_count);
                    const double got = (*st.full_cov)[n](p, q);
                    worst = std::max(worst, std::abs(got - c) / std::max(1.0, std::abs(c)));
                }
            }
        }
    }
    std::vector<Matrix> hand{Matrix(1, 1, 0.0), Matrix(1, 1, 2.0)};
    const auto h = ensemble_stats(std::span<const Matrix>(hand));
    char buf[160];
    std::snprintf(buf, sizeof buf, "max dev from brute force %.2e; {0,2} -> mean %g var %g", worst, h.mean(0, 0),
                  h.var(0, 0));
    return {worst < 1e-12 && h.mean(0, 0) == 1.0 && h.var(0, 0) == 1.0, buf};
}

Outcome metrics() {
    const double e1 = std::exp(1.0) - 1.0;
    const double late = phm_score(std::vector<double>{10.0}, std::vector<double>{0.0});
    const double early = phm_score(std::vector<double>{-13.0}, std::vector<double>{0.0});
    const double zero = phm_score(std::vector<double>{5.0, 9.0}, std::vector<double>{5.0, 9.0});
    char buf[160];
    std::snprintf(buf, sizeof buf, "S(10)=%.15f S(-13)=%.15f S(0)=%g", late, early, zero);
    return {std::abs(late - e1) < 1e-12 && std::abs(early - e1) < 1e-12 && zero == 0.0, buf};
}

int run_tool(const std::string& args, const std::filesystem::path& log) {
    const std::string cmd = std::string("\"") + TVARAUG_CLI_BINARY + "\" " + args + " >>\"" + log.string() + "\" 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome reproducibility() {
    TempDir root;
    const std::string data = dataset_csv(degradation_dataset(5, 60, 4, 8080));
    const std::vector<std::string> artifacts{"model.json", "out.csv", "report.json"};
    std::vector<std::vector<std::string>> runs;
    for (int run = 0; run < 2; ++run) {
        const auto dir = root / ("run" + std::to_string(run));
        std::filesystem::create_directories(dir);
        write_file(dir / "data.csv", data);
        const auto q = [&](const std::string& f) { return "\"" + (dir / f).string() + "\""; };
        const auto log = dir / "log.txt";
        const int fit_rc = run_tool("fit " + q("data.csv") + " -o " + q("model.json"), log);
        const int gen_rc = run_tool("generate " + q("model.json") + " -L 5 --seed 7 -o " + q("out.csv"), log);
        const int val_rc = run_tool("validate " + q("model.json") + " -K 5000 --seed 7 --against " + q("data.csv") +
                                        " --report " + q("report.json"),
                                    log);
        if (fit_rc != 0 || gen_rc != 0 || val_rc != 0) {
            return {false, "run " + std::to_string(run) + " exit codes " + std::to_string(fit_rc) + "/" +
                               std::to_string(gen_rc) + "/" + std::to_string(val_rc) + ": " + read_file(log)};
        }
        std::vector<std::string> bytes;
        for (const auto& a : artifacts) bytes.push_back(read_file(dir / a));
        runs.push_back(std::move(bytes));
    }
    std::string differing;
    for (std::size_t i = 0; i < artifacts.size(); ++i) {
        if (runs[0][i] != runs[1][i] || runs[0][i].empty()) differing += " " + artifacts[i];
    }
    if (!differing.empty()) return {false, "artifacts differ or are empty:" + differing};
    return {true, "fit -> generate -> validate twice; model.json, out.csv, report.json byte-identical"};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"appendix oracle suite", appendix_oracles},
        {"telescoping and radicand", telescoping},
        {"Monte-Carlo moment fidelity", monte_carlo},
        {"decoupling", decoupling},
        {"sinusoidal regression", sinusoid},
        {"ensemble statistics", ensemble},
        {"metrics", metrics},
        {"CLI reproducibility", reproducibility},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += o.pass ? 0 : 1;
        std::printf("criterion %zu: %s  %s (%s)\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                    o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
