#pragma once

#include <tvaraug/tvaraug.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

namespace tvaraug::testing {

inline double rel_diff(double a, double b) {
    const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
    return std::abs(a - b) / scale;
}

inline std::vector<double> random_positive(std::mt19937_64& rng, std::size_t n, double lo = 0.5, double hi = 2.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> v(n);
    for (double& x : v) x = u(rng);
    return v;
}

inline double random_rate(std::mt19937_64& rng) { return std::uniform_real_distribution<double>(0.01, 0.95)(rng); }

inline double random_gain(std::mt19937_64& rng) {
    const double mag = std::uniform_real_distribution<double>(0.2, 2.0)(rng);
    return std::bernoulli_distribution(0.5)(rng) ? mag : -mag;
}

inline ChannelTvarParams random_params(std::mt19937_64& rng) {
    ChannelTvarParams p;
    p.r1_mean = random_rate(rng);
    p.r1_cov = random_rate(rng);
    p.r2_cov = random_rate(rng);
    p.lambda2 = random_gain(rng);
    p.x_tilde0 = std::uniform_real_distribution<double>(-2.0, 2.0)(rng);
    p.noise_std = std::uniform_real_distribution<double>(0.05, 1.0)(rng);
    return p;
}

/// Single sub-process with both an initial state and a noise gain.
inline Subprocess random_subprocess(std::mt19937_64& rng, std::size_t len, std::size_t m_ch) {
    Subprocess sub{len, {}};
    for (std::size_t m = 0; m < m_ch; ++m) {
        SubprocessChannel ch;
        ch.p = fit_direct(random_positive(rng, len));
        ch.scale_rate = random_rate(rng);
        ch.ramp_rate = random_rate(rng);
        ch.gain = random_gain(rng);
        ch.x_tilde0 = std::uniform_real_distribution<double>(-2.0, 2.0)(rng);
        ch.noise_std = std::uniform_real_distribution<double>(0.05, 1.0)(rng);
        sub.channels.push_back(std::move(ch));
    }
    return sub;
}

inline TvarModel random_model(std::mt19937_64& rng, std::size_t len, std::size_t m_ch) {
    std::vector<ChannelModel> channels;
    std::vector<std::string> names;
    for (std::size_t m = 0; m < m_ch; ++m) {
        channels.push_back({fit_direct(random_positive(rng, len)), fit_direct(random_positive(rng, len)),
                            random_params(rng)});
        names.push_back("c" + std::to_string(m));
    }
    return TvarModel(len, names, std::move(channels), FitMode::MomentMatching);
}

inline Matrix gaussian_noise(std::mt19937_64& rng, std::size_t rows, std::size_t cols, double sd = 1.0) {
    std::normal_distribution<double> g(0.0, sd);
    Matrix noise(rows, cols);
    for (double& v : noise.data()) v = g(rng);
    return noise;
}

/**
 * Run-to-failure style source data: every channel drifts quadratically
 * towards failure with unit-specific slopes plus growing noise.
 */
inline Dataset degradation_dataset(std::size_t units, std::size_t len, std::size_t m_ch, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    Dataset ds;
    for (std::size_t m = 0; m < m_ch; ++m) ds.channel_names.push_back("s" + std::to_string(m + 1));
    for (std::size_t j = 0; j < units; ++j) {
        Matrix u(len, m_ch);
        for (std::size_t m = 0; m < m_ch; ++m) {
            const double base = 10.0 + 5.0 * static_cast<double>(m);
            const double slope = 1.0 + 0.3 * g(rng);
            for (std::size_t n = 0; n < len; ++n) {
                const double t = static_cast<double>(n) / static_cast<double>(len);
                u(n, m) = base + slope * 3.0 * t * t + (0.2 + 0.5 * t) * g(rng);
            }
        }
        ds.units.push_back(std::move(u));
        ds.unit_ids.push_back("u" + std::to_string(j + 1));
    }
    return ds;
}

inline std::string dataset_csv(const Dataset& ds) {
    std::ostringstream out;
    write_dataset_csv(ds, out);
    return out.str();
}

class TempDir {
public:
    TempDir() {
        static std::atomic<int> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("tvaraug_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace tvaraug::testing
