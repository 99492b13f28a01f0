#include "tvaraug/interp.hpp"

#include "tvaraug/errors.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <string>

namespace tvaraug {
namespace {

// (k * n) mod N, non-negative, so the angle 2π(k n mod N)/N stays small.
// Both factors are below N, so the product fits in 64 bits for N < 2^32.
std::size_t wrapped_product(std::size_t k, std::int64_t n, std::size_t len) {
    const auto big_n = static_cast<std::int64_t>(len);
    std::int64_t nn = n % big_n;
    if (nn < 0) nn += big_n;
    return static_cast<std::size_t>((static_cast<std::uint64_t>(k % len) * static_cast<std::uint64_t>(nn)) % len);
}

double twiddle_angle(std::size_t kn_mod, std::size_t len) {
    return 2.0 * std::numbers::pi * static_cast<double>(kn_mod) / static_cast<double>(len);
}

// Forward DFT, F(k) = Σ x(n) e^{-i 2π k n / N}. Bins above N/2 are set to the
// exact conjugates of their mirrors so paired magnitudes compare equal.
std::vector<std::complex<double>> real_dft(std::span<const double> x) {
    const std::size_t len = x.size();
    std::vector<std::complex<double>> spectrum(len);
    for (std::size_t k = 0; k <= len / 2; ++k) {
        std::complex<double> acc{0.0, 0.0};
        for (std::size_t n = 0; n < len; ++n) {
            const double angle = twiddle_angle((k * n) % len, len);
            acc += x[n] * std::complex<double>(std::cos(angle), -std::sin(angle));
        }
        spectrum[k] = acc;
    }
    for (std::size_t k = len / 2 + 1; k < len; ++k) spectrum[k] = std::conj(spectrum[len - k]);
    return spectrum;
}

}  // namespace

InterpFn::InterpFn(TableInterp table) : fn_(std::move(table)) {}

InterpFn::InterpFn(SinusoidInterp sinusoid) : fn_(std::move(sinusoid)) {}

std::size_t InterpFn::length() const noexcept {
    if (const auto* t = std::get_if<TableInterp>(&fn_)) return t->values.size();
    return std::get<SinusoidInterp>(fn_).length;
}

double InterpFn::operator()(std::int64_t n) const {
    if (const auto* t = std::get_if<TableInterp>(&fn_)) {
        if (n < 0 || static_cast<std::size_t>(n) >= t->values.size()) {
            throw Error(ErrorCode::OutOfRange, "table interpolation evaluated at n=" + std::to_string(n) + " outside [0, " +
                                                   std::to_string(t->values.size()) + ")");
        }
        return t->values[static_cast<std::size_t>(n)];
    }
    const auto& s = std::get<SinusoidInterp>(fn_);
    double acc = 0.0;
    for (const auto& term : s.terms) {
        acc += term.magnitude * std::cos(twiddle_angle(wrapped_product(term.freq_index, n, s.length), s.length) + term.phase);
    }
    return acc / static_cast<double>(s.length);
}

std::vector<double> InterpFn::sample() const {
    std::vector<double> out(length());
    for (std::size_t n = 0; n < out.size(); ++n) out[n] = (*this)(static_cast<std::int64_t>(n));
    return out;
}

InterpFn fit_direct(std::span<const double> curve) {
    for (double v : curve) {
        if (!std::isfinite(v)) throw Error(ErrorCode::NonFiniteStats, "curve holds a non-finite value");
    }
    return InterpFn(TableInterp{std::vector<double>(curve.begin(), curve.end())});
}

InterpFn fit_sinusoid(std::span<const double> curve, std::size_t order) {
    const std::size_t len = curve.size();
    if (len < 2) throw Error(ErrorCode::InvalidParameter, "sinusoidal regression needs N >= 2");
    if (order < 1 || order > len) {
        throw Error(ErrorCode::InvalidOrder,
                    "order P=" + std::to_string(order) + " outside [1, " + std::to_string(len) + "]");
    }
    for (double v : curve) {
        if (!std::isfinite(v)) throw Error(ErrorCode::NonFiniteStats, "curve holds a non-finite value");
    }

    const auto spectrum = real_dft(curve);
    std::vector<double> magnitude(len);
    for (std::size_t k = 0; k < len; ++k) magnitude[k] = std::abs(spectrum[k]);

    std::vector<std::size_t> ranked(len);
    std::iota(ranked.begin(), ranked.end(), std::size_t{0});
    std::stable_sort(ranked.begin(), ranked.end(),
                     [&](std::size_t a, std::size_t b) { return magnitude[a] > magnitude[b]; });

    SinusoidInterp fit{len, {}};
    std::vector<bool> taken(len, false);
    auto take = [&](std::size_t k) {
        taken[k] = true;
        const double phase = magnitude[k] == 0.0 ? 0.0 : std::arg(spectrum[k]);
        fit.terms.push_back({k, magnitude[k], phase});
    };
    for (std::size_t k : ranked) {
        if (fit.terms.size() >= order) break;
        if (taken[k]) continue;
        take(k);
        const std::size_t mirror = (len - k) % len;
        if (mirror != k && !taken[mirror]) take(mirror);
    }
    return InterpFn(std::move(fit));
}

double eval_interp(const InterpFn& fn, std::int64_t n) { return fn(n); }

}  // namespace tvaraug
