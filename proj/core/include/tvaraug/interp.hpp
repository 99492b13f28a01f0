#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

namespace tvaraug {

/// Direct value table; defined on n in [0, N-1].
struct TableInterp {
    std::vector<double> values;
};

struct SinusoidTerm {
    std::size_t freq_index = 0;  ///< DFT bin k' in [0, N-1]
    double magnitude = 0.0;      ///< |F(k')|
    double phase = 0.0;          ///< arg F(k') in radians
};

/**
 * Truncated DFT expansion
 *   p(n) = (1/N) * sum_k |F_k| cos(2π k n / N + φ_k)
 * over the retained bins. Terms are stored in non-increasing magnitude order.
 */
struct SinusoidInterp {
    std::size_t length = 0;
    std::vector<SinusoidTerm> terms;
};

/**
 * @brief Per-channel interpolation function p(n) of discrete time.
 *
 * Either a value table (out-of-range lookups throw OutOfRange) or a
 * truncated sinusoidal regression, which is periodic in n with period N.
 */
class InterpFn {
public:
    using Variant = std::variant<TableInterp, SinusoidInterp>;

    InterpFn() = default;
    explicit InterpFn(TableInterp table);
    explicit InterpFn(SinusoidInterp sinusoid);

    double operator()(std::int64_t n) const;

    bool is_table() const noexcept { return std::holds_alternative<TableInterp>(fn_); }
    bool is_sinusoid() const noexcept { return std::holds_alternative<SinusoidInterp>(fn_); }
    const TableInterp& table() const { return std::get<TableInterp>(fn_); }
    const SinusoidInterp& sinusoid() const { return std::get<SinusoidInterp>(fn_); }

    /// N: table size or DFT length.
    std::size_t length() const noexcept;

    /// Evaluate at n = 0..length()-1.
    std::vector<double> sample() const;

    friend bool operator==(const InterpFn&, const InterpFn&) = default;

private:
    Variant fn_;
};

InterpFn fit_direct(std::span<const double> curve);

/**
 * DFT-based sinusoidal regression keeping the `order` largest-magnitude bins.
 *
 * A non-DC, non-Nyquist bin is always kept together with its conjugate bin
 * (each counts toward `order`); if one slot remains when the next unit is a
 * pair, the pair is still taken. Equal magnitudes break ties by lower bin
 * index. Throws InvalidOrder unless 1 <= order <= N, and InvalidParameter
 * for N < 2 or non-finite input.
 */
InterpFn fit_sinusoid(std::span<const double> curve, std::size_t order);

double eval_interp(const InterpFn& fn, std::int64_t n);

}  // namespace tvaraug
