#pragma once

#include "tvaraug/matrix.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace tvaraug {

enum class Alignment { ByTime, ByRul };

/**
 * @brief J aligned multivariate series sharing N time steps and M channels.
 *
 * Index n of every unit refers to the same instant: the same elapsed time
 * (ByTime) or the same remaining useful life (ByRul). time_origin is the
 * original time stamp of index 0 in the first unit and time_step the spacing,
 * both retained only so the data can be written back out.
 */
struct Dataset {
    std::vector<Matrix> units;
    std::vector<std::string> unit_ids;
    std::vector<std::string> channel_names;
    Alignment alignment = Alignment::ByTime;
    std::int64_t time_origin = 0;
    std::int64_t time_step = 1;

    std::size_t unit_count() const noexcept { return units.size(); }
    std::size_t length() const noexcept { return units.empty() ? 0 : units.front().rows(); }
    std::size_t channel_count() const noexcept { return channel_names.size(); }

    /// Throws Error if any invariant (shapes, finiteness, distinct names) fails.
    void validate() const;
};

/// One unit as read from file, before alignment. Rows are sorted by time.
struct RawUnit {
    std::string id;
    std::vector<std::int64_t> times;
    std::optional<std::vector<std::int64_t>> rul;
    Matrix values;
};

/**
 * Column mapping for long-format CSV. When `channels` is empty every column
 * other than unit/time/rul is a channel, in header order.
 */
struct CsvSchema {
    std::string unit_column = "unit";
    std::string time_column = "time";
    std::optional<std::string> rul_column;
    std::vector<std::string> channels;
};

/// Parse long-format CSV into per-unit raw series (unit order = first appearance).
std::vector<RawUnit> read_raw_units(std::istream& in, const CsvSchema& schema,
                                    std::vector<std::string>& channel_names);

/// Keep the earliest N_min rows of every unit.
Dataset align_by_time(const std::vector<RawUnit>& raw_units, std::vector<std::string> channel_names);

/**
 * Right-align units on end of life and keep the common RUL window.
 *
 * Without a RUL column the last row of each unit is RUL 0, so this keeps the
 * latest N_min rows. Throws DegenerateLength when fewer than two steps remain.
 */
Dataset align_by_rul(const std::vector<RawUnit>& raw_units, std::vector<std::string> channel_names);

Dataset load_dataset(std::istream& in, const CsvSchema& schema, Alignment alignment);
Dataset load_dataset(const std::filesystem::path& path, const CsvSchema& schema, Alignment alignment);

/// Writes `unit,time,<channels...>`; doubles use the shortest round-trip form.
void write_dataset_csv(const Dataset& ds, std::ostream& out);
void write_dataset_csv(const Dataset& ds, const std::filesystem::path& path);

/// Shortest decimal string that parses back to exactly `value`.
std::string format_double(double value);

}  // namespace tvaraug
