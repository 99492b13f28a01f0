#include "tvaraug/dataset.hpp"

#include "tvaraug/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string_view>
#include <unordered_map>
#include <unordered_set>

namespace tvaraug {
namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            out.push_back(trim(line.substr(start)));
            return out;
        }
        out.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
}

bool parse_double(std::string_view text, double& value) {
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    if (text.empty()) return false;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    return ec == std::errc{} && ptr == text.data() + text.size() && std::isfinite(value);
}

bool parse_int(std::string_view text, std::int64_t& value) {
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    if (text.empty()) return false;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    return ec == std::errc{} && ptr == text.data() + text.size();
}

std::size_t find_column(const std::vector<std::string>& header, const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw Error(ErrorCode::MissingColumn, "column '" + name + "' not found in header");
    return static_cast<std::size_t>(it - header.begin());
}

struct PendingRow {
    std::int64_t time;
    std::int64_t rul;
    std::size_t line;
    std::vector<double> values;
};

std::int64_t unit_step(const RawUnit& u) { return u.times.size() >= 2 ? u.times[1] - u.times[0] : 0; }

void require_length(std::size_t n) {
    if (n < 2) {
        throw Error(ErrorCode::DegenerateLength,
                    "aligned series would have " + std::to_string(n) + " time step(s); at least 2 are required");
    }
}

}  // namespace

void Dataset::validate() const {
    if (units.empty()) throw Error(ErrorCode::EmptyUnit, "dataset has no units");
    if (unit_ids.size() != units.size()) throw Error(ErrorCode::ShapeMismatch, "unit id count differs from unit count");
    const std::size_t n = length();
    const std::size_t m = channel_count();
    require_length(n);
    if (m == 0) throw Error(ErrorCode::MissingColumn, "dataset has no channels");
    std::unordered_set<std::string> seen;
    for (const auto& name : channel_names) {
        if (!seen.insert(name).second) throw Error(ErrorCode::DuplicateColumn, "channel '" + name + "' repeated");
    }
    for (std::size_t j = 0; j < units.size(); ++j) {
        const Matrix& u = units[j];
        if (u.rows() != n || u.cols() != m) {
            throw Error(ErrorCode::ShapeMismatch, "unit '" + unit_ids[j] + "' has shape " + std::to_string(u.rows()) +
                                                      "x" + std::to_string(u.cols()));
        }
        for (double v : u.data()) {
            if (!std::isfinite(v)) throw Error(ErrorCode::NonNumericValue, "unit '" + unit_ids[j] + "' holds a non-finite value");
        }
    }
}

std::vector<RawUnit> read_raw_units(std::istream& in, const CsvSchema& schema, std::vector<std::string>& channel_names) {
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorCode::MissingColumn, "empty input: header row is mandatory");
    if (line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);

    std::vector<std::string> header;
    for (auto f : split_fields(line)) header.emplace_back(f);
    {
        std::unordered_set<std::string> seen;
        for (const auto& h : header) {
            if (!seen.insert(h).second) throw Error(ErrorCode::DuplicateColumn, "header repeats column '" + h + "'");
        }
    }

    const std::size_t unit_col = find_column(header, schema.unit_column);
    const std::size_t time_col = find_column(header, schema.time_column);
    std::optional<std::size_t> rul_col;
    if (schema.rul_column) rul_col = find_column(header, *schema.rul_column);

    std::vector<std::size_t> channel_cols;
    channel_names.clear();
    if (!schema.channels.empty()) {
        for (const auto& name : schema.channels) {
            if (std::find(channel_names.begin(), channel_names.end(), name) != channel_names.end()) {
                throw Error(ErrorCode::DuplicateColumn, "channel '" + name + "' selected twice");
            }
            channel_cols.push_back(find_column(header, name));
            channel_names.push_back(name);
        }
    } else {
        for (std::size_t c = 0; c < header.size(); ++c) {
            if (c == unit_col || c == time_col || (rul_col && c == *rul_col)) continue;
            channel_cols.push_back(c);
            channel_names.push_back(header[c]);
        }
    }
    if (channel_cols.empty()) throw Error(ErrorCode::MissingColumn, "no channel columns after unit/time");

    std::vector<std::string> order;
    std::unordered_map<std::string, std::vector<PendingRow>> rows_by_unit;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split_fields(line);
        const std::string where = "row " + std::to_string(line_no);
        if (fields.size() != header.size()) {
            throw Error(ErrorCode::MissingColumn, where + " has " + std::to_string(fields.size()) + " fields, header has " +
                                                      std::to_string(header.size()));
        }
        std::string unit{fields[unit_col]};
        if (unit.empty()) throw Error(ErrorCode::EmptyUnit, where + " has an empty unit id");

        PendingRow row{0, 0, line_no, {}};
        if (!parse_int(fields[time_col], row.time)) {
            throw Error(ErrorCode::NonNumericValue,
                        where + " (unit '" + unit + "'): time '" + std::string(fields[time_col]) + "' is not an integer");
        }
        if (rul_col && !parse_int(fields[*rul_col], row.rul)) {
            throw Error(ErrorCode::NonNumericValue,
                        where + " (unit '" + unit + "'): RUL '" + std::string(fields[*rul_col]) + "' is not an integer");
        }
        row.values.resize(channel_cols.size());
        for (std::size_t k = 0; k < channel_cols.size(); ++k) {
            if (!parse_double(fields[channel_cols[k]], row.values[k])) {
                throw Error(ErrorCode::NonNumericValue, where + " (unit '" + unit + "'): column '" + channel_names[k] +
                                                            "' value '" + std::string(fields[channel_cols[k]]) +
                                                            "' is not a finite number");
            }
        }
        auto [it, inserted] = rows_by_unit.try_emplace(unit);
        if (inserted) order.push_back(unit);
        it->second.push_back(std::move(row));
    }
    if (order.empty()) throw Error(ErrorCode::EmptyUnit, "no data rows");

    std::vector<RawUnit> units;
    units.reserve(order.size());
    std::int64_t common_step = 0;
    for (const auto& id : order) {
        auto& rows = rows_by_unit[id];
        std::stable_sort(rows.begin(), rows.end(), [](const PendingRow& a, const PendingRow& b) { return a.time < b.time; });
        RawUnit u;
        u.id = id;
        u.values = Matrix(rows.size(), channel_cols.size());
        if (rul_col) u.rul.emplace();
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i > 0 && rows[i].time == rows[i - 1].time) {
                throw Error(ErrorCode::DuplicateTimestamp, "unit '" + id + "' repeats time " + std::to_string(rows[i].time) +
                                                               " (row " + std::to_string(rows[i].line) + ")");
            }
            u.times.push_back(rows[i].time);
            if (u.rul) u.rul->push_back(rows[i].rul);
            std::copy(rows[i].values.begin(), rows[i].values.end(), u.values.row(i).begin());
        }
        const std::int64_t step = unit_step(u);
        for (std::size_t i = 1; i < u.times.size(); ++i) {
            if (u.times[i] - u.times[i - 1] != step) {
                throw Error(ErrorCode::IrregularSampling, "unit '" + id + "' is not equally sampled near time " +
                                                              std::to_string(u.times[i]));
            }
        }
        if (step != 0) {
            if (common_step != 0 && step != common_step) {
                throw Error(ErrorCode::IrregularSampling, "unit '" + id + "' uses time step " + std::to_string(step) +
                                                              ", other units use " + std::to_string(common_step));
            }
            common_step = step;
        }
        units.push_back(std::move(u));
    }
    return units;
}

Dataset align_by_time(const std::vector<RawUnit>& raw_units, std::vector<std::string> channel_names) {
    if (raw_units.empty()) throw Error(ErrorCode::EmptyUnit, "no units to align");
    std::size_t n_min = raw_units.front().values.rows();
    for (const auto& u : raw_units) n_min = std::min(n_min, u.values.rows());
    require_length(n_min);

    Dataset ds;
    ds.alignment = Alignment::ByTime;
    ds.channel_names = std::move(channel_names);
    ds.time_origin = raw_units.front().times.front();
    ds.time_step = unit_step(raw_units.front());
    for (const auto& u : raw_units) {
        Matrix kept(n_min, u.values.cols());
        for (std::size_t n = 0; n < n_min; ++n) std::ranges::copy(u.values.row(n), kept.row(n).begin());
        ds.units.push_back(std::move(kept));
        ds.unit_ids.push_back(u.id);
    }
    ds.validate();
    return ds;
}

Dataset align_by_rul(const std::vector<RawUnit>& raw_units, std::vector<std::string> channel_names) {
    if (raw_units.empty()) throw Error(ErrorCode::EmptyUnit, "no units to align");

    // RUL per row; end of series is RUL 0 when the file carries no RUL column.
    std::vector<std::vector<std::int64_t>> ruls;
    std::int64_t step = 0;
    for (const auto& u : raw_units) {
        std::vector<std::int64_t> rul(u.times.size());
        if (u.rul) {
            rul = *u.rul;
            for (std::size_t i = 1; i < rul.size(); ++i) {
                if (rul[i - 1] - rul[i] != u.times[i] - u.times[i - 1]) {
                    throw Error(ErrorCode::IrregularSampling,
                                "unit '" + u.id + "': RUL does not decrease with time near time " + std::to_string(u.times[i]));
                }
            }
        } else {
            for (std::size_t i = 0; i < rul.size(); ++i) rul[i] = u.times.back() - u.times[i];
        }
        if (step == 0) step = unit_step(u);
        ruls.push_back(std::move(rul));
    }

    std::int64_t lo = ruls.front().back();
    std::int64_t hi = ruls.front().front();
    for (const auto& r : ruls) {
        lo = std::max(lo, r.back());
        hi = std::min(hi, r.front());
    }
    if (hi < lo || step == 0) require_length(hi < lo ? 0 : 1);
    for (std::size_t j = 0; j < ruls.size(); ++j) {
        if ((ruls[j].front() - hi) % step != 0) {
            throw Error(ErrorCode::IrregularSampling, "unit '" + raw_units[j].id + "' RUL grid is offset from the other units");
        }
    }
    const auto n = static_cast<std::size_t>((hi - lo) / step + 1);
    require_length(n);

    Dataset ds;
    ds.alignment = Alignment::ByRul;
    ds.channel_names = std::move(channel_names);
    ds.time_step = step;
    for (std::size_t j = 0; j < raw_units.size(); ++j) {
        const auto& u = raw_units[j];
        const auto first = static_cast<std::size_t>((ruls[j].front() - hi) / step);
        if (j == 0) ds.time_origin = u.times[first];
        Matrix kept(n, u.values.cols());
        for (std::size_t k = 0; k < n; ++k) std::ranges::copy(u.values.row(first + k), kept.row(k).begin());
        ds.units.push_back(std::move(kept));
        ds.unit_ids.push_back(u.id);
    }
    ds.validate();
    return ds;
}

Dataset load_dataset(std::istream& in, const CsvSchema& schema, Alignment alignment) {
    std::vector<std::string> names;
    auto raw = read_raw_units(in, schema, names);
    return alignment == Alignment::ByRul ? align_by_rul(raw, std::move(names)) : align_by_time(raw, std::move(names));
}

Dataset load_dataset(const std::filesystem::path& path, const CsvSchema& schema, Alignment alignment) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "'");
    return load_dataset(in, schema, alignment);
}

std::string format_double(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

void write_dataset_csv(const Dataset& ds, std::ostream& out) {
    out << "unit,time";
    for (const auto& name : ds.channel_names) out << ',' << name;
    out << '\n';
    for (std::size_t j = 0; j < ds.units.size(); ++j) {
        const Matrix& u = ds.units[j];
        for (std::size_t n = 0; n < u.rows(); ++n) {
            out << ds.unit_ids[j] << ',' << ds.time_origin + static_cast<std::int64_t>(n) * ds.time_step;
            for (double v : u.row(n)) out << ',' << format_double(v);
            out << '\n';
        }
    }
}

void write_dataset_csv(const Dataset& ds, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
    write_dataset_csv(ds, out);
    if (!out) throw Error(ErrorCode::Io, "write to '" + path.string() + "' failed");
}

}  // namespace tvaraug
