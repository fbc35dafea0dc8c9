#include "lad/ingest.hpp"

#include "lad/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace lad {

namespace {

struct RawTable {
    std::vector<std::string> header; // empty when the file has no header row
    std::vector<std::vector<std::string>> rows;
    std::size_t first_data_line = 1; // 1-based line number of rows[0]
};

std::vector<std::string> split_line(const std::string& line, char delim) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, delim)) {
        // trim spaces and stray carriage returns
        std::size_t b = cell.find_first_not_of(" \t\r");
        std::size_t e = cell.find_last_not_of(" \t\r");
        cells.push_back(b == std::string::npos ? std::string{} : cell.substr(b, e - b + 1));
    }
    if (!line.empty() && line.back() == delim) {
        cells.emplace_back();
    }
    return cells;
}

char detect_delimiter(const std::string& line) {
    const char candidates[] = {',', '\t', ';'};
    char best = ',';
    std::size_t best_count = 0;
    for (char c : candidates) {
        const auto count = static_cast<std::size_t>(std::count(line.begin(), line.end(), c));
        if (count > best_count) {
            best = c;
            best_count = count;
        }
    }
    return best;
}

bool parse_double(const std::string& cell, double& out) {
    if (cell.empty()) {
        return false;
    }
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    if (*first == '+') {
        ++first; // from_chars rejects a leading plus
    }
    const auto res = std::from_chars(first, last, out);
    return res.ec == std::errc{} && res.ptr == last;
}

bool is_numeric(const std::string& cell) {
    double v;
    return parse_double(cell, v);
}

RawTable read_table(const std::filesystem::path& path, std::optional<char> delimiter,
                    bool require_header) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open file: " + path.string());
    }
    RawTable table;
    std::string line;
    std::size_t line_no = 0;
    char delim = 0;
    std::size_t width = 0;
    bool saw_first = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        if (!saw_first) {
            delim = delimiter.value_or(detect_delimiter(line));
            auto cells = split_line(line, delim);
            width = cells.size();
            const bool header = require_header ||
                                std::any_of(cells.begin(), cells.end(),
                                            [](const std::string& c) { return !is_numeric(c); });
            if (header) {
                table.header = std::move(cells);
                table.first_data_line = line_no + 1;
            } else {
                table.rows.push_back(std::move(cells));
                table.first_data_line = line_no;
            }
            saw_first = true;
            continue;
        }
        auto cells = split_line(line, delim);
        if (cells.size() != width) {
            throw ParseError(path.string() + ": line " + std::to_string(line_no) + " has " +
                             std::to_string(cells.size()) + " cells, expected " +
                             std::to_string(width));
        }
        table.rows.push_back(std::move(cells));
    }
    if (!saw_first || table.rows.empty()) {
        throw ParseError(path.string() + ": no data rows");
    }
    return table;
}

std::size_t resolve_column(const RawTable& table, const std::string& name,
                           const std::filesystem::path& path) {
    if (!table.header.empty()) {
        const auto it = std::find(table.header.begin(), table.header.end(), name);
        if (it != table.header.end()) {
            return static_cast<std::size_t>(it - table.header.begin());
        }
    }
    // fall back to a 0-based index
    std::size_t idx = 0;
    const auto res = std::from_chars(name.data(), name.data() + name.size(), idx);
    const std::size_t width = table.header.empty() ? table.rows.front().size()
                                                   : table.header.size();
    if (res.ec == std::errc{} && res.ptr == name.data() + name.size() && idx < width) {
        return idx;
    }
    throw ParseError(path.string() + ": unknown column '" + name + "'");
}

} // namespace

DataMatrix load_matrix(const std::filesystem::path& path,
                       const std::optional<std::string>& label_column,
                       std::optional<char> delimiter) {
    const RawTable table = read_table(path, delimiter, /*require_header=*/false);
    const std::size_t width = table.rows.front().size();

    std::optional<std::size_t> label_idx;
    if (label_column.has_value()) {
        label_idx = resolve_column(table, *label_column, path);
    }
    if (width == 0 || (label_idx.has_value() && width == 1)) {
        throw ParseError(path.string() + ": no feature columns");
    }

    const std::size_t n = table.rows.size();
    const std::size_t d = width - (label_idx.has_value() ? 1 : 0);
    DataMatrix matrix(n, d);
    if (label_idx.has_value()) {
        matrix.labels.emplace(n, 0);
    }
    if (!table.header.empty()) {
        for (std::size_t c = 0; c < width; ++c) {
            if (!label_idx.has_value() || c != *label_idx) {
                matrix.feature_names.push_back(table.header[c]);
            }
        }
    }

    for (std::size_t r = 0; r < n; ++r) {
        const auto& row = table.rows[r];
        const std::size_t line_no = table.first_data_line + r;
        std::size_t out_c = 0;
        for (std::size_t c = 0; c < width; ++c) {
            double v = 0.0;
            if (!parse_double(row[c], v)) {
                throw ParseError(path.string() + ": line " + std::to_string(line_no) +
                                 ", column " + std::to_string(c) + ": cannot parse '" +
                                 row[c] + "'");
            }
            if (label_idx.has_value() && c == *label_idx) {
                if (v != 0.0 && v != 1.0) {
                    throw ParseError(path.string() + ": line " + std::to_string(line_no) +
                                     ": label must be 0 or 1, got '" + row[c] + "'");
                }
                (*matrix.labels)[r] = v != 0.0 ? 1 : 0;
            } else {
                if (!std::isfinite(v)) {
                    throw ParseError(path.string() + ": line " + std::to_string(line_no) +
                                     ", column " + std::to_string(c) +
                                     ": value must be finite");
                }
                matrix.at(r, out_c++) = v;
            }
        }
    }
    return matrix;
}

PanelLoadResult load_panel(const std::filesystem::path& path, const PanelSpec& spec,
                           std::optional<char> delimiter) {
    if (spec.value_columns.empty()) {
        throw std::invalid_argument("panel spec: value_columns must not be empty");
    }
    const RawTable table = read_table(path, delimiter, /*require_header=*/true);

    const std::size_t id_idx = resolve_column(table, spec.id_column, path);
    const std::size_t time_idx = resolve_column(table, spec.time_column, path);
    std::vector<std::size_t> value_idx;
    for (const auto& name : spec.value_columns) {
        const std::size_t idx = resolve_column(table, name, path);
        if (idx == id_idx || idx == time_idx) {
            throw ParseError(path.string() + ": value column '" + name +
                             "' overlaps id/time column");
        }
        value_idx.push_back(idx);
    }
    std::optional<std::size_t> pop_idx;
    if (spec.population_column.has_value()) {
        pop_idx = resolve_column(table, *spec.population_column, path);
    }

    // Series keep first-appearance order; time keys sort numerically when
    // every key parses as a number, lexicographically otherwise (ISO dates).
    std::vector<std::string> ids;
    std::unordered_map<std::string, std::size_t> id_of;
    std::vector<std::string> time_keys;
    std::unordered_set<std::string> time_seen;
    bool times_numeric = true;
    for (const auto& row : table.rows) {
        if (id_of.emplace(row[id_idx], ids.size()).second) {
            ids.push_back(row[id_idx]);
        }
        if (time_seen.insert(row[time_idx]).second) {
            time_keys.push_back(row[time_idx]);
            times_numeric = times_numeric && is_numeric(row[time_idx]);
        }
    }
    if (times_numeric) {
        std::sort(time_keys.begin(), time_keys.end(), [](const auto& a, const auto& b) {
            double va = 0.0, vb = 0.0;
            parse_double(a, va);
            parse_double(b, vb);
            return va < vb;
        });
    } else {
        std::sort(time_keys.begin(), time_keys.end());
    }
    std::unordered_map<std::string, std::size_t> time_of;
    for (std::size_t t = 0; t < time_keys.size(); ++t) {
        time_of.emplace(time_keys[t], t);
    }

    const std::size_t n_all = ids.size();
    const std::size_t t_len = time_keys.size();
    const std::size_t d = value_idx.size();

    TimeSeriesPanel full(n_all, t_len, d);
    std::vector<double> populations(n_all, std::numeric_limits<double>::quiet_NaN());
    std::vector<std::vector<std::uint8_t>> seen(n_all,
                                                std::vector<std::uint8_t>(t_len, 0));

    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const std::size_t line_no = table.first_data_line + r;
        const std::size_t i = id_of[row[id_idx]];
        const std::size_t t = time_of[row[time_idx]];
        if (seen[i][t] != 0) {
            throw ParseError(path.string() + ": line " + std::to_string(line_no) +
                             ": duplicate (id,time) pair (" + row[id_idx] + ", " +
                             row[time_idx] + ")");
        }
        seen[i][t] = 1;
        for (std::size_t f = 0; f < d; ++f) {
            double v = 0.0;
            // missing or NaN cells stay zero-filled
            if (parse_double(row[value_idx[f]], v) && std::isfinite(v)) {
                full.at(i, t, f) = v;
            }
        }
        if (pop_idx.has_value() && std::isnan(populations[i])) {
            double p = 0.0;
            if (parse_double(row[*pop_idx], p) && std::isfinite(p)) {
                populations[i] = p;
            }
        }
    }

    // population filter
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < n_all; ++i) {
        if (pop_idx.has_value()) {
            const double p = std::isnan(populations[i]) ? 0.0 : populations[i];
            if (p < static_cast<double>(spec.min_population)) {
                continue;
            }
        }
        keep.push_back(i);
    }
    if (keep.empty()) {
        throw ParseError(path.string() + ": every series was filtered out");
    }

    PanelLoadResult result;
    result.time_labels = time_keys;
    auto& panel = result.panel;
    panel = TimeSeriesPanel(keep.size(), t_len, d);
    panel.series_ids.reserve(keep.size());
    for (std::size_t out = 0; out < keep.size(); ++out) {
        const std::size_t i = keep[out];
        panel.series_ids.push_back(ids[i]);
        for (std::size_t t = 0; t < t_len; ++t) {
            for (std::size_t f = 0; f < d; ++f) {
                panel.at(out, t, f) = full.at(i, t, f);
            }
        }
    }
    if (pop_idx.has_value()) {
        result.populations.reserve(keep.size());
        for (std::size_t i : keep) {
            result.populations.push_back(populations[i]);
        }
    }

    if (spec.trim_leading) {
        panel.start_offsets.assign(panel.series_count, 0);
        for (std::size_t i = 0; i < panel.series_count; ++i) {
            for (std::size_t t = 0; t < t_len; ++t) {
                bool nonzero = false;
                for (std::size_t f = 0; f < d; ++f) {
                    nonzero = nonzero || panel.at(i, t, f) != 0.0;
                }
                if (nonzero) {
                    panel.start_offsets[i] = t;
                    break;
                }
                // an all-zero series keeps offset 0
            }
        }
    }
    return result;
}

TimeSeriesPanel per_capita(const TimeSeriesPanel& panel, std::span<const double> populations) {
    panel.validate();
    if (populations.size() != panel.series_count) {
        throw std::domain_error("per_capita: one population per series required");
    }
    for (double p : populations) {
        if (!(p > 0.0) || !std::isfinite(p)) {
            throw std::domain_error("per_capita: populations must be positive");
        }
    }
    TimeSeriesPanel out = panel;
    for (std::size_t i = 0; i < panel.series_count; ++i) {
        for (std::size_t t = 0; t < panel.length; ++t) {
            for (std::size_t f = 0; f < panel.feature_count; ++f) {
                out.at(i, t, f) = panel.at(i, t, f) / populations[i];
            }
        }
    }
    return out;
}

DiffResult diff_to_new_counts(const TimeSeriesPanel& panel) {
    panel.validate();
    DiffResult result;
    result.panel = panel;
    for (std::size_t i = 0; i < panel.series_count; ++i) {
        for (std::size_t t = panel.length; t-- > 0;) {
            for (std::size_t f = 0; f < panel.feature_count; ++f) {
                const double prev = t == 0 ? 0.0 : panel.at(i, t - 1, f);
                double diff = panel.at(i, t, f) - prev;
                if (diff < 0.0) {
                    diff = 0.0;
                    ++result.clamped;
                }
                result.panel.at(i, t, f) = diff;
            }
        }
    }
    return result;
}

} // namespace lad
