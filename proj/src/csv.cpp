#include "halfspec/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "halfspec/errors.hpp"

namespace halfspec {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

double parse_double(const std::string& s, int line, int column) {
    double v = 0.0;
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    const auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc() || res.ptr != end) {
        throw parse_error("expected a number, got '" + s + "'", line, column);
    }
    return v;
}

std::int64_t parse_int(const std::string& s, int line, int column) {
    std::int64_t v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw parse_error("expected an integer time index, got '" + s + "'", line, column);
    }
    return v;
}

}  // namespace

DataFile read_data_file(const std::filesystem::path& path, double time_delta) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open data file: " + path.string());

    std::string line;
    int line_no = 0;
    // header (comment lines allowed before it)
    do {
        if (!std::getline(in, line)) throw parse_error("empty data file: " + path.string());
        ++line_no;
    } while (!line.empty() && line[0] == '#');

    const auto header = split_fields(line);
    if (header.empty() || header[0] != "time") {
        throw parse_error("header must start with 'time'", line_no, 1);
    }
    DataFile data;
    for (std::size_t c = 1; c < header.size(); ++c) {
        data.altitudes.push_back(parse_double(header[c], line_no, static_cast<int>(c + 1)));
    }
    const std::size_t n_cols = data.altitudes.size();
    if (n_cols == 0) throw parse_error("no altitude columns", line_no, 2);

    std::vector<std::vector<double>> rows;
    double t_first = 0.0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        const auto fields = split_fields(line);
        if (fields.size() != n_cols + 1) {
            std::ostringstream msg;
            msg << "expected " << n_cols + 1 << " fields, got " << fields.size();
            throw parse_error(msg.str(), line_no, 1);
        }
        if (time_delta > 0.0) {
            // real timestamps mapped onto the sampling lattice
            const double stamp = parse_double(fields[0], line_no, 1);
            if (rows.empty()) t_first = stamp;
            const double steps = (stamp - t_first) / time_delta;
            const auto index = static_cast<std::int64_t>(std::llround(steps));
            if (std::abs(steps - static_cast<double>(index)) > 0.01) {
                throw parse_error("timestamp is off the sampling lattice", line_no, 1);
            }
            data.times.push_back(index);
        } else {
            data.times.push_back(parse_int(fields[0], line_no, 1));
        }
        std::vector<double> row(n_cols);
        for (std::size_t c = 0; c < n_cols; ++c) {
            row[c] = fields[c + 1].empty()
                         ? std::numeric_limits<double>::quiet_NaN()
                         : parse_double(fields[c + 1], line_no, static_cast<int>(c + 2));
        }
        rows.push_back(std::move(row));
        if (data.times.size() > 1 && data.times.back() <= data.times[data.times.size() - 2]) {
            throw parse_error("time indices must be strictly increasing", line_no, 1);
        }
    }
    if (rows.empty()) throw parse_error("no data rows in " + path.string());

    // column order by altitude
    std::vector<std::size_t> order(n_cols);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return data.altitudes[a] < data.altitudes[b]; });
    for (std::size_t i = 1; i < n_cols; ++i) {
        if (data.altitudes[order[i]] == data.altitudes[order[i - 1]]) {
            throw parse_error("duplicate altitude column", 1, 0);
        }
    }

    // drop columns with no observed values
    std::vector<std::size_t> kept;
    for (std::size_t c : order) {
        bool any = false;
        for (const auto& row : rows) {
            if (!std::isnan(row[c])) {
                any = true;
                break;
            }
        }
        if (any) kept.push_back(c);
    }
    if (kept.empty()) throw parse_error("every column is empty in " + path.string());

    std::vector<double> alts;
    for (std::size_t c : kept) alts.push_back(data.altitudes[c]);
    data.values.resize(static_cast<Eigen::Index>(rows.size()),
                       static_cast<Eigen::Index>(kept.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < kept.size(); ++c) {
            data.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                rows[r][kept[c]];
        }
    }
    data.altitudes = std::move(alts);
    return data;
}

void write_data_file(const std::filesystem::path& path, const DataFile& data,
                     const std::string& comment) {
    std::ofstream out(path);
    if (!out) throw parse_error("cannot write file: " + path.string());
    out << "# halfspec " << kVersion << " " << comment << "\n";
    out << "time";
    for (double a : data.altitudes) out << "," << a;
    out << "\n";
    out.precision(17);
    for (std::size_t r = 0; r < data.times.size(); ++r) {
        out << data.times[r];
        for (Eigen::Index c = 0; c < data.values.cols(); ++c) {
            out << ",";
            const double v = data.values(static_cast<Eigen::Index>(r), c);
            if (!std::isnan(v)) out << v;
        }
        out << "\n";
    }
}

std::pair<ObservationLayout, Eigen::VectorXd> to_observations(
    const DataFile& data, const std::optional<std::vector<double>>& site_subset) {
    ObservationLayout layout;
    std::vector<std::size_t> cols;
    for (std::size_t c = 0; c < data.altitudes.size(); ++c) {
        if (site_subset) {
            bool wanted = false;
            for (double s : *site_subset) {
                if (std::abs(s - data.altitudes[c]) < 1e-9) wanted = true;
            }
            if (!wanted) continue;
        }
        cols.push_back(c);
        layout.site_altitudes.push_back(data.altitudes[c]);
    }
    if (cols.empty()) throw config_error("site subset matches no data columns");

    const std::int64_t t0 = *std::min_element(data.times.begin(), data.times.end());
    std::vector<double> values;
    for (std::size_t s = 0; s < cols.size(); ++s) {
        for (std::size_t r = 0; r < data.times.size(); ++r) {
            const double v =
                data.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(cols[s]));
            if (!std::isnan(v)) {
                layout.entries.push_back({static_cast<int>(s), data.times[r] - t0});
                values.push_back(v);
            }
        }
    }
    layout.validate();
    Eigen::VectorXd y(static_cast<Eigen::Index>(values.size()));
    for (std::size_t i = 0; i < values.size(); ++i) y(static_cast<Eigen::Index>(i)) = values[i];
    return {std::move(layout), std::move(y)};
}

DataFile sample_to_data(const ObservationLayout& layout, const Eigen::VectorXd& y) {
    if (y.size() != static_cast<Eigen::Index>(layout.size())) {
        throw config_error("sample length does not match layout");
    }
    DataFile data;
    data.altitudes = layout.site_altitudes;
    const std::int64_t t_lo = layout.min_time();
    const std::int64_t t_hi = layout.max_time();
    for (std::int64_t t = t_lo; t <= t_hi; ++t) data.times.push_back(t);
    data.values.setConstant(static_cast<Eigen::Index>(data.times.size()),
                            static_cast<Eigen::Index>(data.altitudes.size()),
                            std::numeric_limits<double>::quiet_NaN());
    for (std::size_t i = 0; i < layout.size(); ++i) {
        const auto& e = layout.entries[i];
        data.values(static_cast<Eigen::Index>(e.time - t_lo), e.site) =
            y(static_cast<Eigen::Index>(i));
    }
    return data;
}

void write_kernel_table_csv(const std::filesystem::path& path, const KernelTable& table,
                            const std::string& comment) {
    std::ofstream out(path);
    if (!out) throw parse_error("cannot write file: " + path.string());
    out << "# halfspec " << kVersion << " " << comment << "\n";
    out << "pair_x,pair_xp,lag,value";
    for (Param p : table.grad_params()) out << ",d_" << param_name(p);
    out << "\n";
    out.precision(17);
    const auto& sites = table.sites();
    for (std::size_t a = 0; a < sites.size(); ++a) {
        for (std::size_t b = a; b < sites.size(); ++b) {
            for (long h = -(table.n_lags() - 1); h <= table.n_lags() - 1; ++h) {
                out << sites[a] << "," << sites[b] << "," << h << ","
                    << table.value(static_cast<int>(a), static_cast<int>(b), h);
                for (std::size_t g = 0; g < table.grad_params().size(); ++g) {
                    out << ","
                        << table.grad(static_cast<int>(a), static_cast<int>(b), h,
                                      static_cast<int>(g));
                }
                out << "\n";
            }
        }
    }
}

}  // namespace halfspec
