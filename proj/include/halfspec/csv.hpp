#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "halfspec/kernel_table.hpp"
#include "halfspec/layout.hpp"

namespace halfspec {

inline constexpr std::string_view kVersion = "0.1.0";

/// Time-height CSV contents: header "time,<alt_1>,<alt_2>,...", one row per
/// integer time index, empty cells for missing values (NaN here).
struct DataFile {
    std::vector<std::int64_t> times;   // strictly increasing
    std::vector<double> altitudes;     // sorted ascending
    Eigen::MatrixXd values;            // times x altitudes, NaN = missing
};

/// Throws parse_error with line/column on malformed input; columns with no
/// observed values are dropped.  With time_delta > 0 the time column may hold
/// real timestamps, mapped to indices via round((t - t_first) / time_delta);
/// timestamps off the lattice by more than 1% of time_delta are rejected.
DataFile read_data_file(const std::filesystem::path& path, double time_delta = 0.0);

void write_data_file(const std::filesystem::path& path, const DataFile& data,
                     const std::string& comment);

/// Builds the (layout, y) pair from a data file, optionally restricted to a
/// subset of altitudes.  Missing cells are dropped from the layout, not
/// imputed.  Entries come out sorted by (site, time).
std::pair<ObservationLayout, Eigen::VectorXd> to_observations(
    const DataFile& data, const std::optional<std::vector<double>>& site_subset);

/// Reshapes one sample vector back onto the layout's time-height grid
/// (missing slots stay NaN and serialize as empty cells).
DataFile sample_to_data(const ObservationLayout& layout, const Eigen::VectorXd& y);

/// KernelTable serialization: pair_x, pair_xp, lag, value[, d_<param>...].
void write_kernel_table_csv(const std::filesystem::path& path, const KernelTable& table,
                            const std::string& comment);

}  // namespace halfspec
