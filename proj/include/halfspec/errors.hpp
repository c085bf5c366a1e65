#pragma once

#include <stdexcept>
#include <string>

namespace halfspec {

/// Bad user-supplied configuration (pad factors, parameter names, freeze
/// lists, lag guards).
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Non-finite or otherwise invalid values produced during numerical work.
class numeric_error : public std::runtime_error {
public:
    explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Covariance assembly could not be completed (missing pair or lag).
class assembly_error : public std::runtime_error {
public:
    explicit assembly_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Cholesky factorization failed.  `pivot` is the index of the first
/// non-positive pivot.
class indefinite_matrix_error : public std::runtime_error {
public:
    indefinite_matrix_error(const std::string& msg, int pivot_index)
        : std::runtime_error(msg), pivot(pivot_index) {}
    int pivot;
};

/// Malformed input file.  Line/column are 1-based where known, 0 otherwise.
class parse_error : public std::runtime_error {
public:
    parse_error(const std::string& msg, int line_no = 0, int column_no = 0)
        : std::runtime_error(msg), line(line_no), column(column_no) {}
    int line;
    int column;
};

}  // namespace halfspec
