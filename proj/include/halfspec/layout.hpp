#pragma once

#include <cstdint>
#include <vector>

namespace halfspec {

/// One observation slot: a site index (into site_altitudes) and an integer
/// time index on the regular sampling lattice.
struct Observation {
    int site;
    std::int64_t time;

    friend bool operator==(const Observation&, const Observation&) = default;
    friend auto operator<=>(const Observation&, const Observation&) = default;
};

/// The sorted set of (site, time) pairs defining the rows and columns of
/// every matrix.  Gaps in time are simply absent entries; the covariance
/// stays evaluable because the spectral quadrature never touches the data.
struct ObservationLayout {
    std::vector<double> site_altitudes;  // sorted ascending, unique, meters
    std::vector<Observation> entries;    // sorted lexicographically, unique

    std::size_t size() const { return entries.size(); }
    std::int64_t min_time() const;
    std::int64_t max_time() const;
    /// max_time - min_time + 1
    std::int64_t time_span() const;

    /// Throws config_error if an invariant is violated.
    void validate() const;

    /// Complete lattice: every site at every time 0..n_time-1.
    static ObservationLayout full_lattice(std::vector<double> sites, std::int64_t n_time);
};

}  // namespace halfspec
