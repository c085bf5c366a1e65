#include "halfspec/layout.hpp"

#include <algorithm>

#include "halfspec/errors.hpp"

namespace halfspec {

std::int64_t ObservationLayout::min_time() const {
    std::int64_t t = entries.empty() ? 0 : entries.front().time;
    for (const auto& e : entries) t = std::min(t, e.time);
    return t;
}

std::int64_t ObservationLayout::max_time() const {
    std::int64_t t = entries.empty() ? 0 : entries.front().time;
    for (const auto& e : entries) t = std::max(t, e.time);
    return t;
}

std::int64_t ObservationLayout::time_span() const {
    return entries.empty() ? 0 : max_time() - min_time() + 1;
}

void ObservationLayout::validate() const {
    if (entries.empty()) throw config_error("layout has no observations");
    for (std::size_t i = 0; i < site_altitudes.size(); ++i) {
        if (!(site_altitudes[i] > 0.0)) {
            throw config_error("site altitudes must be positive");
        }
        if (i > 0 && !(site_altitudes[i] > site_altitudes[i - 1])) {
            throw config_error("site altitudes must be strictly increasing");
        }
    }
    if (!std::is_sorted(entries.begin(), entries.end())) {
        throw config_error("layout entries must be sorted by (site, time)");
    }
    if (std::adjacent_find(entries.begin(), entries.end()) != entries.end()) {
        throw config_error("layout entries must be unique");
    }
    for (const auto& e : entries) {
        if (e.site < 0 || e.site >= static_cast<int>(site_altitudes.size())) {
            throw config_error("layout entry references an unknown site");
        }
        if (e.time < 0) throw config_error("time indices must be nonnegative");
    }
}

ObservationLayout ObservationLayout::full_lattice(std::vector<double> sites,
                                                  std::int64_t n_time) {
    ObservationLayout layout;
    layout.site_altitudes = std::move(sites);
    layout.entries.reserve(layout.site_altitudes.size() * n_time);
    for (int s = 0; s < static_cast<int>(layout.site_altitudes.size()); ++s) {
        for (std::int64_t t = 0; t < n_time; ++t) layout.entries.push_back({s, t});
    }
    layout.validate();
    return layout;
}

}  // namespace halfspec
