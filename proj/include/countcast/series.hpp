#pragma once

#include <cstdint>
#include <vector>

#include "countcast/timestamp.hpp"

namespace countcast {

// Contiguous hourly sequence of non-negative counts. Gap-free by
// construction: values[i] belongs to start + i hours.
struct CountSeries {
    Timestamp start;
    std::vector<long long> values;

    std::int64_t size() const { return static_cast<std::int64_t>(values.size()); }
    bool empty() const { return values.empty(); }
    Timestamp timestamp_at(std::int64_t i) const { return start + i; }
    Timestamp last_timestamp() const { return start + (size() - 1); }

    // Inclusive timestamp window; both ends must lie inside the series.
    CountSeries slice(Timestamp from, Timestamp to) const;

    void validate() const;  // non-empty, all values >= 0
};

}  // namespace countcast
