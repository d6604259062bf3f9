#pragma once

#include <cstdint>
#include <string>

namespace countcast {

// Naive local clock time on a strict hourly grid, stored as whole hours
// since 1970-01-01T00:00. There is no timezone or DST handling: duplicated
// or skipped DST hours must be normalized upstream during ingestion.
class Timestamp {
public:
    Timestamp() = default;
    explicit Timestamp(std::int64_t epoch_hours) : hours_(epoch_hours) {}

    static Timestamp from_civil(int year, int month, int day, int hour);

    std::int64_t epoch_hours() const { return hours_; }

    Timestamp operator+(std::int64_t h) const { return Timestamp(hours_ + h); }
    Timestamp operator-(std::int64_t h) const { return Timestamp(hours_ - h); }
    std::int64_t operator-(Timestamp other) const { return hours_ - other.hours_; }
    auto operator<=>(const Timestamp&) const = default;

private:
    std::int64_t hours_ = 0;
};

struct CivilTime {
    int year;
    int month;   // 1..12
    int day;     // 1..31
    int hour;    // 0..23
};

CivilTime to_civil(Timestamp ts);

// Day of week with Sunday = 0 .. Saturday = 6.
int day_of_week(Timestamp ts);

// Zero-based day of year (Jan 1 = 0).
int day_of_year(Timestamp ts);

bool is_leap_year(int year);
int year_length_days(int year);

// Canonical on-disk form: "YYYY-MM-DDTHH:00".
std::string format_timestamp(Timestamp ts);

// Strict parse of the canonical form; anything else is an InputError.
Timestamp parse_timestamp(const std::string& text);

// Lenient parse for raw event logs: 'T' or ' ' separator, optional
// ":MM[:SS]" part. The result is truncated to the containing hour.
Timestamp parse_event_time(const std::string& text);

}  // namespace countcast
