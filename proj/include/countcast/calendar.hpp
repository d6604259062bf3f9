#pragma once

#include "countcast/timestamp.hpp"

namespace countcast {

// Fractional clock coordinates of one hourly timestamp:
//   d in [0,24)  hours into the day
//   w in [0,7)   days into the week, 0 = Sunday 00:00
//   a in [0,year_length) days into the year
struct CalendarFields {
    double d;
    double w;
    double a;
    int hour_of_week;   // floor(24*w), 0..167
    bool is_weekend;    // Saturday or Sunday
    int year_length;    // 365 or 366
};

CalendarFields calendar_fields(Timestamp ts);

// Bucket key for the per-hour-of-week bounds table.
int hour_of_week_index(const CalendarFields& fields);

}  // namespace countcast
