#include "countcast/calendar.hpp"

#include <cmath>

namespace countcast {

CalendarFields calendar_fields(Timestamp ts) {
    CivilTime c = to_civil(ts);
    int dow = day_of_week(ts);
    int doy = day_of_year(ts);

    CalendarFields f;
    f.d = static_cast<double>(c.hour);
    f.w = dow + c.hour / 24.0;
    f.a = doy + c.hour / 24.0;
    f.hour_of_week = dow * 24 + c.hour;
    f.is_weekend = (dow == 0 || dow == 6);
    f.year_length = year_length_days(c.year);
    return f;
}

int hour_of_week_index(const CalendarFields& fields) {
    return static_cast<int>(std::floor(24.0 * fields.w));
}

}  // namespace countcast
