#include "countcast/timestamp.hpp"

#include <chrono>
#include <cstdio>

#include "countcast/errors.hpp"

namespace countcast {

namespace {

namespace chr = std::chrono;

chr::sys_days to_sys_days(Timestamp ts) {
    std::int64_t h = ts.epoch_hours();
    std::int64_t days = h >= 0 ? h / 24 : (h - 23) / 24;  // floor division
    return chr::sys_days(chr::days(days));
}

int hour_of_day(Timestamp ts) {
    std::int64_t h = ts.epoch_hours() % 24;
    return static_cast<int>(h < 0 ? h + 24 : h);
}

}  // namespace

Timestamp Timestamp::from_civil(int year, int month, int day, int hour) {
    if (hour < 0 || hour > 23)
        throw InputError("invalid hour " + std::to_string(hour));
    chr::year_month_day ymd{chr::year(year), chr::month(static_cast<unsigned>(month)),
                            chr::day(static_cast<unsigned>(day))};
    if (!ymd.ok())
        throw InputError("invalid calendar date " + std::to_string(year) + "-" +
                         std::to_string(month) + "-" + std::to_string(day));
    chr::sys_days sd(ymd);
    return Timestamp(static_cast<std::int64_t>(sd.time_since_epoch().count()) * 24 + hour);
}

CivilTime to_civil(Timestamp ts) {
    chr::year_month_day ymd(to_sys_days(ts));
    return CivilTime{int(ymd.year()), int(unsigned(ymd.month())), int(unsigned(ymd.day())),
                     hour_of_day(ts)};
}

int day_of_week(Timestamp ts) {
    chr::weekday wd(to_sys_days(ts));
    return static_cast<int>(wd.c_encoding());  // Sunday = 0
}

int day_of_year(Timestamp ts) {
    chr::sys_days sd = to_sys_days(ts);
    chr::year_month_day ymd(sd);
    chr::sys_days jan1(chr::year_month_day{ymd.year(), chr::January, chr::day(1)});
    return static_cast<int>((sd - jan1).count());
}

bool is_leap_year(int year) { return chr::year(year).is_leap(); }

int year_length_days(int year) { return is_leap_year(year) ? 366 : 365; }

std::string format_timestamp(Timestamp ts) {
    CivilTime c = to_civil(ts);
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:00", c.year, c.month, c.day, c.hour);
    return buf;
}

Timestamp parse_timestamp(const std::string& text) {
    // exact zero-padded shape: YYYY-MM-DDTHH:00
    static constexpr char shape[17] = "dddd-dd-ddTdd:00";
    bool ok = text.size() == 16;
    for (std::size_t i = 0; ok && i < 16; ++i)
        ok = shape[i] == 'd' ? text[i] >= '0' && text[i] <= '9' : text[i] == shape[i];
    if (!ok)
        throw InputError("expected timestamp of the form YYYY-MM-DDTHH:00, got \"" + text + "\"");
    auto num = [&text](std::size_t pos, std::size_t len) {
        int v = 0;
        for (std::size_t i = pos; i < pos + len; ++i) v = v * 10 + (text[i] - '0');
        return v;
    };
    return Timestamp::from_civil(num(0, 4), num(5, 2), num(8, 2), num(11, 2));
}

Timestamp parse_event_time(const std::string& text) {
    int y, mo, d, h, mi = 0, s = 0;
    char sep;
    int n = std::sscanf(text.c_str(), "%d-%d-%d%c%d:%d:%d", &y, &mo, &d, &sep, &h, &mi, &s);
    if (n < 5 || (sep != 'T' && sep != ' '))
        throw InputError("cannot parse event time \"" + text + "\"");
    if (mi < 0 || mi > 59 || s < 0 || s > 59)
        throw InputError("cannot parse event time \"" + text + "\"");
    return Timestamp::from_civil(y, mo, d, h);
}

}  // namespace countcast
