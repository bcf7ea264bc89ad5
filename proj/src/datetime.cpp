#include "newsclust/datetime.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>

#include "newsclust/errors.hpp"

namespace newsclust {
namespace {

bool read_int(std::string_view text, std::size_t pos, std::size_t len, int& out) {
    if (pos + len > text.size()) return false;
    const char* first = text.data() + pos;
    auto [ptr, ec] = std::from_chars(first, first + len, out);
    return ec == std::errc{} && ptr == first + len;
}

}  // namespace

Timestamp parse_timestamp(std::string_view text) {
    using namespace std::chrono;
    const auto fail = [&] { return InvalidValue("unparseable timestamp '" + std::string(text) + "'"); };

    while (!text.empty() && (text.back() == ' ' || text.back() == 'Z')) text.remove_suffix(1);
    while (!text.empty() && text.front() == ' ') text.remove_prefix(1);

    int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
    if (text.size() < 10 || text[4] != '-' || text[7] != '-') throw fail();
    if (!read_int(text, 0, 4, y) || !read_int(text, 5, 2, mo) || !read_int(text, 8, 2, d)) throw fail();
    if (text.size() > 10) {
        if ((text[10] != ' ' && text[10] != 'T') || text.size() < 16 || text[13] != ':') throw fail();
        if (!read_int(text, 11, 2, h) || !read_int(text, 14, 2, mi)) throw fail();
        if (text.size() > 16) {
            if (text[16] != ':' || !read_int(text, 17, 2, s)) throw fail();
            if (text.size() > 19 && text[19] != '.') throw fail();
        }
    }
    const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok() || h > 23 || mi > 59 || s > 60) throw fail();
    const auto day_start = sys_days{ymd}.time_since_epoch();
    return Timestamp{duration_cast<seconds>(day_start).count() + h * 3600 + mi * 60 + s};
}

std::string format_timestamp(Timestamp ts) {
    using namespace std::chrono;
    const sys_seconds tp{seconds{ts.seconds}};
    const auto day_point = floor<days>(tp);
    const year_month_day ymd{day_point};
    const hh_mm_ss hms{tp - day_point};
    char buf[64];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u %02ld:%02ld:%02ld", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<long>(hms.hours().count()), static_cast<long>(hms.minutes().count()),
                  static_cast<long>(hms.seconds().count()));
    return buf;
}

}  // namespace newsclust
