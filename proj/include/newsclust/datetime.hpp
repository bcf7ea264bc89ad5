#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace newsclust {

// Instant at second resolution, counted from the Unix epoch (UTC).
struct Timestamp {
    std::int64_t seconds = 0;

    friend constexpr auto operator<=>(const Timestamp&, const Timestamp&) = default;
};

inline constexpr double kSecondsPerDay = 86400.0;

// Accepts "YYYY-MM-DD", "YYYY-MM-DD HH:MM", "YYYY-MM-DD HH:MM:SS" with either a
// space or 'T' separator and an optional trailing 'Z'. Fractional seconds are
// truncated. Throws InvalidValue on anything else.
Timestamp parse_timestamp(std::string_view text);

// "YYYY-MM-DD HH:MM:SS"
std::string format_timestamp(Timestamp ts);

// (a - b) in fractional days.
inline double days_between(Timestamp a, Timestamp b) {
    return static_cast<double>(a.seconds - b.seconds) / kSecondsPerDay;
}

}  // namespace newsclust
