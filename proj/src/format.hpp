#pragma once

#include <charconv>
#include <cstdio>
#include <string>

namespace semaxis::detail {

inline std::string fmt_fixed(double v, int prec = 6) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", prec, v);
    return buf;
}

/// Shortest representation that round-trips the exact value.
inline std::string fmt_shortest(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, p);
}

} // namespace semaxis::detail
