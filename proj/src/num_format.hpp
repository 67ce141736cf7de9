#ifndef REKGS_NUM_FORMAT_HPP
#define REKGS_NUM_FORMAT_HPP

#include <charconv>
#include <stdexcept>
#include <string>
#include <string_view>

namespace rekgs::detail {

/// Shortest decimal form that round-trips to the same double.
inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw std::runtime_error("parse_double: malformed value '" + std::string(s) + "'");
    }
    return v;
}

}  // namespace rekgs::detail

#endif  // REKGS_NUM_FORMAT_HPP
