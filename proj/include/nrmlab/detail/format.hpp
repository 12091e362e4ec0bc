#pragma once

#include <charconv>
#include <string>

namespace nrmlab::detail {

/// Shortest decimal form that round-trips the exact double; used for all
/// numeric output so identical values always serialize to identical bytes.
inline std::string format_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace nrmlab::detail
