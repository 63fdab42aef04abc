#pragma once

#include <charconv>
#include <string>

namespace snn {

// Shortest round-trippable decimal form; keeps CSV output byte-stable across
// runs.
inline std::string csv_float(float v) {
    char buf[48];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline std::string csv_double(double v) {
    char buf[48];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace snn
