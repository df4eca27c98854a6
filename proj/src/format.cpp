#include "chemostat/format.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace chemostat {

std::string format_number(double v, int digits) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) return "0";  // folds -0
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, digits);
    return std::string(buf.data(), res.ptr);
}

}  // namespace chemostat
