#ifndef CHEMOSTAT_FORMAT_HPP
#define CHEMOSTAT_FORMAT_HPP

#include <string>

namespace chemostat {

/// `digits` significant digits (12 by default), '.' decimal separator, independent of the global locale.
std::string format_number(double v, int digits = 12);

}  // namespace chemostat

#endif  // CHEMOSTAT_FORMAT_HPP
