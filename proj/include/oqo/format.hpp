#ifndef OQO_FORMAT_HPP
#define OQO_FORMAT_HPP

#include <string>

namespace oqo {

/// Fixed-width numeric text used by every exported table: 12 significant digits.
std::string format_number(double x);

/// x rounded to 12 significant digits, so JSON writers emit the same digits.
double round_significant(double x);

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace oqo

#endif  // OQO_FORMAT_HPP
