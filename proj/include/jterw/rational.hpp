#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace jterw {

/// Arbitrary-precision rational. Arithmetic results are canonical; the two-argument
/// constructor is not, so only pass it reduced fractions.
using Rational = mpq_class;

/// Formats as "num/den"; integers keep the "/1" so the text form is uniform.
std::string to_string(const Rational& q);

/// Accepts "num/den" or a bare integer. Throws std::invalid_argument on malformed input
/// or a zero denominator.
Rational parse_rational(std::string_view text);

inline bool is_integral(const Rational& q) { return q.get_den() == 1; }

}  // namespace jterw
