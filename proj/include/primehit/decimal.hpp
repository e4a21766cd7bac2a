// decimal.hpp
// Fixed-point rendering of exact rationals with a chosen rounding mode.

#pragma once

#include <string>

#include <gmpxx.h>

#include "primehit/bigfloat.hpp"

namespace primehit {

// Renders x with exactly `digits` digits after the decimal point.
// Round::nearest breaks ties away from zero; up/down round toward +/- infinity.
// Throws ConfigError if digits < 1.
std::string render_decimal(const mpq_class& x, int digits, Round mode);

} // namespace primehit
