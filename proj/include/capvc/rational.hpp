#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <string_view>

namespace capvc {

using Rat = mpq_class;
using Int = mpz_class;

// Accepts "p", "-p", or "p/q" with decimal digits and q > 0.
// Anything else (whitespace, floats, signs on q, empty parts) is rejected.
std::optional<Rat> parse_rational(std::string_view text);

// Canonical form: "p" for integers, "p/q" with q > 1 otherwise.
std::string rat_string(const Rat& r);

Int rat_ceil(const Rat& r);

bool rat_is_integral(const Rat& r);

} // namespace capvc
