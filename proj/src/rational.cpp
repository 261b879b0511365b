#include "capvc/rational.hpp"

#include <algorithm>
#include <cctype>

namespace capvc {

namespace {

bool all_digits(std::string_view s) {
  return !s.empty() &&
         std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

} // namespace

std::optional<Rat> parse_rational(std::string_view text) {
  std::string_view num = text;
  std::string_view den;
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    num = text.substr(0, slash);
    den = text.substr(slash + 1);
    if (!all_digits(den) || den.find('/') != std::string_view::npos) return std::nullopt;
  }
  bool neg = !num.empty() && num.front() == '-';
  if (neg) num.remove_prefix(1);
  if (!all_digits(num)) return std::nullopt;

  Int p(std::string(num), 10);
  if (neg) p = -p;
  Int q = den.empty() ? Int(1) : Int(std::string(den), 10);
  if (q == 0) return std::nullopt;
  Rat r(p, q);
  r.canonicalize();
  return r;
}

std::string rat_string(const Rat& r) {
  Rat c = r;
  c.canonicalize();
  return c.get_str();
}

Int rat_ceil(const Rat& r) {
  Int q;
  mpz_cdiv_q(q.get_mpz_t(), r.get_num().get_mpz_t(), r.get_den().get_mpz_t());
  return q;
}

bool rat_is_integral(const Rat& r) {
  // robust to non-canonical fractions like 8/4, matching rat_ceil
  return mpz_divisible_p(r.get_num().get_mpz_t(), r.get_den().get_mpz_t()) != 0;
}

} // namespace capvc
