#include "fairsub/rational.hpp"

#include <cctype>
#include <ostream>

#include "fairsub/error.hpp"

namespace fairsub {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Input: return "input error";
    case ErrorKind::Precondition: return "precondition error";
    case ErrorKind::Resource: return "resource error";
    case ErrorKind::NotEnvyFreeable: return "not envy-freeable";
    case ErrorKind::Unsupported: return "unsupported instance";
    case ErrorKind::Internal: return "internal error";
  }
  return "error";
}

Rational::Rational(long num, long den) {
  if (den == 0) fail(ErrorKind::Input, "rational with zero denominator");
  v_ = mpq_class(num, 1);
  v_ /= den;
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) fail(ErrorKind::Input, "division by zero");
  v_ /= o.v_;
  return *this;
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

Rational Rational::parse(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  const auto slash = body.find('/');
  const std::string_view num = body.substr(0, slash);
  const std::string_view den =
      slash == std::string_view::npos ? std::string_view("1") : body.substr(slash + 1);
  if (!all_digits(num) || !all_digits(den))
    fail(ErrorKind::Input, "not an exact rational: \"" + std::string(text) + "\"");

  mpz_class n(std::string(num), 10);
  mpz_class d(std::string(den), 10);
  if (d == 0) fail(ErrorKind::Input, "zero denominator: \"" + std::string(text) + "\"");
  Rational r;
  r.v_ = mpq_class(n, d);
  r.v_.canonicalize();
  if (negative) r = -r;
  return r;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

Rational sum(std::span<const Rational> values) {
  Rational total;
  for (const auto& v : values) total += v;
  return total;
}

}  // namespace fairsub
