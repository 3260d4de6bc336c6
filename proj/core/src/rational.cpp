#include "unlk/rational.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>

#include "unlk/errors.hpp"

namespace unlk {

namespace {

bool valid_integer_token(std::string_view t) {
  if (t.empty()) return false;
  std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
  if (i == t.size()) return false;
  for (; i < t.size(); ++i) {
    if (t[i] < '0' || t[i] > '9') return false;
  }
  return true;
}

}  // namespace

Rat parse_rat(std::string_view text) {
  // cpp_int's string constructor rejects an explicit '+'.
  const auto to_big = [](std::string_view t) {
    if (t.front() == '+') t.remove_prefix(1);
    return BigInt(std::string(t));
  };
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    if (!valid_integer_token(text)) {
      throw ParseError("not a rational: '" + std::string(text) + "'");
    }
    return Rat(to_big(text));
  }
  const std::string_view num = text.substr(0, slash);
  const std::string_view den = text.substr(slash + 1);
  if (!valid_integer_token(num) || !valid_integer_token(den)) {
    throw ParseError("not a rational: '" + std::string(text) + "'");
  }
  BigInt n = to_big(num);
  BigInt d = to_big(den);
  if (d == 0) {
    throw ParseError("zero denominator: '" + std::string(text) + "'");
  }
  if (d < 0) {  // cpp_rational requires a positive denominator
    n = -n;
    d = -d;
  }
  return Rat(n, d);
}

std::string rat_str(const Rat& value) {
  const BigInt num = numerator(value);
  const BigInt den = denominator(value);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

double rat_double(const Rat& value) { return value.convert_to<double>(); }

BigInt rat_floor(const Rat& value) {
  const BigInt num = numerator(value);
  const BigInt den = denominator(value);
  BigInt q = num / den;
  if (num < 0 && q * den != num) --q;
  return q;
}

BigInt rat_ceil(const Rat& value) { return -rat_floor(-value); }

Rat rationalize(double value, std::int64_t max_denominator) {
  if (!std::isfinite(value)) throw ParseError("cannot rationalize non-finite value");
  if (max_denominator < 1) max_denominator = 1;

  const bool negative = value < 0;
  double x = std::abs(value);

  // Continued fraction convergents p/q with q capped.
  std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double frac = x;
  for (int iter = 0; iter < 64; ++iter) {
    const double a_floor = std::floor(frac);
    if (a_floor > static_cast<double>(std::numeric_limits<std::int64_t>::max() / 2)) break;
    const auto a = static_cast<std::int64_t>(a_floor);
    // Next denominator is a*q1 + q0; stop before it passes the cap.
    if (q1 != 0 && a > (max_denominator - q0) / q1) {
      break;
    }
    const std::int64_t p2 = a * p1 + p0;
    const std::int64_t q2 = a * q1 + q0;
    if (q2 > max_denominator) break;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    const double rem = frac - a_floor;
    if (rem < 1e-15) break;
    frac = 1.0 / rem;
  }
  if (q1 == 0) return Rat(0);
  Rat result(p1, q1);
  return negative ? Rat(-result) : result;
}

std::string format_diagnostic(const Diagnostic& d) {
  std::string out = d.code;
  if (!d.subject.empty()) out += " [" + d.subject + "]";
  if (d.index.has_value()) out += " @" + std::to_string(*d.index);
  if (!d.message.empty()) out += ": " + d.message;
  return out;
}

ValidationError::ValidationError(std::vector<Diagnostic> diags)
    : Error([&diags] {
        std::string what = "validation failed";
        for (const auto& d : diags) what += "; " + format_diagnostic(d);
        return what;
      }()),
      diagnostics(std::move(diags)) {}

}  // namespace unlk
