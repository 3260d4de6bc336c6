#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace unlk {

// Exact rational scalar used throughout the library. All model data, spectra
// and invariants are computed in Rat; doubles appear only at ingest and at
// reporting boundaries.
using Rat = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline Rat rat(long long num, long long den = 1) { return Rat(num, den); }

// Parses "p", "-p", "p/q" (q > 0 after normalization). Throws ParseError.
Rat parse_rat(std::string_view text);

// Canonical serialization: "p" when the denominator is 1, else "p/q".
std::string rat_str(const Rat& value);

double rat_double(const Rat& value);

// Largest integer <= value / smallest integer >= value.
BigInt rat_floor(const Rat& value);
BigInt rat_ceil(const Rat& value);

// Nearest rational with denominator <= max_denominator (continued fractions).
// Used when lifting measured float data into the exact model.
Rat rationalize(double value, std::int64_t max_denominator);

inline int sign(const Rat& value) { return value.sign(); }

}  // namespace unlk
