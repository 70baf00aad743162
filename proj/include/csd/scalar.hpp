#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

namespace csd {

// Exact rational; gmp keeps every value in lowest terms with a positive denominator.
using Scalar = mpq_class;
using Integer = mpz_class;
using Vec = std::vector<Scalar>;
using Mat = std::vector<Vec>;

// "p/q" (or "p" when q == 1).
std::string to_string(const Scalar& s);

// Accepts "p/q", "p", and finite decimals such as "-0.25". Throws std::invalid_argument.
Scalar parse_scalar(const std::string& text);

Scalar dot(const Vec& a, const Vec& b);
int sign(const Scalar& s);
Scalar abs_value(const Scalar& s);

// Smallest integer e >= 0 with 2^e >= value (value > 0).
unsigned ceil_log2(const Scalar& value);
// Bits needed to name one of `count` items: 0 for count <= 1.
unsigned bits_for(const Integer& count);

}  // namespace csd
