#pragma once

#include <gmpxx.h>
#include <stdexcept>
#include <string>

namespace mbs {

// Exact arithmetic aliases. Every ordering decision in the library goes
// through these; there is no floating-point fast path.
using Int = mpz_class;
using Rat = mpq_class;

// Thrown on malformed textual input (model files, CLI point syntax).
struct ParseError : std::runtime_error {
    int line = 0;
    int column = 0;
    ParseError(std::string msg, int line_ = 0, int column_ = 0)
        : std::runtime_error(std::move(msg)), line(line_), column(column_) {}
};

// Thrown when a query needs a construct outside the decidable fragment
// (unsupported chain descriptors, undecided symbolic tails, ...).
struct UnsupportedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Rat make_rat(const Int& num, const Int& den);

// "p" or "p/q", no decimal points, q > 0 after canonicalization.
Rat rat_from_string(const std::string& text);
std::string rat_to_string(const Rat& value);

double rat_to_double(const Rat& value);

// floor(sqrt(n)) for n >= 0.
Int floor_sqrt(const Int& n);

Int rat_floor(const Rat& value);
Int rat_ceil(const Rat& value);

// Exact rational square root when one exists.
bool rat_sqrt_exact(const Rat& value, Rat& root);

// Least m/2^bits with (m/2^bits)^2 >= value; exact when value is a square
// of such a dyadic. This is the upper bound used by up() where the true
// Euclidean norm is irrational.
Rat sqrt_upper_bound(const Rat& value, unsigned bits = 32);

} // namespace mbs
