#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace pds {

/// Unbounded integer used for every parameter computation.
using Int = mpz_class;
/// Exact rational; used where non-integrality is itself a verdict.
using Rational = mpq_class;

/// A mathematical precondition does not hold (non-prime p, q not dividing |G|, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Operands do not belong together (elements of different groups, malformed input).
class StructuralError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Floor square root of a nonnegative integer.
Int isqrt(const Int& n);

/// The exact square root, or nullopt when n is negative or not a perfect square.
std::optional<Int> exact_sqrt(const Int& n);

inline bool is_square(const Int& n) { return exact_sqrt(n).has_value(); }

bool is_prime(std::uint64_t n);
bool is_prime(const Int& n);

/// Returns (q, e) when n = q^e with q prime and e >= 1.
std::optional<std::pair<std::uint64_t, unsigned>> prime_power(std::uint64_t n);

/// Distinct prime divisors by trial division, ascending. Intended for values
/// up to ~1e12; use support_within() for cofactors of a known factorisation.
std::vector<Int> prime_support(const Int& n);

/// Prime support of n restricted to the given primes. Returns nullopt if n
/// has a prime factor outside `primes` (or n == 0).
std::optional<std::vector<Int>> support_within(const Int& n, const std::vector<Int>& primes);

/// Floor division rounding toward negative infinity.
Int floor_div(const Int& a, const Int& b);

std::string to_string(const Int& n);
std::string to_string(const Rational& q);

/// Parses a decimal integer; throws StructuralError on malformed text.
Int parse_int(const std::string& text);

/// Converts to uint64, throwing DomainError when out of range.
std::uint64_t to_u64(const Int& n);

} // namespace pds
