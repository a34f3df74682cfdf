#include "pds_forge/integer.hpp"

#include <algorithm>
#include <limits>

namespace pds {

Int isqrt(const Int& n)
{
    if (n < 0) {
        throw DomainError("isqrt of a negative integer");
    }
    Int r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

std::optional<Int> exact_sqrt(const Int& n)
{
    if (n < 0 || mpz_perfect_square_p(n.get_mpz_t()) == 0) {
        return std::nullopt;
    }
    return isqrt(n);
}

bool is_prime(std::uint64_t n)
{
    if (n < 2) {
        return false;
    }
    if (n % 2 == 0) {
        return n == 2;
    }
    for (std::uint64_t d = 3; d <= n / d; d += 2) {
        if (n % d == 0) {
            return false;
        }
    }
    return true;
}

bool is_prime(const Int& n)
{
    if (n < 2) {
        return false;
    }
    // 50 Miller-Rabin rounds; deterministic below 2^64 in GMP's implementation.
    return mpz_probab_prime_p(n.get_mpz_t(), 50) != 0;
}

std::optional<std::pair<std::uint64_t, unsigned>> prime_power(std::uint64_t n)
{
    if (n < 2) {
        return std::nullopt;
    }
    std::uint64_t q = 0;
    for (std::uint64_t d = 2; d <= n / d; ++d) {
        if (n % d == 0) {
            q = d;
            break;
        }
    }
    if (q == 0) {
        return std::pair{n, 1u};
    }
    unsigned e = 0;
    while (n % q == 0) {
        n /= q;
        ++e;
    }
    if (n != 1) {
        return std::nullopt;
    }
    return std::pair{q, e};
}

std::vector<Int> prime_support(const Int& n)
{
    if (n == 0) {
        throw DomainError("prime support of zero");
    }
    Int m = abs(n);
    std::vector<Int> primes;
    for (Int d = 2; d * d <= m; d += (d == 2 ? 1 : 2)) {
        if (m % d == 0) {
            primes.push_back(d);
            while (m % d == 0) {
                m /= d;
            }
        }
    }
    if (m > 1) {
        primes.push_back(m);
    }
    return primes;
}

std::optional<std::vector<Int>> support_within(const Int& n, const std::vector<Int>& primes)
{
    if (n == 0) {
        return std::nullopt;
    }
    Int m = abs(n);
    std::vector<Int> support;
    for (const auto& q : primes) {
        if (m % q == 0) {
            support.push_back(q);
            while (m % q == 0) {
                m /= q;
            }
        }
    }
    if (m != 1) {
        return std::nullopt;
    }
    std::sort(support.begin(), support.end());
    return support;
}

Int floor_div(const Int& a, const Int& b)
{
    if (b == 0) {
        throw DomainError("division by zero");
    }
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

std::string to_string(const Int& n) { return n.get_str(); }

std::string to_string(const Rational& q) { return q.get_str(); }

Int parse_int(const std::string& text)
{
    Int out;
    std::string trimmed = text;
    trimmed.erase(0, trimmed.find_first_not_of(" \t"));
    trimmed.erase(trimmed.find_last_not_of(" \t") + 1);
    if (trimmed.empty() || out.set_str(trimmed, 10) != 0) {
        throw StructuralError("not an integer: '" + text + "'");
    }
    return out;
}

std::uint64_t to_u64(const Int& n)
{
    if (n < 0 || n > Int(std::to_string(std::numeric_limits<std::uint64_t>::max()))) {
        throw DomainError("integer " + n.get_str() + " out of 64-bit range");
    }
    return std::stoull(n.get_str());
}

} // namespace pds
