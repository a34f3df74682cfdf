#include "doctest.h"

#include "pds_forge/integer.hpp"

using namespace pds;

namespace {

bool trial_prime(std::uint64_t n)
{
    if (n < 2) {
        return false;
    }
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            return false;
        }
    }
    return true;
}

} // namespace

TEST_CASE("isqrt and exact_sqrt agree with squaring")
{
    for (long n = 0; n < 5000; ++n) {
        const Int r = isqrt(Int(n));
        CHECK(r * r <= n);
        CHECK((r + 1) * (r + 1) > n);
        CHECK(exact_sqrt(Int(n)).has_value() == (r * r == n));
    }
    CHECK_FALSE(exact_sqrt(Int(-4)).has_value());
    const Int big("123456789012345678901234567890");
    CHECK(*exact_sqrt(big * big) == big);
    CHECK_FALSE(is_square(big * big + 1));
}

TEST_CASE("primality matches trial division")
{
    for (std::uint64_t n = 0; n < 3000; ++n) {
        CHECK(is_prime(n) == trial_prime(n));
        CHECK(is_prime(Int(std::to_string(n))) == trial_prime(n));
    }
    CHECK(is_prime(std::uint64_t(1'000'000'007)));
    CHECK_FALSE(is_prime(std::uint64_t(1'000'000'007) * 3));
}

TEST_CASE("prime powers")
{
    CHECK(prime_power(8) == std::pair<std::uint64_t, unsigned>{2, 3});
    CHECK(prime_power(125) == std::pair<std::uint64_t, unsigned>{5, 3});
    CHECK(prime_power(13) == std::pair<std::uint64_t, unsigned>{13, 1});
    CHECK_FALSE(prime_power(1).has_value());
    CHECK_FALSE(prime_power(12).has_value());
    CHECK_FALSE(prime_power(0).has_value());
}

TEST_CASE("prime support")
{
    CHECK(prime_support(Int(1000)) == std::vector<Int>{2, 5});
    CHECK(prime_support(Int(1)).empty());
    CHECK(prime_support(Int(97)) == std::vector<Int>{97});
    const std::vector<Int> two_five{2, 5};
    CHECK(support_within(Int(400), two_five) == std::vector<Int>{2, 5});
    CHECK(support_within(Int(64), two_five) == std::vector<Int>{2});
    CHECK_FALSE(support_within(Int(600), two_five).has_value());
    CHECK_FALSE(support_within(Int(0), two_five).has_value());
}

TEST_CASE("floor division rounds toward negative infinity")
{
    CHECK(floor_div(Int(7), Int(2)) == 3);
    CHECK(floor_div(Int(-7), Int(2)) == -4);
    CHECK(floor_div(Int(-8), Int(2)) == -4);
    CHECK(floor_div(Int(7), Int(-2)) == -4);
}

TEST_CASE("parsing and conversion")
{
    CHECK(parse_int("  42 ") == 42);
    CHECK(parse_int("-17") == -17);
    CHECK_THROWS_AS(parse_int("4x"), StructuralError);
    CHECK_THROWS_AS(parse_int(""), StructuralError);
    CHECK(to_u64(Int(12345)) == 12345u);
    CHECK_THROWS_AS(to_u64(Int(-1)), DomainError);
    CHECK_THROWS_AS(to_u64(Int("100000000000000000000")), DomainError);
    Rational q(452, 10);
    q.canonicalize();
    CHECK(to_string(q) == "226/5");
}
