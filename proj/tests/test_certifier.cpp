#include "doctest.h"

#include "oracles.hpp"
#include "pds_forge/certifier.hpp"

using namespace pds;

namespace {

std::vector<std::uint64_t> small_primes(std::uint64_t lo, std::uint64_t hi)
{
    std::vector<std::uint64_t> out;
    for (auto p = lo; p <= hi; ++p) {
        if (is_prime(p)) {
            out.push_back(p);
        }
    }
    return out;
}

Int I(std::uint64_t n) { return Int(std::to_string(n)); }

} // namespace

TEST_CASE("certifiable primes")
{
    CHECK_NOTHROW(require_certifiable_prime(5));
    CHECK_THROWS_AS(require_certifiable_prime(3), DomainError);
    CHECK_THROWS_AS(require_certifiable_prime(9), DomainError);
    CHECK_THROWS_AS(require_certifiable_prime(-7), DomainError);
}

TEST_CASE("group reduction leaves Z2^3 x Zp^3")
{
    for (auto p : small_primes(5, 60)) {
        const auto r = group_reduction(I(p));
        CHECK(r.candidates.size() == 9);
        REQUIRE(r.survivors.size() == 1);
        CHECK(r.survivors[0] == GroupSpec({2, 2, 2, p, p, p}));
        for (const auto& c : r.candidates) {
            CHECK(c.exclusions.empty() == (c.group == r.survivors[0]));
        }
    }
}

TEST_CASE("Delta candidates")
{
    CHECK(delta_candidates(5) == std::vector<Int>{100, 400});
    for (auto p : small_primes(5, 200)) {
        const Int P = I(p);
        CHECK(delta_candidates(P) == std::vector<Int>{4 * P * P, 16 * P * P});
    }
}

TEST_CASE("k bounds")
{
    CHECK(k_bound_exact(5, 400).k_max == 112);
    CHECK(k_bound_exact(5, 400).closed_form_floor == 114);
    CHECK(k_bound_exact(5, 100).k_max == 25);
    CHECK(k_bound_exact(5, 100).closed_form_floor == 25);
    CHECK(k_bound_discriminant(5, 400, 112) >= 0);
    CHECK(k_bound_discriminant(5, 400, 113) < 0);
    CHECK_THROWS_AS(k_bound_exact(5, 900), DomainError);
    for (auto p : small_primes(5, 23)) {
        const Int P = I(p);
        for (const Int& d : {Int(4 * P * P), Int(16 * P * P)}) {
            const auto b = k_bound_exact(P, d);
            CHECK(b.k_max == oracle::k_bound_scan(P, d));
            CHECK(b.k_max <= b.closed_form_floor);
        }
    }
    // Values near p = 190 exceed 64 bits in intermediate products.
    for (auto p : small_primes(180, 400)) {
        const Int P = I(p);
        const auto b = k_bound_exact(P, 16 * P * P);
        CHECK(k_bound_discriminant(P, 16 * P * P, b.k_max) >= 0);
        CHECK(k_bound_discriminant(P, 16 * P * P, b.k_max + 1) < 0);
        CHECK(b.k_max <= b.closed_form_floor);
    }
}

TEST_CASE("mu candidates match a direct scan")
{
    for (auto p : small_primes(5, 13)) {
        const Int P = I(p);
        for (const Int& d : {Int(4 * P * P), Int(16 * P * P)}) {
            std::set<std::tuple<Int, Int, Int, Int>> got;
            for (const auto& c : mu_candidates(P, d)) {
                CHECK(c.params.v == 8 * P * P * P);
                CHECK(c.beta == c.params.beta());
                got.insert({c.params.k, c.params.lambda, c.params.mu, c.beta});
            }
            CHECK_MESSAGE(got == oracle::mu_scan(P, d, k_bound_exact(P, d).k_max), "p=" << p << " delta=" << d);
        }
    }
    const auto c5 = mu_candidates(5, 400);
    REQUIRE(c5.size() == 2);
    CHECK(c5[0].params == PdsParams{1000, 108, 8, 12});
    CHECK(c5[1].params == PdsParams{1000, 111, 14, 12});
    CHECK(mu_candidates(5, 100).empty());
    const auto c11 = mu_candidates(11, 1936);
    CHECK(c11.size() == 4);
}

TEST_CASE("low-mu branch classification")
{
    const auto c5 = classify_low_mu_branch(5);
    CHECK(c5.radicand == 73);
    CHECK_FALSE(c5.open);
    const auto c11 = classify_low_mu_branch(11);
    CHECK(c11.open);
    CHECK(*c11.root == 13);
    CHECK(c11.root_mod_8 == 5);
    CHECK(c11.y == 1);
    CHECK(c11.form == "4y^2+5y+2");
    CHECK(c11.betas == std::vector<Int>{-14, 12});
    const auto c23 = classify_low_mu_branch(23);
    CHECK(c23.open);
    CHECK(c23.root_mod_8 == 3);
    CHECK(c23.y == 2);
    CHECK(c23.form == "4y^2+3y+1");
    for (auto p : small_primes(5, 3000)) {
        const auto c = classify_low_mu_branch(I(p));
        CHECK(c.open == is_square(I(16 * p - 7)));
        if (c.open) {
            CHECK(c.unique_form);
            const Int y = c.y;
            CHECK(I(p) == (c.root_mod_8 == 3 ? 4 * y * y + 3 * y + 1 : 4 * y * y + 5 * y + 2));
        }
    }
}

TEST_CASE("C system sums")
{
    const PdsParams a{1000, 108, 8, 12}, b{1000, 111, 14, 12};
    CHECK(c_system(5, a, 0).s1 == 27);
    CHECK(c_system(5, a, 0).s2 == 48);
    CHECK(c_system(5, a, 4).s1 == 26);
    CHECK(c_system(5, a, 4).s2 == 40);
    CHECK(c_system(5, b, 3).s1 == 27);
    CHECK(c_system(5, b, 7).s2 == 40);
    const auto x = c_system(11, {10648, 455, 6, 20}, 3);
    CHECK(x.s1_numerator == 452);
    CHECK(x.denominator == 10);
    CHECK(x.s1 == Rational(226, 5));
    CHECK_FALSE(x.s1_integral());
    // The first mu = 2p + 2 set at a = 4 gives (4p+6, 4p+20) for every p.
    for (auto p : small_primes(5, 199)) {
        const Int P = I(p);
        const PdsParams hi{8 * P * P * P, 4 * P * P + 2 * P - 2, 2 * P - 2, 2 * P + 2};
        const auto cs = c_system(P, hi, 4);
        CHECK(cs.s1 == 4 * P + 6);
        CHECK(cs.s2 == 4 * P + 20);
    }
}

TEST_CASE("C solutions")
{
    const auto s = enumerate_c_solutions(26, 40, 31);
    REQUIRE(s.size() == 4);
    CHECK(s[0].to_string() == "(4,2,1^20,0^9)");
    CHECK(s[1].to_string() == "(3^2,2,1^18,0^10)");
    CHECK(s[2].to_string() == "(3,2^4,1^15,0^11)");
    CHECK(s[3].to_string() == "(2^7,1^12,0^12)");
    for (const auto& t : s) {
        CHECK(t.length() == 31);
        CHECK(t.has_odd_entry());
    }
    CHECK(enumerate_c_solutions(27, 48, 31).empty()); // odd difference
    CHECK(enumerate_c_solutions(5, 4, 10).empty());
    CHECK(enumerate_c_solutions(-1, 4, 10).empty());
    CHECK(enumerate_c_solutions(0, 0, 3).size() == 1);
    CHECK(enumerate_c_solutions(3, 3, 2).empty()); // three ones do not fit
    CHECK(enumerate_c_solutions(2, 4, 1).size() == 1);

    for (std::int64_t s1 = 0; s1 <= 14; ++s1) {
        for (std::int64_t s2 = s1; s2 <= 40; ++s2) {
            for (std::int64_t len : {1, 3, 7, 13}) {
                std::vector<std::vector<std::uint64_t>> got;
                for (const auto& t : enumerate_c_solutions(Int(s1), Int(s2), len)) {
                    got.push_back(t.expand());
                }
                CHECK_MESSAGE(got == oracle::c_solutions(s1, s2, len), s1 << "," << s2 << "," << len);
            }
        }
    }
}

TEST_CASE("block roots")
{
    const PdsParams a{1000, 108, 8, 12}, b{1000, 111, 14, 12};
    CHECK(block_roots(5, a).roots == std::vector<Int>{12, 28});
    CHECK(block_roots(5, b).roots == std::vector<Int>{15, 31});
    for (auto p : small_primes(5, 300)) {
        const Int P = I(p);
        const Int v = 8 * P * P * P;
        for (const PdsParams& Q : {PdsParams{v, 4 * P * P + 2 * P - 2, 2 * P - 2, 2 * P + 2},
                                   PdsParams{v, 4 * P * P + 2 * P + 1, 2 * P + 4, 2 * P + 2}}) {
            const auto r = block_roots(P, Q);
            CHECK(r.roots == *expected_block_roots(P, Q));
            for (const auto& m : r.roots) {
                CHECK(block_equation_residual(P, Q, m) == 0);
            }
            CHECK(block_equation_residual(P, Q, r.roots[0] + 1) != 0);
        }
    }
    CHECK(block_roots(7, {2744, 208, 12, 16}).roots == std::vector<Int>{16, 40});
    CHECK_FALSE(expected_block_roots(5, {1000, 100, 8, 12}).has_value());
}

TEST_CASE("line weights and the parity obstruction")
{
    const auto w = line_weights({12, 28}, 4, 5);
    CHECK(w.weights == std::vector<Int>{2, 6});
    CHECK(w.nonintegral.empty());
    const auto w2 = line_weights({12, 29}, 4, 5);
    CHECK(w2.weights == std::vector<Int>{2});
    CHECK(w2.nonintegral == std::vector<Rational>{Rational(25, 4)});

    const auto sols = enumerate_c_solutions(26, 40, 31);
    const auto r = parity_obstruction(sols, {2, 6}, 26);
    CHECK(r.applicable);
    CHECK(r.contradiction);
    CHECK(r.tuples_with_odd_entry == 4);
    CHECK_FALSE(parity_obstruction(sols, {2, 5}, 26).applicable);
    CHECK_FALSE(parity_obstruction(sols, {2, 6}, 27).contradiction);
    const auto even_only = enumerate_c_solutions(4, 8, 5); // (2,2,0,0,0)
    REQUIRE(even_only.size() == 1);
    CHECK_FALSE(parity_obstruction(even_only, {2}, 4).contradiction);
    CHECK(parity_obstruction({}, {2}, 4).contradiction);
}
