#include "doctest.h"

#include <random>

#include "oracles.hpp"
#include "pds_forge/searcher.hpp"

using namespace pds;

namespace {

const std::vector<std::uint64_t> residues13{1, 3, 4, 9, 10, 12};

CandidateSet random_set(const GroupSpec& g, std::mt19937_64& rng, double density)
{
    std::vector<std::uint64_t> idx;
    for (std::uint64_t i = 1; i < g.order(); ++i) {
        if (std::uniform_real_distribution<double>(0, 1)(rng) < density) {
            idx.push_back(i);
        }
    }
    return make_candidate(g, idx);
}

CandidateSet symmetrise(const CandidateSet& D)
{
    std::vector<std::uint64_t> idx(D.members.begin(), D.members.end());
    for (auto g : D.members) {
        idx.push_back(index_of(D.group, inverse(element_at(D.group, g))));
    }
    return make_candidate(D.group, idx);
}

} // namespace

TEST_CASE("candidate sets")
{
    const GroupSpec g({13});
    const auto D = make_candidate(g, {4, 1, 4, 3});
    CHECK(D.members == std::vector<std::uint32_t>{1, 3, 4});
    CHECK(D.contains(3));
    CHECK_FALSE(D.contains(2));
    CHECK_THROWS_AS(make_candidate(g, {13}), StructuralError);
}

TEST_CASE("difference profiles")
{
    const GroupSpec z13({13});
    const auto qr = make_candidate(z13, residues13);
    const auto prof = difference_profile(qr);
    for (std::uint32_t g = 1; g < 13; ++g) {
        CHECK(prof.counts[g] == (qr.contains(g) ? 2u : 3u));
    }
    CHECK(prof.total() == 6 * 5);
    CHECK(difference_profile(make_candidate(z13, {})).total() == 0);
    const GroupSpec v4({2, 2});
    CHECK(difference_profile(make_candidate(v4, {1})).total() == 0);
    CHECK_THROWS_AS(difference_profile(make_candidate(z13, {0, 1})), StructuralError);
}

TEST_CASE("all difference methods agree with the coordinate oracle")
{
    std::mt19937_64 rng(21);
    for (const char* spec : {"13", "2,2,2,2", "4,3", "3,3,3", "2,2,2,5", "8,3", "2,4,4"}) {
        const auto g = GroupSpec::parse(spec);
        for (double density : {0.1, 0.4, 0.6, 0.9}) {
            const auto D = random_set(g, rng, density);
            const auto want = oracle::profile(g, D.members);
            for (auto m : {DifferenceMethod::automatic, DifferenceMethod::pairs, DifferenceMethod::convolution,
                           DifferenceMethod::complement}) {
                const auto got = difference_profile(D, m);
                CHECK(got.counts == want);
                CHECK(got.total() == D.size() * (D.size() == 0 ? 0 : D.size() - 1));
            }
        }
    }
}

TEST_CASE("profiles of inverse-closed sets are symmetric")
{
    std::mt19937_64 rng(22);
    for (const char* spec : {"13", "5,5", "4,9", "2,2,8"}) {
        const auto g = GroupSpec::parse(spec);
        for (int i = 0; i < 50; ++i) {
            const auto D = symmetrise(random_set(g, rng, 0.3));
            const auto prof = difference_profile(D);
            for (std::uint64_t x = 1; x < g.order(); ++x) {
                CHECK(prof.counts[x] == prof.counts[index_of(g, inverse(element_at(g, x)))]);
            }
        }
    }
}

TEST_CASE("profiles are invariant under automorphisms")
{
    std::mt19937_64 rng(23);
    // Coordinate permutations of Z_5^3 and multiplication by a unit of Z_9 x Z_9.
    const GroupSpec g({5, 5, 5});
    for (int i = 0; i < 30; ++i) {
        const auto D = random_set(g, rng, 0.3);
        std::vector<std::size_t> perm{0, 1, 2};
        std::shuffle(perm.begin(), perm.end(), rng);
        auto image = [&](std::uint64_t x) {
            const auto e = element_at(g, x);
            std::vector<std::int64_t> c(3);
            for (std::size_t j = 0; j < 3; ++j) {
                c[j] = std::int64_t(e.coords[perm[j]]);
            }
            return index_of(g, make_element(g, c));
        };
        std::vector<std::uint64_t> idx;
        for (auto x : D.members) {
            idx.push_back(image(x));
        }
        const auto a = difference_profile(D), b = difference_profile(make_candidate(g, idx));
        for (std::uint64_t x = 1; x < g.order(); ++x) {
            CHECK(a.counts[x] == b.counts[image(x)]);
        }
    }
    const GroupSpec h({9, 9});
    for (int s : {2, 4, 5, 7, 8}) {
        const auto D = random_set(h, rng, 0.3);
        auto image = [&](std::uint64_t x) { return index_of(h, power(element_at(h, x), s)); };
        std::vector<std::uint64_t> idx;
        for (auto x : D.members) {
            idx.push_back(image(x));
        }
        const auto a = difference_profile(D), b = difference_profile(make_candidate(h, idx));
        for (std::uint64_t x = 1; x < h.order(); ++x) {
            CHECK(a.counts[x] == b.counts[image(x)]);
        }
    }
}

TEST_CASE("verifying PDS")
{
    const GroupSpec z13({13});
    const auto qr = make_candidate(z13, residues13);
    const auto ok = verify_pds(qr, {13, 6, 2, 3});
    CHECK(ok.valid);
    CHECK_FALSE(ok.trivial);
    const auto swapped = verify_pds(qr, {13, 6, 3, 2});
    CHECK_FALSE(swapped.valid);
    CHECK(swapped.witness.has_value());
    CHECK_FALSE(verify_pds(qr, {14, 6, 2, 3}).order_matches);
    CHECK_FALSE(verify_pds(make_candidate(z13, {1, 2}), {13, 2, 0, 0}).inverse_closed);
    const auto with_e = verify_pds(make_candidate(z13, {0, 1, 12}), {13, 3, 0, 1});
    CHECK_FALSE(with_e.identity_excluded);
    CHECK_FALSE(with_e.valid);

    // H \ {e} for a subgroup H of order 5 in Z_5^2: (25, 4, 3, 0), trivial.
    const GroupSpec z55({5, 5});
    std::vector<std::uint64_t> h;
    for (int i = 1; i < 5; ++i) {
        h.push_back(index_of(z55, make_element(z55, {i, 0})));
    }
    const auto sub = verify_pds(make_candidate(z55, h), {25, 4, 3, 0});
    CHECK(sub.valid);
    CHECK(sub.trivial);
    CHECK(is_subgroup(z55, {0, 5, 10, 15, 20}));
    CHECK_FALSE(is_subgroup(z55, {5, 10, 15, 20}));
}

TEST_CASE("search: Paley sets in Z13")
{
    const GroupSpec z13({13});
    const auto r = search(z13, {13, 6, 2, 3}, {false});
    REQUIRE(r.sets.size() == 2);
    CHECK(r.sets[0].members == std::vector<std::uint32_t>{1, 3, 4, 9, 10, 12});
    CHECK(r.sets[1].members == std::vector<std::uint32_t>{2, 5, 6, 7, 8, 11});
    CHECK(r.stats.units == 6);
    CHECK_THROWS_AS(search(z13, {13, 6, 2, 3}, {true}), DomainError);
    CHECK_THROWS_AS(search(z13, {14, 6, 2, 3}, {false}), DomainError);
}

TEST_CASE("search agrees with subset enumeration on small groups")
{
    for (std::uint64_t v = 4; v <= 17; ++v) {
        for (const auto& g : abelian_groups(v)) {
            for (const auto& P : enumerate_feasible(Int(std::to_string(v)))) {
                const auto brute = oracle::all_pds(g, to_u64(P.k), to_u64(P.lambda), to_u64(P.mu));
                std::vector<std::vector<std::uint32_t>> got;
                for (const auto& D : search(g, P, {false}).sets) {
                    got.push_back(D.members);
                }
                CHECK_MESSAGE(got == brute, g.pretty() << " " << P.to_string());
            }
        }
    }
}

TEST_CASE("search: Z2^4 and Z5^2")
{
    const auto r16 = search(GroupSpec({2, 2, 2, 2}), {16, 6, 2, 2}, {true});
    CHECK_FALSE(r16.sets.empty());
    for (const auto& D : r16.sets) {
        CHECK(verify_pds(D, {16, 6, 2, 2}).valid);
    }
    CHECK(r16.sets == search(GroupSpec({2, 2, 2, 2}), {16, 6, 2, 2}, {false}).sets);

    const auto r25 = search(GroupSpec({5, 5}), {25, 12, 5, 6}, {true});
    CHECK(r25.stats.units == 6);
    CHECK_FALSE(r25.sets.empty());
    CHECK(r25.sets.size() <= 20);
}

TEST_CASE("search results do not depend on the worker count")
{
    const GroupSpec g({3, 3, 3, 3});
    const PdsParams P{81, 20, 1, 6};
    SearchOptions one{true, std::nullopt, 1}, four{true, std::nullopt, 4};
    const auto a = search(g, P, one), b = search(g, P, four);
    CHECK_FALSE(a.sets.empty());
    CHECK(a.sets == b.sets);
    CHECK(a.stats.nodes == b.stats.nodes);
}

TEST_CASE("intersection filter")
{
    // Z_2^4 x Z_3 ... use order 48 = 16 * 3 with v/|N| = 3 odd.
    const GroupSpec g({4, 4, 3});
    const auto feasible = enumerate_feasible(48);
    for (const auto& P : feasible) {
        if (!is_square(P.delta())) {
            continue;
        }
        const auto all = search(g, P, {true});
        SearchOptions with{true, sylow_intersection_filter(g, P, 2), 1};
        const auto filtered = search(g, P, with);
        // Every PDS meets the Sylow 2-subgroup in an admissible size, so the filter is lossless.
        CHECK(filtered.sets == all.sets);
    }
    CHECK_THROWS_AS(sylow_intersection_filter(GroupSpec({13}), {13, 6, 2, 3}, 13), DomainError);
}

TEST_CASE("empirical block counts")
{
    const std::uint64_t p = 5;
    const auto plane = build_plane(p);
    const GroupSpec g({2, 2, 2, p, p, p});
    const auto cube = p * p * p;
    CHECK(empirical_block_count(make_candidate(g, {}), plane, 0) == 0);
    const auto L = plane.line_subgroup(3);
    std::vector<std::uint64_t> ln;
    for (std::uint64_t two = 0; two < 8; ++two) {
        for (auto x : L) {
            if (two * cube + x != 0) {
                ln.push_back(two * cube + x);
            }
        }
    }
    CHECK(empirical_block_count(make_candidate(g, ln), plane, 3) == 8 * p * p - 1);

    // One multiplier orbit of an element of order p inside L x N.
    const auto orbits = lmt_orbits(g);
    const auto x = L[1];
    const auto& orbit = orbits.orbits[orbits.orbit_of[x]];
    CHECK(orbit.size() == p - 1);
    CHECK(empirical_block_count(make_candidate(g, {orbit.begin(), orbit.end()}), plane, 3) == 4);
    CHECK_THROWS_AS(empirical_block_count(make_candidate(GroupSpec({5, 5, 5}), {}), plane, 0), StructuralError);
}

TEST_CASE("block counts satisfy the double count for multiplier-closed sets")
{
    // For D a union of multiplier orbits in Z2^3 x Zp^3 with m = |(L x N) cap D|,
    // the ordered differences of D landing in (L x N) \ {e} number
    //     m(m-1) + (k-m)(k-m-(p-1))/(p-1).
    std::mt19937_64 rng(24);
    for (std::uint64_t p : {3, 5}) {
        const auto plane = build_plane(p);
        const GroupSpec g({2, 2, 2, p, p, p});
        const auto cube = p * p * p;
        const auto orbits = lmt_orbits(g);
        for (int trial = 0; trial < 40; ++trial) {
            std::vector<std::uint64_t> idx;
            for (std::size_t i = 1; i < orbits.orbits.size(); ++i) {
                if (rng() % 3 == 0) {
                    idx.insert(idx.end(), orbits.orbits[i].begin(), orbits.orbits[i].end());
                }
            }
            const auto D = make_candidate(g, idx);
            const auto prof = difference_profile(D);
            for (std::uint64_t line = 0; line < plane.size(); line += 3) {
                const auto L = plane.line_subgroup(line);
                std::uint64_t inside = 0;
                for (std::uint64_t two = 0; two < 8; ++two) {
                    for (auto x : L) {
                        inside += prof.counts[two * cube + x];
                    }
                }
                const std::int64_t m = empirical_block_count(D, plane, line);
                const std::int64_t k = D.size(), q = p - 1;
                CHECK((k - m) % q == 0);
                CHECK(std::int64_t(inside) == m * (m - 1) + (k - m) * (k - m - q) / q);
            }
        }
    }
}

TEST_CASE("set files")
{
    const GroupSpec g({5, 5});
    const auto D = parse_set_file(g, "# comment\n1,0\n\n 4 , 0\n0,2\n");
    CHECK(D.members == std::vector<std::uint32_t>{2, 5, 20});
    CHECK(parse_set_file(g, format_set_file(D)) == D);
    CHECK_THROWS_AS(parse_set_file(g, "1\n"), StructuralError);
    CHECK_THROWS_AS(parse_set_file(g, "5,0\n"), StructuralError);
    CHECK_THROWS_AS(parse_set_file(g, "a,0\n"), StructuralError);
    CHECK_THROWS_AS(parse_set_file(g, "1,-1\n"), StructuralError);
}
