#include "doctest.h"

#include <set>

#include "oracles.hpp"
#include "pds_forge/plane.hpp"

using namespace pds;

TEST_CASE("plane sizes and incidence counts")
{
    for (std::uint64_t p : {2, 3, 5, 7, 11, 13}) {
        const auto plane = build_plane(p);
        CHECK(plane.size() == p * p + p + 1);
        for (std::uint64_t j = 0; j < plane.size(); ++j) {
            CHECK(plane.points_on_line(j).size() == p + 1);
            CHECK(plane.lines_through(j).size() == p + 1);
        }
        CHECK(plane.pencil_partitions(0));
        CHECK(plane.pencil_partitions(plane.size() - 1));
    }
    CHECK_THROWS_AS(build_plane(4), DomainError);
    CHECK_THROWS_AS(build_plane(1), DomainError);
}

TEST_CASE("points and lines are the order-p and order-p^2 subgroups")
{
    for (std::uint64_t p : {2, 3, 5}) {
        const auto plane = build_plane(p);
        std::set<std::vector<std::uint64_t>> points, lines;
        for (std::uint64_t i = 0; i < plane.size(); ++i) {
            points.insert(plane.point_subgroup(i));
            lines.insert(plane.line_subgroup(i));
            CHECK(plane.point_index(plane.point(i)) == i);
        }
        CHECK(points == oracle::subgroups_of_cube(p, 1));
        CHECK(lines == oracle::subgroups_of_cube(p, 2));
        // Incidence is containment.
        for (std::uint64_t i = 0; i < plane.size(); ++i) {
            const auto P = plane.point_subgroup(i);
            for (std::uint64_t j = 0; j < plane.size(); ++j) {
                const auto L = plane.line_subgroup(j);
                CHECK(plane.incident(i, j) == std::includes(L.begin(), L.end(), P.begin(), P.end()));
            }
        }
    }
}

TEST_CASE("full verification")
{
    for (std::uint64_t p : {2, 3, 5, 7}) {
        const auto s = build_plane(p).verify();
        CHECK(s.is_projective_plane(p));
        CHECK(s.bad_pairs == 0);
        CHECK(s.pairs_checked == (p * p + p + 1) * (p * p + p) / 2);
        CHECK(s.min_points_per_line == p + 1);
        CHECK(s.max_lines_per_point == p + 1);
    }
    const auto m = build_plane(2).incidence_matrix();
    CHECK(m.size() == 7);
    for (const auto& row : m) {
        CHECK(std::count(row.begin(), row.end(), true) == 3);
    }
    CHECK(elementary_abelian_cube(7) == GroupSpec({7, 7, 7}));
}
