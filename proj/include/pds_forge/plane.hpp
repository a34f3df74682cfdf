#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "pds_forge/group.hpp"

namespace pds {

using Vec3 = std::array<std::uint64_t, 3>;

struct PlaneStats {
    std::uint64_t points = 0;
    std::uint64_t lines = 0;
    std::uint64_t min_points_per_line = 0;
    std::uint64_t max_points_per_line = 0;
    std::uint64_t min_lines_per_point = 0;
    std::uint64_t max_lines_per_point = 0;
    /// Number of unordered point pairs not joined by exactly one line.
    std::uint64_t bad_pairs = 0;
    std::uint64_t pairs_checked = 0;

    bool is_projective_plane(std::uint64_t p) const;
};

/// The subgroup lattice of Z_p^3 at orders p and p^2, viewed as PG(2, p).
///
/// Points are the order-p subgroups, identified by their lexicographically
/// least generator (first nonzero coordinate 1). Lines are the order-p^2
/// subgroups, identified by the normalised normal vector n of
/// {x : n.x = 0 mod p}. Both are indexed in lexicographic order of that
/// vector:
///
///     (0,0,1) -> 0,  (0,1,b) -> 1 + b,  (1,a,b) -> 1 + p + a*p + b
///
/// The design is implicit: nothing of size (p^2+p+1)^2 is stored, so large
/// primes are cheap as long as only local queries are made.
class PlaneDesign {
public:
    explicit PlaneDesign(std::uint64_t p);

    std::uint64_t order() const { return p_; }
    std::uint64_t size() const { return p_ * p_ + p_ + 1; }

    Vec3 point(std::uint64_t i) const { return vector_at(i); }
    Vec3 line(std::uint64_t j) const { return vector_at(j); }
    /// Index of the point spanned by a nonzero vector.
    std::uint64_t point_index(const Vec3& v) const;

    bool incident(std::uint64_t point, std::uint64_t line) const;
    std::vector<std::uint64_t> points_on_line(std::uint64_t line) const;
    std::vector<std::uint64_t> lines_through(std::uint64_t point) const;

    /// Element indices (in Z_p^3 as a GroupSpec) of the order-p subgroup for a point.
    std::vector<std::uint64_t> point_subgroup(std::uint64_t point) const;
    /// Element indices of the order-p^2 subgroup for a line.
    std::vector<std::uint64_t> line_subgroup(std::uint64_t line) const;

    /// Checks that the lines through `point` split the remaining points into
    /// p+1 disjoint blocks of p. Linear in the plane size.
    bool pencil_partitions(std::uint64_t point) const;

    /// Exhaustive 2-design check over every point pair. Quadratic in the plane
    /// size; throws DomainError for planes with more than 5000 points.
    PlaneStats verify() const;

    /// Dense incidence matrix, rows = points, columns = lines.
    std::vector<std::vector<bool>> incidence_matrix() const;

private:
    Vec3 vector_at(std::uint64_t i) const;
    Vec3 normalise(Vec3 v) const;
    std::uint64_t rank(const Vec3& normalised) const;
    /// Projective points of the plane {x : n.x = 0}.
    std::vector<std::uint64_t> kernel_points(const Vec3& n) const;

    std::uint64_t p_;
};

/// Throws DomainError unless p is prime.
PlaneDesign build_plane(std::uint64_t p);

/// Z_p x Z_p x Z_p.
GroupSpec elementary_abelian_cube(std::uint64_t p);

} // namespace pds
