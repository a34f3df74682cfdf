#include "pds_forge/plane.hpp"

#include <algorithm>

#include "pds_forge/integer.hpp"

namespace pds {

namespace {

std::uint64_t mod_pow(std::uint64_t base, std::uint64_t exp, std::uint64_t m)
{
    std::uint64_t r = 1 % m;
    base %= m;
    while (exp > 0) {
        if (exp & 1) {
            r = static_cast<std::uint64_t>((static_cast<unsigned __int128>(r) * base) % m);
        }
        base = static_cast<std::uint64_t>((static_cast<unsigned __int128>(base) * base) % m);
        exp >>= 1;
    }
    return r;
}

} // namespace

bool PlaneStats::is_projective_plane(std::uint64_t p) const
{
    const auto n = p * p + p + 1;
    return points == n && lines == n && min_points_per_line == p + 1 && max_points_per_line == p + 1
        && min_lines_per_point == p + 1 && max_lines_per_point == p + 1 && bad_pairs == 0
        && pairs_checked == n * (n - 1) / 2;
}

PlaneDesign::PlaneDesign(std::uint64_t p) : p_(p)
{
    if (p < 2 || !is_prime(p)) {
        throw DomainError("projective plane order must be a prime, got " + std::to_string(p));
    }
    if (p > (1u << 20)) {
        throw DomainError("plane order too large");
    }
}

Vec3 PlaneDesign::vector_at(std::uint64_t i) const
{
    if (i >= size()) {
        throw StructuralError("plane index out of range");
    }
    if (i == 0) {
        return {0, 0, 1};
    }
    if (i <= p_) {
        return {0, 1, i - 1};
    }
    const auto r = i - 1 - p_;
    return {1, r / p_, r % p_};
}

Vec3 PlaneDesign::normalise(Vec3 v) const
{
    for (auto& c : v) {
        c %= p_;
    }
    auto lead = std::find_if(v.begin(), v.end(), [](auto c) { return c != 0; });
    if (lead == v.end()) {
        throw StructuralError("zero vector spans no point");
    }
    // scale by the inverse of the leading coordinate (Fermat)
    const auto inv = mod_pow(*lead, p_ - 2, p_);
    for (auto& c : v) {
        c = c * inv % p_;
    }
    return v;
}

std::uint64_t PlaneDesign::rank(const Vec3& v) const
{
    if (v[0] == 0 && v[1] == 0) {
        return 0;
    }
    if (v[0] == 0) {
        return 1 + v[2];
    }
    return 1 + p_ + v[1] * p_ + v[2];
}

std::uint64_t PlaneDesign::point_index(const Vec3& v) const { return rank(normalise(v)); }

bool PlaneDesign::incident(std::uint64_t point, std::uint64_t line) const
{
    const auto x = vector_at(point);
    const auto n = vector_at(line);
    return (x[0] * n[0] + x[1] * n[1] + x[2] * n[2]) % p_ == 0;
}

std::vector<std::uint64_t> PlaneDesign::kernel_points(const Vec3& n) const
{
    // n is normalised: its first nonzero coordinate f equals 1, so the other
    // two coordinates are free and e_j - n_j e_f spans the kernel.
    const std::size_t f = n[0] != 0 ? 0 : (n[1] != 0 ? 1 : 2);
    std::array<std::size_t, 2> free{};
    for (std::size_t j = 0, k = 0; j < 3; ++j) {
        if (j != f) {
            free[k++] = j;
        }
    }
    auto basis = [&](std::size_t j) {
        Vec3 b{0, 0, 0};
        b[j] = 1;
        b[f] = (p_ - n[j] % p_) % p_;
        return b;
    };
    const Vec3 u = basis(free[0]);
    const Vec3 w = basis(free[1]);
    std::vector<std::uint64_t> out;
    out.reserve(p_ + 1);
    out.push_back(point_index(u));
    for (std::uint64_t t = 0; t < p_; ++t) {
        Vec3 x{};
        for (std::size_t c = 0; c < 3; ++c) {
            x[c] = (w[c] + t * u[c]) % p_;
        }
        out.push_back(point_index(x));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::uint64_t> PlaneDesign::points_on_line(std::uint64_t line) const { return kernel_points(vector_at(line)); }

std::vector<std::uint64_t> PlaneDesign::lines_through(std::uint64_t point) const
{
    // The normal vectors orthogonal to a point form a line of the dual plane,
    // and points and lines share one indexing scheme.
    return kernel_points(vector_at(point));
}

std::vector<std::uint64_t> PlaneDesign::point_subgroup(std::uint64_t point) const
{
    const auto g = vector_at(point);
    std::vector<std::uint64_t> out;
    out.reserve(p_);
    for (std::uint64_t s = 0; s < p_; ++s) {
        out.push_back(((s * g[0] % p_) * p_ + s * g[1] % p_) * p_ + s * g[2] % p_);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::uint64_t> PlaneDesign::line_subgroup(std::uint64_t line) const
{
    const auto n = vector_at(line);
    std::vector<std::uint64_t> out;
    out.reserve(p_ * p_);
    for (std::uint64_t i = 0; i < p_ * p_ * p_; ++i) {
        const std::uint64_t x0 = i / (p_ * p_), x1 = i / p_ % p_, x2 = i % p_;
        if ((x0 * n[0] + x1 * n[1] + x2 * n[2]) % p_ == 0) {
            out.push_back(i);
        }
    }
    return out;
}

bool PlaneDesign::pencil_partitions(std::uint64_t point) const
{
    auto pencil = lines_through(point);
    std::sort(pencil.begin(), pencil.end());
    if (pencil.size() != p_ + 1 || std::adjacent_find(pencil.begin(), pencil.end()) != pencil.end()) {
        return false;
    }
    // Each q != point lies on exactly one pencil line, the one with normal
    // point x q. Disjointness plus (p+1)*p = size()-1 gives coverage.
    const Vec3 x = vector_at(point);
    for (auto line : pencil) {
        const auto members = points_on_line(line);
        if (members.size() != p_ + 1 || !std::binary_search(members.begin(), members.end(), point)) {
            return false;
        }
        for (auto q : members) {
            if (q == point) {
                continue;
            }
            const Vec3 y = vector_at(q);
            const auto m = [&](std::size_t i, std::size_t j) { return (x[i] * y[j] + p_ * p_ - x[j] * y[i]) % p_; };
            if (rank(normalise({m(1, 2), m(2, 0), m(0, 1)})) != line) {
                return false;
            }
        }
    }
    return true;
}

PlaneStats PlaneDesign::verify() const
{
    const auto n = size();
    if (n > 5000) {
        throw DomainError("exhaustive plane verification limited to 5000 points");
    }
    PlaneStats stats;
    stats.points = n;
    stats.lines = n;
    stats.min_points_per_line = stats.min_lines_per_point = UINT64_MAX;
    std::vector<std::uint64_t> lines_per_point(n, 0);
    // joins[i*n + j] for i < j counts lines containing both points.
    std::vector<std::uint8_t> joins(n * n, 0);
    for (std::uint64_t line = 0; line < n; ++line) {
        std::vector<std::uint64_t> members;
        for (std::uint64_t pt = 0; pt < n; ++pt) {
            if (incident(pt, line)) {
                members.push_back(pt);
                ++lines_per_point[pt];
            }
        }
        stats.min_points_per_line = std::min<std::uint64_t>(stats.min_points_per_line, members.size());
        stats.max_points_per_line = std::max<std::uint64_t>(stats.max_points_per_line, members.size());
        for (std::size_t a = 0; a < members.size(); ++a) {
            for (std::size_t b = a + 1; b < members.size(); ++b) {
                auto& c = joins[members[a] * n + members[b]];
                c = static_cast<std::uint8_t>(std::min(c + 1, 255));
            }
        }
    }
    for (auto c : lines_per_point) {
        stats.min_lines_per_point = std::min(stats.min_lines_per_point, c);
        stats.max_lines_per_point = std::max(stats.max_lines_per_point, c);
    }
    for (std::uint64_t a = 0; a < n; ++a) {
        for (std::uint64_t b = a + 1; b < n; ++b) {
            ++stats.pairs_checked;
            if (joins[a * n + b] != 1) {
                ++stats.bad_pairs;
            }
        }
    }
    return stats;
}

std::vector<std::vector<bool>> PlaneDesign::incidence_matrix() const
{
    const auto n = size();
    std::vector<std::vector<bool>> m(n, std::vector<bool>(n, false));
    for (std::uint64_t i = 0; i < n; ++i) {
        for (std::uint64_t j = 0; j < n; ++j) {
            m[i][j] = incident(i, j);
        }
    }
    return m;
}

PlaneDesign build_plane(std::uint64_t p) { return PlaneDesign(p); }

GroupSpec elementary_abelian_cube(std::uint64_t p) { return GroupSpec({p, p, p}); }

} // namespace pds
