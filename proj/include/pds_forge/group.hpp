#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace pds {

/// A finite abelian group Z_{n_1} x ... x Z_{n_r} in primary decomposition.
///
/// Every factor is a prime power. Factors are kept sorted by (prime, exponent),
/// which makes the representation canonical: isomorphic groups compare equal.
///
/// Elements are ranked in mixed radix with the first canonical factor most
/// significant:
///
///     index(c) = ((c_0 * n_1 + c_1) * n_2 + c_2) ... * n_{r-1} + c_{r-1}
///
/// The set-file format and every index-based set in the library depend on
/// this ordering. The identity always has index 0.
class GroupSpec {
public:
    GroupSpec() = default;
    explicit GroupSpec(std::vector<std::uint64_t> factors);

    /// Parses the comma-separated factor list used on the command line ("2,2,2,5,5,5").
    static GroupSpec parse(std::string_view text);

    const std::vector<std::uint64_t>& factors() const { return factors_; }
    std::size_t rank() const { return factors_.size(); }
    std::uint64_t order() const { return order_; }

    /// Distinct primes dividing the order, ascending.
    std::vector<std::uint64_t> primes() const;

    /// Comma-separated factor list, the inverse of parse().
    std::string to_string() const;
    /// Human-readable form, e.g. "Z2^3 x Z5^3".
    std::string pretty() const;

    friend bool operator==(const GroupSpec&, const GroupSpec&) = default;

private:
    std::vector<std::uint64_t> factors_;
    std::uint64_t order_ = 1;
};

/// An element as a coordinate vector, coords[i] in [0, moduli[i]).
struct GroupElement {
    std::vector<std::uint64_t> moduli;
    std::vector<std::uint64_t> coords;

    friend bool operator==(const GroupElement&, const GroupElement&) = default;
};

/// Builds an element from arbitrary integer coordinates, reducing each one.
GroupElement make_element(const GroupSpec& group, const std::vector<std::int64_t>& coords);
GroupElement identity(const GroupSpec& group);
GroupElement element_at(const GroupSpec& group, std::uint64_t index);
std::uint64_t index_of(const GroupSpec& group, const GroupElement& element);

GroupElement compose(const GroupElement& a, const GroupElement& b);
GroupElement inverse(const GroupElement& a);
/// a^s; negative s is allowed.
GroupElement power(const GroupElement& a, std::int64_t s);
std::uint64_t element_order(const GroupElement& a);

/// Dense lookup tables for a group small enough to enumerate.
///
/// The searcher and the orbit code work exclusively on element indices; this
/// is the index-level view of the same arithmetic as the free functions above.
class GroupTable {
public:
    /// Largest order for which a full composition table is built.
    static constexpr std::uint64_t max_order = 1u << 13;

    explicit GroupTable(GroupSpec group);

    const GroupSpec& group() const { return group_; }
    std::uint32_t size() const { return size_; }

    std::uint32_t compose(std::uint32_t a, std::uint32_t b) const { return table_[std::size_t(a) * size_ + b]; }
    std::uint32_t inverse(std::uint32_t a) const { return inverse_[a]; }
    /// a * b^{-1}
    std::uint32_t difference(std::uint32_t a, std::uint32_t b) const { return compose(a, inverse_[b]); }
    std::uint32_t order(std::uint32_t a) const { return order_[a]; }
    std::uint32_t power(std::uint32_t a, std::int64_t s) const;

    const std::vector<std::uint64_t>& coords(std::uint32_t a) const { return coords_[a]; }

private:
    GroupSpec group_;
    std::uint32_t size_ = 0;
    std::vector<std::uint32_t> table_;
    std::vector<std::uint32_t> inverse_;
    std::vector<std::uint32_t> order_;
    std::vector<std::vector<std::uint64_t>> coords_;
};

/// Partition of G into classes {g^s : gcd(s, o(g)) = 1}.
struct OrbitPartition {
    /// orbits[0] is {identity}; the rest are sorted by minimal member, and
    /// each orbit's members are sorted ascending.
    std::vector<std::vector<std::uint32_t>> orbits;
    /// orbit_of[g] = position of g's orbit in `orbits`.
    std::vector<std::uint32_t> orbit_of;
};

OrbitPartition lmt_orbits(const GroupSpec& group);

struct SylowSubgroup {
    GroupSpec group;
    /// embedding[i] = index in the parent group of the Sylow subgroup's i-th element.
    std::vector<std::uint64_t> embedding;
};

/// The Sylow q-subgroup. Throws DomainError if q is not a prime dividing |G|.
SylowSubgroup sylow(const GroupSpec& group, std::uint64_t q);

/// Sylow q-subgroup factors only, without materialising the embedding.
GroupSpec sylow_spec(const GroupSpec& group, std::uint64_t q);

/// Every abelian group of the given order up to isomorphism, one per
/// combination of partitions of the prime exponents. Order: primes ascending,
/// and for each prime the partitions from cyclic (single part) to elementary.
std::vector<GroupSpec> abelian_groups(std::uint64_t order);

/// Integer partitions of n, largest-part-first, starting with {n}.
std::vector<std::vector<unsigned>> partitions(unsigned n);

} // namespace pds
