#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pds_forge/group.hpp"
#include "pds_forge/plane.hpp"
#include "pds_forge/sieve.hpp"

namespace pds {

/// A subset of a group, held as sorted distinct element indices.
struct CandidateSet {
    GroupSpec group;
    std::vector<std::uint32_t> members;

    std::size_t size() const { return members.size(); }
    bool contains(std::uint32_t g) const;

    friend bool operator==(const CandidateSet&, const CandidateSet&) = default;
};

/// Sorts and deduplicates. Throws StructuralError for an index outside the group.
CandidateSet make_candidate(const GroupSpec& group, std::vector<std::uint64_t> indices);

/// counts[g] = #{(x, y) in D x D : x != y, x y^-1 = g}; counts[0] is always 0.
struct DifferenceProfile {
    std::vector<std::uint64_t> counts;

    std::uint64_t total() const;
};

enum class DifferenceMethod {
    automatic,   ///< pairs for |D| <= v/2, complement otherwise
    pairs,       ///< O(|D|^2) enumeration of ordered pairs
    convolution, ///< direct sum over the group of 1_D(y) 1_D(g y), O(v |D|)
    complement,  ///< pairs of G \ D, then |D cap gD| = v - 2|G \ D| + |D' cap gD'|
};

/// Throws StructuralError if D contains the identity.
DifferenceProfile difference_profile(const CandidateSet& D, DifferenceMethod method = DifferenceMethod::automatic);

struct PdsVerdict {
    bool order_matches = false;     ///< |G| = v
    bool size_matches = false;      ///< |D| = k
    bool identity_excluded = false;
    bool inverse_closed = false;
    bool counts_match = false;      ///< lambda on D, mu off D
    bool valid = false;             ///< all of the above
    bool trivial = false;           ///< D u {e} or G \ D is a subgroup
    /// First non-identity element whose count is wrong, if any.
    std::optional<std::uint32_t> witness;
};

PdsVerdict verify_pds(const CandidateSet& D, const PdsParams& P);

/// True iff the set is a subgroup of its group.
bool is_subgroup(const GroupSpec& group, const std::vector<std::uint32_t>& members);

/// Keeps only sets whose intersection with `subgroup` has one of `sizes` elements.
struct IntersectionFilter {
    std::vector<std::uint32_t> subgroup;
    std::vector<std::uint64_t> sizes;
};

/// Filter from the sub-PDS size formula for the Sylow q-subgroup. Throws
/// DomainError when the formula's hypotheses do not hold.
IntersectionFilter sylow_intersection_filter(const GroupSpec& group, const PdsParams& P, std::uint64_t q);

struct SearchOptions {
    /// Build D from LMT orbits instead of inverse pairs. Needs a square Delta.
    bool prune_lmt = true;
    std::optional<IntersectionFilter> filter;
    unsigned jobs = 1;
};

struct SearchStats {
    std::uint64_t units = 0;  ///< orbits or inverse pairs available
    std::uint64_t nodes = 0;  ///< backtracking nodes visited
    std::uint64_t leaves = 0; ///< complete size-k unions checked
};

struct SearchResult {
    std::vector<CandidateSet> sets; ///< lexicographic by member list
    SearchStats stats;
};

/// Every regular PDS with parameters P in the group. Throws DomainError when
/// |G| != v, when the group is too large for a composition table, or when
/// prune_lmt is set and Delta is not a perfect square.
SearchResult search(const GroupSpec& group, const PdsParams& P, const SearchOptions& options = {});

/// |(L x N) cap D| in Z_2^3 x Z_p^3, where N is the Sylow 2-subgroup and L the
/// order-p^2 subgroup of Z_p^3 for the given line of the plane.
std::uint64_t empirical_block_count(const CandidateSet& D, const PlaneDesign& plane, std::uint64_t line);

/// One element per line as comma-separated coordinates in the group's factor
/// order; blank lines and lines starting with '#' are skipped.
CandidateSet parse_set_file(const GroupSpec& group, std::string_view text);
std::string format_set_file(const CandidateSet& D);

} // namespace pds
