#pragma once

// Exact per-prime replay of the nonexistence argument for regular partial
// difference sets in abelian groups of order 8p^3, p >= 5.
//
// Each function here is one checked computation. The Certificate type in
// certificate.hpp strings them together into a replayable proof tree.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pds_forge/group.hpp"
#include "pds_forge/integer.hpp"
#include "pds_forge/sieve.hpp"

namespace pds {

/// Throws DomainError unless p is a prime >= 5.
void require_certifiable_prime(const Int& p);

// ---------------------------------------------------------------- groups

struct GroupReduction {
    struct Candidate {
        GroupSpec group;
        std::vector<Exclusion> exclusions;
    };
    /// All nine abelian groups of order 8p^3, 2-part major.
    std::vector<Candidate> candidates;
    std::vector<GroupSpec> survivors;
};

GroupReduction group_reduction(const Int& p);

// ---------------------------------------------------------------- Delta and k

/// Perfect squares Delta <= 8p^3 with Delta | v^2 and v, Delta, v^2/Delta
/// sharing the prime support {2, p}; found by scanning every square.
std::vector<Int> delta_candidates(const Int& p);

/// Delta (v-1)^2 + 4 k v (1 + k - v) for v = 8p^3: nonnegative iff the
/// lambda-quadratic has a real root at this k.
Int k_bound_discriminant(const Int& p, const Int& delta, const Int& k);

struct KBound {
    /// Largest k <= 4p^3 with a nonnegative discriminant.
    Int k_max;
    /// floor(4p^2 + 3p - 1/2) for 16p^2, floor(p^2 + p/4 - 1/2) for 4p^2.
    Int closed_form_floor;
};

/// Exact root isolation by bisection. Throws DomainError unless
/// Delta is 4p^2 or 16p^2.
KBound k_bound_exact(const Int& p, const Int& delta);

// ---------------------------------------------------------------- mu

struct MuCandidate {
    Int x;
    PdsParams params;
    Int beta;
};

/// Parameter sets with k = (r/2) x + beta/2 where r = sqrt(Delta),
/// mu = (r/2)^2 (x^2 - 1) / v a positive integer, beta an even integer root of
/// beta^2 + 2 beta = Delta - 2 r x + 4 mu inside the nontrivial range, and
/// 1 <= k <= k_bound_exact. Sorted by (x, beta).
std::vector<MuCandidate> mu_candidates(const Int& p, const Int& delta);

/// Branch classification for mu = 2p - 2, where beta = -1 +- sqrt(16p - 7).
struct LowMuBranch {
    Int radicand;                  ///< 16p - 7
    std::optional<Int> root;       ///< its square root when it is a perfect square
    bool open = false;             ///< true iff integer beta values exist
    Int root_mod_8;
    Int y;
    std::string form;              ///< "4y^2+3y+1" or "4y^2+5y+2"
    bool unique_form = false;      ///< p fits exactly one of the two forms
    std::vector<Int> betas;        ///< -1 - root, -1 + root
};

LowMuBranch classify_low_mu_branch(const Int& p);

// ---------------------------------------------------------------- C system

/// Sums of the aggregated counts C_j over the p^2+p+1 order-p subgroups.
///
///     S1 = (k - a) / (p - 1)
///     S2 = S1 + [a lambda + (7 - a) mu - a(a - 1)] / (p - 1)
///
/// where a = |D cap N| for the Sylow 2-subgroup N. The numerators and the
/// common denominator are kept unreduced for reporting.
struct CSystem {
    Int s1_numerator;
    Int s2_numerator;
    Int denominator;
    Rational s1;
    Rational s2;

    bool s1_integral() const { return s1.get_den() == 1; }
    bool s2_integral() const { return s2.get_den() == 1; }
};

CSystem c_system(const Int& p, const PdsParams& P, const Int& a);

/// A descending tuple stored as runs (value, multiplicity), values strictly
/// decreasing and multiplicities positive.
struct CTuple {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> runs;

    std::uint64_t length() const;
    std::vector<std::uint64_t> expand() const;
    bool has_odd_entry() const;
    /// e.g. "(4,2,1^20,0^9)"
    std::string to_string() const;

    friend bool operator==(const CTuple&, const CTuple&) = default;
};

/// Every multiset of `length` nonnegative integers with sum s1 and sum of
/// squares s2, as descending tuples in descending lexicographic order.
/// Infeasible inputs (s2 < s1, odd s2 - s1, negative sums) give an empty list.
std::vector<CTuple> enumerate_c_solutions(const Int& s1, const Int& s2, std::uint64_t length);

// ---------------------------------------------------------------- plane argument

/// Roots of the block-count quadratic obtained by double counting the
/// differences of D that fall in L x N, |L x N| = v/p:
///
///     m(m-1) + (k-m)(k-m-(p-1))/(p-1) = lambda m + mu (v/p - 1 - m)
///
/// Multiplied through by (p-1) this is  A m^2 + B m + C = 0  with
///     A = p,  B = -(2k + (p-1) beta),  C = k^2 - (p-1)k - (p-1)(v/p - 1) mu.
struct BlockRoots {
    Int a;
    Int b;
    Int c;
    Int discriminant;
    std::vector<Int> roots;   ///< integer roots, ascending
    bool nonintegral = false; ///< the quadratic has a real or complex root that is not an integer
};

BlockRoots block_roots(const Int& p, const PdsParams& P);

/// (p-1) * (lhs - rhs) of the block-count equation at m; zero iff m satisfies it.
Int block_equation_residual(const Int& p, const PdsParams& P, const Int& m);

/// Closed-form roots for the two mu = 2p + 2 parameter sets, if P is one of them.
std::optional<std::vector<Int>> expected_block_roots(const Int& p, const PdsParams& P);

struct LineWeights {
    std::vector<Int> weights;         ///< integral (m - a)/(p - 1), ascending
    std::vector<Rational> nonintegral;
};

LineWeights line_weights(const std::vector<Int>& m_roots, const Int& a, const Int& p);

struct ParityObstruction {
    bool contradiction = false;
    bool applicable = false;  ///< all weights even and S1 even
    std::uint64_t tuples_with_odd_entry = 0;
    std::string reason;
};

/// If every line weight is even, a point of odd weight would make the total
/// weight odd (sum over the pencil through it), so an even S1 forbids odd
/// points. CONTRADICTION iff every candidate tuple has an odd entry.
ParityObstruction parity_obstruction(const std::vector<CTuple>& solutions, const std::vector<Int>& weights,
                                     const Int& s1);

} // namespace pds
