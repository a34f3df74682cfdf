#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pds_forge/group.hpp"
#include "pds_forge/integer.hpp"

namespace pds {

/// A (v, k, lambda, mu) quadruple. beta and delta are derived on demand and
/// never validated here; the feasibility checks below judge them.
struct PdsParams {
    Int v;
    Int k;
    Int lambda;
    Int mu;

    Int beta() const { return lambda - mu; }
    Int delta() const { return beta() * beta() + 4 * (k - mu); }

    /// "(v,k,lambda,mu)"
    std::string to_string() const;
    /// Parses "v,k,lambda,mu".
    static PdsParams parse(const std::string& text);

    friend bool operator==(const PdsParams&, const PdsParams&) = default;
};

/// Outcome of a feasibility test that can fail for a stated reason.
struct Check {
    bool pass = false;
    std::string reason;

    explicit operator bool() const { return pass; }
};

/// k(k - lambda - 1) == mu(v - k - 1)
bool srg_consistent(const PdsParams& P);

/// -sqrt(Delta) < beta < sqrt(Delta) - 2. Throws DomainError unless Delta is a
/// perfect square.
bool nontrivial_range(const PdsParams& P);

/// Parameters of (G \ D) \ {e}. Throws DomainError if v < k + 1.
PdsParams complement(const PdsParams& P);

struct Normalised {
    PdsParams params;
    bool complemented = false;
};

/// Replaces P by its complement when k > v/2.
Normalised normalise(const PdsParams& P);

/// v^2 / Delta, or nullopt when Delta <= 0 or Delta does not divide v^2.
std::optional<Int> dual_delta(const PdsParams& P);

/// Delta | v^2, Delta | (2k - beta)^2, and v, Delta, v^2/Delta share their prime divisors.
Check divisibility_check(const PdsParams& P);

/// beta and Delta have the same parity.
bool parity_check(const PdsParams& P);

/// Passes trivially when Delta is a perfect square. Otherwise passes only for
/// (4t+1, 2t, t-1, t) with v = q^(2s+1), q prime, q = 1 mod 4.
Check conference_case(const PdsParams& P);

struct Exclusion {
    std::uint64_t prime;
    std::string reason;
};

/// Sylow structures ruling out any nontrivial PDS: a cyclic Sylow q-subgroup
/// with |G| != q, or a Sylow q-subgroup Z_{q^s} x Z_{q^t} with s != t.
std::vector<Exclusion> ma2_exclusions(const GroupSpec& group);
std::set<std::uint64_t> ma2_excludes(const GroupSpec& group);

/// Sizes |D cap N| allowed for a nontrivial regular PDS D and a subgroup N of
/// order n with gcd(n, v/n) = 1 and v/n odd.
struct SubPdsReport {
    Int n;
    Int pi;
    Int delta1;
    Int theta;
    Int beta1;
    /// (n + beta1)^2 - (delta1 - beta1^2)(n - 1)
    Int discriminant;
    /// Admissible sizes in [0, n-1], ascending; empty means P is impossible.
    std::vector<Int> sizes;
};

/// Throws DomainError when Delta is not a square or the subgroup conditions fail.
SubPdsReport ma1_sizes(const PdsParams& P, const Int& n);

/// All quadruples with 1 <= k <= v/2 passing the SRG identity, parity,
/// nontrivial range (or the conference case) and divisibility; sorted by
/// (k, lambda). `jobs` shards the k range; the result does not depend on it.
std::vector<PdsParams> enumerate_feasible(const Int& v, unsigned jobs = 1);

} // namespace pds
