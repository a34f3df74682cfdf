#include "pds_forge/sieve.hpp"

#include <algorithm>
#include <sstream>
#include <thread>

namespace pds {

std::string PdsParams::to_string() const
{
    return "(" + v.get_str() + "," + k.get_str() + "," + lambda.get_str() + "," + mu.get_str() + ")";
}

PdsParams PdsParams::parse(const std::string& text)
{
    std::vector<Int> values;
    std::string item;
    std::stringstream in(text);
    while (std::getline(in, item, ',')) {
        values.push_back(parse_int(item));
    }
    if (values.size() != 4) {
        throw StructuralError("parameters must be 'v,k,lambda,mu', got '" + text + "'");
    }
    for (const auto& x : values) {
        if (x < 0) {
            throw StructuralError("parameters must be nonnegative, got '" + text + "'");
        }
    }
    return PdsParams{values[0], values[1], values[2], values[3]};
}

bool srg_consistent(const PdsParams& P)
{
    return P.k * (P.k - P.lambda - 1) == P.mu * (P.v - P.k - 1);
}

bool nontrivial_range(const PdsParams& P)
{
    auto root = exact_sqrt(P.delta());
    if (!root) {
        throw DomainError("Delta = " + P.delta().get_str() + " is not a perfect square");
    }
    const Int beta = P.beta();
    return -*root < beta && beta < *root - 2;
}

PdsParams complement(const PdsParams& P)
{
    if (P.v < P.k + 1) {
        throw DomainError("complement needs v >= k + 1");
    }
    return PdsParams{P.v, P.v - P.k - 1, P.v - 2 * P.k - 2 + P.mu, P.v - 2 * P.k + P.lambda};
}

Normalised normalise(const PdsParams& P)
{
    if (2 * P.k > P.v) {
        return {complement(P), true};
    }
    return {P, false};
}

std::optional<Int> dual_delta(const PdsParams& P)
{
    const Int delta = P.delta();
    const Int v2 = P.v * P.v;
    if (delta <= 0 || v2 % delta != 0) {
        return std::nullopt;
    }
    return Int(v2 / delta);
}

Check divisibility_check(const PdsParams& P)
{
    const Int delta = P.delta();
    if (delta <= 0) {
        return {false, "Delta = " + delta.get_str() + " is not positive"};
    }
    const Int v2 = P.v * P.v;
    if (v2 % delta != 0) {
        return {false, "Delta = " + delta.get_str() + " does not divide v^2"};
    }
    const Int t = 2 * P.k - P.beta();
    if ((t * t) % delta != 0) {
        return {false, "Delta does not divide (2k - beta)^2 = " + Int(t * t).get_str()};
    }
    const auto primes = prime_support(P.v);
    // Delta | v^2, so both Delta and v^2/Delta factor over the primes of v.
    const auto delta_support = support_within(delta, primes);
    const auto dual_support = support_within(v2 / delta, primes);
    if (!delta_support || *delta_support != primes) {
        return {false, "Delta and v have different prime divisors"};
    }
    if (!dual_support || *dual_support != primes) {
        return {false, "v^2/Delta and v have different prime divisors"};
    }
    return {true, "Delta | v^2, Delta | (2k-beta)^2, common prime support"};
}

bool parity_check(const PdsParams& P)
{
    Int diff = P.beta() - P.delta();
    return mpz_even_p(diff.get_mpz_t()) != 0;
}

Check conference_case(const PdsParams& P)
{
    if (is_square(P.delta())) {
        return {true, "Delta is a perfect square"};
    }
    if (P.v < 5 || (P.v - 1) % 4 != 0) {
        return {false, "non-square Delta requires v = 4t + 1"};
    }
    const Int t = (P.v - 1) / 4;
    if (P.k != 2 * t || P.lambda != t - 1 || P.mu != t) {
        return {false, "non-square Delta requires (4t+1, 2t, t-1, t)"};
    }
    const auto primes = prime_support(P.v);
    if (primes.size() != 1) {
        return {false, "non-square Delta requires v to be a prime power"};
    }
    const Int& q = primes.front();
    Int rest = P.v;
    unsigned e = 0;
    while (rest % q == 0) {
        rest /= q;
        ++e;
    }
    if (e % 2 == 0) {
        return {false, "non-square Delta requires an odd exponent in v = q^e"};
    }
    if (q % 4 != 1) {
        return {false, "non-square Delta requires q = 1 mod 4"};
    }
    return {true, "conference parameters (4t+1, 2t, t-1, t), t = " + t.get_str()};
}

std::vector<Exclusion> ma2_exclusions(const GroupSpec& group)
{
    std::vector<Exclusion> out;
    for (auto q : group.primes()) {
        const auto s = sylow_spec(group, q);
        if (s.rank() == 1 && group.order() != q) {
            out.push_back({q, "cyclic Sylow-" + std::to_string(q)});
        } else if (s.rank() == 2 && s.factors()[0] != s.factors()[1]) {
            out.push_back({q, "Sylow-" + std::to_string(q) + " is " + s.pretty() + " with unequal exponents"});
        }
    }
    return out;
}

std::set<std::uint64_t> ma2_excludes(const GroupSpec& group)
{
    std::set<std::uint64_t> out;
    for (const auto& e : ma2_exclusions(group)) {
        out.insert(e.prime);
    }
    return out;
}

SubPdsReport ma1_sizes(const PdsParams& P, const Int& n)
{
    const auto root = exact_sqrt(P.delta());
    if (!root) {
        throw DomainError("sub-PDS size formula needs a square Delta");
    }
    if (n < 1 || P.v % n != 0) {
        throw DomainError("|N| = " + n.get_str() + " does not divide v = " + P.v.get_str());
    }
    const Int index = P.v / n;
    if (gcd(n, index) != 1 || index % 2 == 0) {
        throw DomainError("sub-PDS size formula needs gcd(|N|, v/|N|) = 1 and v/|N| odd");
    }

    SubPdsReport r;
    r.n = n;
    r.pi = gcd(n, *root);
    r.delta1 = r.pi * r.pi;
    // (2 theta - 1) pi <= beta < (2 theta + 1) pi
    r.theta = floor_div(P.beta() + r.pi, 2 * r.pi);
    r.beta1 = P.beta() - 2 * r.theta * r.pi;
    const Int s = n + r.beta1;
    r.discriminant = s * s - (r.delta1 - r.beta1 * r.beta1) * (n - 1);
    if (auto d = exact_sqrt(r.discriminant)) {
        for (const Int& twice : {Int(s - *d), Int(s + *d)}) {
            if (mpz_even_p(twice.get_mpz_t()) == 0) {
                continue;
            }
            const Int size = twice / 2;
            if (size >= 0 && size <= n - 1
                && std::find(r.sizes.begin(), r.sizes.end(), size) == r.sizes.end()) {
                r.sizes.push_back(size);
            }
        }
    }
    std::sort(r.sizes.begin(), r.sizes.end());
    return r;
}

namespace {

bool feasible(const PdsParams& P)
{
    if (!parity_check(P)) {
        return false;
    }
    if (!is_square(P.delta())) {
        return conference_case(P).pass;
    }
    return nontrivial_range(P) && divisibility_check(P).pass;
}

std::vector<PdsParams> scan_k(std::int64_t v, std::int64_t k_lo, std::int64_t k_hi, std::int64_t stride)
{
    std::vector<PdsParams> out;
    for (std::int64_t k = k_lo; k <= k_hi; k += stride) {
        const std::int64_t den = v - k - 1;
        if (den <= 0) {
            continue;
        }
        for (std::int64_t lambda = 0; lambda <= k - 1; ++lambda) {
            const __int128 num = static_cast<__int128>(k) * (k - lambda - 1);
            if (num % den != 0) {
                continue;
            }
            const auto mu = static_cast<std::int64_t>(num / den);
            if (mu > k - 1) {
                continue;
            }
            PdsParams P{Int(std::to_string(v)), Int(std::to_string(k)), Int(std::to_string(lambda)),
                        Int(std::to_string(mu))};
            if (feasible(P)) {
                out.push_back(std::move(P));
            }
        }
    }
    return out;
}

} // namespace

std::vector<PdsParams> enumerate_feasible(const Int& v, unsigned jobs)
{
    if (v < 2) {
        throw DomainError("enumerate_feasible needs v >= 2");
    }
    if (v > Int(1) << 31) {
        throw DomainError("enumerate_feasible is quadratic in v; v must be below 2^31");
    }
    const auto vv = static_cast<std::int64_t>(to_u64(v));
    const std::int64_t k_max = vv / 2;
    jobs = std::max(1u, jobs);

    std::vector<std::vector<PdsParams>> shards(jobs);
    if (jobs == 1) {
        shards[0] = scan_k(vv, 1, k_max, 1);
    } else {
        std::vector<std::thread> workers;
        for (unsigned j = 0; j < jobs; ++j) {
            workers.emplace_back([&, j] { shards[j] = scan_k(vv, 1 + j, k_max, jobs); });
        }
        for (auto& w : workers) {
            w.join();
        }
    }
    std::vector<PdsParams> out;
    for (auto& s : shards) {
        std::move(s.begin(), s.end(), std::back_inserter(out));
    }
    std::sort(out.begin(), out.end(), [](const PdsParams& a, const PdsParams& b) {
        return a.k != b.k ? a.k < b.k : a.lambda < b.lambda;
    });
    return out;
}

} // namespace pds
