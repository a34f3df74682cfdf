#include "pds_forge/certifier.hpp"

#include <algorithm>

namespace pds {

namespace {

// Non-identity elements of the Sylow 2-subgroup Z_2^3.
constexpr int involutions = 7;

Int order_8p3(const Int& p) { return 8 * p * p * p; }

bool is_even(const Int& n) { return mpz_even_p(n.get_mpz_t()) != 0; }

} // namespace

void require_certifiable_prime(const Int& p)
{
    if (p < 5 || !is_prime(p)) {
        throw DomainError("certification needs a prime p >= 5, got " + p.get_str());
    }
}

GroupReduction group_reduction(const Int& p)
{
    require_certifiable_prime(p);
    const Int v = order_8p3(p);
    if (v >= Int(1) << 62) {
        throw DomainError("p too large for group enumeration");
    }
    GroupReduction out;
    for (auto& g : abelian_groups(to_u64(v))) {
        auto exclusions = ma2_exclusions(g);
        if (exclusions.empty()) {
            out.survivors.push_back(g);
        }
        out.candidates.push_back({std::move(g), std::move(exclusions)});
    }
    return out;
}

std::vector<Int> delta_candidates(const Int& p)
{
    require_certifiable_prime(p);
    const Int v = order_8p3(p);
    const Int v2 = v * v;
    const auto primes = prime_support(v);
    std::vector<Int> out;
    const Int r_max = isqrt(v);
    for (Int r = 1; r <= r_max; ++r) {
        const Int delta = r * r;
        if (v2 % delta != 0) {
            continue;
        }
        const auto s_delta = support_within(delta, primes);
        const auto s_dual = support_within(v2 / delta, primes);
        if (s_delta && s_dual && *s_delta == primes && *s_dual == primes) {
            out.push_back(delta);
        }
    }
    return out;
}

Int k_bound_discriminant(const Int& p, const Int& delta, const Int& k)
{
    const Int v = order_8p3(p);
    return delta * (v - 1) * (v - 1) + 4 * k * v * (1 + k - v);
}

KBound k_bound_exact(const Int& p, const Int& delta)
{
    require_certifiable_prime(p);
    KBound out;
    if (delta == 16 * p * p) {
        out.closed_form_floor = 4 * p * p + 3 * p - 1;
    } else if (delta == 4 * p * p) {
        out.closed_form_floor = floor_div(4 * p * p + p - 2, 4);
    } else {
        throw DomainError("k bound is defined for Delta in {4p^2, 16p^2}, got " + delta.get_str());
    }
    // The discriminant is a convex quadratic in k whose vertex lies at
    // (v-1)/2 = 4p^3 - 1/2, so on [0, 4p^3] it is nonincreasing: bisect.
    Int lo = 0;
    Int hi = 4 * p * p * p;
    if (k_bound_discriminant(p, delta, hi) >= 0) {
        out.k_max = hi;
        return out;
    }
    while (hi - lo > 1) {
        const Int mid = (lo + hi) / 2;
        if (k_bound_discriminant(p, delta, mid) >= 0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    out.k_max = lo;
    return out;
}

std::vector<MuCandidate> mu_candidates(const Int& p, const Int& delta)
{
    const KBound bound = k_bound_exact(p, delta);
    const Int v = order_8p3(p);
    const Int r = *exact_sqrt(delta);
    const Int h = r / 2;

    std::vector<MuCandidate> out;
    const Int x_lo = floor_div(2 - h, h) - 1;
    const Int x_hi = floor_div(bound.k_max + h, h) + 1;
    for (Int x = x_lo; x <= x_hi; ++x) {
        const Int num = h * h * (x * x - 1);
        if (num % v != 0) {
            continue;
        }
        const Int mu = num / v;
        if (mu < 1) {
            continue;
        }
        const auto s = exact_sqrt(1 + delta - 2 * r * x + 4 * mu);
        if (!s) {
            continue;
        }
        std::vector<Int> betas{-1 - *s};
        if (*s != 0) {
            betas.push_back(-1 + *s);
        }
        for (const Int& beta : betas) {
            if (!is_even(beta) || !(-r < beta && beta < r - 2)) {
                continue;
            }
            const Int k = h * x + beta / 2;
            const Int lambda = mu + beta;
            if (k < 1 || k > bound.k_max || lambda < 0 || lambda > k - 1 || mu > k - 1) {
                continue;
            }
            out.push_back({x, PdsParams{v, k, lambda, mu}, beta});
        }
    }
    return out;
}

LowMuBranch classify_low_mu_branch(const Int& p)
{
    require_certifiable_prime(p);
    LowMuBranch out;
    out.radicand = 16 * p - 7;
    out.root = exact_sqrt(out.radicand);
    if (!out.root) {
        return out;
    }
    const Int& s = *out.root;
    out.open = true;
    out.root_mod_8 = s % 8;
    out.betas = {-1 - s, -1 + s};

    const bool fits_3 = (s - 3) % 8 == 0 && p == 4 * ((s - 3) / 8) * ((s - 3) / 8) + 3 * ((s - 3) / 8) + 1;
    const bool fits_5 = (s - 5) % 8 == 0 && p == 4 * ((s - 5) / 8) * ((s - 5) / 8) + 5 * ((s - 5) / 8) + 2;
    out.unique_form = fits_3 != fits_5;
    if (fits_3) {
        out.y = (s - 3) / 8;
        out.form = "4y^2+3y+1";
    } else if (fits_5) {
        out.y = (s - 5) / 8;
        out.form = "4y^2+5y+2";
    }
    return out;
}

CSystem c_system(const Int& p, const PdsParams& P, const Int& a)
{
    if (p < 2) {
        throw DomainError("c_system needs p >= 2");
    }
    CSystem out;
    out.denominator = p - 1;
    out.s1_numerator = P.k - a;
    out.s2_numerator = out.s1_numerator + a * P.lambda + (involutions - a) * P.mu - a * (a - 1);
    out.s1 = Rational(out.s1_numerator, out.denominator);
    out.s2 = Rational(out.s2_numerator, out.denominator);
    out.s1.canonicalize();
    out.s2.canonicalize();
    return out;
}

std::uint64_t CTuple::length() const
{
    std::uint64_t n = 0;
    for (auto [value, count] : runs) {
        n += count;
    }
    return n;
}

std::vector<std::uint64_t> CTuple::expand() const
{
    std::vector<std::uint64_t> out;
    out.reserve(length());
    for (auto [value, count] : runs) {
        out.insert(out.end(), count, value);
    }
    return out;
}

bool CTuple::has_odd_entry() const
{
    return std::any_of(runs.begin(), runs.end(), [](auto run) { return run.first % 2 == 1 && run.second > 0; });
}

std::string CTuple::to_string() const
{
    std::string out = "(";
    for (std::size_t i = 0; i < runs.size(); ++i) {
        if (i > 0) {
            out += ',';
        }
        const auto [value, count] = runs[i];
        out += std::to_string(value);
        if (count > 1) {
            out += '^' + std::to_string(count);
        }
    }
    return out + ")";
}

std::vector<CTuple> enumerate_c_solutions(const Int& s1, const Int& s2, std::uint64_t length)
{
    if (s1 < 0 || s2 < s1 || !is_even(s2 - s1)) {
        return {};
    }
    // Every entry c contributes c(c-1) to s2 - s1; entries 0 and 1 contribute
    // nothing, so choose the entries >= 2 first and fill with ones and zeros.
    const std::uint64_t sum = to_u64(s1);
    const std::uint64_t target = to_u64(s2 - s1);
    std::uint64_t c_max = 1;
    while ((c_max + 1) * c_max <= target) {
        ++c_max;
    }

    std::vector<CTuple> out;
    std::vector<std::uint64_t> big;
    auto emit = [&](std::uint64_t big_sum) {
        if (big_sum > sum) {
            return;
        }
        const std::uint64_t ones = sum - big_sum;
        if (big.size() + ones > length) {
            return;
        }
        CTuple t;
        for (auto c : big) {
            if (!t.runs.empty() && t.runs.back().first == c) {
                ++t.runs.back().second;
            } else {
                t.runs.push_back({c, 1});
            }
        }
        if (ones > 0) {
            t.runs.push_back({1, ones});
        }
        if (const auto zeros = length - big.size() - ones; zeros > 0) {
            t.runs.push_back({0, zeros});
        }
        out.push_back(std::move(t));
    };
    auto rec = [&](auto&& self, std::uint64_t remaining, std::uint64_t max_part, std::uint64_t big_sum) -> void {
        if (remaining == 0) {
            emit(big_sum);
            return;
        }
        if (big.size() >= length) {
            return;
        }
        for (std::uint64_t c = max_part; c >= 2; --c) {
            const auto w = c * (c - 1);
            if (w > remaining || big_sum + c > sum) {
                continue;
            }
            big.push_back(c);
            self(self, remaining - w, c, big_sum + c);
            big.pop_back();
        }
    };
    rec(rec, target, c_max, 0);
    return out;
}

BlockRoots block_roots(const Int& p, const PdsParams& P)
{
    if (p < 2 || P.v % p != 0) {
        throw DomainError("block_roots needs p >= 2 dividing v");
    }
    const Int block = P.v / p;
    BlockRoots out;
    out.a = p;
    out.b = -(2 * P.k + (p - 1) * P.beta());
    out.c = P.k * P.k - (p - 1) * P.k - (p - 1) * (block - 1) * P.mu;
    out.discriminant = out.b * out.b - 4 * out.a * out.c;
    const auto s = exact_sqrt(out.discriminant);
    if (!s) {
        out.nonintegral = true;
        return out;
    }
    for (const Int& num : {Int(-out.b - *s), Int(-out.b + *s)}) {
        if (num % (2 * out.a) != 0) {
            out.nonintegral = true;
            continue;
        }
        const Int m = num / (2 * out.a);
        if (std::find(out.roots.begin(), out.roots.end(), m) == out.roots.end()) {
            out.roots.push_back(m);
        }
    }
    std::sort(out.roots.begin(), out.roots.end());
    return out;
}

Int block_equation_residual(const Int& p, const PdsParams& P, const Int& m)
{
    const Int block = P.v / p;
    const Int lhs = (p - 1) * m * (m - 1) + (P.k - m) * (P.k - m - (p - 1));
    const Int rhs = (p - 1) * (P.lambda * m + P.mu * (block - 1 - m));
    return lhs - rhs;
}

std::optional<std::vector<Int>> expected_block_roots(const Int& p, const PdsParams& P)
{
    const Int mu = 2 * p + 2;
    if (P.mu != mu) {
        return std::nullopt;
    }
    if (P.k == 4 * p * p + 2 * p - 2 && P.lambda == 2 * p - 2) {
        return std::vector<Int>{2 * (p + 1), 2 * (3 * p - 1)};
    }
    if (P.k == 4 * p * p + 2 * p + 1 && P.lambda == 2 * p + 4) {
        return std::vector<Int>{2 * p + 5, 6 * p + 1};
    }
    return std::nullopt;
}

LineWeights line_weights(const std::vector<Int>& m_roots, const Int& a, const Int& p)
{
    LineWeights out;
    for (const auto& m : m_roots) {
        Rational w(m - a, p - 1);
        w.canonicalize();
        if (w.get_den() == 1) {
            out.weights.push_back(w.get_num());
        } else {
            out.nonintegral.push_back(w);
        }
    }
    std::sort(out.weights.begin(), out.weights.end());
    out.weights.erase(std::unique(out.weights.begin(), out.weights.end()), out.weights.end());
    return out;
}

ParityObstruction parity_obstruction(const std::vector<CTuple>& solutions, const std::vector<Int>& weights,
                                     const Int& s1)
{
    ParityObstruction out;
    const bool weights_even = std::all_of(weights.begin(), weights.end(), is_even);
    out.applicable = weights_even && is_even(s1);
    if (!out.applicable) {
        out.reason = weights_even ? "S1 is odd" : "some line weight is odd";
        return out;
    }
    for (const auto& t : solutions) {
        if (t.has_odd_entry()) {
            ++out.tuples_with_odd_entry;
        }
    }
    out.contradiction = out.tuples_with_odd_entry == solutions.size();
    out.reason = out.contradiction ? "every solution has an odd point weight"
                                   : "an all-even solution survives the parity argument";
    return out;
}

} // namespace pds
