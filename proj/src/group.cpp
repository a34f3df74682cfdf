#include "pds_forge/group.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "pds_forge/integer.hpp"

namespace pds {

namespace {

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b)
{
    if (a != 0 && b > UINT64_MAX / a) {
        throw DomainError("group order overflows 64 bits");
    }
    return a * b;
}

void require_same_group(const GroupElement& a, const GroupElement& b)
{
    if (a.moduli != b.moduli) {
        throw StructuralError("elements belong to different groups");
    }
}

std::uint64_t reduce(std::int64_t c, std::uint64_t n)
{
    const auto m = static_cast<std::int64_t>(n);
    auto r = c % m;
    if (r < 0) {
        r += m;
    }
    return static_cast<std::uint64_t>(r);
}

// (a * b) mod n without overflow for the moduli we see (< 2^32 in practice).
std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t n)
{
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % n);
}

} // namespace

GroupSpec::GroupSpec(std::vector<std::uint64_t> factors) : factors_(std::move(factors))
{
    std::vector<std::pair<std::uint64_t, unsigned>> keyed;
    keyed.reserve(factors_.size());
    for (auto n : factors_) {
        auto pp = prime_power(n);
        if (!pp) {
            throw StructuralError("group factor " + std::to_string(n) + " is not a prime power");
        }
        keyed.push_back(*pp);
    }
    std::sort(keyed.begin(), keyed.end());
    factors_.clear();
    order_ = 1;
    for (auto [q, e] : keyed) {
        std::uint64_t n = 1;
        for (unsigned i = 0; i < e; ++i) {
            n = checked_mul(n, q);
        }
        factors_.push_back(n);
        order_ = checked_mul(order_, n);
    }
}

GroupSpec GroupSpec::parse(std::string_view text)
{
    std::vector<std::uint64_t> factors;
    std::string item;
    std::stringstream in{std::string(text)};
    while (std::getline(in, item, ',')) {
        Int n = parse_int(item);
        if (n < 2) {
            throw StructuralError("group factor must be >= 2, got '" + item + "'");
        }
        factors.push_back(to_u64(n));
    }
    if (factors.empty()) {
        throw StructuralError("empty group specification");
    }
    return GroupSpec(std::move(factors));
}

std::vector<std::uint64_t> GroupSpec::primes() const
{
    std::vector<std::uint64_t> out;
    for (auto n : factors_) {
        auto q = prime_power(n)->first;
        if (out.empty() || out.back() != q) {
            out.push_back(q);
        }
    }
    return out;
}

std::string GroupSpec::to_string() const
{
    std::string out;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
        if (i > 0) {
            out += ',';
        }
        out += std::to_string(factors_[i]);
    }
    return out;
}

std::string GroupSpec::pretty() const
{
    if (factors_.empty()) {
        return "Z1";
    }
    std::string out;
    for (std::size_t i = 0; i < factors_.size();) {
        std::size_t j = i;
        while (j < factors_.size() && factors_[j] == factors_[i]) {
            ++j;
        }
        if (!out.empty()) {
            out += " x ";
        }
        out += "Z" + std::to_string(factors_[i]);
        if (j - i > 1) {
            out += "^" + std::to_string(j - i);
        }
        i = j;
    }
    return out;
}

GroupElement make_element(const GroupSpec& group, const std::vector<std::int64_t>& coords)
{
    if (coords.size() != group.rank()) {
        throw StructuralError("element has " + std::to_string(coords.size()) + " coordinates, group has rank "
                              + std::to_string(group.rank()));
    }
    GroupElement e{group.factors(), {}};
    e.coords.reserve(coords.size());
    for (std::size_t i = 0; i < coords.size(); ++i) {
        e.coords.push_back(reduce(coords[i], group.factors()[i]));
    }
    return e;
}

GroupElement identity(const GroupSpec& group)
{
    return GroupElement{group.factors(), std::vector<std::uint64_t>(group.rank(), 0)};
}

GroupElement element_at(const GroupSpec& group, std::uint64_t index)
{
    if (index >= group.order()) {
        throw StructuralError("element index out of range");
    }
    GroupElement e = identity(group);
    for (std::size_t i = group.rank(); i-- > 0;) {
        e.coords[i] = index % group.factors()[i];
        index /= group.factors()[i];
    }
    return e;
}

std::uint64_t index_of(const GroupSpec& group, const GroupElement& element)
{
    if (element.moduli != group.factors()) {
        throw StructuralError("element does not belong to " + group.pretty());
    }
    std::uint64_t index = 0;
    for (std::size_t i = 0; i < group.rank(); ++i) {
        index = index * group.factors()[i] + element.coords[i];
    }
    return index;
}

GroupElement compose(const GroupElement& a, const GroupElement& b)
{
    require_same_group(a, b);
    GroupElement out = a;
    for (std::size_t i = 0; i < out.coords.size(); ++i) {
        out.coords[i] = (a.coords[i] + b.coords[i]) % a.moduli[i];
    }
    return out;
}

GroupElement inverse(const GroupElement& a)
{
    GroupElement out = a;
    for (std::size_t i = 0; i < out.coords.size(); ++i) {
        out.coords[i] = (a.moduli[i] - a.coords[i]) % a.moduli[i];
    }
    return out;
}

GroupElement power(const GroupElement& a, std::int64_t s)
{
    GroupElement out = a;
    for (std::size_t i = 0; i < out.coords.size(); ++i) {
        out.coords[i] = mul_mod(a.coords[i], reduce(s, a.moduli[i]), a.moduli[i]);
    }
    return out;
}

std::uint64_t element_order(const GroupElement& a)
{
    std::uint64_t order = 1;
    for (std::size_t i = 0; i < a.coords.size(); ++i) {
        const auto n = a.moduli[i];
        order = std::lcm(order, n / std::gcd(n, a.coords[i]));
    }
    return order;
}

GroupTable::GroupTable(GroupSpec group) : group_(std::move(group))
{
    if (group_.order() > max_order) {
        throw DomainError("group of order " + std::to_string(group_.order()) + " is too large to tabulate");
    }
    size_ = static_cast<std::uint32_t>(group_.order());
    coords_.reserve(size_);
    for (std::uint32_t i = 0; i < size_; ++i) {
        coords_.push_back(element_at(group_, i).coords);
    }
    const auto& n = group_.factors();
    table_.resize(std::size_t(size_) * size_);
    for (std::uint32_t a = 0; a < size_; ++a) {
        for (std::uint32_t b = 0; b < size_; ++b) {
            std::uint64_t index = 0;
            for (std::size_t i = 0; i < n.size(); ++i) {
                index = index * n[i] + (coords_[a][i] + coords_[b][i]) % n[i];
            }
            table_[std::size_t(a) * size_ + b] = static_cast<std::uint32_t>(index);
        }
    }
    inverse_.resize(size_);
    order_.resize(size_);
    for (std::uint32_t a = 0; a < size_; ++a) {
        for (std::uint32_t b = 0; b < size_; ++b) {
            if (table_[std::size_t(a) * size_ + b] == 0) {
                inverse_[a] = b;
                break;
            }
        }
        order_[a] = static_cast<std::uint32_t>(element_order(GroupElement{n, coords_[a]}));
    }
}

std::uint32_t GroupTable::power(std::uint32_t a, std::int64_t s) const
{
    return static_cast<std::uint32_t>(index_of(group_, pds::power(GroupElement{group_.factors(), coords_[a]}, s)));
}

OrbitPartition lmt_orbits(const GroupSpec& group)
{
    if (group.order() > UINT32_MAX) {
        throw DomainError("group too large for orbit enumeration");
    }
    const auto v = static_cast<std::uint32_t>(group.order());
    constexpr auto unassigned = UINT32_MAX;
    OrbitPartition out;
    out.orbit_of.assign(v, unassigned);
    for (std::uint32_t g = 0; g < v; ++g) {
        if (out.orbit_of[g] != unassigned) {
            continue;
        }
        const auto element = element_at(group, g);
        const auto o = element_order(element);
        std::vector<std::uint32_t> orbit;
        for (std::uint64_t s = 1; s <= o; ++s) {
            if (std::gcd(s, o) == 1) {
                orbit.push_back(static_cast<std::uint32_t>(index_of(group, power(element, std::int64_t(s)))));
            }
        }
        std::sort(orbit.begin(), orbit.end());
        orbit.erase(std::unique(orbit.begin(), orbit.end()), orbit.end());
        const auto id = static_cast<std::uint32_t>(out.orbits.size());
        for (auto h : orbit) {
            out.orbit_of[h] = id;
        }
        out.orbits.push_back(std::move(orbit));
    }
    return out;
}

GroupSpec sylow_spec(const GroupSpec& group, std::uint64_t q)
{
    if (!is_prime(q) || group.order() % q != 0) {
        throw DomainError(std::to_string(q) + " is not a prime dividing |G| = " + std::to_string(group.order()));
    }
    std::vector<std::uint64_t> factors;
    for (auto n : group.factors()) {
        if (n % q == 0) {
            factors.push_back(n);
        }
    }
    return GroupSpec(std::move(factors));
}

SylowSubgroup sylow(const GroupSpec& group, std::uint64_t q)
{
    SylowSubgroup out{sylow_spec(group, q), {}};
    const auto& n = group.factors();
    out.embedding.reserve(out.group.order());
    for (std::uint64_t i = 0; i < out.group.order(); ++i) {
        const auto local = element_at(out.group, i);
        // Sylow factors appear in G's canonical order, so walk them in step.
        std::uint64_t index = 0;
        std::size_t j = 0;
        for (std::size_t f = 0; f < n.size(); ++f) {
            std::uint64_t c = 0;
            if (n[f] % q == 0) {
                c = local.coords[j++];
            }
            index = index * n[f] + c;
        }
        out.embedding.push_back(index);
    }
    return out;
}

std::vector<std::vector<unsigned>> partitions(unsigned n)
{
    std::vector<std::vector<unsigned>> out;
    std::vector<unsigned> current;
    auto rec = [&](auto&& self, unsigned remaining, unsigned max_part) -> void {
        if (remaining == 0) {
            out.push_back(current);
            return;
        }
        for (unsigned part = std::min(remaining, max_part); part >= 1; --part) {
            current.push_back(part);
            self(self, remaining - part, part);
            current.pop_back();
        }
    };
    rec(rec, n, n);
    return out;
}

std::vector<GroupSpec> abelian_groups(std::uint64_t order)
{
    if (order < 1) {
        throw DomainError("group order must be positive");
    }
    std::vector<std::vector<std::uint64_t>> products{{}};
    std::uint64_t m = order;
    for (std::uint64_t q = 2; m > 1; ++q) {
        if (q > m / q && m > 1) {
            q = m;
        }
        if (m % q != 0) {
            continue;
        }
        unsigned e = 0;
        while (m % q == 0) {
            m /= q;
            ++e;
        }
        std::vector<std::vector<std::uint64_t>> next;
        for (const auto& prefix : products) {
            for (const auto& parts : partitions(e)) {
                auto factors = prefix;
                for (auto part : parts) {
                    std::uint64_t f = 1;
                    for (unsigned i = 0; i < part; ++i) {
                        f *= q;
                    }
                    factors.push_back(f);
                }
                next.push_back(std::move(factors));
            }
        }
        products = std::move(next);
    }
    std::vector<GroupSpec> out;
    out.reserve(products.size());
    for (auto& f : products) {
        out.emplace_back(std::move(f));
    }
    return out;
}

} // namespace pds
