#include "pds_forge/searcher.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <mutex>
#include <sstream>
#include <thread>

#include "pds_forge/integer.hpp"

namespace pds {

namespace {

// Index arithmetic without a composition table, for groups too large to tabulate.
class Arith {
public:
    explicit Arith(const GroupSpec& g) : n_(g.factors()), v_(g.order()) {}

    std::uint64_t order() const { return v_; }

    // a * b^-1
    std::uint64_t difference(std::uint64_t a, std::uint64_t b) const
    {
        std::uint64_t out = 0, scale = 1;
        for (std::size_t i = n_.size(); i-- > 0;) {
            const auto m = n_[i];
            const auto x = a % m, y = b % m;
            out += ((x + m - y) % m) * scale;
            scale *= m;
            a /= m;
            b /= m;
        }
        return out;
    }

    std::uint64_t inverse(std::uint64_t a) const { return difference(0, a); }

private:
    std::vector<std::uint64_t> n_;
    std::uint64_t v_;
};

std::vector<char> indicator(std::uint64_t v, const std::vector<std::uint32_t>& members)
{
    std::vector<char> in(v, 0);
    for (auto g : members) {
        in[g] = 1;
    }
    return in;
}

void count_pairs(const Arith& ar, const std::vector<std::uint32_t>& s, std::vector<std::uint64_t>& counts)
{
    for (auto x : s) {
        for (auto y : s) {
            if (x != y) {
                ++counts[ar.difference(x, y)];
            }
        }
    }
}

} // namespace

bool CandidateSet::contains(std::uint32_t g) const { return std::binary_search(members.begin(), members.end(), g); }

CandidateSet make_candidate(const GroupSpec& group, std::vector<std::uint64_t> indices)
{
    std::sort(indices.begin(), indices.end());
    indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
    CandidateSet out{group, {}};
    for (auto i : indices) {
        if (i >= group.order()) {
            throw StructuralError("element index " + std::to_string(i) + " outside a group of order " +
                                  std::to_string(group.order()));
        }
        out.members.push_back(static_cast<std::uint32_t>(i));
    }
    return out;
}

std::uint64_t DifferenceProfile::total() const
{
    std::uint64_t s = 0;
    for (auto c : counts) {
        s += c;
    }
    return s;
}

DifferenceProfile difference_profile(const CandidateSet& D, DifferenceMethod method)
{
    const Arith ar(D.group);
    const auto v = ar.order();
    if (D.contains(0)) {
        throw StructuralError("the identity lies in the set");
    }
    const auto k = D.size();
    if (method == DifferenceMethod::automatic) {
        method = 2 * k <= v ? DifferenceMethod::pairs : DifferenceMethod::complement;
    }
    DifferenceProfile out{std::vector<std::uint64_t>(v, 0)};
    switch (method) {
    case DifferenceMethod::automatic:
    case DifferenceMethod::pairs: count_pairs(ar, D.members, out.counts); break;
    case DifferenceMethod::convolution: {
        const auto in = indicator(v, D.members);
        for (std::uint64_t g = 1; g < v; ++g) {
            const auto g_inv = ar.inverse(g);
            std::uint64_t c = 0;
            for (auto y : D.members) {
                // g y lies in D
                c += in[ar.difference(y, g_inv)];
            }
            out.counts[g] = c;
        }
        break;
    }
    case DifferenceMethod::complement: {
        const auto in = indicator(v, D.members);
        std::vector<std::uint32_t> rest;
        for (std::uint64_t g = 0; g < v; ++g) {
            if (!in[g]) {
                rest.push_back(static_cast<std::uint32_t>(g));
            }
        }
        count_pairs(ar, rest, out.counts);
        for (std::uint64_t g = 1; g < v; ++g) {
            out.counts[g] = out.counts[g] + 2 * k - v;
        }
        break;
    }
    }
    out.counts[0] = 0;
    return out;
}

bool is_subgroup(const GroupSpec& group, const std::vector<std::uint32_t>& members)
{
    const Arith ar(group);
    const auto in = indicator(ar.order(), members);
    if (!in[0]) {
        return false;
    }
    for (auto a : members) {
        for (auto b : members) {
            if (!in[ar.difference(a, b)]) {
                return false;
            }
        }
    }
    return true;
}

PdsVerdict verify_pds(const CandidateSet& D, const PdsParams& P)
{
    PdsVerdict r;
    const Arith ar(D.group);
    const auto v = ar.order();
    r.order_matches = Int(std::to_string(v)) == P.v;
    r.size_matches = Int(std::to_string(D.size())) == P.k;
    r.identity_excluded = !D.contains(0);
    const auto in = indicator(v, D.members);
    r.inverse_closed = std::all_of(D.members.begin(), D.members.end(), [&](auto g) { return in[ar.inverse(g)] != 0; });

    if (r.identity_excluded) {
        const auto profile = difference_profile(D);
        r.counts_match = true;
        for (std::uint64_t g = 1; g < v; ++g) {
            const Int want = in[g] ? P.lambda : P.mu;
            if (Int(std::to_string(profile.counts[g])) != want) {
                r.counts_match = false;
                r.witness = static_cast<std::uint32_t>(g);
                break;
            }
        }
    }
    r.valid = r.order_matches && r.size_matches && r.identity_excluded && r.inverse_closed && r.counts_match;

    std::vector<std::uint32_t> with_e = D.members;
    if (!D.contains(0)) {
        with_e.insert(with_e.begin(), 0);
    }
    std::vector<std::uint32_t> rest;
    for (std::uint64_t g = 0; g < v; ++g) {
        if (!in[g]) {
            rest.push_back(static_cast<std::uint32_t>(g));
        }
    }
    r.trivial = is_subgroup(D.group, with_e) || is_subgroup(D.group, rest);
    return r;
}

IntersectionFilter sylow_intersection_filter(const GroupSpec& group, const PdsParams& P, std::uint64_t q)
{
    const auto s = sylow(group, q);
    const auto report = ma1_sizes(P, Int(std::to_string(s.group.order())));
    IntersectionFilter f;
    for (auto i : s.embedding) {
        if (i != 0) {
            f.subgroup.push_back(static_cast<std::uint32_t>(i));
        }
    }
    std::sort(f.subgroup.begin(), f.subgroup.end());
    for (const auto& a : report.sizes) {
        f.sizes.push_back(to_u64(a));
    }
    return f;
}

namespace {

class Search {
public:
    Search(const GroupSpec& group, const PdsParams& P, const SearchOptions& options)
        : table_(group), v_(table_.size()), options_(options)
    {
        k_ = to_u64(P.k);
        lambda_ = to_u64(P.lambda);
        mu_ = to_u64(P.mu);
        if (options.prune_lmt) {
            auto orbits = lmt_orbits(group).orbits;
            units_.assign(orbits.begin() + 1, orbits.end());
        } else {
            for (std::uint32_t g = 1; g < v_; ++g) {
                const auto h = table_.inverse(g);
                if (g < h) {
                    units_.push_back({g, h});
                } else if (g == h) {
                    units_.push_back({g});
                }
            }
        }
        std::stable_sort(units_.begin(), units_.end(), [](const auto& a, const auto& b) { return a.size() > b.size(); });

        reach_.assign(units_.size() + 1, std::vector<char>(k_ + 1, 0));
        reach_[units_.size()][0] = 1;
        for (std::size_t i = units_.size(); i-- > 0;) {
            const auto u = units_[i].size();
            for (std::uint64_t s = 0; s <= k_; ++s) {
                reach_[i][s] = reach_[i + 1][s] || (s >= u && reach_[i + 1][s - u]);
            }
        }
        if (options.filter) {
            in_filter_.assign(v_, 0);
            for (auto g : options.filter->subgroup) {
                if (g < v_) {
                    in_filter_[g] = 1;
                }
            }
            for (auto s : options.filter->sizes) {
                max_intersection_ = std::max(max_intersection_, s);
            }
        }
    }

    std::size_t unit_count() const { return units_.size(); }

    // Subtree in which units [0, t) are excluded and unit t is the first one included.
    // t == unit_count() stands for the empty set.
    void run_task(std::size_t t, std::vector<CandidateSet>& found, SearchStats& stats) const
    {
        State st(v_);
        if (t == units_.size()) {
            ++stats.nodes;
            if (k_ == 0) {
                leaf(st, found, stats);
            }
            return;
        }
        if (!reach_[t][k_] || units_[t].size() > k_) {
            return;
        }
        bool ok = true;
        for (std::size_t i = 0; i < t; ++i) {
            ok = exclude(st, units_[i]) && ok;
        }
        if (!ok) {
            return;
        }
        if (include(st, units_[t])) {
            recurse(st, t + 1, found, stats);
        }
    }

private:
    struct State {
        explicit State(std::uint32_t v) : counts(v, 0), status(v, 0) {}
        std::vector<std::uint32_t> counts;
        std::vector<char> status; // 0 undecided, 1 in, 2 out
        std::vector<std::uint32_t> members;
        std::uint64_t intersection = 0;
    };

    std::uint64_t bound(const State& st, std::uint32_t g) const
    {
        switch (st.status[g]) {
        case 1: return lambda_;
        case 2: return mu_;
        default: return std::max(lambda_, mu_);
        }
    }

    bool include(State& st, const std::vector<std::uint32_t>& unit) const
    {
        bool ok = true;
        for (auto u : unit) {
            for (auto d : st.members) {
                const auto a = table_.difference(u, d), b = table_.difference(d, u);
                ok = ++st.counts[a] <= bound(st, a) && ok;
                ok = ++st.counts[b] <= bound(st, b) && ok;
            }
            st.members.push_back(u);
            st.status[u] = 1;
            ok = st.counts[u] <= lambda_ && ok;
            if (!in_filter_.empty() && in_filter_[u]) {
                ++st.intersection;
            }
        }
        return ok && (in_filter_.empty() || st.intersection <= max_intersection_);
    }

    void remove(State& st, const std::vector<std::uint32_t>& unit) const
    {
        for (std::size_t j = unit.size(); j-- > 0;) {
            const auto u = unit[j];
            st.members.pop_back();
            st.status[u] = 0;
            if (!in_filter_.empty() && in_filter_[u]) {
                --st.intersection;
            }
            for (auto d : st.members) {
                --st.counts[table_.difference(u, d)];
                --st.counts[table_.difference(d, u)];
            }
        }
    }

    bool exclude(State& st, const std::vector<std::uint32_t>& unit) const
    {
        bool ok = true;
        for (auto u : unit) {
            st.status[u] = 2;
            ok = st.counts[u] <= mu_ && ok;
        }
        return ok;
    }

    void unexclude(State& st, const std::vector<std::uint32_t>& unit) const
    {
        for (auto u : unit) {
            st.status[u] = 0;
        }
    }

    void leaf(const State& st, std::vector<CandidateSet>& found, SearchStats& stats) const
    {
        ++stats.leaves;
        for (std::uint32_t g = 1; g < v_; ++g) {
            if (st.counts[g] != (st.status[g] == 1 ? lambda_ : mu_)) {
                return;
            }
        }
        if (options_.filter) {
            const auto& sizes = options_.filter->sizes;
            if (std::find(sizes.begin(), sizes.end(), st.intersection) == sizes.end()) {
                return;
            }
        }
        CandidateSet D{table_.group(), st.members};
        std::sort(D.members.begin(), D.members.end());
        found.push_back(std::move(D));
    }

    void recurse(State& st, std::size_t i, std::vector<CandidateSet>& found, SearchStats& stats) const
    {
        ++stats.nodes;
        const auto size = st.members.size();
        if (size == k_) {
            leaf(st, found, stats);
            return;
        }
        if (i == units_.size() || !reach_[i][k_ - size]) {
            return;
        }
        const auto& unit = units_[i];
        if (size + unit.size() <= k_) {
            if (include(st, unit)) {
                recurse(st, i + 1, found, stats);
            }
            remove(st, unit);
        }
        if (exclude(st, unit)) {
            recurse(st, i + 1, found, stats);
        }
        unexclude(st, unit);
    }

    GroupTable table_;
    std::uint32_t v_;
    SearchOptions options_;
    std::uint64_t k_ = 0, lambda_ = 0, mu_ = 0;
    std::vector<std::vector<std::uint32_t>> units_;
    std::vector<std::vector<char>> reach_;
    std::vector<char> in_filter_;
    std::uint64_t max_intersection_ = 0;
};

bool lex_less(const CandidateSet& a, const CandidateSet& b) { return a.members < b.members; }

} // namespace

SearchResult search(const GroupSpec& group, const PdsParams& P, const SearchOptions& options)
{
    if (Int(std::to_string(group.order())) != P.v) {
        throw DomainError("group order " + std::to_string(group.order()) + " differs from v = " + P.v.get_str());
    }
    if (P.k < 0 || P.lambda < 0 || P.mu < 0 || P.k >= P.v) {
        throw DomainError("parameters " + P.to_string() + " are out of range");
    }
    if (options.prune_lmt && !is_square(P.delta())) {
        throw DomainError("orbit pruning needs a square Delta, got " + P.delta().get_str());
    }
    const Search s(group, P, options);
    const std::size_t tasks = s.unit_count() + 1;
    std::vector<std::vector<CandidateSet>> found(tasks);
    std::vector<SearchStats> stats(tasks);

    const unsigned jobs = std::max(1u, std::min<unsigned>(options.jobs, static_cast<unsigned>(tasks)));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t t = next++; t < tasks; t = next++) {
            s.run_task(t, found[t], stats[t]);
        }
    };
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned j = 0; j < jobs; ++j) {
            pool.emplace_back(worker);
        }
        for (auto& th : pool) {
            th.join();
        }
    }

    SearchResult out;
    out.stats.units = s.unit_count();
    for (std::size_t t = 0; t < tasks; ++t) {
        out.stats.nodes += stats[t].nodes;
        out.stats.leaves += stats[t].leaves;
        for (auto& D : found[t]) {
            out.sets.push_back(std::move(D));
        }
    }
    std::sort(out.sets.begin(), out.sets.end(), lex_less);
    return out;
}

std::uint64_t empirical_block_count(const CandidateSet& D, const PlaneDesign& plane, std::uint64_t line)
{
    const auto p = plane.order();
    if (D.group != GroupSpec({2, 2, 2, p, p, p})) {
        throw StructuralError("block counts need the group Z2^3 x Z" + std::to_string(p) + "^3");
    }
    if (line >= plane.size()) {
        throw StructuralError("line " + std::to_string(line) + " outside the plane");
    }
    const auto cube = p * p * p;
    std::vector<char> in_l(cube, 0);
    for (auto i : plane.line_subgroup(line)) {
        in_l[i] = 1;
    }
    std::uint64_t m = 0;
    for (auto g : D.members) {
        m += in_l[g % cube];
    }
    return m;
}

CandidateSet parse_set_file(const GroupSpec& group, std::string_view text)
{
    const auto& n = group.factors();
    std::vector<std::uint64_t> indices;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') {
            continue;
        }
        std::vector<std::uint64_t> coords;
        std::istringstream fields(line);
        std::string field;
        while (std::getline(fields, field, ',')) {
            const auto b = field.find_first_not_of(" \t\r");
            const auto e = field.find_last_not_of(" \t\r");
            std::uint64_t x = 0;
            const char* begin = b == std::string::npos ? field.data() : field.data() + b;
            const char* end = b == std::string::npos ? field.data() : field.data() + e + 1;
            auto [ptr, ec] = std::from_chars(begin, end, x);
            if (ec != std::errc{} || ptr != end || begin == end) {
                throw StructuralError("line " + std::to_string(line_no) + ": bad coordinate '" + field + "'");
            }
            coords.push_back(x);
        }
        if (coords.size() != n.size()) {
            throw StructuralError("line " + std::to_string(line_no) + ": expected " + std::to_string(n.size()) +
                                  " coordinates");
        }
        for (std::size_t i = 0; i < n.size(); ++i) {
            if (coords[i] >= n[i]) {
                throw StructuralError("line " + std::to_string(line_no) + ": coordinate out of range");
            }
        }
        indices.push_back(index_of(group, GroupElement{n, coords}));
    }
    return make_candidate(group, std::move(indices));
}

std::string format_set_file(const CandidateSet& D)
{
    std::string out = "# " + D.group.pretty() + ", " + std::to_string(D.size()) + " elements\n";
    for (auto g : D.members) {
        const auto e = element_at(D.group, g);
        for (std::size_t i = 0; i < e.coords.size(); ++i) {
            out += (i ? "," : "") + std::to_string(e.coords[i]);
        }
        out += '\n';
    }
    return out;
}

} // namespace pds
