#include "pds_forge/certificate.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "pds_forge/certifier.hpp"
#include "pds_forge/plane.hpp"
#include "pds_forge/sieve.hpp"

namespace pds {

namespace {

// Order of the Sylow 2-subgroup Z_2^3.
const Int sylow2_order = 8;

Json str(const Int& n) { return n.get_str(); }
Json str(const Rational& q) { return q.get_str(); }

Json str_array(const std::vector<Int>& xs)
{
    Json out = Json::array();
    for (const auto& x : xs) {
        out.push_back(x.get_str());
    }
    return out;
}

const Int& input(const StepInputs& inputs, const std::string& key)
{
    for (const auto& [name, value] : inputs) {
        if (name == key) {
            return value;
        }
    }
    throw StructuralError("step input '" + key + "' missing");
}

PdsParams params_of(const StepInputs& in)
{
    return PdsParams{input(in, "v"), input(in, "k"), input(in, "lambda"), input(in, "mu")};
}

bool is_even(const Int& n) { return mpz_even_p(n.get_mpz_t()) != 0; }

struct Expected {
    Int k, lambda, mu, beta;
    auto key() const { return std::tuple(k.get_str(), lambda.get_str(), mu.get_str(), beta.get_str()); }
};

// Closed-form parameter sets for Delta = 16p^2: the mu = 2p + 2 pair always,
// the mu = 2p - 2 pair only when 16p - 7 is a perfect square.
std::vector<Expected> expected_candidates(const Int& p, const Int& delta)
{
    std::vector<Expected> out;
    if (delta != 16 * p * p) {
        return out;
    }
    const Int hi = 2 * p + 2;
    out.push_back({4 * p * p + 2 * p - 2, 2 * p - 2, hi, -4});
    out.push_back({4 * p * p + 2 * p + 1, 2 * p + 4, hi, 2});
    if (auto s = exact_sqrt(16 * p - 7)) {
        const Int lo = 2 * p - 2;
        for (const Int& beta : {Int(-1 - *s), Int(-1 + *s)}) {
            out.push_back({4 * p * p - 2 * p + beta / 2, lo + beta, lo, beta});
        }
    }
    return out;
}

StepOutcome step_group_reduction(const StepInputs& in)
{
    const Int& p = input(in, "p");
    const auto r = group_reduction(p);
    Json candidates = Json::array();
    for (const auto& c : r.candidates) {
        Json reasons = Json::array();
        for (const auto& e : c.exclusions) {
            reasons.push_back(e.reason);
        }
        candidates.push_back(Json{{"group", c.group.to_string()}, {"structure", c.group.pretty()}, {"excluded_by", reasons}});
    }
    Json survivors = Json::array();
    for (const auto& g : r.survivors) {
        survivors.push_back(g.to_string());
    }
    const auto q = to_u64(p);
    const GroupSpec expected({2, 2, 2, q, q, q});
    const bool ok = r.survivors.size() == 1 && r.survivors.front() == expected;
    Json e;
    e["order"] = str(Int(8 * p * p * p));
    e["candidate_count"] = r.candidates.size();
    e["candidates"] = candidates;
    e["survivors"] = survivors;
    e["expected_survivor"] = expected.to_string();
    e["matches_expected"] = ok;
    return {e, ok ? StepVerdict::ok : StepVerdict::failed};
}

StepOutcome step_projective_plane(const StepInputs& in)
{
    const auto plane = build_plane(to_u64(input(in, "p")));
    const auto on_line = plane.points_on_line(0).size();
    const auto through_point = plane.lines_through(0).size();
    const bool pencil = plane.pencil_partitions(0);
    const bool ok = pencil && on_line == plane.order() + 1 && through_point == plane.order() + 1;
    Json e;
    e["points"] = std::to_string(plane.size());
    e["lines"] = std::to_string(plane.size());
    e["points_per_line"] = std::to_string(on_line);
    e["lines_per_point"] = std::to_string(through_point);
    e["pencil_partition_at_point_0"] = pencil;
    return {e, ok ? StepVerdict::ok : StepVerdict::failed};
}

StepOutcome step_delta_candidates(const StepInputs& in)
{
    const Int& p = input(in, "p");
    const auto deltas = delta_candidates(p);
    const std::vector<Int> expected{4 * p * p, 16 * p * p};
    Json e;
    e["v"] = str(Int(8 * p * p * p));
    e["squares_scanned"] = str(isqrt(Int(8 * p * p * p)));
    e["deltas"] = str_array(deltas);
    e["expected"] = str_array(expected);
    e["matches_expected"] = deltas == expected;
    return {e, deltas == expected ? StepVerdict::branch : StepVerdict::failed};
}

StepOutcome step_k_bound(const StepInputs& in)
{
    const Int& p = input(in, "p");
    const Int& delta = input(in, "delta");
    const auto b = k_bound_exact(p, delta);
    const Int at = k_bound_discriminant(p, delta, b.k_max);
    const Int next = k_bound_discriminant(p, delta, b.k_max + 1);
    const bool within = b.k_max <= b.closed_form_floor;
    Json e;
    e["k_max"] = str(b.k_max);
    e["closed_form_floor"] = str(b.closed_form_floor);
    e["within_closed_form"] = within;
    e["discriminant_at_k_max"] = str(at);
    e["discriminant_at_k_max_plus_1"] = str(next);
    const bool ok = within && at >= 0 && next < 0;
    return {e, ok ? StepVerdict::ok : StepVerdict::failed};
}

StepOutcome step_mu_candidates(const StepInputs& in)
{
    const Int& p = input(in, "p");
    const Int& delta = input(in, "delta");
    const auto cands = mu_candidates(p, delta);
    Json list = Json::array();
    bool consistent = true;
    std::set<std::tuple<std::string, std::string, std::string, std::string>> found;
    for (const auto& c : cands) {
        const bool srg = srg_consistent(c.params);
        const bool delta_ok = c.params.delta() == delta;
        consistent = consistent && srg && delta_ok;
        found.insert(Expected{c.params.k, c.params.lambda, c.params.mu, c.beta}.key());
        list.push_back(Json{{"x", str(c.x)},
                            {"k", str(c.params.k)},
                            {"lambda", str(c.params.lambda)},
                            {"mu", str(c.params.mu)},
                            {"beta", str(c.beta)},
                            {"srg_consistent", srg},
                            {"delta_matches", delta_ok}});
    }
    std::set<std::tuple<std::string, std::string, std::string, std::string>> expected;
    for (const auto& x : expected_candidates(p, delta)) {
        expected.insert(x.key());
    }
    const bool matches = found == expected && found.size() == cands.size();
    Json e;
    e["k_max"] = str(k_bound_exact(p, delta).k_max);
    e["candidates"] = list;
    e["expected_count"] = expected.size();
    e["matches_closed_form"] = matches;
    StepVerdict verdict = cands.empty() ? StepVerdict::contradiction : StepVerdict::branch;
    if (!matches || !consistent) {
        verdict = StepVerdict::failed;
    }
    return {e, verdict};
}

StepOutcome step_mu_branch(const StepInputs& in)
{
    const Int& p = input(in, "p");
    const Int& delta = input(in, "delta");
    const Int& mu = input(in, "mu");
    const Int r = *exact_sqrt(delta);
    Json list = Json::array();
    std::optional<Int> x;
    for (const auto& c : mu_candidates(p, delta)) {
        if (c.params.mu != mu) {
            continue;
        }
        x = c.x;
        list.push_back(Json{{"k", str(c.params.k)}, {"lambda", str(c.params.lambda)}, {"beta", str(c.beta)}});
    }
    Json e;
    e["x"] = x ? str(*x) : Json(nullptr);
    // beta^2 + 2 beta - c = 0
    e["beta_equation_constant"] = x ? str(Int(delta - 2 * r * *x + 4 * mu)) : Json(nullptr);
    e["parameter_sets"] = list;
    return {e, list.empty() ? StepVerdict::contradiction : StepVerdict::branch};
}

StepOutcome step_low_mu_classify(const StepInputs& in)
{
    const Int& p = input(in, "p");
    const auto c = classify_low_mu_branch(p);
    std::vector<Int> found_betas;
    for (const auto& m : mu_candidates(p, 16 * p * p)) {
        if (m.params.mu == 2 * p - 2) {
            found_betas.push_back(m.beta);
        }
    }
    std::sort(found_betas.begin(), found_betas.end());
    const bool agree = found_betas == (c.open ? c.betas : std::vector<Int>{});
    Json e;
    e["radicand"] = str(c.radicand);
    e["is_square"] = c.open;
    e["root"] = c.root ? str(*c.root) : Json(nullptr);
    if (c.open) {
        e["root_mod_8"] = str(c.root_mod_8);
        e["y"] = str(c.y);
        e["form"] = c.form;
        e["unique_form"] = c.unique_form;
        e["betas"] = str_array(c.betas);
    }
    e["candidates_agree"] = agree;
    StepVerdict verdict = c.open ? StepVerdict::branch : StepVerdict::contradiction;
    if (!agree || (c.open && !c.unique_form)) {
        verdict = StepVerdict::failed;
    }
    return {e, verdict};
}

StepOutcome step_ma1_sizes(const StepInputs& in)
{
    const auto P = params_of(in);
    const auto r = ma1_sizes(P, input(in, "n"));
    const bool srg = srg_consistent(P);
    Json e;
    e["beta"] = str(P.beta());
    e["delta"] = str(P.delta());
    e["srg_consistent"] = srg;
    e["pi"] = str(r.pi);
    e["delta1"] = str(r.delta1);
    e["theta"] = str(r.theta);
    e["beta1"] = str(r.beta1);
    e["discriminant"] = str(r.discriminant);
    e["sizes"] = str_array(r.sizes);
    StepVerdict verdict = r.sizes.empty() ? StepVerdict::contradiction : StepVerdict::branch;
    if (!srg) {
        verdict = StepVerdict::failed;
    }
    return {e, verdict};
}

StepOutcome step_c_system(const StepInputs& in)
{
    const auto cs = c_system(input(in, "p"), params_of(in), input(in, "a"));
    Json e;
    e["s1_numerator"] = str(cs.s1_numerator);
    e["s2_numerator"] = str(cs.s2_numerator);
    e["denominator"] = str(cs.denominator);
    e["s1"] = str(cs.s1);
    e["s2"] = str(cs.s2);
    e["s1_integral"] = cs.s1_integral();
    e["s2_integral"] = cs.s2_integral();
    e["aggregation"] = "B is constant on the p-1 generators of each order-p subgroup";
    const bool integral = cs.s1_integral() && cs.s2_integral();
    return {e, integral ? StepVerdict::ok : StepVerdict::contradiction};
}

// S1 and S2 for steps that only make sense once both are integers.
std::pair<Int, Int> integral_sums(const StepInputs& in)
{
    const auto cs = c_system(input(in, "p"), params_of(in), input(in, "a"));
    if (!cs.s1_integral() || !cs.s2_integral()) {
        throw DomainError("C sums are not integral");
    }
    return {cs.s1.get_num(), cs.s2.get_num()};
}

StepOutcome step_c_parity(const StepInputs& in)
{
    const auto [s1, s2] = integral_sums(in);
    const Int t = s2 - s1;
    Json e;
    e["s1"] = str(s1);
    e["s2"] = str(s2);
    e["sum_c_times_c_minus_1"] = str(t);
    e["nonnegative"] = t >= 0;
    e["even"] = is_even(t);
    return {e, (t >= 0 && is_even(t)) ? StepVerdict::ok : StepVerdict::contradiction};
}

std::uint64_t plane_size(const Int& p) { return to_u64(p * p + p + 1); }

StepOutcome step_c_solutions(const StepInputs& in)
{
    const Int& p = input(in, "p");
    const auto [s1, s2] = integral_sums(in);
    const auto sols = enumerate_c_solutions(s1, s2, plane_size(p));
    Json tuples = Json::array();
    bool all_odd = true;
    for (const auto& t : sols) {
        tuples.push_back(t.to_string());
        all_odd = all_odd && t.has_odd_entry();
    }
    Json e;
    e["length"] = std::to_string(plane_size(p));
    e["count"] = std::to_string(sols.size());
    e["tuples"] = tuples;
    e["all_have_odd_entry"] = all_odd;
    return {e, sols.empty() ? StepVerdict::contradiction : StepVerdict::ok};
}

StepOutcome step_block_roots(const StepInputs& in)
{
    const Int& p = input(in, "p");
    const auto P = params_of(in);
    const auto r = block_roots(p, P);
    bool residuals_zero = true;
    for (const auto& m : r.roots) {
        residuals_zero = residuals_zero && block_equation_residual(p, P, m) == 0;
    }
    const auto expected = expected_block_roots(p, P);
    Json e;
    e["quadratic"] = str_array({r.a, r.b, r.c});
    e["discriminant"] = str(r.discriminant);
    e["roots"] = str_array(r.roots);
    e["has_nonintegral_root"] = r.nonintegral;
    e["residuals_zero"] = residuals_zero;
    e["expected_roots"] = expected ? str_array(*expected) : Json(nullptr);
    e["matches_expected"] = expected ? Json(*expected == r.roots) : Json(nullptr);
    StepVerdict verdict = r.roots.empty() ? StepVerdict::contradiction : StepVerdict::ok;
    if (!residuals_zero || (expected && *expected != r.roots)) {
        verdict = StepVerdict::failed;
    }
    return {e, verdict};
}

StepOutcome step_line_weights(const StepInputs& in)
{
    const Int& p = input(in, "p");
    const auto roots = block_roots(p, params_of(in)).roots;
    const auto w = line_weights(roots, input(in, "a"), p);
    Json nonintegral = Json::array();
    for (const auto& q : w.nonintegral) {
        nonintegral.push_back(q.get_str());
    }
    Json e;
    e["weights"] = str_array(w.weights);
    e["nonintegral"] = nonintegral;
    return {e, w.weights.empty() ? StepVerdict::contradiction : StepVerdict::ok};
}

StepOutcome step_parity_obstruction(const StepInputs& in)
{
    const Int& p = input(in, "p");
    const auto [s1, s2] = integral_sums(in);
    const auto sols = enumerate_c_solutions(s1, s2, plane_size(p));
    const auto weights = line_weights(block_roots(p, params_of(in)).roots, input(in, "a"), p).weights;
    const auto r = parity_obstruction(sols, weights, s1);
    Json e;
    e["s1"] = str(s1);
    e["weights"] = str_array(weights);
    e["applicable"] = r.applicable;
    e["solutions"] = std::to_string(sols.size());
    e["solutions_with_odd_entry"] = std::to_string(r.tuples_with_odd_entry);
    e["result"] = r.contradiction ? "contradiction" : "inconclusive";
    e["reason"] = r.reason;
    return {e, r.contradiction ? StepVerdict::contradiction : StepVerdict::ok};
}

StepOutcome step_ma1_excluded(const StepInputs& in)
{
    const auto r = ma1_sizes(params_of(in), input(in, "n"));
    const Int& a = input(in, "a");
    const bool admitted = std::find(r.sizes.begin(), r.sizes.end(), a) != r.sizes.end();
    Json e;
    e["sizes"] = str_array(r.sizes);
    e["admitted"] = admitted;
    return {e, admitted ? StepVerdict::ok : StepVerdict::contradiction};
}

using StepFn = StepOutcome (*)(const StepInputs&);

struct StepKind {
    StepFn fn;
    const char* argument;
};

const std::map<std::string, StepKind>& registry()
{
    static const std::map<std::string, StepKind> steps{
        {"group_reduction",
         {step_group_reduction, "no nontrivial PDS with a cyclic Sylow subgroup (|G| != q) or Sylow Z_{q^s} x Z_{q^t}, s != t"}},
        {"projective_plane", {step_projective_plane, "order-p and order-p^2 subgroups of Z_p^3 form PG(2,p)"}},
        {"delta_candidates",
         {step_delta_candidates,
          "Delta is a square dividing v^2 with the prime support of v and v^2/Delta; Delta <= v by duality"}},
        {"k_bound", {step_k_bound, "real lambda requires Delta (v-1)^2 + 4kv(1+k-v) >= 0"}},
        {"mu_candidates",
         {step_mu_candidates, "k = (r/2) x + beta/2, mu = (r/2)^2 (x^2-1)/v, beta^2 + 2 beta = Delta - 2rx + 4mu"}},
        {"mu_branch", {step_mu_branch, "integer beta roots for a fixed mu"}},
        {"low_mu_classify", {step_low_mu_classify, "mu = 2p-2: beta = -1 +- sqrt(16p-7), root = 3 or 5 mod 8"}},
        {"ma1_sizes", {step_ma1_sizes, "sub-PDS size formula on the Sylow 2-subgroup"}},
        {"c_system", {step_c_system, "power-invariance of B aggregates order-p subgroups with multiplicity p-1"}},
        {"c_parity", {step_c_parity, "sum C(C-1) is even"}},
        {"c_solutions", {step_c_solutions, "nonnegative integer solutions of sum C = S1, sum C^2 = S2"}},
        {"block_roots", {step_block_roots, "double count of differences in L x N"}},
        {"line_weights", {step_line_weights, "block weight m' = (m - a)/(p - 1)"}},
        {"parity_obstruction", {step_parity_obstruction, "even block weights force even point weights in PG(2,p)"}},
        {"ma1_excluded", {step_ma1_excluded, "a is not an admissible sub-PDS size"}},
    };
    return steps;
}

class Builder {
public:
    explicit Builder(Certificate& cert) : cert_(cert) {}

    std::uint64_t add(const std::string& name, StepInputs inputs, std::uint64_t parent = 0)
    {
        auto outcome = evaluate_step(name, inputs);
        const auto id = cert_.steps.size() + 1;
        cert_.steps.push_back(
            Step{id, parent, name, argument_for(name), std::move(inputs), std::move(outcome.evidence), outcome.verdict});
        return id;
    }

    StepVerdict verdict(std::uint64_t id) const { return cert_.steps.at(id - 1).verdict; }
    bool closes(std::uint64_t id) const { return verdict(id) == StepVerdict::contradiction; }

private:
    Certificate& cert_;
};

StepInputs param_inputs(const Int& p, const PdsParams& P)
{
    return {{"p", p}, {"v", P.v}, {"k", P.k}, {"lambda", P.lambda}, {"mu", P.mu}};
}

void add_a_branch(Builder& b, const Int& p, const PdsParams& P, const Int& a, bool admitted, std::uint64_t parent)
{
    auto with_a = param_inputs(p, P);
    with_a.emplace_back("a", a);
    const auto cs = b.add("c_system", with_a, parent);
    bool closed = b.closes(cs);
    if (!closed) {
        closed = b.closes(b.add("c_parity", with_a, cs));
        // Recorded even after a parity contradiction: an independent check.
        closed = b.closes(b.add("c_solutions", with_a, cs)) || closed;
    }
    if (!closed) {
        closed = b.closes(b.add("block_roots", param_inputs(p, P), cs));
    }
    if (!closed) {
        closed = b.closes(b.add("line_weights", with_a, cs));
    }
    if (!closed) {
        closed = b.closes(b.add("parity_obstruction", with_a, cs));
    }
    if (!closed && !admitted) {
        b.add("ma1_excluded",
              {{"v", P.v}, {"k", P.k}, {"lambda", P.lambda}, {"mu", P.mu}, {"n", sylow2_order}, {"a", a}}, cs);
    }
}

void add_parameter_branch(Builder& b, const Int& p, const PdsParams& P, const CertifyOptions& options,
                          std::uint64_t parent)
{
    const auto m = b.add("ma1_sizes", {{"v", P.v}, {"k", P.k}, {"lambda", P.lambda}, {"mu", P.mu}, {"n", sylow2_order}},
                         parent);
    const auto sizes = ma1_sizes(P, sylow2_order).sizes;
    std::vector<Int> a_values = sizes;
    if (options.all_a) {
        a_values.clear();
        for (int a = 0; a < 8; ++a) {
            a_values.emplace_back(a);
        }
    }
    for (const auto& a : a_values) {
        const bool admitted = std::find(sizes.begin(), sizes.end(), a) != sizes.end();
        add_a_branch(b, p, P, a, admitted, m);
    }
}

} // namespace

std::string to_string(StepVerdict v)
{
    switch (v) {
    case StepVerdict::ok: return "OK";
    case StepVerdict::branch: return "BRANCH";
    case StepVerdict::contradiction: return "CONTRADICTION";
    case StepVerdict::failed: return "FAILED";
    }
    return "FAILED";
}

std::string to_string(CertVerdict v) { return v == CertVerdict::nonexistence ? "NONEXISTENCE" : "INCONCLUSIVE"; }

StepVerdict step_verdict_from_string(const std::string& s)
{
    for (auto v : {StepVerdict::ok, StepVerdict::branch, StepVerdict::contradiction, StepVerdict::failed}) {
        if (to_string(v) == s) {
            return v;
        }
    }
    throw StructuralError("unknown step verdict '" + s + "'");
}

CertVerdict cert_verdict_from_string(const std::string& s)
{
    if (s == "NONEXISTENCE") {
        return CertVerdict::nonexistence;
    }
    if (s == "INCONCLUSIVE") {
        return CertVerdict::inconclusive;
    }
    throw StructuralError("unknown certificate verdict '" + s + "'");
}

StepOutcome evaluate_step(const std::string& name, const StepInputs& inputs)
{
    const auto& steps = registry();
    auto it = steps.find(name);
    if (it == steps.end()) {
        throw StructuralError("unknown step '" + name + "'");
    }
    return it->second.fn(inputs);
}

std::string argument_for(const std::string& name)
{
    const auto& steps = registry();
    auto it = steps.find(name);
    return it == steps.end() ? std::string{} : std::string(it->second.argument);
}

Certificate certify(const Int& p, const CertifyOptions& options)
{
    require_certifiable_prime(p);
    Certificate cert;
    cert.p = p;
    Builder b(cert);
    const StepInputs just_p{{"p", p}};

    b.add("group_reduction", just_p);
    b.add("projective_plane", just_p);
    const auto deltas_id = b.add("delta_candidates", just_p);

    const Int low_mu = 2 * p - 2;
    for (const auto& delta : delta_candidates(p)) {
        if (delta != 4 * p * p && delta != 16 * p * p) {
            continue; // delta_candidates already failed
        }
        const StepInputs pd{{"p", p}, {"delta", delta}};
        const auto kb = b.add("k_bound", pd, deltas_id);
        const auto mc = b.add("mu_candidates", pd, kb);
        const auto cands = mu_candidates(p, delta);
        const bool split_low = delta == 16 * p * p;

        std::vector<Int> mus;
        for (const auto& c : cands) {
            if ((!split_low || c.params.mu != low_mu) && std::find(mus.begin(), mus.end(), c.params.mu) == mus.end()) {
                mus.push_back(c.params.mu);
            }
        }
        for (const auto& mu : mus) {
            const auto branch = b.add("mu_branch", {{"p", p}, {"delta", delta}, {"mu", mu}}, mc);
            for (const auto& c : cands) {
                if (c.params.mu == mu) {
                    add_parameter_branch(b, p, c.params, options, branch);
                }
            }
        }
        if (split_low) {
            const auto low = b.add("low_mu_classify", just_p, mc);
            for (const auto& c : cands) {
                if (c.params.mu == low_mu) {
                    add_parameter_branch(b, p, c.params, options, low);
                }
            }
        }
    }
    cert.verdict = derive_verdict(cert.steps);
    return cert;
}

namespace {

using CaseKey = std::pair<std::string, StepInputs>;

Int json_int(const Json& j) { return parse_int(j.get<std::string>()); }

// Children a BRANCH step must have, read off its evidence.
std::vector<CaseKey> required_cases(const Step& s)
{
    std::vector<CaseKey> out;
    const auto& e = s.evidence;
    auto in = [&](const std::string& k) { return input(s.inputs, k); };
    if (s.name == "delta_candidates") {
        for (const auto& d : e.at("deltas")) {
            out.push_back({"k_bound", {{"p", in("p")}, {"delta", json_int(d)}}});
        }
    } else if (s.name == "mu_candidates") {
        const Int p = in("p"), delta = in("delta");
        for (const auto& c : e.at("candidates")) {
            const Int mu = json_int(c.at("mu"));
            CaseKey key = (delta == 16 * p * p && mu == 2 * p - 2)
                              ? CaseKey{"low_mu_classify", {{"p", p}}}
                              : CaseKey{"mu_branch", {{"p", p}, {"delta", delta}, {"mu", mu}}};
            if (std::find(out.begin(), out.end(), key) == out.end()) {
                out.push_back(std::move(key));
            }
        }
    } else if (s.name == "mu_branch" || s.name == "low_mu_classify") {
        const Int p = in("p");
        const Int v = 8 * p * p * p;
        std::vector<std::pair<Int, Int>> sets; // (k, lambda)
        Int mu;
        if (s.name == "mu_branch") {
            mu = in("mu");
            for (const auto& c : e.at("parameter_sets")) {
                sets.emplace_back(json_int(c.at("k")), json_int(c.at("lambda")));
            }
        } else {
            mu = 2 * p - 2;
            if (e.contains("betas")) {
                for (const auto& b : e.at("betas")) {
                    const Int beta = json_int(b);
                    sets.emplace_back(4 * p * p - 2 * p + beta / 2, mu + beta);
                }
            }
        }
        for (const auto& [k, lambda] : sets) {
            out.push_back({"ma1_sizes", {{"v", v}, {"k", k}, {"lambda", lambda}, {"mu", mu}, {"n", sylow2_order}}});
        }
    } else if (s.name == "ma1_sizes") {
        for (const auto& a : e.at("sizes")) {
            out.push_back({"c_system",
                           {{"v", in("v")}, {"k", in("k")}, {"lambda", in("lambda")}, {"mu", in("mu")}, {"a", json_int(a)}}});
        }
    }
    return out;
}

bool matches(const Step& child, const CaseKey& key)
{
    if (child.name != key.first) {
        return false;
    }
    for (const auto& [k, v] : key.second) {
        auto it = std::find_if(child.inputs.begin(), child.inputs.end(), [&](const auto& kv) { return kv.first == k; });
        if (it == child.inputs.end() || it->second != v) {
            return false;
        }
    }
    return true;
}

} // namespace

CertVerdict derive_verdict(const std::vector<Step>& steps)
{
    std::map<std::uint64_t, std::vector<std::uint64_t>> children;
    std::map<std::uint64_t, const Step*> by_id;
    for (const auto& s : steps) {
        if (s.verdict == StepVerdict::failed) {
            return CertVerdict::inconclusive;
        }
        by_id[s.id] = &s;
        children[s.parent].push_back(s.id);
    }
    std::function<bool(std::uint64_t)> closed = [&](std::uint64_t id) -> bool {
        const Step& s = *by_id.at(id);
        const auto& kids = children[id];
        switch (s.verdict) {
        case StepVerdict::contradiction: return true;
        case StepVerdict::failed: return false;
        case StepVerdict::branch: {
            if (kids.empty() || !std::all_of(kids.begin(), kids.end(), closed)) {
                return false;
            }
            try {
                for (const auto& key : required_cases(s)) {
                    if (std::none_of(kids.begin(), kids.end(), [&](auto k) { return matches(*by_id.at(k), key); })) {
                        return false;
                    }
                }
            } catch (const std::exception&) {
                return false; // evidence too malformed to read the case list
            }
            return true;
        }
        case StepVerdict::ok: return std::any_of(kids.begin(), kids.end(), closed);
        }
        return false;
    };
    bool reduced = false;
    bool split_closed = false;
    for (auto id : children[0]) {
        const Step& s = *by_id.at(id);
        if (s.name == "group_reduction") {
            reduced = s.verdict == StepVerdict::ok;
        } else if (s.name == "delta_candidates") {
            split_closed = closed(id);
        }
    }
    return reduced && split_closed ? CertVerdict::nonexistence : CertVerdict::inconclusive;
}

Json to_json(const Certificate& cert)
{
    Json steps = Json::array();
    for (const auto& s : cert.steps) {
        Json inputs = Json::object();
        for (const auto& [k, v] : s.inputs) {
            inputs[k] = v.get_str();
        }
        Json j;
        j["id"] = s.id;
        j["name"] = s.name;
        j["paper_ref"] = s.paper_ref;
        j["inputs"] = inputs;
        j["evidence"] = s.evidence;
        j["verdict"] = to_string(s.verdict);
        j["parent"] = s.parent == 0 ? Json(nullptr) : Json(s.parent);
        steps.push_back(std::move(j));
    }
    Json out;
    out["p"] = cert.p.get_str();
    out["steps"] = std::move(steps);
    out["verdict"] = to_string(cert.verdict);
    return out;
}

Certificate certificate_from_json(const Json& j)
{
    try {
        Certificate cert;
        cert.p = parse_int(j.at("p").get<std::string>());
        for (const auto& s : j.at("steps")) {
            Step step;
            step.id = s.at("id").get<std::uint64_t>();
            step.parent = s.at("parent").is_null() ? 0 : s.at("parent").get<std::uint64_t>();
            step.name = s.at("name").get<std::string>();
            step.paper_ref = s.at("paper_ref").get<std::string>();
            for (const auto& [k, v] : s.at("inputs").items()) {
                step.inputs.emplace_back(k, parse_int(v.get<std::string>()));
            }
            step.evidence = s.at("evidence");
            step.verdict = step_verdict_from_string(s.at("verdict").get<std::string>());
            cert.steps.push_back(std::move(step));
        }
        cert.verdict = cert_verdict_from_string(j.at("verdict").get<std::string>());
        return cert;
    } catch (const nlohmann::json::exception& e) {
        throw StructuralError(std::string("malformed certificate: ") + e.what());
    }
}

ReplayReport replay(const Certificate& cert)
{
    ReplayReport report;
    std::set<std::uint64_t> seen;
    for (const auto& s : cert.steps) {
        ++report.steps_checked;
        const std::string where = "step " + std::to_string(s.id) + " (" + s.name + ")";
        if (s.id != report.steps_checked) {
            report.mismatches.push_back(where + ": ids are not consecutive");
        }
        if (s.parent != 0 && seen.count(s.parent) == 0) {
            report.mismatches.push_back(where + ": parent does not precede it");
        }
        seen.insert(s.id);
        if (s.paper_ref != argument_for(s.name)) {
            report.mismatches.push_back(where + ": argument label differs");
        }
        try {
            const auto outcome = evaluate_step(s.name, s.inputs);
            if (outcome.evidence.dump() != s.evidence.dump()) {
                report.mismatches.push_back(where + ": evidence differs");
            }
            if (outcome.verdict != s.verdict) {
                report.mismatches.push_back(where + ": verdict differs");
            }
        } catch (const std::exception& e) {
            report.mismatches.push_back(where + ": " + e.what());
        }
    }
    report.recomputed_verdict = derive_verdict(cert.steps);
    if (report.recomputed_verdict != cert.verdict) {
        report.mismatches.push_back("certificate verdict differs from the step tree");
    }
    report.ok = report.mismatches.empty();
    return report;
}

} // namespace pds
