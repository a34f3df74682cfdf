#include "pds_forge/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <regex>
#include <sstream>
#include <thread>

#include "CLI11.hpp"

#include "pds_forge/certificate.hpp"
#include "pds_forge/group.hpp"
#include "pds_forge/plane.hpp"
#include "pds_forge/searcher.hpp"
#include "pds_forge/sieve.hpp"

namespace pds {

namespace {

struct RunConfig {
    std::string v;
    std::string prime;
    std::string range;
    std::string group;
    std::string params;
    std::string set_file;
    std::string cert_file;
    std::string out_dir;
    bool json = false;
    bool all_a = false;
    bool no_lmt = false;
    bool full = false;
    std::uint64_t sylow = 0;
    unsigned jobs = 1;
};

unsigned default_jobs()
{
    if (const char* env = std::getenv("PDS_FORGE_JOBS")) {
        try {
            const auto n = std::stoul(env);
            if (n > 0) {
                return static_cast<unsigned>(n);
            }
        } catch (const std::exception&) {
        }
        throw StructuralError(std::string("PDS_FORGE_JOBS must be a positive integer, got '") + env + "'");
    }
    return 1;
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw StructuralError("cannot read " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Json params_json(const PdsParams& P)
{
    return Json::array({P.v.get_str(), P.k.get_str(), P.lambda.get_str(), P.mu.get_str()});
}

std::string element_text(const GroupSpec& group, std::uint32_t g)
{
    const auto e = element_at(group, g);
    if (e.coords.size() == 1) {
        return std::to_string(e.coords[0]);
    }
    std::string s = "(";
    for (std::size_t i = 0; i < e.coords.size(); ++i) {
        s += (i ? "," : "") + std::to_string(e.coords[i]);
    }
    return s + ")";
}

std::string set_text(const CandidateSet& D)
{
    std::string s = "{";
    for (std::size_t i = 0; i < D.members.size(); ++i) {
        s += (i ? " " : "") + element_text(D.group, D.members[i]);
    }
    return s + "}";
}

// ---------------------------------------------------------------- sieve

int cmd_sieve(const RunConfig& cfg, std::ostream& out)
{
    const Int v = parse_int(cfg.v);
    const auto feasible = enumerate_feasible(v, cfg.jobs);
    if (cfg.json) {
        Json list = Json::array();
        for (const auto& P : feasible) {
            list.push_back(params_json(P));
        }
        out << Json{{"v", v.get_str()}, {"count", feasible.size()}, {"feasible", list}}.dump(2) << '\n';
    } else {
        for (const auto& P : feasible) {
            out << P.to_string() << '\n';
        }
    }
    return exit_ok;
}

// ---------------------------------------------------------------- certify

std::vector<Int> primes_to_certify(const RunConfig& cfg)
{
    if (!cfg.prime.empty()) {
        return {parse_int(cfg.prime)};
    }
    static const std::regex range_re(R"(\s*(\d+)\s*\.\.\s*(\d+)\s*)");
    std::smatch m;
    if (!std::regex_match(cfg.range, m, range_re)) {
        throw StructuralError("prime range must look like a..b, got '" + cfg.range + "'");
    }
    const Int a = parse_int(m[1]), b = parse_int(m[2]);
    if (a > b) {
        throw StructuralError("prime range " + cfg.range + " has a > b");
    }
    std::vector<Int> primes;
    for (Int p = std::max(a, Int(5)); p <= b; ++p) {
        if (is_prime(p)) {
            primes.push_back(p);
        }
    }
    return primes;
}

void print_tree(const Certificate& cert, std::ostream& out)
{
    std::map<std::uint64_t, std::size_t> depth;
    for (const auto& s : cert.steps) {
        const std::size_t d = s.parent == 0 ? 0 : depth[s.parent] + 1;
        depth[s.id] = d;
        std::string args;
        for (const auto& [k, v] : s.inputs) {
            if (k != "p") {
                args += (args.empty() ? "" : " ") + k + "=" + v.get_str();
            }
        }
        out << std::string(2 * d, ' ') << s.name;
        if (!args.empty()) {
            out << " [" << args << "]";
        }
        out << ": " << to_string(s.verdict) << '\n';
    }
}

int cmd_certify(const RunConfig& cfg, std::ostream& out)
{
    const auto primes = primes_to_certify(cfg);
    const bool single = !cfg.prime.empty();
    std::vector<Certificate> certs(primes.size());
    std::vector<std::string> errors(primes.size());

    CertifyOptions options;
    options.all_a = cfg.all_a;
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < primes.size(); i = next++) {
            try {
                certs[i] = certify(primes[i], options);
            } catch (const DomainError& e) {
                errors[i] = e.what();
            }
        }
    };
    const unsigned jobs = std::max(1u, std::min<unsigned>(cfg.jobs, static_cast<unsigned>(primes.size())));
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned j = 0; j < jobs; ++j) {
            pool.emplace_back(worker);
        }
        for (auto& t : pool) {
            t.join();
        }
    }
    for (const auto& e : errors) {
        if (!e.empty()) {
            throw DomainError(e);
        }
    }

    if (!cfg.out_dir.empty()) {
        std::filesystem::create_directories(cfg.out_dir);
        for (const auto& c : certs) {
            const auto path = std::filesystem::path(cfg.out_dir) / ("cert_p" + c.p.get_str() + ".json");
            std::ofstream f(path, std::ios::binary);
            f << to_json(c).dump(2) << '\n';
            if (!f) {
                throw StructuralError("cannot write " + path.string());
            }
        }
    }

    bool all_nonexistence = true;
    if (cfg.json && cfg.out_dir.empty()) {
        if (single) {
            out << to_json(certs.front()).dump(2) << '\n';
        } else {
            Json list = Json::array();
            for (const auto& c : certs) {
                list.push_back(to_json(c));
            }
            out << list.dump(2) << '\n';
        }
    } else if (single && cfg.out_dir.empty()) {
        print_tree(certs.front(), out);
    }
    for (const auto& c : certs) {
        all_nonexistence = all_nonexistence && c.verdict == CertVerdict::nonexistence;
        if (!cfg.json || !cfg.out_dir.empty()) {
            out << "p=" << c.p.get_str() << ' ' << to_string(c.verdict) << " (" << c.steps.size() << " steps)\n";
        }
    }
    return all_nonexistence ? exit_ok : exit_inconclusive;
}

// ---------------------------------------------------------------- search / verify

int cmd_search(const RunConfig& cfg, std::ostream& out)
{
    const auto group = GroupSpec::parse(cfg.group);
    const auto P = PdsParams::parse(cfg.params);
    SearchOptions options;
    // Orbit pruning is only sound for a square Delta; otherwise search inverse pairs.
    options.prune_lmt = !cfg.no_lmt && is_square(P.delta());
    options.jobs = cfg.jobs;
    if (cfg.sylow != 0) {
        options.filter = sylow_intersection_filter(group, P, cfg.sylow);
    }
    const auto r = search(group, P, options);
    if (cfg.json) {
        Json sets = Json::array();
        for (const auto& D : r.sets) {
            sets.push_back(D.members);
        }
        Json j;
        j["group"] = group.to_string();
        j["params"] = params_json(P);
        j["prune_lmt"] = options.prune_lmt;
        j["units"] = r.stats.units;
        j["nodes"] = r.stats.nodes;
        j["count"] = r.sets.size();
        j["sets"] = sets;
        out << j.dump(2) << '\n';
    } else {
        out << group.pretty() << ' ' << P.to_string() << ": " << r.sets.size() << " set"
            << (r.sets.size() == 1 ? "" : "s") << " (" << (options.prune_lmt ? "multiplier orbits" : "inverse pairs")
            << ", " << r.stats.units << " units)\n";
        for (const auto& D : r.sets) {
            out << set_text(D) << '\n';
        }
    }
    return exit_ok;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out)
{
    const auto group = GroupSpec::parse(cfg.group);
    const auto P = PdsParams::parse(cfg.params);
    const auto D = parse_set_file(group, read_file(cfg.set_file));
    const auto r = verify_pds(D, P);
    if (cfg.json) {
        Json j;
        j["group"] = group.to_string();
        j["params"] = params_json(P);
        j["size"] = D.size();
        j["order_matches"] = r.order_matches;
        j["size_matches"] = r.size_matches;
        j["identity_excluded"] = r.identity_excluded;
        j["inverse_closed"] = r.inverse_closed;
        j["counts_match"] = r.counts_match;
        j["valid"] = r.valid;
        j["trivial"] = r.trivial;
        j["witness"] = r.witness ? Json(*r.witness) : Json(nullptr);
        out << j.dump(2) << '\n';
    } else {
        out << (r.valid ? "valid" : "invalid") << ", " << (r.trivial ? "trivial" : "nontrivial") << '\n';
        if (!r.valid) {
            if (!r.order_matches) out << "  group order differs from v\n";
            if (!r.size_matches) out << "  |D| differs from k\n";
            if (!r.identity_excluded) out << "  D contains the identity\n";
            if (!r.inverse_closed) out << "  D is not closed under inverses\n";
            if (r.witness) out << "  wrong count at " << element_text(group, *r.witness) << '\n';
        }
    }
    return exit_ok;
}

// ---------------------------------------------------------------- plane / replay

int cmd_plane(const RunConfig& cfg, std::ostream& out)
{
    const auto plane = build_plane(to_u64(parse_int(cfg.prime)));
    const auto p = plane.order();
    Json j;
    j["p"] = p;
    j["points"] = plane.size();
    j["lines"] = plane.size();
    j["points_per_line"] = plane.points_on_line(0).size();
    j["lines_per_point"] = plane.lines_through(0).size();
    j["pencil_partition_at_point_0"] = plane.pencil_partitions(0);
    bool ok = j["pencil_partition_at_point_0"].get<bool>();
    if (cfg.full) {
        const auto s = plane.verify();
        j["pairs_checked"] = s.pairs_checked;
        j["bad_pairs"] = s.bad_pairs;
        j["projective_plane"] = s.is_projective_plane(p);
        ok = ok && s.is_projective_plane(p);
    }
    if (cfg.json) {
        out << j.dump(2) << '\n';
    } else {
        out << "PG(2," << p << "): " << plane.size() << " points, " << plane.size() << " lines, "
            << j["points_per_line"].get<std::size_t>() << " points per line, "
            << j["lines_per_point"].get<std::size_t>() << " lines per point\n";
        if (cfg.full) {
            out << "pairs checked " << j["pairs_checked"].get<std::uint64_t>() << ", bad pairs "
                << j["bad_pairs"].get<std::uint64_t>() << '\n';
        }
        out << (ok ? "ok" : "NOT a projective plane") << '\n';
    }
    return ok ? exit_ok : exit_inconclusive;
}

int cmd_replay(const RunConfig& cfg, std::ostream& out)
{
    Json j;
    try {
        j = Json::parse(read_file(cfg.cert_file));
    } catch (const nlohmann::json::parse_error& e) {
        throw StructuralError(std::string("certificate is not JSON: ") + e.what());
    }
    const auto cert = certificate_from_json(j);
    const auto r = replay(cert);
    out << "p=" << cert.p.get_str() << ' ' << r.steps_checked << " steps, recomputed verdict "
        << to_string(r.recomputed_verdict) << '\n';
    for (const auto& m : r.mismatches) {
        out << "  mismatch: " << m << '\n';
    }
    out << (r.ok ? "replay ok" : "replay FAILED") << '\n';
    return r.ok && r.recomputed_verdict == CertVerdict::nonexistence ? exit_ok : exit_inconclusive;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Certify, search and verify regular partial difference sets.", "pds_forge"};
    app.require_subcommand(1, 1);
    RunConfig cfg;
    bool jobs_given = false;
    auto jobs_flag = [&](CLI::App* sub) {
        sub->add_option_function<unsigned>(
               "--jobs,-j",
               [&](unsigned n) {
                   cfg.jobs = n;
                   jobs_given = true;
               },
               "Worker threads (default 1, or PDS_FORGE_JOBS)")
            ->check(CLI::PositiveNumber);
    };

    auto* sieve = app.add_subcommand("sieve", "List feasible parameter sets for a group order");
    sieve->add_option("--v,-v", cfg.v, "Group order")->required();
    sieve->add_flag("--json", cfg.json, "JSON output");
    jobs_flag(sieve);

    auto* cert = app.add_subcommand("certify", "Build nonexistence certificates for order 8p^3");
    auto* prime_opt = cert->add_option("--prime,-p", cfg.prime, "A prime p >= 5");
    auto* range_opt = cert->add_option("--range,-r", cfg.range, "Prime range a..b");
    prime_opt->excludes(range_opt);
    cert->add_flag("--json", cfg.json, "JSON output");
    cert->add_option("--out,-o", cfg.out_dir, "Directory for cert_p<value>.json files");
    cert->add_flag("--all-a", cfg.all_a, "Sweep |D cap N| over 0..7");
    jobs_flag(cert);

    auto* srch = app.add_subcommand("search", "Exhaustive search for regular PDS");
    srch->add_option("--group,-g", cfg.group, "Factor list, e.g. 5,5")->required();
    srch->add_option("--params", cfg.params, "v,k,lambda,mu")->required();
    srch->add_flag("--no-lmt", cfg.no_lmt, "Search over inverse pairs instead of multiplier orbits");
    srch->add_option("--sylow", cfg.sylow, "Keep only sets meeting the Sylow subgroup in an admissible size");
    srch->add_flag("--json", cfg.json, "JSON output");
    jobs_flag(srch);

    auto* ver = app.add_subcommand("verify", "Check a set file against parameters");
    ver->add_option("--group,-g", cfg.group, "Factor list")->required();
    ver->add_option("--set,-s", cfg.set_file, "Set file")->required();
    ver->add_option("--params", cfg.params, "v,k,lambda,mu")->required();
    ver->add_flag("--json", cfg.json, "JSON output");

    auto* pln = app.add_subcommand("plane", "Build PG(2,p) from the subgroups of Z_p^3");
    pln->add_option("--prime,-p", cfg.prime, "A prime")->required();
    pln->add_flag("--full", cfg.full, "Check every point pair");
    pln->add_flag("--json", cfg.json, "JSON output");

    auto* rep = app.add_subcommand("replay", "Recompute a certificate file");
    rep->add_option("--cert,-c", cfg.cert_file, "Certificate JSON")->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
        if (cert->parsed() && cfg.prime.empty() && cfg.range.empty()) {
            throw CLI::RequiredError("--prime or --range");
        }
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (!jobs_given) {
            cfg.jobs = default_jobs();
        }
        if (sieve->parsed()) return cmd_sieve(cfg, out);
        if (cert->parsed()) return cmd_certify(cfg, out);
        if (srch->parsed()) return cmd_search(cfg, out);
        if (ver->parsed()) return cmd_verify(cfg, out);
        if (pln->parsed()) return cmd_plane(cfg, out);
        if (rep->parsed()) return cmd_replay(cfg, out);
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return exit_domain;
    } catch (const StructuralError& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    }
    return exit_usage;
}

} // namespace pds
