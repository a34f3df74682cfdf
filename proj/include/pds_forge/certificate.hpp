#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "pds_forge/integer.hpp"

namespace pds {

using Json = nlohmann::ordered_json;

enum class StepVerdict {
    ok,            ///< the computed fact holds; closes if any child closes
    branch,        ///< case split; closes if every child closes
    contradiction, ///< closes this branch
    failed,        ///< an asserted identity did not hold; the certificate is inconclusive
};

enum class CertVerdict { nonexistence, inconclusive };

std::string to_string(StepVerdict v);
std::string to_string(CertVerdict v);
StepVerdict step_verdict_from_string(const std::string& s);
CertVerdict cert_verdict_from_string(const std::string& s);

/// Named integer inputs, in a fixed order.
using StepInputs = std::vector<std::pair<std::string, Int>>;

struct Step {
    std::uint64_t id = 0;
    std::uint64_t parent = 0; ///< 0 for roots
    std::string name;
    std::string paper_ref;
    StepInputs inputs;
    Json evidence;
    StepVerdict verdict = StepVerdict::ok;
};

struct Certificate {
    Int p;
    std::vector<Step> steps;
    CertVerdict verdict = CertVerdict::inconclusive;
};

struct CertifyOptions {
    /// Sweep a = |D cap N| over [0, 7] instead of the admissible sub-PDS sizes only.
    bool all_a = false;
};

struct StepOutcome {
    Json evidence;
    StepVerdict verdict;
};

/// Recomputes a step's evidence and verdict from its name and inputs alone.
/// This is the single code path used both to build and to replay certificates.
StepOutcome evaluate_step(const std::string& name, const StepInputs& inputs);

/// Short label of the argument a step name stands for.
std::string argument_for(const std::string& name);

/// Runs the whole pipeline for one prime. Throws DomainError unless p is a prime >= 5.
Certificate certify(const Int& p, const CertifyOptions& options = {});

/// NONEXISTENCE iff no step failed, the group reduction leaves only
/// Z_2^3 x Z_p^3, and the Delta case split closes. A BRANCH step closes when it
/// has a closed child for every case its evidence lists (and all children
/// close); an OK step closes when some child closes.
CertVerdict derive_verdict(const std::vector<Step>& steps);

/// Serialisation with stable key order: {p, steps: [{id, name, paper_ref,
/// inputs, evidence, verdict, parent}], verdict}. Integers are decimal strings.
Json to_json(const Certificate& cert);
Certificate certificate_from_json(const Json& j);

struct ReplayReport {
    bool ok = true;
    std::uint64_t steps_checked = 0;
    std::vector<std::string> mismatches;
    CertVerdict recomputed_verdict = CertVerdict::inconclusive;
};

/// Re-derives every step's evidence and the overall verdict and compares them
/// with the stored ones byte-for-byte (as serialised JSON).
ReplayReport replay(const Certificate& cert);

} // namespace pds
