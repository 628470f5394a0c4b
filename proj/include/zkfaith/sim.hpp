#pragma once

// Scripted adversaries against honest role implementations. Each trial runs
// setup, a (possibly deviating) request, issuance, an optional update and a
// show, then tallies what the honest parties accepted.

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "zkfaith/protocol.hpp"

namespace zkfaith {

enum class Expect : std::uint8_t { accept, reject };
const char* to_string(Expect e);

struct AdversaryStrategy {
    std::string id;
    std::string deviation;
    Expect expected;
};

// Registered strategies, in a fixed order.
const std::vector<AdversaryStrategy>& strategies();
const AdversaryStrategy& find_strategy(std::string_view id);  // UsageError if unknown

struct ExperimentResult {
    std::string strategy;
    Expect expected = Expect::reject;
    std::uint64_t trials = 0;
    std::uint64_t attempts = 0;  // attacks tried; several per trial for the sweeping strategies
    std::uint64_t accepts = 0;
    std::map<std::string, std::uint64_t> outcomes;  // rejection reason -> count
    Bytes digest;                                     // over every message of every trial
    bool pass = false;

    // "strategy=<id> trials=<n> attempts=<n> accepts=<n> expected=<e> digest=<hex> PASS|FAIL"
    std::string report_line() const;
};

// Reference day for documents and age predicates.
inline constexpr std::int64_t kSimToday = 19875;  // 2024-06-01

// Random document valid on `today`: birth dates 19..80 years back, expiry
// up to ten years ahead, optional fields present half the time.
Document sample_document(const Schema& schema, const std::string& wid, Rng& rng, std::int64_t today = kSimToday);

// The criteria exercised per schema: bare possession, one disclosure, and
// disclosure plus age and validity predicates.
std::vector<Criterion> sample_criteria(const Schema& schema, const std::string& verifier_id,
                                       std::int64_t today = kSimToday);

// Trial i draws from rng_seed forked by (strategy, i), so results do not
// depend on `threads`.
ExperimentResult run_upriv_experiment(const PublicParams& pp, std::string_view strategy, std::uint64_t trials,
                                      std::uint64_t seed, unsigned threads = 1);

struct UnlinkabilityReport {
    std::uint64_t pairs = 0;
    std::uint64_t collisions = 0;  // proof components equal across the two shows of a pair
    bool same_shape = false;       // all presentations encode to one length
    double match_rate = 0;         // byte agreement within pairs
    double chance_rate = 0;        // byte agreement between unrelated shows
    double z = 0;
    bool pass = false;

    std::string report_line() const;
};

// Shows one credential to two verifiers `pairs` times. The two shows of a
// pair fall in consecutive epochs, since within one epoch the revocation
// tag is shared by design. Pass iff no collisions and |z| < 3.
UnlinkabilityReport run_unlinkability_trial(const PublicParams& pp, std::uint64_t pairs, std::uint64_t seed);

// Randomized components of a presentation: everything but the statement.
std::vector<Bytes> proof_components(const Presentation& p);

}  // namespace zkfaith
