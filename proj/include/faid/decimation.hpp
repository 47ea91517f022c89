#pragma once

#include <array>
#include <bitset>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "faid/decoder.hpp"
#include "faid/graph.hpp"
#include "faid/kernels.hpp"
#include "faid/rules.hpp"

namespace faid {

using LevelTriple = std::array<Level, 3>;

// Monotone-closed set of unordered level triples. Membership is stored for
// every ordering, so lookups need no sort; cardinality counts multisets.
class TripleSet {
public:
    TripleSet() = default;

    bool contains(Level a, Level b, Level c) const {
        return bits_[index(a, b, c)];
    }
    bool contains(const LevelTriple& t) const { return contains(t[0], t[1], t[2]); }
    int cardinality() const { return card_; }
    bool subset_of(const TripleSet& other) const { return (bits_ & ~other.bits_).none(); }
    bool operator==(const TripleSet& other) const { return bits_ == other.bits_; }

    // Violates monotone closure? Returns an offending triple if so.
    std::optional<LevelTriple> closure_violation() const;

    // Canonical members, sorted descending within each triple.
    std::vector<LevelTriple> canonical_triples() const;

    void insert_unordered(LevelTriple t);   // adds all orderings of t

    static size_t index(Level a, Level b, Level c) {
        return static_cast<size_t>((a + 3) * 49 + (b + 3) * 7 + (c + 3));
    }

private:
    std::bitset<343> bits_;
    int card_ = 0;
};

// Componentwise up-closure of unordered generator triples.
TripleSet closure_expand(const std::vector<LevelTriple>& generators);

// Triples led by L3 whose other two entries are at least -L2; the mandatory
// core of every escalation rule.
const TripleSet& required_core();

// Decimation decision: +1 decimates to 0 (channel sign +), -1 decimates to 1
// (channel sign -), 0 leaves the node alone. Sign symmetry is built in, so a
// node can only ever be decimated to its received value.
inline int decimation_decision(const TripleSet& xi, int channel_sign, Level m1, Level m2, Level m3) {
    if (channel_sign > 0) return xi.contains(m1, m2, m3) ? 1 : 0;
    return xi.contains(negate(m1), negate(m2), negate(m3)) ? -1 : 0;
}

// Schedule definition parsed from file: initial-rule generators, ordered
// extension triples, escalation sizes, and the two update rule names.
struct ScheduleSpec {
    std::string name;
    std::vector<LevelTriple> initial_generators;   // up-closure gives the one-shot rule
    std::vector<LevelTriple> extension;            // ordered extras beyond the core
    std::vector<int> sizes;                        // escalation cardinalities
    std::string decim_rule;                        // update rule during decimation
    std::string residual_rule;                     // update rule after decimation
};

struct RuleSchedule {
    std::string name;
    TripleSet initial;                   // applied once after the opening iterations
    std::vector<TripleSet> escalation;   // nested, increasingly aggressive
    std::vector<LevelTriple> extension;
    std::vector<int> sizes;
    std::string decim_rule;
    std::string residual_rule;

    int rounds() const { return static_cast<int>(escalation.size()); }
};

// Materializes and checks every schedule invariant: sizes strictly
// increasing, first >= core, last = core + extension, every derived set
// monotone-closed and nested, extension disjoint from the core.
RuleSchedule build_schedule(const ScheduleSpec& spec);

ScheduleSpec parse_schedule(const std::string& text);
ScheduleSpec load_schedule_file(const std::string& path);
std::vector<LevelTriple> parse_triples(const std::string& text);

// -- adaptive decimation decoder ------------------------------------------

struct DecimationEvent {
    int32_t var;
    int8_t gamma;
};

struct AdfaidTrace {
    struct Attempt {
        int rule_index = 0;                                  // 1-based j
        std::vector<std::vector<DecimationEvent>> rounds;    // per decimation round
        int iterations = 0;
        bool converged = false;
    };
    std::vector<Attempt> attempts;
    int final_rule_index = 0;
    NodeSet residual;                    // non-decimated set of the last attempt
    std::vector<int8_t> final_gamma;
    bool error_decimated = false;        // any support node fixed (to its wrong value)
};

struct AdfaidOptions {
    int residual_iterations = 100;   // update budget for the post-decimation phase
    bool check_fixpoint = true;      // replay one extra round after each fixpoint
    bool monitor_l3 = false;         // record strong-message provenance checks
    kern::Isa isa = kern::Isa::auto_detect;
};

struct AdfaidCounters {
    long safety_violations = 0;      // decimation against the channel sign
    long fixpoint_violations = 0;    // extra round decimated a node
    long l3_monitor_checks = 0;      // strong messages seen in the opening two iterations
    long l3_monitor_violations = 0;  // ... not explained by fully decimated neighbors
    long lemma_checks = 0;           // correct nodes due decimation per the core rule
    long lemma_violations = 0;
};

class AdfaidDecoder {
public:
    AdfaidDecoder(const TannerGraph& g, const RuleSchedule& schedule,
                  const VariableUpdateRule& decim_rule, const VariableUpdateRule& residual_rule,
                  AdfaidOptions opt = {});
    AdfaidDecoder(std::shared_ptr<const kern::Plan> plan, const TannerGraph& g,
                  const RuleSchedule& schedule, const kern::RuleTable& decim_table,
                  const kern::RuleTable& residual_table, AdfaidOptions opt = {});

    DecodeOutcome decode(std::span<const uint8_t> channel_bits, AdfaidTrace* trace = nullptr);

    const AdfaidCounters& counters() const { return counters_; }
    void reset_counters() { counters_ = {}; }
    const MessageEngine& engine() const { return engine_; }

private:
    int apply_rule(const TripleSet& xi, bool all_nodes, std::vector<DecimationEvent>* events);
    void monitor_l3_messages(int iters_since_reset);

    const RuleSchedule* schedule_;
    kern::RuleTable decim_table_;
    kern::RuleTable residual_table_;
    AdfaidOptions opt_;
    MessageEngine engine_;
    AdfaidCounters counters_;
};

// Residual graph of a finished decode: the non-decimated variables.
NodeSet residual_set(std::span<const int8_t> gamma, int n);

} // namespace faid
