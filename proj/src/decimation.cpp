#include "faid/decimation.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace faid {

namespace {

LevelTriple sorted_desc(LevelTriple t) {
    std::sort(t.begin(), t.end(), std::greater<>());
    return t;
}

bool dominates(const LevelTriple& a, const LevelTriple& b) {
    return a[0] >= b[0] && a[1] >= b[1] && a[2] >= b[2];
}

void check_level(Level v) {
    if (v < -3 || v > 3) throw std::out_of_range("triple entry outside the 7-level alphabet");
}

} // namespace

void TripleSet::insert_unordered(LevelTriple t) {
    for (Level v : t) check_level(v);
    LevelTriple s = sorted_desc(t);
    if (!contains(s[0], s[1], s[2])) ++card_;
    // all orderings, so membership tests never sort
    int idx[3] = {0, 1, 2};
    std::sort(idx, idx + 3);
    do {
        bits_.set(index(t[static_cast<size_t>(idx[0])], t[static_cast<size_t>(idx[1])],
                        t[static_cast<size_t>(idx[2])]));
    } while (std::next_permutation(idx, idx + 3));
}

std::optional<LevelTriple> TripleSet::closure_violation() const {
    // monotone closure is equivalent to closure under +1 bumps
    for (Level a = -3; a <= 3; ++a)
        for (Level b = -3; b <= 3; ++b)
            for (Level c = -3; c <= 3; ++c) {
                if (!contains(a, b, c)) continue;
                if ((a < 3 && !contains(static_cast<Level>(a + 1), b, c)) ||
                    (b < 3 && !contains(a, static_cast<Level>(b + 1), c)) ||
                    (c < 3 && !contains(a, b, static_cast<Level>(c + 1))))
                    return LevelTriple{a, b, c};
            }
    return std::nullopt;
}

std::vector<LevelTriple> TripleSet::canonical_triples() const {
    std::vector<LevelTriple> out;
    for (Level a = 3; a >= -3; --a)
        for (Level b = a; b >= -3; --b)
            for (Level c = b; c >= -3; --c)
                if (contains(a, b, c)) out.push_back({a, b, c});
    return out;
}

TripleSet closure_expand(const std::vector<LevelTriple>& generators) {
    std::vector<LevelTriple> gens;
    gens.reserve(generators.size());
    for (const auto& g : generators) {
        for (Level v : g) check_level(v);
        gens.push_back(sorted_desc(g));
    }
    TripleSet xi;
    for (Level a = 3; a >= -3; --a)
        for (Level b = a; b >= -3; --b)
            for (Level c = b; c >= -3; --c) {
                LevelTriple t{a, b, c};
                for (const auto& g : gens)
                    if (dominates(t, g)) {
                        xi.insert_unordered(t);
                        break;
                    }
            }
    return xi;
}

const TripleSet& required_core() {
    static const TripleSet core = closure_expand({{3, -2, -2}});
    return core;
}

RuleSchedule build_schedule(const ScheduleSpec& spec) {
    RuleSchedule sched;
    sched.name = spec.name;
    sched.decim_rule = spec.decim_rule;
    sched.residual_rule = spec.residual_rule;
    sched.initial = closure_expand(spec.initial_generators);
    sched.sizes = spec.sizes;

    const TripleSet& core = required_core();
    sched.extension.reserve(spec.extension.size());
    for (const auto& t : spec.extension) {
        LevelTriple s = sorted_desc(t);
        if (core.contains(s[0], s[1], s[2]))
            throw std::runtime_error("schedule: extension triple overlaps the required core");
        if (std::find(sched.extension.begin(), sched.extension.end(), s) != sched.extension.end())
            throw std::runtime_error("schedule: duplicate extension triple");
        sched.extension.push_back(s);
    }

    if (spec.sizes.empty()) throw std::runtime_error("schedule: empty size list");
    for (size_t i = 0; i + 1 < spec.sizes.size(); ++i)
        if (spec.sizes[i] >= spec.sizes[i + 1])
            throw std::runtime_error("schedule: sizes must be strictly increasing");
    if (spec.sizes.front() < core.cardinality())
        throw std::runtime_error("schedule: first size below the required core (" +
                                 std::to_string(core.cardinality()) + ")");
    int full = core.cardinality() + static_cast<int>(sched.extension.size());
    if (spec.sizes.back() != full)
        throw std::runtime_error("schedule: last size must equal core plus extension (" +
                                 std::to_string(full) + ")");

    for (int size : spec.sizes) {
        TripleSet xi = core;
        int want = size - core.cardinality();
        for (int i = 0; i < want; ++i) xi.insert_unordered(sched.extension[static_cast<size_t>(i)]);
        if (xi.cardinality() != size)
            throw std::runtime_error("schedule: derived rule of size " + std::to_string(size) +
                                     " not reachable from the extension order");
        if (auto bad = xi.closure_violation())
            throw std::runtime_error(
                "schedule: derived rule of size " + std::to_string(size) +
                " is not monotone-closed at (" + std::to_string((*bad)[0]) + "," +
                std::to_string((*bad)[1]) + "," + std::to_string((*bad)[2]) + ")");
        if (!sched.escalation.empty() && !sched.escalation.back().subset_of(xi))
            throw std::runtime_error("schedule: escalation rules must be nested");
        sched.escalation.push_back(std::move(xi));
    }
    return sched;
}

namespace {

struct SectionParser {
    std::istringstream in;
    int lineno = 0;
    std::string line;

    explicit SectionParser(const std::string& text) : in(text) {}

    [[noreturn]] void fail(const std::string& what) const {
        throw std::runtime_error("schedule: line " + std::to_string(lineno) + ": " + what);
    }

    bool next() {
        while (std::getline(in, line)) {
            ++lineno;
            size_t h = line.find('#');
            if (h != std::string::npos) line.erase(h);
            size_t b = line.find_last_not_of(" \t\r");
            if (b == std::string::npos) continue;
            line.erase(b + 1);
            return true;
        }
        return false;
    }
};

std::vector<LevelTriple> triples_from_stream(std::istringstream& iss, SectionParser& p) {
    std::vector<LevelTriple> out;
    int a;
    while (iss >> a) {
        int b, c;
        if (!(iss >> b >> c)) p.fail("triple needs three entries");
        out.push_back({static_cast<Level>(a), static_cast<Level>(b), static_cast<Level>(c)});
    }
    if (!iss.eof()) p.fail("bad triple entry");
    return out;
}

} // namespace

ScheduleSpec parse_schedule(const std::string& text) {
    ScheduleSpec spec;
    SectionParser p(text);
    if (!p.next()) p.fail("empty schedule file");
    {
        std::istringstream head(p.line);
        std::string tag, name;
        head >> tag >> name;
        if (tag != "[schedule" || name.empty() || name.back() != ']')
            p.fail("expected [schedule <name>]");
        name.pop_back();
        spec.name = name;
    }
    std::string pending_list;   // "initial" or "extension" while a block is open
    while (p.next()) {
        if (p.line[p.line.find_first_not_of(" \t")] == '[')
            p.fail("only one schedule section per file");
        size_t eq = p.line.find('=');
        if (eq == std::string::npos) {
            if (pending_list.empty()) p.fail("expected key = value");
            std::istringstream iss(p.line);
            auto ts = triples_from_stream(iss, p);
            auto& dst = pending_list == "initial" ? spec.initial_generators : spec.extension;
            dst.insert(dst.end(), ts.begin(), ts.end());
            continue;
        }
        std::istringstream keyss(p.line.substr(0, eq));
        std::string key;
        keyss >> key;
        std::string val = p.line.substr(eq + 1);
        std::istringstream iss(val);
        if (key == "initial" || key == "extension") {
            pending_list = key;
            auto ts = triples_from_stream(iss, p);
            auto& dst = key == "initial" ? spec.initial_generators : spec.extension;
            dst.insert(dst.end(), ts.begin(), ts.end());
        } else if (key == "sizes") {
            pending_list.clear();
            int v;
            while (iss >> v) spec.sizes.push_back(v);
            if (!iss.eof()) p.fail("bad size entry");
        } else if (key == "decim_rule") {
            pending_list.clear();
            iss >> spec.decim_rule;
        } else if (key == "residual_rule") {
            pending_list.clear();
            iss >> spec.residual_rule;
        } else {
            p.fail("unknown key '" + key + "'");
        }
    }
    if (spec.decim_rule.empty() || spec.residual_rule.empty())
        throw std::runtime_error("schedule '" + spec.name + "' must name decim_rule and residual_rule");
    return spec;
}

ScheduleSpec load_schedule_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open schedule file: " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_schedule(ss.str());
}

std::vector<LevelTriple> parse_triples(const std::string& text) {
    std::vector<LevelTriple> out;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t h = line.find('#');
        if (h != std::string::npos) line.erase(h);
        std::istringstream iss(line);
        int a, b, c;
        if (iss >> a) {
            if (!(iss >> b >> c))
                throw std::runtime_error("triples: line " + std::to_string(lineno) +
                                         ": triple needs three entries");
            out.push_back({static_cast<Level>(a), static_cast<Level>(b), static_cast<Level>(c)});
        }
    }
    return out;
}

// -- decoder ----------------------------------------------------------------

AdfaidDecoder::AdfaidDecoder(const TannerGraph& g, const RuleSchedule& schedule,
                             const VariableUpdateRule& decim_rule,
                             const VariableUpdateRule& residual_rule, AdfaidOptions opt)
    : AdfaidDecoder(std::make_shared<kern::Plan>(kern::Plan::build(g)), g, schedule,
                    kern::tabulate(decim_rule), kern::tabulate(residual_rule), opt) {
    for (const auto* r : {&decim_rule, &residual_rule}) {
        auto bad = validate_rule(*r);
        if (!bad.empty())
            throw std::invalid_argument("adfaid rule '" + r->name + "' invalid: " + bad.front());
    }
}

AdfaidDecoder::AdfaidDecoder(std::shared_ptr<const kern::Plan> plan, const TannerGraph& g,
                             const RuleSchedule& schedule, const kern::RuleTable& decim_table,
                             const kern::RuleTable& residual_table, AdfaidOptions opt)
    : schedule_(&schedule), decim_table_(decim_table), residual_table_(residual_table),
      opt_(opt), engine_(g, std::move(plan), opt.isa) {
    if (schedule.escalation.empty()) throw std::invalid_argument("adfaid: empty schedule");
    if (opt_.residual_iterations < 1) throw std::invalid_argument("residual_iterations must be >= 1");
}

int AdfaidDecoder::apply_rule(const TripleSet& xi, bool all_nodes,
                              std::vector<DecimationEvent>* events) {
    const int n = engine_.n();
    auto chan = engine_.channel_bits();
    const bool lemma_applies = !all_nodes && opt_.monitor_l3;   // escalation rules contain the core
    for (int v = 0; v < n; ++v) {
        if (engine_.decimation(v) != 0) {
            if (all_nodes)
                throw std::logic_error("initial decimation round saw a decimated node");
            continue;
        }
        auto in = engine_.incoming(v);
        int sign = chan[static_cast<size_t>(v)] ? -1 : 1;
        int g = decimation_decision(xi, sign, in[0], in[1], in[2]);
        if (lemma_applies && !chan[static_cast<size_t>(v)] &&
            (in[0] == 3 || in[1] == 3 || in[2] == 3)) {
            bool hypothesis = true;
            for (int32_t c : engine_.graph().var_adj[static_cast<size_t>(v)]) {
                for (int32_t u : engine_.graph().chk_adj[static_cast<size_t>(c)])
                    if (u != v && chan[static_cast<size_t>(u)] && engine_.decimation(u) != 0)
                        hypothesis = false;
            }
            if (hypothesis) {
                ++counters_.lemma_checks;
                if (g == 0) ++counters_.lemma_violations;
            }
        }
        if (g == 0) continue;
        if ((g > 0) == (chan[static_cast<size_t>(v)] != 0)) ++counters_.safety_violations;
        engine_.set_decimation(v, static_cast<int8_t>(g));
        if (events) events->push_back({v, static_cast<int8_t>(g)});
    }
    int nb = 0;
    for (int v = 0; v < n; ++v) nb += engine_.decimation(v) != 0;
    return nb;
}

void AdfaidDecoder::monitor_l3_messages(int iters_since_reset) {
    if (!opt_.monitor_l3 || iters_since_reset > 2) return;
    const auto& g = engine_.graph();
    for (int v = 0; v < g.n; ++v) {
        auto in = engine_.incoming(v);
        for (int t = 0; t < 3; ++t) {
            if (in[static_cast<size_t>(t)] != 3 && in[static_cast<size_t>(t)] != -3) continue;
            ++counters_.l3_monitor_checks;
            int32_t c = g.var_adj[static_cast<size_t>(v)][static_cast<size_t>(t)];
            for (int32_t u : g.chk_adj[static_cast<size_t>(c)])
                if (u != v && engine_.decimation(u) == 0) {
                    ++counters_.l3_monitor_violations;
                    break;
                }
        }
    }
}

DecodeOutcome AdfaidDecoder::decode(std::span<const uint8_t> channel_bits, AdfaidTrace* trace) {
    engine_.start(channel_bits);
    DecodeOutcome out;
    if (trace) *trace = {};

    auto finish = [&](bool converged) {
        out.converged = converged;
        out.bits.assign(engine_.bits().begin(), engine_.bits().end());
        if (trace) {
            trace->final_gamma.resize(static_cast<size_t>(engine_.n()));
            for (int v = 0; v < engine_.n(); ++v)
                trace->final_gamma[static_cast<size_t>(v)] = engine_.decimation(v);
            trace->residual = residual_set(trace->final_gamma, engine_.n());
            trace->error_decimated = false;
            for (int v = 0; v < engine_.n(); ++v)
                if (channel_bits[static_cast<size_t>(v)] && engine_.decimation(v) != 0)
                    trace->error_decimated = true;
        }
        return out;
    };

    if (engine_.syndrome_ok()) return finish(true);

    int total_iters = 0;
    const int nrules = schedule_->rounds();
    for (int j = 1; j <= nrules; ++j) {
        AdfaidTrace::Attempt attempt;
        attempt.rule_index = j;
        if (trace) trace->final_rule_index = j;
        engine_.clear_decimation();
        engine_.clear_messages();
        int attempt_iters = 0;
        auto pass = [&](const kern::RuleTable& table, int count, bool monitored) {
            for (int t = 1; t <= count; ++t) {
                bool ok = engine_.iterate(table);
                ++total_iters;
                ++attempt_iters;
                if (monitored) monitor_l3_messages(t);
                if (ok) return true;
            }
            return false;
        };
        auto record_attempt = [&](bool converged) {
            attempt.iterations = attempt_iters;
            attempt.converged = converged;
            out.iterations = total_iters;
            if (trace) trace->attempts.push_back(std::move(attempt));
        };

        // opening iterations, then the one-shot initial rule on every node
        if (pass(decim_table_, 3, true)) {
            record_attempt(true);
            return finish(true);
        }
        std::vector<DecimationEvent> events;
        apply_rule(schedule_->initial, true, &events);
        attempt.rounds.push_back(std::move(events));
        engine_.clear_messages();

        // decimation rounds with the current escalation rule until fixpoint
        const TripleSet& xi = schedule_->escalation[static_cast<size_t>(j - 1)];
        int fixed = 0;
        while (true) {
            if (pass(decim_table_, 2, true)) {
                record_attempt(true);
                return finish(true);
            }
            events.clear();
            int nb = apply_rule(xi, false, &events);
            attempt.rounds.push_back(std::move(events));
            engine_.clear_messages();
            if (nb > fixed) {
                fixed = nb;
            } else {
                break;
            }
        }
        if (opt_.check_fixpoint) {
            // one replayed round must decimate nothing new
            engine_.iterate(decim_table_);
            engine_.iterate(decim_table_);
            int nb = [&] {
                int would = 0;
                auto chan = engine_.channel_bits();
                for (int v = 0; v < engine_.n(); ++v) {
                    if (engine_.decimation(v) != 0) continue;
                    auto in = engine_.incoming(v);
                    int sign = chan[static_cast<size_t>(v)] ? -1 : 1;
                    would += decimation_decision(xi, sign, in[0], in[1], in[2]) != 0;
                }
                return would;
            }();
            if (nb > 0) ++counters_.fixpoint_violations;
            engine_.clear_messages();
        }

        // decode the residual with the main rule
        if (pass(residual_table_, opt_.residual_iterations, false)) {
            record_attempt(true);
            return finish(true);
        }
        record_attempt(false);
    }
    return finish(false);
}

NodeSet residual_set(std::span<const int8_t> gamma, int n) {
    NodeSet s;
    for (int v = 0; v < n; ++v)
        if (gamma[static_cast<size_t>(v)] == 0) s.push_back(v);
    return s;
}

} // namespace faid
