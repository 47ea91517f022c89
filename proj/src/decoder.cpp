#include "faid/decoder.hpp"

#include <algorithm>
#include <stdexcept>

namespace faid {

MessageEngine::MessageEngine(const TannerGraph& g, std::shared_ptr<const kern::Plan> plan,
                             kern::Isa isa)
    : graph_(&g), plan_(std::move(plan)) {
    ops_ = &kern::select(*plan_, isa);
    state_.attach(*plan_);
}

void MessageEngine::start(std::span<const uint8_t> channel_bits) {
    if (static_cast<int>(channel_bits.size()) != plan_->n)
        throw std::invalid_argument("channel bit vector length mismatch");
    for (int v = 0; v < plan_->n; ++v) {
        uint8_t r = channel_bits[static_cast<size_t>(v)];
        state_.chan_bits[static_cast<size_t>(v)] = r;
        state_.chan_sign[static_cast<size_t>(v)] = r ? -1 : 1;
        state_.bits[static_cast<size_t>(v)] = r;
        state_.decim[static_cast<size_t>(v)] = 0;
    }
    clear_messages();
    iter_ = 0;
}

void MessageEngine::clear_messages() { state_.clear_messages(*plan_); }

void MessageEngine::clear_decimation() {
    std::fill(state_.decim.begin(), state_.decim.begin() + plan_->n, 0);
}

bool MessageEngine::iterate(const kern::RuleTable& rule) {
    ops_->vn_pass(*plan_, rule, state_);
    ops_->cn_pass(*plan_, state_);
    ops_->decide_pass(*plan_, state_);
    ++iter_;
    return syndrome_ok();
}

void MessageEngine::refresh_decisions() { ops_->decide_pass(*plan_, state_); }

bool MessageEngine::syndrome_ok() const {
    const auto& g = *graph_;
    const uint8_t* b = state_.bits.data();
    for (int c = 0; c < g.m; ++c) {
        uint8_t x = 0;
        for (int32_t v : g.chk_adj[static_cast<size_t>(c)]) x ^= b[v];
        if (x) return false;
    }
    return true;
}

FaidDecoder::FaidDecoder(const TannerGraph& g, const VariableUpdateRule& rule, FaidOptions opt)
    : FaidDecoder(std::make_shared<kern::Plan>(kern::Plan::build(g)), g, kern::tabulate(rule), opt) {
    auto bad = validate_rule(rule);
    if (!bad.empty())
        throw std::invalid_argument("faid rule '" + rule.name + "' invalid: " + bad.front());
}

FaidDecoder::FaidDecoder(std::shared_ptr<const kern::Plan> plan, const TannerGraph& g,
                         const kern::RuleTable& table, FaidOptions opt)
    : table_(table), opt_(opt), engine_(g, std::move(plan), opt.isa) {
    if (opt_.max_iterations < 1) throw std::invalid_argument("max_iterations must be >= 1");
}

DecodeOutcome FaidDecoder::decode(std::span<const uint8_t> channel_bits, const TraceHook& hook) {
    engine_.start(channel_bits);
    DecodeOutcome out;
    if (engine_.syndrome_ok()) {   // received word already a codeword
        out.converged = true;
        out.iterations = 0;
        out.bits.assign(channel_bits.begin(), channel_bits.end());
        return out;
    }
    for (int k = 1; k <= opt_.max_iterations; ++k) {
        bool ok = engine_.iterate(table_);
        if (hook) hook(k, engine_.v2c_planes(), engine_.c2v_planes(), engine_.bits());
        if (ok) {
            out.converged = true;
            break;
        }
    }
    out.iterations = engine_.iteration();
    out.bits.assign(engine_.bits().begin(), engine_.bits().end());
    return out;
}

DecodeOutcome faid_decode(const TannerGraph& g, const VariableUpdateRule& rule,
                          std::span<const uint8_t> channel_bits, int max_iterations) {
    FaidDecoder dec(g, rule, FaidOptions{max_iterations, kern::Isa::auto_detect});
    return dec.decode(channel_bits);
}

} // namespace faid
