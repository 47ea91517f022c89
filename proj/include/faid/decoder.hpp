#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "faid/graph.hpp"
#include "faid/kernels.hpp"
#include "faid/rules.hpp"

namespace faid {

struct DecodeOutcome {
    bool converged = false;
    int iterations = 0;
    std::vector<uint8_t> bits;
};

// Per-iteration observer: (iteration, v2c planes, c2v planes, bits).
// Messages are exposed in var-plane layout; slot t*n_pad + v.
using TraceHook = std::function<void(int, std::span<const int8_t>, std::span<const int8_t>,
                                     std::span<const uint8_t>)>;

// Flooding message-passing engine bound to one graph. One engine per worker;
// the plan is shared and immutable.
class MessageEngine {
public:
    MessageEngine(const TannerGraph& g, std::shared_ptr<const kern::Plan> plan,
                  kern::Isa isa = kern::Isa::auto_detect);

    // Load channel bits, zero all messages, clear decimation marks.
    void start(std::span<const uint8_t> channel_bits);
    void clear_messages();

    // One flooding iteration with the given update rule, then refresh
    // decisions. Returns true when the decisions satisfy every check.
    bool iterate(const kern::RuleTable& rule);

    bool syndrome_ok() const;
    void refresh_decisions();

    int iteration() const { return iter_; }
    int n() const { return plan_->n; }
    int n_pad() const { return plan_->n_pad; }
    std::span<const uint8_t> bits() const { return {state_.bits.data(), static_cast<size_t>(plan_->n)}; }
    std::span<const uint8_t> channel_bits() const { return {state_.chan_bits.data(), static_cast<size_t>(plan_->n)}; }
    std::span<const int8_t> c2v_planes() const { return {state_.c2v.data(), state_.c2v.size()}; }
    std::span<const int8_t> v2c_planes() const { return {state_.v2c.data(), state_.v2c.size()}; }

    // Incoming c2v triple of a variable (plane-strided).
    std::array<Level, 3> incoming(int v) const {
        const int np = plan_->n_pad;
        return {state_.c2v[static_cast<size_t>(v)], state_.c2v[static_cast<size_t>(np + v)],
                state_.c2v[static_cast<size_t>(2 * np + v)]};
    }

    int8_t decimation(int v) const { return state_.decim[static_cast<size_t>(v)]; }
    void set_decimation(int v, int8_t gamma) { state_.decim[static_cast<size_t>(v)] = gamma; }
    void clear_decimation();

    const TannerGraph& graph() const { return *graph_; }
    const kern::Plan& plan() const { return *plan_; }
    const char* kernel_name() const { return ops_->name; }

private:
    const TannerGraph* graph_;
    std::shared_ptr<const kern::Plan> plan_;
    const kern::Ops* ops_;
    kern::State state_;
    int iter_ = 0;
};

struct FaidOptions {
    int max_iterations = 100;
    kern::Isa isa = kern::Isa::auto_detect;
};

// Plain 7-level FAID with flooding schedule and per-iteration syndrome check.
class FaidDecoder {
public:
    FaidDecoder(const TannerGraph& g, const VariableUpdateRule& rule, FaidOptions opt = {});
    FaidDecoder(std::shared_ptr<const kern::Plan> plan, const TannerGraph& g,
                const kern::RuleTable& table, FaidOptions opt = {});

    // channel_bits: received word (1 = flipped under the all-zero convention)
    const MessageEngine& engine() const { return engine_; }
    DecodeOutcome decode(std::span<const uint8_t> channel_bits, const TraceHook& hook = nullptr);

private:
    kern::RuleTable table_;
    FaidOptions opt_;
    MessageEngine engine_;
};

// Convenience single-shot call.
DecodeOutcome faid_decode(const TannerGraph& g, const VariableUpdateRule& rule,
                          std::span<const uint8_t> channel_bits, int max_iterations = 100);

} // namespace faid
