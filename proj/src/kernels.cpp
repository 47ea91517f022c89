#include "faid/kernels.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

#if defined(__x86_64__) || defined(__i386__)
#include <cpuid.h>
#endif

namespace faid::kern {

RuleTable tabulate(const VariableUpdateRule& rule) {
    if (rule.levels() != 3)
        throw std::invalid_argument("tabulate: decoder kernels require a 7-level alphabet");
    RuleTable t;
    for (int a = -3; a <= 3; ++a)
        for (int b = -3; b <= 3; ++b)
            t.lut[static_cast<size_t>((a + 3) * 7 + (b + 3))] =
                vn_update(rule, ChannelValue{1, 0.0}, static_cast<Level>(a), static_cast<Level>(b));
    return t;
}

static int round_up(int x, int to) { return (x + to - 1) / to * to; }

Plan Plan::build(const TannerGraph& g) {
    if (!g.variable_regular(3))
        throw std::invalid_argument("decoder requires variable degree 3 throughout");
    Plan p;
    p.n = g.n;
    p.m = g.m;
    p.edges = g.edge_count();
    p.n_pad = round_up(std::max(g.n, 1), 32);
    p.dc = g.m ? static_cast<int>(g.chk_adj[0].size()) : 0;
    p.regular = p.dc > 0 && g.check_regular(p.dc);
    p.m_pad = round_up(std::max(g.m, 1), 32);
    p.chk_deg.resize(static_cast<size_t>(g.m));
    for (int c = 0; c < g.m; ++c) p.chk_deg[static_cast<size_t>(c)] = static_cast<int32_t>(g.chk_degree(c));

    p.chk_off.resize(static_cast<size_t>(g.m) + 1, 0);
    if (!p.regular) {
        for (int c = 0; c < g.m; ++c)
            p.chk_off[static_cast<size_t>(c) + 1] = p.chk_off[static_cast<size_t>(c)] + p.chk_deg[static_cast<size_t>(c)];
        p.chk_words = p.chk_off[static_cast<size_t>(g.m)];
    } else {
        p.chk_words = p.dc * p.m_pad;
    }

    p.var_slot.resize(static_cast<size_t>(p.edges));
    p.chk_slot.resize(static_cast<size_t>(p.edges));
    int e = 0;
    for (int v = 0; v < g.n; ++v) {
        const auto& adj = g.var_adj[static_cast<size_t>(v)];
        for (int t = 0; t < 3; ++t, ++e) {
            int c = adj[static_cast<size_t>(t)];
            const auto& cadj = g.chk_adj[static_cast<size_t>(c)];
            int u = static_cast<int>(std::lower_bound(cadj.begin(), cadj.end(), v) - cadj.begin());
            p.var_slot[static_cast<size_t>(e)] = t * p.n_pad + v;
            p.chk_slot[static_cast<size_t>(e)] = p.regular ? u * p.m_pad + c
                                                           : p.chk_off[static_cast<size_t>(c)] + u;
        }
    }
    return p;
}

void State::attach(const Plan& p) {
    c2v.assign(static_cast<size_t>(3 * p.n_pad), 0);
    v2c.assign(static_cast<size_t>(3 * p.n_pad), 0);
    chk_buf.assign(static_cast<size_t>(p.chk_words), 0);
    chan_sign.assign(static_cast<size_t>(p.n_pad), 1);
    decim.assign(static_cast<size_t>(p.n_pad), 0);
    chan_bits.assign(static_cast<size_t>(p.n_pad), 0);
    bits.assign(static_cast<size_t>(p.n_pad), 0);
    // pad variables behave as decimated-correct so vector lanes stay defined
    for (int v = p.n; v < p.n_pad; ++v) decim[static_cast<size_t>(v)] = 1;
}

void State::clear_messages(const Plan& p) {
    std::fill(c2v.begin(), c2v.end(), 0);
    std::fill(v2c.begin(), v2c.end(), 0);
    std::fill(chk_buf.begin(), chk_buf.end(), 0);
    (void)p;
}

bool avx2_supported() {
#if defined(__x86_64__) || defined(__i386__)
    unsigned eax = 0, ebx = 0, ecx = 0, edx = 0;
    if (!__get_cpuid_count(7, 0, &eax, &ebx, &ecx, &edx)) return false;
    return (ebx & (1u << 5)) != 0;   // EBX bit 5: AVX2
#else
    return false;
#endif
}

Isa parse_isa(const std::string& name) {
    if (name == "auto") return Isa::auto_detect;
    if (name == "scalar") return Isa::scalar;
    if (name == "avx2") return Isa::avx2;
    throw std::invalid_argument("unknown kernel '" + name + "' (auto|scalar|avx2)");
}

const Ops& select(const Plan& plan, Isa isa) {
    if (isa == Isa::auto_detect) {
        if (const char* env = std::getenv("FAID_KERNEL")) {
            Isa forced = parse_isa(env);
            if (forced != Isa::auto_detect) return select(plan, forced);
        }
        return (plan.regular && avx2_supported()) ? avx2_ops : scalar_ops;
    }
    if (isa == Isa::avx2) {
        if (!avx2_supported()) throw std::runtime_error("avx2 kernels not supported on this cpu");
        if (!plan.regular) throw std::runtime_error("avx2 kernels require a check-regular code");
        return avx2_ops;
    }
    return scalar_ops;
}

} // namespace faid::kern
