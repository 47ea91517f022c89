#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "faid/graph.hpp"
#include "faid/rules.hpp"

namespace faid::kern {

// Variable update rule tabulated for the hot loop: 49 +C entries, row-major
// by (m1+3)*7 + (m2+3), padded to 64 so four 16-byte chunks cover the index
// range. The -C half is produced by odd symmetry inside the passes.
struct RuleTable {
    alignas(64) std::array<int8_t, 64> lut{};
    Level at(int sign, Level m1, Level m2) const {
        if (sign < 0) return static_cast<Level>(-at(1, negate(m1), negate(m2)));
        return lut[static_cast<size_t>((m1 + 3) * 7 + (m2 + 3))];
    }
};

RuleTable tabulate(const VariableUpdateRule& rule);   // requires s == 3

// Message layout bound to one graph, shared read-only by all decodes.
//
// Variable side: three planes of n_pad bytes; slot t*n_pad + v holds the
// message on the t-th edge of variable v (edges ordered by check id).
// Check side, regular graphs: dc planes of m_pad bytes, slot u*m_pad + c.
// Irregular graphs: ragged rows at chk_off[c], scalar kernels only.
struct Plan {
    int n = 0, m = 0, edges = 0;
    int n_pad = 0, m_pad = 0;
    bool regular = false;   // uniform check degree (variable degree 3 always)
    int dc = 0;             // check degree when regular
    int chk_words = 0;      // bytes in the check-side buffer

    std::vector<int32_t> var_slot;   // edge -> var-side slot
    std::vector<int32_t> chk_slot;   // edge -> check-side slot
    std::vector<int32_t> chk_off;    // irregular: row offsets, m+1 entries
    std::vector<int32_t> chk_deg;    // per-check degree

    static Plan build(const TannerGraph& g);
};

// Per-decode message state. Channel and decimation arrays are padded like
// the variable planes; pads hold neutral values.
struct State {
    std::vector<int8_t> c2v;        // var-side planes
    std::vector<int8_t> v2c;        // var-side planes
    std::vector<int8_t> chk_buf;    // check-side scratch (shared by both passes)
    std::vector<int8_t> chan_sign;  // +1 / -1 per variable
    std::vector<int8_t> decim;      // gamma per variable: -1 / 0 / +1
    std::vector<uint8_t> chan_bits; // received bits
    std::vector<uint8_t> bits;      // current decisions

    void attach(const Plan& p);
    void clear_messages(const Plan& p);
};

// vn_pass: v2c <- Phi_v(y, extrinsic c2v) per edge; decimated variables send
//   3*gamma on every edge regardless of inputs.
// cn_pass: c2v <- sign product times extrinsic min magnitude, via the
//   plan's scatter tables and the check-side scratch buffer.
// decide_pass: bit <- 1 if sum of incoming indices plus channel sign < 0,
//   0 if > 0, channel bit on ties; decimated bits pinned to gamma.
struct Ops {
    const char* name;
    void (*vn_pass)(const Plan&, const RuleTable&, State&);
    void (*cn_pass)(const Plan&, State&);
    void (*decide_pass)(const Plan&, State&);
};

enum class Isa { auto_detect, scalar, avx2 };

bool avx2_supported();
const Ops& select(const Plan& plan, Isa isa);
Isa parse_isa(const std::string& name);   // "auto" | "scalar" | "avx2"

extern const Ops scalar_ops;
extern const Ops avx2_ops;   // valid only for regular plans on AVX2 hardware

} // namespace faid::kern
