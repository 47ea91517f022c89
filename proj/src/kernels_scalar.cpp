#include "faid/kernels.hpp"

namespace faid::kern {

namespace {

inline int8_t lut2(const RuleTable& rt, int y, int8_t a, int8_t b) {
    // odd symmetry folds the -C half onto the +C table
    int an = a * y, bn = b * y;
    return static_cast<int8_t>(rt.lut[static_cast<size_t>((an + 3) * 7 + (bn + 3))] * y);
}

void vn_pass(const Plan& p, const RuleTable& rt, State& st) {
    const int np = p.n_pad;
    const int8_t* in0 = st.c2v.data();
    const int8_t* in1 = in0 + np;
    const int8_t* in2 = in1 + np;
    int8_t* out0 = st.v2c.data();
    int8_t* out1 = out0 + np;
    int8_t* out2 = out1 + np;
    for (int v = 0; v < p.n; ++v) {
        int8_t g = st.decim[static_cast<size_t>(v)];
        if (g != 0) {
            out0[v] = out1[v] = out2[v] = static_cast<int8_t>(3 * g);
            continue;
        }
        int y = st.chan_sign[static_cast<size_t>(v)];
        int8_t a = in0[v], b = in1[v], c = in2[v];
        out0[v] = lut2(rt, y, b, c);
        out1[v] = lut2(rt, y, a, c);
        out2[v] = lut2(rt, y, a, b);
    }
}

void cn_pass_regular(const Plan& p, State& st) {
    // scatter v2c into check planes
    for (int e = 0; e < p.edges; ++e)
        st.chk_buf[static_cast<size_t>(p.chk_slot[static_cast<size_t>(e)])] =
            st.v2c[static_cast<size_t>(p.var_slot[static_cast<size_t>(e)])];

    const int mp = p.m_pad, dc = p.dc;
    for (int c = 0; c < p.m; ++c) {
        // two smallest magnitudes, first-minimum index, total sign parity
        int m1 = 127, m2 = 127, arg = 0;
        unsigned neg = 0;
        for (int u = 0; u < dc; ++u) {
            int x = st.chk_buf[static_cast<size_t>(u * mp + c)];
            int ax = x < 0 ? -x : x;
            neg ^= static_cast<unsigned>(x < 0);
            if (ax < m1) {
                m2 = m1;
                m1 = ax;
                arg = u;
            } else if (ax < m2) {
                m2 = ax;
            }
        }
        for (int u = 0; u < dc; ++u) {
            size_t slot = static_cast<size_t>(u * mp + c);
            int x = st.chk_buf[slot];
            unsigned s = neg ^ static_cast<unsigned>(x < 0);
            int mag = (u == arg) ? m2 : m1;
            st.chk_buf[slot] = static_cast<int8_t>(s ? -mag : mag);
        }
    }
    for (int e = 0; e < p.edges; ++e)
        st.c2v[static_cast<size_t>(p.var_slot[static_cast<size_t>(e)])] =
            st.chk_buf[static_cast<size_t>(p.chk_slot[static_cast<size_t>(e)])];
}

void cn_pass_ragged(const Plan& p, State& st) {
    for (int e = 0; e < p.edges; ++e)
        st.chk_buf[static_cast<size_t>(p.chk_slot[static_cast<size_t>(e)])] =
            st.v2c[static_cast<size_t>(p.var_slot[static_cast<size_t>(e)])];
    for (int c = 0; c < p.m; ++c) {
        int off = p.chk_off[static_cast<size_t>(c)];
        int deg = p.chk_deg[static_cast<size_t>(c)];
        int m1 = 127, m2 = 127, arg = 0;
        unsigned neg = 0;
        for (int u = 0; u < deg; ++u) {
            int x = st.chk_buf[static_cast<size_t>(off + u)];
            int ax = x < 0 ? -x : x;
            neg ^= static_cast<unsigned>(x < 0);
            if (ax < m1) {
                m2 = m1;
                m1 = ax;
                arg = u;
            } else if (ax < m2) {
                m2 = ax;
            }
        }
        for (int u = 0; u < deg; ++u) {
            size_t slot = static_cast<size_t>(off + u);
            int x = st.chk_buf[slot];
            unsigned s = neg ^ static_cast<unsigned>(x < 0);
            int mag = (u == arg) ? m2 : m1;
            st.chk_buf[slot] = static_cast<int8_t>(s ? -mag : mag);
        }
    }
    for (int e = 0; e < p.edges; ++e)
        st.c2v[static_cast<size_t>(p.var_slot[static_cast<size_t>(e)])] =
            st.chk_buf[static_cast<size_t>(p.chk_slot[static_cast<size_t>(e)])];
}

void cn_pass(const Plan& p, State& st) {
    if (p.regular)
        cn_pass_regular(p, st);
    else
        cn_pass_ragged(p, st);
}

void decide_pass(const Plan& p, State& st) {
    const int np = p.n_pad;
    const int8_t* in0 = st.c2v.data();
    const int8_t* in1 = in0 + np;
    const int8_t* in2 = in1 + np;
    for (int v = 0; v < p.n; ++v) {
        int8_t g = st.decim[static_cast<size_t>(v)];
        if (g != 0) {
            st.bits[static_cast<size_t>(v)] = g < 0;
            continue;
        }
        int sum = in0[v] + in1[v] + in2[v] + st.chan_sign[static_cast<size_t>(v)];
        st.bits[static_cast<size_t>(v)] =
            sum < 0 ? 1 : (sum > 0 ? 0 : st.chan_bits[static_cast<size_t>(v)]);
    }
}

} // namespace

const Ops scalar_ops{"scalar", vn_pass, cn_pass, decide_pass};

} // namespace faid::kern
