// AVX2 variants of the message-passing passes. Compiled with -mavx2 and
// selected at runtime; must match the scalar kernels bit for bit on the
// first n (or m) lanes of every plane.

#include "faid/kernels.hpp"

#if defined(__AVX2__)

#include <immintrin.h>

namespace faid::kern {

namespace {

struct LutChunks {
    __m256i t0, t1, t2, t3;
};

inline LutChunks load_chunks(const RuleTable& rt) {
    const __m128i* base = reinterpret_cast<const __m128i*>(rt.lut.data());
    return {_mm256_broadcastsi128_si256(_mm_load_si128(base + 0)),
            _mm256_broadcastsi128_si256(_mm_load_si128(base + 1)),
            _mm256_broadcastsi128_si256(_mm_load_si128(base + 2)),
            _mm256_broadcastsi128_si256(_mm_load_si128(base + 3))};
}

// 49-entry table lookup on sign-normalized levels a,b in [-3,3]:
// idx = 7a + b + 24 in [0,48], four pshufb chunks blended by range.
inline __m256i lut2(const LutChunks& t, __m256i a, __m256i b) {
    __m256i a2 = _mm256_add_epi8(a, a);
    __m256i a4 = _mm256_add_epi8(a2, a2);
    __m256i idx = _mm256_add_epi8(_mm256_add_epi8(a4, _mm256_add_epi8(a2, a)), b);
    idx = _mm256_add_epi8(idx, _mm256_set1_epi8(24));
    __m256i r = _mm256_shuffle_epi8(t.t0, idx);
    r = _mm256_blendv_epi8(r, _mm256_shuffle_epi8(t.t1, idx),
                           _mm256_cmpgt_epi8(idx, _mm256_set1_epi8(15)));
    r = _mm256_blendv_epi8(r, _mm256_shuffle_epi8(t.t2, idx),
                           _mm256_cmpgt_epi8(idx, _mm256_set1_epi8(31)));
    r = _mm256_blendv_epi8(r, _mm256_shuffle_epi8(t.t3, idx),
                           _mm256_cmpgt_epi8(idx, _mm256_set1_epi8(47)));
    return r;
}

void vn_pass(const Plan& p, const RuleTable& rt, State& st) {
    const LutChunks t = load_chunks(rt);
    const int np = p.n_pad;
    const int8_t* in = st.c2v.data();
    int8_t* out = st.v2c.data();
    const __m256i zero = _mm256_setzero_si256();
    for (int v = 0; v < np; v += 32) {
        __m256i a = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(in + v));
        __m256i b = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(in + np + v));
        __m256i c = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(in + 2 * np + v));
        __m256i y = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(st.chan_sign.data() + v));
        __m256i g = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(st.decim.data() + v));
        // fold channel sign in: Phi(-C, m1, m2) = -Phi(C, -m1, -m2)
        __m256i an = _mm256_sign_epi8(a, y);
        __m256i bn = _mm256_sign_epi8(b, y);
        __m256i cn = _mm256_sign_epi8(c, y);
        __m256i o0 = _mm256_sign_epi8(lut2(t, bn, cn), y);
        __m256i o1 = _mm256_sign_epi8(lut2(t, an, cn), y);
        __m256i o2 = _mm256_sign_epi8(lut2(t, an, bn), y);
        // decimated lanes emit 3*gamma
        __m256i keep = _mm256_cmpeq_epi8(g, zero);
        __m256i g3 = _mm256_add_epi8(_mm256_add_epi8(g, g), g);
        o0 = _mm256_blendv_epi8(g3, o0, keep);
        o1 = _mm256_blendv_epi8(g3, o1, keep);
        o2 = _mm256_blendv_epi8(g3, o2, keep);
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + v), o0);
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + np + v), o1);
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + 2 * np + v), o2);
    }
}

void cn_pass(const Plan& p, State& st) {
    for (int e = 0; e < p.edges; ++e)
        st.chk_buf[static_cast<size_t>(p.chk_slot[static_cast<size_t>(e)])] =
            st.v2c[static_cast<size_t>(p.var_slot[static_cast<size_t>(e)])];

    const int mp = p.m_pad, dc = p.dc;
    int8_t* buf = st.chk_buf.data();
    const __m256i zero = _mm256_setzero_si256();
    const __m256i top = _mm256_set1_epi8(127);
    for (int c = 0; c < mp; c += 32) {
        __m256i m1 = top, m2 = top, arg = zero, neg = zero;
        for (int u = 0; u < dc; ++u) {
            __m256i x = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(buf + u * mp + c));
            __m256i ax = _mm256_abs_epi8(x);
            neg = _mm256_xor_si256(neg, _mm256_cmpgt_epi8(zero, x));
            __m256i lt = _mm256_cmpgt_epi8(m1, ax);
            m2 = _mm256_min_epi8(m2, _mm256_blendv_epi8(ax, m1, lt));
            m1 = _mm256_min_epi8(m1, ax);
            arg = _mm256_blendv_epi8(arg, _mm256_set1_epi8(static_cast<char>(u)), lt);
        }
        for (int u = 0; u < dc; ++u) {
            int8_t* slot = buf + u * mp + c;
            __m256i x = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(slot));
            __m256i s = _mm256_xor_si256(neg, _mm256_cmpgt_epi8(zero, x));
            __m256i mag = _mm256_blendv_epi8(
                m1, m2, _mm256_cmpeq_epi8(arg, _mm256_set1_epi8(static_cast<char>(u))));
            __m256i sv = _mm256_or_si256(s, _mm256_set1_epi8(1));   // 0xFF -> -1, 0 -> +1
            _mm256_storeu_si256(reinterpret_cast<__m256i*>(slot), _mm256_sign_epi8(mag, sv));
        }
    }
    for (int e = 0; e < p.edges; ++e)
        st.c2v[static_cast<size_t>(p.var_slot[static_cast<size_t>(e)])] =
            st.chk_buf[static_cast<size_t>(p.chk_slot[static_cast<size_t>(e)])];
}

void decide_pass(const Plan& p, State& st) {
    const int np = p.n_pad;
    const int8_t* in = st.c2v.data();
    const __m256i zero = _mm256_setzero_si256();
    const __m256i one = _mm256_set1_epi8(1);
    for (int v = 0; v < np; v += 32) {
        __m256i a = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(in + v));
        __m256i b = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(in + np + v));
        __m256i c = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(in + 2 * np + v));
        __m256i y = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(st.chan_sign.data() + v));
        __m256i g = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(st.decim.data() + v));
        __m256i r = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(st.chan_bits.data() + v));
        __m256i sum = _mm256_add_epi8(_mm256_add_epi8(a, b), _mm256_add_epi8(c, y));
        __m256i bit = _mm256_and_si256(_mm256_cmpgt_epi8(zero, sum), one);
        bit = _mm256_blendv_epi8(bit, r, _mm256_cmpeq_epi8(sum, zero));
        // decimated lanes pinned to gamma
        __m256i gbit = _mm256_and_si256(_mm256_cmpgt_epi8(zero, g), one);
        bit = _mm256_blendv_epi8(gbit, bit, _mm256_cmpeq_epi8(g, zero));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(st.bits.data() + v), bit);
    }
}

} // namespace

const Ops avx2_ops{"avx2", vn_pass, cn_pass, decide_pass};

} // namespace faid::kern

#else

namespace faid::kern {
// placeholder so the library links when built without AVX2 support
const Ops avx2_ops{"avx2-unavailable", nullptr, nullptr, nullptr};
} // namespace faid::kern

#endif
