#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>

namespace faid {

// Message level: signed index in {-s..s}, |index| selects magnitude L_i,
// L_0 == 0. Default alphabet has s = 3 (7 levels, 3-bit messages).
using Level = int8_t;

inline constexpr int default_levels = 3;        // s
inline constexpr int alphabet_size = 2 * default_levels + 1;

inline constexpr Level negate(Level m) { return static_cast<Level>(-m); }

// Channel value y = (-1)^r * C for the BSC: sign +1 means received bit 0.
struct ChannelValue {
    int8_t sign = 1;           // +1 or -1
    double magnitude = 1.0;    // C, used only by threshold rules

    static ChannelValue from_bit(int r, double c = 1.0) {
        return ChannelValue{static_cast<int8_t>(r ? -1 : 1), c};
    }
};

// Check node update: sign product times minimum magnitude of the
// d_c - 1 extrinsic inputs.
inline Level check_update(std::span<const Level> msgs) {
    if (msgs.empty())
        throw std::invalid_argument("check_update: empty input");
    int sign = 1;
    int mag = 127;
    for (Level m : msgs) {
        if (m == 0) return 0;
        if (m < 0) sign = -sign;
        int a = m < 0 ? -m : m;
        if (a < mag) mag = a;
    }
    return static_cast<Level>(sign * mag);
}

} // namespace faid
