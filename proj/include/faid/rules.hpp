#pragma once

#include <array>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "faid/levels.hpp"

namespace faid {

// Linear-threshold variable update rule: Q(m1 + m2 + C * sign(y)) with
// quantizer thresholds T and output magnitudes L.
struct ThresholdRule {
    std::vector<double> magnitudes;   // L_1 < L_2 < ... < L_s
    std::vector<double> thresholds;   // T_1 < T_2 < ... < T_s, T_{s+1} = inf
    double channel_magnitude = 1.0;   // C

    int levels() const { return static_cast<int>(magnitudes.size()); }
    double level_value(Level m) const;   // signed index -> real value
};

// Variable update rule given directly as the (2s+1)x(2s+1) output table for
// channel sign +1; the -C half always follows by odd symmetry.
struct LutRule {
    int levels = default_levels;          // s
    std::vector<Level> table;             // row-major, (2s+1)^2 entries

    int side() const { return 2 * levels + 1; }
    Level at(Level m1, Level m2) const {
        return table[static_cast<size_t>((m1 + levels) * side() + (m2 + levels))];
    }
};

struct VariableUpdateRule {
    std::string name;
    std::variant<LutRule, ThresholdRule> impl;

    int levels() const;
    bool is_lut() const { return std::holds_alternative<LutRule>(impl); }
};

// Q(x) = sgn(x) L_i if T_i <= |x| < T_{i+1}, else 0. The lower bound is
// closed, compared with exact >= on doubles.
Level quantize(double x, const ThresholdRule& rule);

// Variable node update for d_v = 3 (two extrinsic inputs).
Level vn_update(const VariableUpdateRule& rule, ChannelValue y, Level m1, Level m2);

// Checks swap symmetry, alphabet closure, monotonicity in each argument,
// and the saturation chain (C,0,0)->L1, (C,L1,L1)->L2, ..., up to L_s.
// Returns human-readable violation descriptions; empty means valid.
std::vector<std::string> validate_rule(const VariableUpdateRule& rule);

// All-correct message trajectory: m1 = Phi(C,0,0), m_t = Phi(C, m_{t-1}, m_{t-1}).
std::vector<Level> saturating_sequence(const VariableUpdateRule& rule, int iterations);

// Rule definition file: one [rule <name>] section per rule, kind = lut |
// threshold. See README for the grammar. Throws std::runtime_error with a
// line number on malformed input.
std::map<std::string, VariableUpdateRule> parse_rules(const std::string& text);
std::map<std::string, VariableUpdateRule> load_rules_file(const std::string& path);

} // namespace faid
