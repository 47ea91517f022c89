#include "faid/rules.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace faid {

double ThresholdRule::level_value(Level m) const {
    if (m == 0) return 0.0;
    int a = m < 0 ? -m : m;
    double v = magnitudes[static_cast<size_t>(a - 1)];
    return m < 0 ? -v : v;
}

int VariableUpdateRule::levels() const {
    if (auto* lut = std::get_if<LutRule>(&impl)) return lut->levels;
    return std::get<ThresholdRule>(impl).levels();
}

Level quantize(double x, const ThresholdRule& rule) {
    double a = std::fabs(x);
    int s = rule.levels();
    for (int i = s; i >= 1; --i) {
        if (a >= rule.thresholds[static_cast<size_t>(i - 1)])
            return static_cast<Level>(x < 0 ? -i : i);
    }
    return 0;
}

Level vn_update(const VariableUpdateRule& rule, ChannelValue y, Level m1, Level m2) {
    if (auto* lut = std::get_if<LutRule>(&rule.impl)) {
        if (y.sign > 0) return lut->at(m1, m2);
        return negate(lut->at(negate(m1), negate(m2)));
    }
    const auto& tr = std::get<ThresholdRule>(rule.impl);
    // Summation order is pinned: (m1 + m2) + C*sign. A few table entries sit
    // on quantizer thresholds and depend on it.
    double x = (tr.level_value(m1) + tr.level_value(m2)) +
               tr.channel_magnitude * (y.sign > 0 ? 1.0 : -1.0);
    return quantize(x, tr);
}

std::vector<std::string> validate_rule(const VariableUpdateRule& rule) {
    std::vector<std::string> bad;
    auto note = [&](const std::string& s) { bad.push_back(s); };
    int s = rule.levels();

    if (auto* tr = std::get_if<ThresholdRule>(&rule.impl)) {
        if (tr->thresholds.size() != tr->magnitudes.size())
            note("threshold rule: |T| != |L|");
        for (size_t i = 0; i + 1 < tr->magnitudes.size(); ++i)
            if (!(tr->magnitudes[i] < tr->magnitudes[i + 1]))
                note("magnitudes not strictly increasing at L" + std::to_string(i + 1));
        for (size_t i = 0; i + 1 < tr->thresholds.size(); ++i)
            if (!(tr->thresholds[i] < tr->thresholds[i + 1]))
                note("thresholds not strictly increasing at T" + std::to_string(i + 1));
        for (double v : tr->magnitudes)
            if (!(v > 0)) note("non-positive magnitude");
        for (double v : tr->thresholds)
            if (!(v > 0)) note("non-positive threshold");
        if (!(tr->channel_magnitude > 0)) note("non-positive channel magnitude");
        if (!bad.empty()) return bad;   // entry checks need a well-formed rule
    } else {
        const auto& lut = std::get<LutRule>(rule.impl);
        if (lut.table.size() != static_cast<size_t>(lut.side() * lut.side())) {
            note("lut table size mismatch");
            return bad;
        }
    }

    auto eval = [&](int sign, int a, int b) {
        return vn_update(rule, ChannelValue{static_cast<int8_t>(sign), 0.0},
                         static_cast<Level>(a), static_cast<Level>(b));
    };
    char buf[96];
    for (int a = -s; a <= s; ++a) {
        for (int b = -s; b <= s; ++b) {
            Level o = eval(1, a, b);
            if (o < -s || o > s) {
                std::snprintf(buf, sizeof buf, "entry (%d,%d) outside alphabet", a, b);
                note(buf);
            }
            if (o != eval(1, b, a)) {
                std::snprintf(buf, sizeof buf, "swap asymmetry at (%d,%d)", a, b);
                note(buf);
            }
            if (b < s && eval(1, a, b) > eval(1, a, static_cast<Level>(b + 1))) {
                std::snprintf(buf, sizeof buf, "not monotone at (%d,%d)->(%d,%d)", a, b, a, b + 1);
                note(buf);
            }
        }
    }
    // saturation chain: (C,0,0) = L1, (C,L_i,L_i) = L_{i+1} up to L_s
    Level prev = 0;
    for (int i = 1; i <= s; ++i) {
        Level o = eval(1, prev, prev);
        if (o != i) {
            std::snprintf(buf, sizeof buf, "saturation chain broken: (C,%d,%d) -> %d, want %d",
                          prev, prev, o, i);
            note(buf);
        }
        prev = static_cast<Level>(i);
    }
    return bad;
}

std::vector<Level> saturating_sequence(const VariableUpdateRule& rule, int iterations) {
    std::vector<Level> seq;
    seq.reserve(static_cast<size_t>(iterations));
    Level m = 0;
    ChannelValue plus{1, 0.0};
    for (int k = 0; k < iterations; ++k) {
        m = vn_update(rule, plus, m, m);
        seq.push_back(m);
    }
    return seq;
}

namespace {

struct Parser {
    std::istringstream in;
    int lineno = 0;
    std::string line;

    explicit Parser(const std::string& text) : in(text) {}

    [[noreturn]] void fail(const std::string& what) const {
        throw std::runtime_error("rules: line " + std::to_string(lineno) + ": " + what);
    }

    // next non-empty, non-comment line; false on eof
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

std::vector<double> parse_doubles(Parser& p, const std::string& s, size_t want) {
    std::istringstream iss(s);
    std::vector<double> out;
    double v;
    while (iss >> v) out.push_back(v);
    if (!iss.eof() || out.size() != want)
        p.fail("expected " + std::to_string(want) + " numbers");
    return out;
}

} // namespace

std::map<std::string, VariableUpdateRule> parse_rules(const std::string& text) {
    std::map<std::string, VariableUpdateRule> rules;
    Parser p(text);
    bool pending = p.next();
    while (pending) {
        std::istringstream head(p.line);
        std::string tag, name, close;
        head >> tag >> name;
        if (tag != "[rule" || name.empty() || name.back() != ']')
            p.fail("expected [rule <name>]");
        name.pop_back();
        if (rules.count(name)) p.fail("duplicate rule '" + name + "'");

        std::string kind;
        std::map<std::string, std::string> kv;
        std::vector<Level> table;
        while ((pending = p.next())) {
            if (p.line[p.line.find_first_not_of(" \t")] == '[') break;
            size_t eq = p.line.find('=');
            if (eq == std::string::npos) {
                // continuation of a table block
                std::istringstream iss(p.line);
                int v;
                while (iss >> v) table.push_back(static_cast<Level>(v));
                if (!iss.eof()) p.fail("bad table entry");
                continue;
            }
            std::istringstream key(p.line.substr(0, eq));
            std::string k;
            key >> k;
            std::string val = p.line.substr(eq + 1);
            if (k == "table") {
                std::istringstream iss(val);
                int v;
                while (iss >> v) table.push_back(static_cast<Level>(v));
                if (!iss.eof()) p.fail("bad table entry");
            } else {
                kv[k] = val;
            }
        }

        auto need = [&](const char* k) -> std::string {
            auto it = kv.find(k);
            if (it == kv.end()) p.fail(std::string("rule '") + name + "' missing " + k);
            return it->second;
        };
        std::istringstream kindss(need("kind"));
        kindss >> kind;

        VariableUpdateRule rule;
        rule.name = name;
        if (kind == "lut") {
            LutRule lut;
            lut.levels = default_levels;
            if (table.size() != static_cast<size_t>(lut.side() * lut.side()))
                p.fail("lut table needs " + std::to_string(lut.side() * lut.side()) + " entries");
            lut.table = std::move(table);
            rule.impl = std::move(lut);
        } else if (kind == "threshold") {
            ThresholdRule tr;
            tr.magnitudes = parse_doubles(p, need("L"), default_levels);
            tr.thresholds = parse_doubles(p, need("T"), default_levels);
            tr.channel_magnitude = parse_doubles(p, need("C"), 1)[0];
            rule.impl = std::move(tr);
        } else {
            p.fail("unknown kind '" + kind + "'");
        }
        rules.emplace(name, std::move(rule));
    }
    return rules;
}

std::map<std::string, VariableUpdateRule> load_rules_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open rules file: " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_rules(ss.str());
}

} // namespace faid
