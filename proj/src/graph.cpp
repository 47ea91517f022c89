#include "faid/graph.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace faid {

int TannerGraph::edge_count() const {
    int e = 0;
    for (const auto& a : var_adj) e += static_cast<int>(a.size());
    return e;
}

bool TannerGraph::variable_regular(int d) const {
    return std::all_of(var_adj.begin(), var_adj.end(),
                       [d](const auto& a) { return static_cast<int>(a.size()) == d; });
}

bool TannerGraph::check_regular(int d) const {
    return std::all_of(chk_adj.begin(), chk_adj.end(),
                       [d](const auto& a) { return static_cast<int>(a.size()) == d; });
}

namespace {

struct LineReader {
    std::istringstream in;
    int lineno = 0;

    explicit LineReader(const std::string& text) : in(text) {}

    [[noreturn]] void fail(const std::string& what) const {
        throw std::runtime_error("alist: line " + std::to_string(lineno) + ": " + what);
    }

    std::vector<long> ints() {
        std::string line;
        while (std::getline(in, line)) {
            ++lineno;
            std::istringstream iss(line);
            std::vector<long> out;
            long v;
            while (iss >> v) out.push_back(v);
            if (!iss.eof()) fail("non-integer token");
            if (!out.empty()) return out;
        }
        fail("unexpected end of file");
    }
};

} // namespace

TannerGraph parse_alist(const std::string& text) {
    LineReader r(text);
    auto dims = r.ints();
    if (dims.size() != 2 || dims[0] <= 0 || dims[1] <= 0)
        r.fail("expected 'n m'");
    TannerGraph g;
    g.n = static_cast<int>(dims[0]);
    g.m = static_cast<int>(dims[1]);
    auto maxdeg = r.ints();
    if (maxdeg.size() != 2) r.fail("expected max degrees");

    auto degrees = [&](int count, const char* what) {
        std::vector<int> d;
        while (static_cast<int>(d.size()) < count) {
            for (long v : r.ints()) {
                if (v < 0) r.fail(std::string("negative degree in ") + what);
                d.push_back(static_cast<int>(v));
            }
        }
        if (static_cast<int>(d.size()) != count)
            r.fail(std::string("degree list length mismatch for ") + what);
        return d;
    };
    auto vdeg = degrees(g.n, "variables");
    auto cdeg = degrees(g.m, "checks");

    g.var_adj.resize(static_cast<size_t>(g.n));
    g.chk_adj.resize(static_cast<size_t>(g.m));
    for (int v = 0; v < g.n; ++v) {
        auto row = r.ints();
        std::vector<int32_t> adj;
        for (long x : row) {
            if (x == 0) continue;   // padding
            if (x < 1 || x > g.m) r.fail("check index out of range");
            adj.push_back(static_cast<int32_t>(x - 1));
        }
        std::sort(adj.begin(), adj.end());
        if (std::adjacent_find(adj.begin(), adj.end()) != adj.end())
            r.fail("duplicate edge at variable " + std::to_string(v));
        if (static_cast<int>(adj.size()) != vdeg[static_cast<size_t>(v)])
            r.fail("variable " + std::to_string(v) + " degree mismatch");
        g.var_adj[static_cast<size_t>(v)] = std::move(adj);
    }
    for (int c = 0; c < g.m; ++c) {
        auto row = r.ints();
        std::vector<int32_t> adj;
        for (long x : row) {
            if (x == 0) continue;
            if (x < 1 || x > g.n) r.fail("variable index out of range");
            adj.push_back(static_cast<int32_t>(x - 1));
        }
        std::sort(adj.begin(), adj.end());
        if (std::adjacent_find(adj.begin(), adj.end()) != adj.end())
            r.fail("duplicate edge at check " + std::to_string(c));
        if (static_cast<int>(adj.size()) != cdeg[static_cast<size_t>(c)])
            r.fail("check " + std::to_string(c) + " degree mismatch");
        g.chk_adj[static_cast<size_t>(c)] = std::move(adj);
    }
    // cross-consistency
    for (int v = 0; v < g.n; ++v)
        for (int32_t c : g.var_adj[static_cast<size_t>(v)])
            if (!std::binary_search(g.chk_adj[static_cast<size_t>(c)].begin(),
                                    g.chk_adj[static_cast<size_t>(c)].end(), v))
                throw std::runtime_error("alist: edge (" + std::to_string(v) + "," +
                                         std::to_string(c) + ") missing from check list");
    if (g.edge_count() != std::accumulate(cdeg.begin(), cdeg.end(), 0))
        throw std::runtime_error("alist: edge count mismatch between halves");
    return g;
}

std::string write_alist(const TannerGraph& g) {
    int maxv = 0, maxc = 0;
    for (const auto& a : g.var_adj) maxv = std::max(maxv, static_cast<int>(a.size()));
    for (const auto& a : g.chk_adj) maxc = std::max(maxc, static_cast<int>(a.size()));
    std::ostringstream out;
    out << g.n << ' ' << g.m << '\n' << maxv << ' ' << maxc << '\n';
    for (int v = 0; v < g.n; ++v) out << (v ? " " : "") << g.var_adj[static_cast<size_t>(v)].size();
    out << '\n';
    for (int c = 0; c < g.m; ++c) out << (c ? " " : "") << g.chk_adj[static_cast<size_t>(c)].size();
    out << '\n';
    auto rows = [&](const std::vector<std::vector<int32_t>>& adj, int pad) {
        for (const auto& a : adj) {
            for (int i = 0; i < pad; ++i) {
                if (i) out << ' ';
                out << (i < static_cast<int>(a.size()) ? a[static_cast<size_t>(i)] + 1 : 0);
            }
            out << '\n';
        }
    };
    rows(g.var_adj, maxv);
    rows(g.chk_adj, maxc);
    return out.str();
}

TannerGraph load_alist_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open alist file: " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_alist(ss.str());
}

namespace {

// GF(2) row echelon over 64-bit words; returns rank, optionally keeps the
// reduced rows for nullspace extraction.
struct Gf2Matrix {
    int rows, cols, words;
    std::vector<uint64_t> data;

    Gf2Matrix(int r, int c) : rows(r), cols(c), words((c + 63) / 64),
                              data(static_cast<size_t>(r) * static_cast<size_t>(words), 0) {}
    uint64_t* row(int r) { return data.data() + static_cast<size_t>(r) * static_cast<size_t>(words); }
    void set(int r, int c) { row(r)[c >> 6] |= uint64_t{1} << (c & 63); }
    bool get(int r, int c) { return (row(r)[c >> 6] >> (c & 63)) & 1; }
    void xor_rows(int dst, int src) {
        uint64_t* d = row(dst);
        uint64_t* s = row(src);
        for (int w = 0; w < words; ++w) d[w] ^= s[w];
    }
};

} // namespace

static Gf2Matrix h_matrix(const TannerGraph& g) {
    Gf2Matrix h(g.m, g.n);
    for (int c = 0; c < g.m; ++c)
        for (int32_t v : g.chk_adj[static_cast<size_t>(c)]) h.set(c, v);
    return h;
}

static int gf2_eliminate(Gf2Matrix& h, std::vector<int>* pivot_cols) {
    int r = 0;
    for (int c = 0; c < h.cols && r < h.rows; ++c) {
        int piv = -1;
        for (int i = r; i < h.rows; ++i)
            if (h.get(i, c)) { piv = i; break; }
        if (piv < 0) continue;
        if (piv != r)
            for (int w = 0; w < h.words; ++w) std::swap(h.row(piv)[w], h.row(r)[w]);
        for (int i = 0; i < h.rows; ++i)
            if (i != r && h.get(i, c)) h.xor_rows(i, r);
        if (pivot_cols) pivot_cols->push_back(c);
        ++r;
    }
    return r;
}

static int compute_girth(const TannerGraph& g) {
    // BFS from every variable node over the bipartite graph; nodes
    // 0..n-1 variables, n..n+m-1 checks.
    int total = g.n + g.m;
    int best = 0;
    std::vector<int> dist(static_cast<size_t>(total));
    std::vector<int> parent(static_cast<size_t>(total));
    auto neighbors = [&](int u, auto&& fn) {
        if (u < g.n)
            for (int32_t c : g.var_adj[static_cast<size_t>(u)]) fn(g.n + c);
        else
            for (int32_t v : g.chk_adj[static_cast<size_t>(u - g.n)]) fn(static_cast<int>(v));
    };
    for (int src = 0; src < g.n; ++src) {
        std::fill(dist.begin(), dist.end(), -1);
        dist[static_cast<size_t>(src)] = 0;
        parent[static_cast<size_t>(src)] = -1;
        std::deque<int> q{src};
        while (!q.empty()) {
            int u = q.front();
            q.pop_front();
            if (best && 2 * dist[static_cast<size_t>(u)] >= best) break;
            bool stop = false;
            neighbors(u, [&](int w) {
                if (stop) return;
                if (w == parent[static_cast<size_t>(u)]) return;
                if (dist[static_cast<size_t>(w)] >= 0) {
                    int cyc = dist[static_cast<size_t>(u)] + dist[static_cast<size_t>(w)] + 1;
                    if (!best || cyc < best) best = cyc;
                } else {
                    dist[static_cast<size_t>(w)] = dist[static_cast<size_t>(u)] + 1;
                    parent[static_cast<size_t>(w)] = u;
                    q.push_back(w);
                }
            });
        }
    }
    return best;
}

CodeReport validate_code(const TannerGraph& g, const CodeExpectation& expect) {
    CodeReport rep;
    rep.n = g.n;
    rep.m = g.m;
    rep.dv = g.n ? static_cast<int>(g.var_adj[0].size()) : 0;
    rep.dc = g.m ? static_cast<int>(g.chk_adj[0].size()) : 0;
    rep.var_regular = g.variable_regular(rep.dv);
    rep.chk_regular = g.check_regular(rep.dc);
    if (!rep.var_regular) rep.dv = -1;
    if (!rep.chk_regular) rep.dc = -1;

    Gf2Matrix h = h_matrix(g);
    rep.rank = gf2_eliminate(h, nullptr);
    rep.dimension = g.n - rep.rank;
    rep.girth = compute_girth(g);

    auto check = [&](const char* what, std::optional<int> want, int got) {
        if (want && *want != got)
            rep.failures.push_back(std::string(what) + ": expected " + std::to_string(*want) +
                                   ", got " + std::to_string(got));
    };
    check("n", expect.n, g.n);
    check("k", expect.k, rep.dimension);
    check("dv", expect.dv, rep.dv);
    check("dc", expect.dc, rep.dc);
    return rep;
}

std::vector<std::vector<uint8_t>> nullspace_basis(const TannerGraph& g) {
    Gf2Matrix h = h_matrix(g);
    std::vector<int> pivots;
    gf2_eliminate(h, &pivots);
    std::vector<bool> is_pivot(static_cast<size_t>(g.n), false);
    for (int c : pivots) is_pivot[static_cast<size_t>(c)] = true;

    std::vector<std::vector<uint8_t>> basis;
    for (int free = 0; free < g.n; ++free) {
        if (is_pivot[static_cast<size_t>(free)]) continue;
        std::vector<uint8_t> w(static_cast<size_t>(g.n), 0);
        w[static_cast<size_t>(free)] = 1;
        for (size_t r = 0; r < pivots.size(); ++r)
            if (h.get(static_cast<int>(r), free))
                w[static_cast<size_t>(pivots[r])] = 1;
        basis.push_back(std::move(w));
    }
    return basis;
}

bool is_stopping_set(const TannerGraph& g, const NodeSet& set) {
    std::vector<uint8_t> in(static_cast<size_t>(g.n), 0);
    for (int32_t v : set) in[static_cast<size_t>(v)] = 1;
    std::set<int32_t> checks;
    for (int32_t v : set)
        for (int32_t c : g.var_adj[static_cast<size_t>(v)]) checks.insert(c);
    for (int32_t c : checks) {
        int deg = 0;
        for (int32_t u : g.chk_adj[static_cast<size_t>(c)]) deg += in[static_cast<size_t>(u)];
        if (deg < 2) return false;
    }
    return true;
}

InducedSubgraph induced_subgraph(const TannerGraph& g, const NodeSet& p) {
    if (p.empty()) throw std::invalid_argument("induced_subgraph: empty set");
    InducedSubgraph h;
    h.vars = p;
    std::sort(h.vars.begin(), h.vars.end());
    std::vector<int32_t> vlocal(static_cast<size_t>(g.n), -1);
    for (size_t i = 0; i < h.vars.size(); ++i) vlocal[static_cast<size_t>(h.vars[i])] = static_cast<int32_t>(i);

    std::set<int32_t> wset;
    for (int32_t v : h.vars)
        for (int32_t c : g.var_adj[static_cast<size_t>(v)]) wset.insert(c);
    h.checks.assign(wset.begin(), wset.end());
    std::vector<int32_t> clocal(static_cast<size_t>(g.m), -1);
    for (size_t i = 0; i < h.checks.size(); ++i) clocal[static_cast<size_t>(h.checks[i])] = static_cast<int32_t>(i);

    h.var_adj.resize(h.vars.size());
    h.chk_adj.resize(h.checks.size());
    h.boundary_edges.assign(h.checks.size(), 0);
    for (size_t i = 0; i < h.vars.size(); ++i)
        for (int32_t c : g.var_adj[static_cast<size_t>(h.vars[i])])
            h.var_adj[i].push_back(clocal[static_cast<size_t>(c)]);
    for (size_t i = 0; i < h.checks.size(); ++i) {
        for (int32_t v : g.chk_adj[static_cast<size_t>(h.checks[i])]) {
            int32_t lv = vlocal[static_cast<size_t>(v)];
            if (lv >= 0)
                h.chk_adj[i].push_back(lv);
            else
                ++h.boundary_edges[i];
        }
    }
    return h;
}

std::vector<uint8_t> syndrome(const TannerGraph& g, std::span<const uint8_t> bits) {
    if (static_cast<int>(bits.size()) != g.n)
        throw std::invalid_argument("syndrome: bit vector length mismatch");
    std::vector<uint8_t> s(static_cast<size_t>(g.m), 0);
    for (int c = 0; c < g.m; ++c) {
        uint8_t x = 0;
        for (int32_t v : g.chk_adj[static_cast<size_t>(c)]) x ^= bits[static_cast<size_t>(v)];
        s[static_cast<size_t>(c)] = x;
    }
    return s;
}

bool syndrome_is_zero(const TannerGraph& g, std::span<const uint8_t> bits) {
    if (static_cast<int>(bits.size()) != g.n)
        throw std::invalid_argument("syndrome: bit vector length mismatch");
    for (int c = 0; c < g.m; ++c) {
        uint8_t x = 0;
        for (int32_t v : g.chk_adj[static_cast<size_t>(c)]) x ^= bits[static_cast<size_t>(v)];
        if (x) return false;
    }
    return true;
}

int weight(std::span<const uint8_t> bits) {
    int w = 0;
    for (uint8_t b : bits) w += b != 0;
    return w;
}

std::vector<NodeSet> parse_node_sets(const std::string& text) {
    std::vector<NodeSet> sets;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        size_t h = line.find('#');
        if (h != std::string::npos) line.erase(h);
        std::istringstream iss(line);
        NodeSet s;
        long v;
        while (iss >> v) s.push_back(static_cast<int32_t>(v));
        if (!iss.eof()) throw std::runtime_error("node set: non-integer token");
        if (!s.empty()) {
            std::sort(s.begin(), s.end());
            sets.push_back(std::move(s));
        }
    }
    return sets;
}

NodeSet support_of(std::span<const uint8_t> bits) {
    NodeSet s;
    for (size_t i = 0; i < bits.size(); ++i)
        if (bits[i]) s.push_back(static_cast<int32_t>(i));
    return s;
}

std::vector<uint8_t> bits_from_support(int n, const NodeSet& support) {
    std::vector<uint8_t> bits(static_cast<size_t>(n), 0);
    for (int32_t v : support) {
        if (v < 0 || v >= n) throw std::out_of_range("support index out of range");
        bits[static_cast<size_t>(v)] = 1;
    }
    return bits;
}

std::vector<NodeSet> short_cycle_supports(const TannerGraph& g, size_t limit) {
    // Shortest cycle through each variable, recovered from the BFS meeting
    // point. Variable nodes only.
    std::vector<NodeSet> out;
    std::set<NodeSet> seen;
    int total = g.n + g.m;
    std::vector<int> dist(static_cast<size_t>(total)), parent(static_cast<size_t>(total));
    auto neighbors = [&](int u, auto&& fn) {
        if (u < g.n)
            for (int32_t c : g.var_adj[static_cast<size_t>(u)]) fn(g.n + c);
        else
            for (int32_t v : g.chk_adj[static_cast<size_t>(u - g.n)]) fn(static_cast<int>(v));
    };
    for (int src = 0; src < g.n && out.size() < limit; ++src) {
        std::fill(dist.begin(), dist.end(), -1);
        dist[static_cast<size_t>(src)] = 0;
        parent[static_cast<size_t>(src)] = -1;
        std::deque<int> q{src};
        int meet_u = -1, meet_w = -1, best = -1;
        while (!q.empty() && meet_u < 0) {
            int u = q.front();
            q.pop_front();
            neighbors(u, [&](int w) {
                if (meet_u >= 0 || w == parent[static_cast<size_t>(u)]) return;
                if (dist[static_cast<size_t>(w)] >= 0) {
                    meet_u = u;
                    meet_w = w;
                    best = dist[static_cast<size_t>(u)] + dist[static_cast<size_t>(w)] + 1;
                } else {
                    dist[static_cast<size_t>(w)] = dist[static_cast<size_t>(u)] + 1;
                    parent[static_cast<size_t>(w)] = u;
                    q.push_back(w);
                }
            });
        }
        if (meet_u < 0 || best % 2) continue;
        NodeSet cyc;
        for (int x : {meet_u, meet_w})
            for (int u = x; u >= 0; u = parent[static_cast<size_t>(u)])
                if (u < g.n) cyc.push_back(u);
        std::sort(cyc.begin(), cyc.end());
        cyc.erase(std::unique(cyc.begin(), cyc.end()), cyc.end());
        if (seen.insert(cyc).second) out.push_back(cyc);
    }
    return out;
}

std::vector<NodeSet> find_stopping_sets(const TannerGraph& g, int max_size, size_t limit) {
    // Grow candidate sets from short cycles: repeatedly patch a degree-one
    // check by adding one of its other variables, branching bounded-depth.
    std::vector<NodeSet> found;
    std::set<NodeSet> seen, visited;
    auto cycles = short_cycle_supports(g, 4096);
    std::deque<NodeSet> work(cycles.begin(), cycles.end());
    while (!work.empty() && found.size() < limit) {
        NodeSet s = std::move(work.front());
        work.pop_front();
        if (static_cast<int>(s.size()) > max_size || !visited.insert(s).second) continue;
        std::vector<uint8_t> in(static_cast<size_t>(g.n), 0);
        for (int32_t v : s) in[static_cast<size_t>(v)] = 1;
        int32_t weak_check = -1;
        std::set<int32_t> checks;
        for (int32_t v : s)
            for (int32_t c : g.var_adj[static_cast<size_t>(v)]) checks.insert(c);
        for (int32_t c : checks) {
            int deg = 0;
            for (int32_t u : g.chk_adj[static_cast<size_t>(c)]) deg += in[static_cast<size_t>(u)];
            if (deg == 1) { weak_check = c; break; }
        }
        if (weak_check < 0) {
            if (seen.insert(s).second) found.push_back(s);
            continue;
        }
        if (static_cast<int>(s.size()) == max_size) continue;
        for (int32_t u : g.chk_adj[static_cast<size_t>(weak_check)]) {
            if (in[static_cast<size_t>(u)]) continue;
            NodeSet t = s;
            t.insert(std::lower_bound(t.begin(), t.end(), u), u);
            work.push_back(std::move(t));
        }
    }
    return found;
}

} // namespace faid
