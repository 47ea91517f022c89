#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace faid {

// Bipartite Tanner graph. Adjacency lists are sorted; no parallel edges.
struct TannerGraph {
    int n = 0;   // variable nodes
    int m = 0;   // check nodes
    std::vector<std::vector<int32_t>> var_adj;   // check ids per variable
    std::vector<std::vector<int32_t>> chk_adj;   // variable ids per check

    int edge_count() const;
    int var_degree(int v) const { return static_cast<int>(var_adj[static_cast<size_t>(v)].size()); }
    int chk_degree(int c) const { return static_cast<int>(chk_adj[static_cast<size_t>(c)].size()); }
    bool variable_regular(int d) const;
    bool check_regular(int d) const;
};

// alist interchange format. Tolerates zero padding in adjacency rows.
// Throws std::runtime_error naming the offending line.
TannerGraph parse_alist(const std::string& text);
std::string write_alist(const TannerGraph& g);
TannerGraph load_alist_file(const std::string& path);

struct CodeReport {
    int n = 0, m = 0;
    bool var_regular = false, chk_regular = false;
    int dv = 0, dc = 0;              // degrees when regular, else -1
    int rank = 0;                    // GF(2) rank of H
    int dimension = 0;               // k = n - rank
    int girth = 0;                   // 0 when acyclic
    std::vector<std::string> failures;   // non-empty when expectations missed
};

struct CodeExpectation {
    std::optional<int> n, k, dv, dc;
};

CodeReport validate_code(const TannerGraph& g, const CodeExpectation& expect = {});

// GF(2) nullspace basis of H: k codewords as bit vectors.
std::vector<std::vector<uint8_t>> nullspace_basis(const TannerGraph& g);

// Node sets are sorted variable-index lists.
using NodeSet = std::vector<int32_t>;

// Every check adjacent to the set touches it at least twice. Empty set
// qualifies vacuously.
bool is_stopping_set(const TannerGraph& g, const NodeSet& set);

// Subgraph induced by variable set P, with W = N(P). Local adjacency is
// index-remapped; boundary_edges[c] counts edges from check W[c] to
// variables outside P.
struct InducedSubgraph {
    NodeSet vars;                    // P, original ids
    std::vector<int32_t> checks;     // W, original ids
    std::vector<std::vector<int32_t>> var_adj;   // local: var -> local check ids
    std::vector<std::vector<int32_t>> chk_adj;   // local: check -> local var ids
    std::vector<int32_t> boundary_edges;         // per local check
};

InducedSubgraph induced_subgraph(const TannerGraph& g, const NodeSet& p);

std::vector<uint8_t> syndrome(const TannerGraph& g, std::span<const uint8_t> bits);
bool syndrome_is_zero(const TannerGraph& g, std::span<const uint8_t> bits);
int weight(std::span<const uint8_t> bits);

// NodeSet file: whitespace-separated 0-based indices, one set per line.
std::vector<NodeSet> parse_node_sets(const std::string& text);
NodeSet support_of(std::span<const uint8_t> bits);
std::vector<uint8_t> bits_from_support(int n, const NodeSet& support);

// Bounded stopping-set search: all minimal-ish candidates up to max_size,
// grown from short cycles. Exhaustive only in the sense that every returned
// set is verified; used for failure-mining guidance, not enumeration proofs.
std::vector<NodeSet> find_stopping_sets(const TannerGraph& g, int max_size, size_t limit);

// Variable-node cycles of the girth length through each variable (unions of
// these seed the guided failure search).
std::vector<NodeSet> short_cycle_supports(const TannerGraph& g, size_t limit);

} // namespace faid
