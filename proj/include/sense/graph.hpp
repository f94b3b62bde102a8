#pragma once

#include "sense/common.hpp"

#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace sense {

// Directed graph over dense node indices. Node ids are opaque strings; dense
// indices are assigned in first-appearance order across the edges file, so
// ingestion is deterministic. Immutable after construction; safe for
// unsynchronized shared reads.
struct Graph {
    std::vector<std::string> node_ids;                   // index-aligned, unique
    std::unordered_map<std::string, uint32_t> id_to_index;
    std::vector<std::vector<uint32_t>> out_neighbors;    // per-arc insertion order, deduplicated
    std::vector<std::pair<uint32_t, uint32_t>> edges;    // arcs in global first-insertion order

    std::size_t node_count() const { return node_ids.size(); }
    std::size_t edge_count() const { return edges.size(); }
    std::size_t out_degree(uint32_t v) const { return out_neighbors[v].size(); }

    uint32_t index_of(const std::string& id) const;
    bool has_edge(uint32_t src, uint32_t dst) const;

    // Sorted adjacency copy for O(log deg) membership tests. Builders call
    // this once; out_neighbors keeps insertion order for exact round-trips.
    void rebuild_edge_index();

private:
    std::vector<std::vector<uint32_t>> sorted_out_;
};

// Core builder shared by the file loader and tests. Each arc (src, dst) is
// inserted once; duplicates collapse. directed=false inserts the reverse arc
// immediately after the forward one. Self-loops are kept.
Graph build_graph(const std::vector<std::pair<std::string, std::string>>& arcs,
                  bool directed);

// Rebuild a graph over an existing node-index assignment from a subset of
// arcs (used by edge-holdout evaluations; keeps feature rows aligned).
Graph build_graph_indexed(std::vector<std::string> node_ids,
                          const std::vector<std::pair<uint32_t, uint32_t>>& arcs);

// edges.tsv: one "src<TAB>dst" per line, UTF-8, LF. Malformed lines raise a
// parse error with the line number; an empty file is an error.
Graph load_edge_list(const std::string& path, bool directed);

// Inverse of load_edge_list for directed graphs: emits arcs in insertion
// order so reloading reproduces the identical Graph.
std::vector<std::string> edge_lines(const Graph& graph);
void write_edge_list(const Graph& graph, const std::string& path);

// Per-node raw token sequences. docs has exactly node_count entries; an
// entry may be empty (node absent from the texts file).
struct NodeDocs {
    std::vector<std::vector<std::string>> docs;
    std::optional<std::size_t> char_limit;
};

// Lowercase and split on non-alphanumeric bytes, dropping empty tokens.
std::vector<std::string> tokenize(std::string_view text);

// nodes.tsv: "node_id<TAB>free text". Text is truncated to char_limit
// characters before tokenization. Unknown node ids are an error.
NodeDocs load_node_texts(const std::string& path, const Graph& graph,
                         std::optional<std::size_t> char_limit);

struct LabelSet {
    std::vector<std::vector<std::string>> labels;  // per node, sorted, distinct
    std::vector<std::string> label_universe;       // sorted distinct labels
};

// labels.tsv: "node_id<TAB>comma,separated,labels". Nodes without a line get
// an empty set.
LabelSet load_labels(const std::string& path, const Graph& graph);

}  // namespace sense
