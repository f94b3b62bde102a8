#include "sense/graph.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <unordered_set>

namespace sense {

uint32_t Graph::index_of(const std::string& id) const {
    auto it = id_to_index.find(id);
    if (it == id_to_index.end()) fail("data", "unknown node id '" + id + "'");
    return it->second;
}

bool Graph::has_edge(uint32_t src, uint32_t dst) const {
    const auto& nbrs = sorted_out_[src];
    return std::binary_search(nbrs.begin(), nbrs.end(), dst);
}

void Graph::rebuild_edge_index() {
    sorted_out_ = out_neighbors;
    for (auto& nbrs : sorted_out_) std::sort(nbrs.begin(), nbrs.end());
}

namespace {

uint32_t intern_node(Graph& g, const std::string& id) {
    auto it = g.id_to_index.find(id);
    if (it != g.id_to_index.end()) return it->second;
    uint32_t idx = static_cast<uint32_t>(g.node_ids.size());
    g.id_to_index.emplace(id, idx);
    g.node_ids.push_back(id);
    g.out_neighbors.emplace_back();
    return idx;
}

void insert_arc(Graph& g, std::unordered_set<uint64_t>& seen, uint32_t src,
                uint32_t dst) {
    uint64_t key = (static_cast<uint64_t>(src) << 32) | dst;
    if (!seen.insert(key).second) return;
    g.out_neighbors[src].push_back(dst);
    g.edges.emplace_back(src, dst);
}

}  // namespace

Graph build_graph(const std::vector<std::pair<std::string, std::string>>& arcs,
                  bool directed) {
    Graph g;
    std::unordered_set<uint64_t> seen;
    for (const auto& [src_id, dst_id] : arcs) {
        uint32_t src = intern_node(g, src_id);
        uint32_t dst = intern_node(g, dst_id);
        insert_arc(g, seen, src, dst);
        if (!directed) insert_arc(g, seen, dst, src);
    }
    g.rebuild_edge_index();
    return g;
}

Graph build_graph_indexed(std::vector<std::string> node_ids,
                          const std::vector<std::pair<uint32_t, uint32_t>>& arcs) {
    Graph g;
    g.node_ids = std::move(node_ids);
    g.out_neighbors.resize(g.node_ids.size());
    for (uint32_t i = 0; i < g.node_ids.size(); ++i) {
        if (!g.id_to_index.emplace(g.node_ids[i], i).second)
            fail("data", "duplicate node id '" + g.node_ids[i] + "'");
    }
    std::unordered_set<uint64_t> seen;
    for (const auto& [src, dst] : arcs) {
        if (src >= g.node_count() || dst >= g.node_count())
            fail("data", "arc index out of range");
        insert_arc(g, seen, src, dst);
    }
    g.rebuild_edge_index();
    return g;
}

Graph load_edge_list(const std::string& path, bool directed) {
    std::ifstream in(path);
    if (!in) fail("io", "cannot open edges file '" + path + "'");

    std::vector<std::pair<std::string, std::string>> arcs;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos || tab == 0 || tab + 1 == line.size())
            fail("parse", path + ":" + std::to_string(line_no) +
                              ": expected 'src<TAB>dst', got '" + line + "'");
        arcs.emplace_back(line.substr(0, tab), line.substr(tab + 1));
    }
    if (arcs.empty()) fail("parse", "edges file '" + path + "' has no edges");
    return build_graph(arcs, directed);
}

std::vector<std::string> edge_lines(const Graph& graph) {
    std::vector<std::string> lines;
    lines.reserve(graph.edges.size());
    for (const auto& [src, dst] : graph.edges)
        lines.push_back(graph.node_ids[src] + "\t" + graph.node_ids[dst]);
    return lines;
}

void write_edge_list(const Graph& graph, const std::string& path) {
    std::ofstream out(path);
    if (!out) fail("io", "cannot write edges file '" + path + "'");
    for (const auto& line : edge_lines(graph)) out << line << '\n';
}

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    for (char ch : text) {
        unsigned char u = static_cast<unsigned char>(ch);
        if (std::isalnum(u)) {
            current.push_back(static_cast<char>(std::tolower(u)));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

NodeDocs load_node_texts(const std::string& path, const Graph& graph,
                         std::optional<std::size_t> char_limit) {
    std::ifstream in(path);
    if (!in) fail("io", "cannot open texts file '" + path + "'");

    NodeDocs docs;
    docs.char_limit = char_limit;
    docs.docs.resize(graph.node_count());

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos)
            fail("parse", path + ":" + std::to_string(line_no) +
                              ": expected 'node_id<TAB>text'");
        std::string id = line.substr(0, tab);
        auto it = graph.id_to_index.find(id);
        if (it == graph.id_to_index.end())
            fail("data", path + ":" + std::to_string(line_no) +
                             ": unknown node id '" + id + "'");
        std::string_view text(line);
        text.remove_prefix(tab + 1);
        if (char_limit && text.size() > *char_limit)
            text = text.substr(0, *char_limit);
        docs.docs[it->second] = tokenize(text);
    }
    return docs;
}

LabelSet load_labels(const std::string& path, const Graph& graph) {
    std::ifstream in(path);
    if (!in) fail("io", "cannot open labels file '" + path + "'");

    LabelSet set;
    set.labels.resize(graph.node_count());

    std::string line;
    std::size_t line_no = 0;
    std::unordered_set<std::string> universe;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos)
            fail("parse", path + ":" + std::to_string(line_no) +
                              ": expected 'node_id<TAB>label1,label2,...'");
        std::string id = line.substr(0, tab);
        auto it = graph.id_to_index.find(id);
        if (it == graph.id_to_index.end())
            fail("data", path + ":" + std::to_string(line_no) +
                             ": unknown node id '" + id + "'");

        std::vector<std::string>& node_labels = set.labels[it->second];
        std::string label;
        for (std::size_t pos = tab + 1; pos <= line.size(); ++pos) {
            if (pos == line.size() || line[pos] == ',') {
                if (!label.empty()) {
                    node_labels.push_back(label);
                    universe.insert(label);
                }
                label.clear();
            } else {
                label.push_back(line[pos]);
            }
        }
        std::sort(node_labels.begin(), node_labels.end());
        node_labels.erase(std::unique(node_labels.begin(), node_labels.end()),
                          node_labels.end());
    }
    set.label_universe.assign(universe.begin(), universe.end());
    std::sort(set.label_universe.begin(), set.label_universe.end());
    return set;
}

}  // namespace sense
