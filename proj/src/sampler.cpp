#include "sense/sampler.hpp"

#include <algorithm>

namespace sense {

void WalkConfig::validate() const {
    if (walks_per_node < 1) fail("config", "walks_per_node must be >= 1");
    if (walk_length < 2) fail("config", "walk_length must be >= 2");
    if (node_window < 1) fail("config", "node_window must be >= 1");
    if (!(return_p > 0.0)) fail("config", "return parameter p must be > 0");
    if (!(inout_q > 0.0)) fail("config", "in-out parameter q must be > 0");
}

std::vector<uint32_t> random_walk(const Graph& graph, uint32_t start,
                                  const WalkConfig& cfg, Rng& rng) {
    std::vector<uint32_t> walk;
    walk.reserve(cfg.walk_length);
    walk.push_back(start);

    const bool uniform = cfg.return_p == 1.0 && cfg.inout_q == 1.0;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> weights;

    while (walk.size() < cfg.walk_length) {
        uint32_t cur = walk.back();
        const auto& nbrs = graph.out_neighbors[cur];
        if (nbrs.empty()) break;  // sink truncation

        uint32_t next;
        if (uniform || walk.size() < 2) {
            std::uniform_int_distribution<std::size_t> pick(0, nbrs.size() - 1);
            next = nbrs[pick(rng)];
        } else {
            uint32_t prev = walk[walk.size() - 2];
            weights.resize(nbrs.size());
            double total = 0.0;
            for (std::size_t i = 0; i < nbrs.size(); ++i) {
                double w;
                if (nbrs[i] == prev) w = 1.0 / cfg.return_p;
                else if (graph.has_edge(prev, nbrs[i])) w = 1.0;
                else w = 1.0 / cfg.inout_q;
                weights[i] = w;
                total += w;
            }
            double r = unit(rng) * total;
            std::size_t i = 0;
            for (; i + 1 < nbrs.size(); ++i) {
                r -= weights[i];
                if (r < 0.0) break;
            }
            next = nbrs[i];
        }
        walk.push_back(next);
    }
    return walk;
}

std::vector<std::pair<uint32_t, uint32_t>> node_pairs(
    std::span<const uint32_t> walk, uint32_t window) {
    std::vector<std::pair<uint32_t, uint32_t>> pairs;
    if (walk.size() < 2) return pairs;
    const std::size_t n = walk.size();
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t lo = i > window ? i - window : 0;
        std::size_t hi = std::min(n - 1, i + window);
        for (std::size_t j = lo; j <= hi; ++j)
            if (j != i) pairs.emplace_back(walk[i], walk[j]);
    }
    return pairs;
}

std::vector<TrainingPair> word_pairs(std::span<const uint32_t> doc,
                                     uint32_t node, uint32_t text_window,
                                     const Vocab& vocab, Rng& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<uint32_t> kept;
    kept.reserve(doc.size());
    for (uint32_t word : doc)
        if (unit(rng) < vocab.keep_prob[word]) kept.push_back(word);

    std::vector<TrainingPair> pairs;
    if (kept.size() < 2) return pairs;
    const std::size_t n = kept.size();
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t lo = i > text_window ? i - text_window : 0;
        std::size_t hi = std::min(n - 1, i + text_window);
        for (std::size_t j = lo; j <= hi; ++j) {
            if (j == i) continue;
            pairs.push_back(TrainingPair{PairKind::Text,
                                         static_cast<int32_t>(kept[i]), node,
                                         kept[j]});
        }
    }
    return pairs;
}

EpochData build_epoch(const Graph& graph, const EncodedDocs& docs,
                      const Vocab& vocab, const WalkConfig& cfg,
                      uint32_t text_window, Rng& rng, bool include_graph,
                      bool include_text) {
    cfg.validate();
    EpochData epoch;
    epoch.node_visit_counts.assign(graph.node_count(), 0);

    if (include_graph) {
        for (uint32_t round = 0; round < cfg.walks_per_node; ++round) {
            for (uint32_t start = 0; start < graph.node_count(); ++start) {
                auto walk = random_walk(graph, start, cfg, rng);
                for (uint32_t v : walk) ++epoch.node_visit_counts[v];
                for (auto [center, context] : node_pairs(walk, cfg.node_window))
                    epoch.pairs.push_back(
                        TrainingPair{PairKind::Graph, kNoWord, center, context});
            }
        }
    }
    if (include_text) {
        for (uint32_t v = 0; v < graph.node_count(); ++v) {
            auto pairs = word_pairs(docs.docs[v], v, text_window, vocab, rng);
            epoch.pairs.insert(epoch.pairs.end(), pairs.begin(), pairs.end());
        }
    }
    std::shuffle(epoch.pairs.begin(), epoch.pairs.end(), rng);
    return epoch;
}

}  // namespace sense
