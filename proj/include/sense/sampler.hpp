#pragma once

#include "sense/common.hpp"
#include "sense/graph.hpp"
#include "sense/vocab.hpp"

#include <span>
#include <vector>

namespace sense {

// Second-order walk parameters plus the node-context window. p is the return
// parameter, q the in-out parameter; p = q = 1 degenerates to uniform walks.
struct WalkConfig {
    uint32_t walks_per_node = 10;
    uint32_t walk_length = 80;
    double return_p = 1.0;
    double inout_q = 1.0;
    uint32_t node_window = 10;

    void validate() const;
};

enum class PairKind : uint8_t { Text, Graph };

// One SGD sample. Text pairs predict a context word from (center word,
// owning node); graph pairs predict a context node from the node alone, so
// input_word is absent (-1).
struct TrainingPair {
    PairKind kind;
    int32_t input_word;   // word id, or -1 for graph pairs
    uint32_t input_node;
    uint32_t target;      // word id for Text, node id for Graph

    bool operator==(const TrainingPair&) const = default;
};

constexpr int32_t kNoWord = -1;

// Walk of length <= cfg.walk_length starting at `start`. The first step is
// uniform over out-neighbors; later steps weight candidate x by 1/p if x is
// the previous node, 1 if the previous node links to x, 1/q otherwise. The
// walk stops early at a sink.
std::vector<uint32_t> random_walk(const Graph& graph, uint32_t start,
                                  const WalkConfig& cfg, Rng& rng);

// All (walk[i], walk[j]) with j != i and |i - j| <= window.
std::vector<std::pair<uint32_t, uint32_t>> node_pairs(
    std::span<const uint32_t> walk, uint32_t window);

// Subsamples tokens by keep_prob, then windows the surviving sequence.
std::vector<TrainingPair> word_pairs(std::span<const uint32_t> doc,
                                     uint32_t node, uint32_t text_window,
                                     const Vocab& vocab, Rng& rng);

struct EpochData {
    std::vector<TrainingPair> pairs;       // seeded shuffle of merged stream
    std::vector<uint64_t> node_visit_counts;  // walk visits, for node noise
};

// One epoch of training pairs: graph pairs from walks_per_node walks per
// start node plus text pairs from every document, merged and shuffled with
// the caller's rng. Byte-for-byte reproducible for a fixed rng state.
EpochData build_epoch(const Graph& graph, const EncodedDocs& docs,
                      const Vocab& vocab, const WalkConfig& cfg,
                      uint32_t text_window, Rng& rng,
                      bool include_graph = true, bool include_text = true);

}  // namespace sense
