#pragma once

#include "sense/common.hpp"
#include "sense/graph.hpp"

#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace sense {

// Global word vocabulary across all node documents. Ids are dense [0, w),
// assigned by descending count (ties by token) so construction is
// deterministic. Immutable after build.
struct Vocab {
    std::unordered_map<std::string, uint32_t> token_to_id;
    std::vector<std::string> id_to_token;
    std::vector<uint64_t> counts;
    uint64_t total_count = 0;
    std::vector<double> keep_prob;

    std::size_t size() const { return id_to_token.size(); }
};

// Drops words with count < min_count, then assigns the standard skip-gram
// retention probability keep_prob = min(1, (sqrt(f/t) + 1) * t/f) with
// f = count/total over the retained words. Empty result is an error.
Vocab build_vocab(const NodeDocs& docs, uint64_t min_count, double subsample_t);

struct EncodedDocs {
    std::vector<std::vector<uint32_t>> docs;  // in-vocab word ids, order kept
    std::vector<uint64_t> word_counts;        // per-node in-vocab token count
};

// Out-of-vocabulary tokens are removed; idempotent under re-encoding.
EncodedDocs encode_docs(const NodeDocs& docs, const Vocab& vocab);

// Walker alias table: O(1) categorical sampling with probability of target i
// proportional to counts[i]^power. Callers pass the random source, so
// determinism stays with them.
class AliasTable {
public:
    static AliasTable from_counts(std::span<const uint64_t> counts, double power);
    explicit AliasTable(std::vector<double> weights);

    uint32_t sample(Rng& rng) const;
    std::size_t size() const { return prob_.size(); }
    const std::vector<double>& target_probs() const { return target_probs_; }

private:
    std::vector<double> prob_;      // acceptance threshold per bucket
    std::vector<uint32_t> alias_;   // fallback category per bucket
    std::vector<double> target_probs_;
};

}  // namespace sense
