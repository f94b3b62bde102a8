#include "sense/vocab.hpp"

#include <algorithm>
#include <cmath>

namespace sense {

Vocab build_vocab(const NodeDocs& docs, uint64_t min_count, double subsample_t) {
    if (min_count < 1) fail("config", "min_count must be >= 1");
    if (!(subsample_t > 0.0)) fail("config", "subsample_t must be > 0");

    std::unordered_map<std::string, uint64_t> raw;
    for (const auto& doc : docs.docs)
        for (const auto& token : doc) ++raw[token];

    std::vector<std::pair<std::string, uint64_t>> kept;
    kept.reserve(raw.size());
    for (auto& [token, count] : raw)
        if (count >= min_count) kept.emplace_back(token, count);
    if (kept.empty()) fail("data", "vocabulary is empty after min_count pruning");

    std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });

    Vocab vocab;
    vocab.id_to_token.reserve(kept.size());
    vocab.counts.reserve(kept.size());
    for (auto& [token, count] : kept) {
        vocab.token_to_id.emplace(token, static_cast<uint32_t>(vocab.id_to_token.size()));
        vocab.id_to_token.push_back(token);
        vocab.counts.push_back(count);
        vocab.total_count += count;
    }

    vocab.keep_prob.resize(vocab.size());
    for (std::size_t i = 0; i < vocab.size(); ++i) {
        double freq = static_cast<double>(vocab.counts[i]) /
                      static_cast<double>(vocab.total_count);
        double p = (std::sqrt(freq / subsample_t) + 1.0) * subsample_t / freq;
        vocab.keep_prob[i] = std::min(1.0, p);
    }
    return vocab;
}

EncodedDocs encode_docs(const NodeDocs& docs, const Vocab& vocab) {
    EncodedDocs encoded;
    encoded.docs.resize(docs.docs.size());
    encoded.word_counts.resize(docs.docs.size(), 0);
    for (std::size_t v = 0; v < docs.docs.size(); ++v) {
        auto& out = encoded.docs[v];
        out.reserve(docs.docs[v].size());
        for (const auto& token : docs.docs[v]) {
            auto it = vocab.token_to_id.find(token);
            if (it != vocab.token_to_id.end()) out.push_back(it->second);
        }
        encoded.word_counts[v] = out.size();
    }
    return encoded;
}

AliasTable AliasTable::from_counts(std::span<const uint64_t> counts, double power) {
    if (counts.empty()) fail("config", "noise distribution needs at least one count");
    if (power < 0.0) fail("config", "noise power must be >= 0");
    std::vector<double> weights(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i)
        weights[i] = counts[i] > 0 ? std::pow(static_cast<double>(counts[i]), power) : 0.0;
    return AliasTable(std::move(weights));
}

AliasTable::AliasTable(std::vector<double> weights) {
    double total = 0.0;
    for (double w : weights) {
        if (w < 0.0) fail("config", "sampling weights must be non-negative");
        total += w;
    }
    if (total <= 0.0) fail("data", "sampling weights are all zero");

    const std::size_t n = weights.size();
    target_probs_.resize(n);
    for (std::size_t i = 0; i < n; ++i) target_probs_[i] = weights[i] / total;

    // Walker/Vose construction: scale to mean 1, split into under/over-full
    // buckets, pair them off.
    prob_.assign(n, 0.0);
    alias_.assign(n, 0);
    std::vector<double> scaled(n);
    std::vector<uint32_t> small, large;
    for (std::size_t i = 0; i < n; ++i) {
        scaled[i] = target_probs_[i] * static_cast<double>(n);
        (scaled[i] < 1.0 ? small : large).push_back(static_cast<uint32_t>(i));
    }
    while (!small.empty() && !large.empty()) {
        uint32_t s = small.back(); small.pop_back();
        uint32_t l = large.back(); large.pop_back();
        prob_[s] = scaled[s];
        alias_[s] = l;
        scaled[l] = (scaled[l] + scaled[s]) - 1.0;
        (scaled[l] < 1.0 ? small : large).push_back(l);
    }
    for (uint32_t i : large) { prob_[i] = 1.0; alias_[i] = i; }
    for (uint32_t i : small) { prob_[i] = 1.0; alias_[i] = i; }
}

uint32_t AliasTable::sample(Rng& rng) const {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<uint32_t> bucket(0, static_cast<uint32_t>(prob_.size() - 1));
    uint32_t b = bucket(rng);
    return unit(rng) < prob_[b] ? b : alias_[b];
}

}  // namespace sense
