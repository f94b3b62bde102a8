#include "doctest.h"

#include "sense/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

using namespace sense;

namespace {

Graph from_pairs(std::vector<std::pair<std::string, std::string>> arcs,
                 bool directed) {
    return build_graph(arcs, directed);
}

Vocab tiny_vocab(const std::vector<std::vector<std::string>>& docs) {
    NodeDocs d;
    d.docs = docs;
    return build_vocab(d, 1, 1e9);  // huge t -> keep_prob 1 for everything
}

}  // namespace

TEST_CASE("random_walk truncates at sinks") {
    Graph g = from_pairs({{"a", "b"}}, true);  // b is a sink
    WalkConfig cfg;
    cfg.walk_length = 5;
    Rng rng(1);
    auto walk = random_walk(g, 0, cfg, rng);
    CHECK(walk == std::vector<uint32_t>{0, 1});

    auto from_sink = random_walk(g, 1, cfg, rng);
    CHECK(from_sink == std::vector<uint32_t>{1});
}

TEST_CASE("p=q=1 walks take uniform steps") {
    // star: a -> {b, c, d}; first transition must be uniform over the three
    Graph g = from_pairs({{"a", "b"}, {"a", "c"}, {"a", "d"}}, true);
    WalkConfig cfg;
    cfg.walk_length = 2;
    Rng rng(7);
    const int trials = 30000;
    std::map<uint32_t, int> counts;
    for (int t = 0; t < trials; ++t) ++counts[random_walk(g, 0, cfg, rng)[1]];

    double expected = trials / 3.0;
    double sigma = std::sqrt(trials * (1.0 / 3.0) * (2.0 / 3.0));
    for (auto [node, count] : counts) {
        INFO("node ", node, " count ", count);
        CHECK(std::abs(count - expected) < 3.0 * sigma);
    }
}

TEST_CASE("second-order bias weights follow 1/p, 1, 1/q") {
    // undirected triangle a-b-c: standing at b having come from a, the
    // normalized step weights are back-to-a = 1/p = 4 and to-c = 1 (c is a
    // neighbor of a), so Pr[a] = 4/5 = 0.8.
    Graph g = from_pairs({{"a", "b"}, {"b", "c"}, {"c", "a"}}, false);
    WalkConfig cfg;
    cfg.walk_length = 3;
    cfg.return_p = 0.25;
    cfg.inout_q = 4.0;

    Rng rng(99);
    uint32_t a = g.index_of("a"), b = g.index_of("b");
    int conditioned = 0, returned = 0;
    for (int t = 0; t < 200000; ++t) {
        auto walk = random_walk(g, a, cfg, rng);
        REQUIRE(walk.size() == 3);
        if (walk[1] != b) continue;
        ++conditioned;
        if (walk[2] == a) ++returned;
    }
    REQUIRE(conditioned > 50000);
    double p_hat = static_cast<double>(returned) / conditioned;
    double se = std::sqrt(0.8 * 0.2 / conditioned);
    CHECK(std::abs(p_hat - 0.8) < 4.0 * se);
}

TEST_CASE("node_pairs windows over the walk") {
    std::vector<uint32_t> ab{0, 1};
    auto pairs = node_pairs(ab, 1);
    CHECK(pairs == std::vector<std::pair<uint32_t, uint32_t>>{{0, 1}, {1, 0}});

    std::vector<uint32_t> single{4};
    CHECK(node_pairs(single, 3).empty());

    // enumeration oracle: walk of 3, window 2 -> every ordered pair once
    std::vector<uint32_t> abc{0, 1, 2};
    auto all = node_pairs(abc, 2);
    CHECK(all.size() == 6);
    std::set<std::pair<uint32_t, uint32_t>> got(all.begin(), all.end());
    std::set<std::pair<uint32_t, uint32_t>> want{{0, 1}, {0, 2}, {1, 0},
                                                 {1, 2}, {2, 0}, {2, 1}};
    CHECK(got == want);
}

TEST_CASE("word_pairs carries the owning node and windows survivors") {
    Vocab vocab = tiny_vocab({{"x", "y", "z"}});
    uint32_t x = vocab.token_to_id.at("x");
    uint32_t y = vocab.token_to_id.at("y");
    uint32_t z = vocab.token_to_id.at("z");

    SUBCASE("all kept") {
        std::vector<uint32_t> doc{x, y};
        Rng rng(3);
        auto pairs = word_pairs(doc, 9, 1, vocab, rng);
        REQUIRE(pairs.size() == 2);
        for (const auto& p : pairs) {
            CHECK(p.kind == PairKind::Text);
            CHECK(p.input_node == 9);
            CHECK(p.input_word >= 0);
        }
        CHECK(pairs[0].input_word == static_cast<int32_t>(x));
        CHECK(pairs[0].target == y);
        CHECK(pairs[1].input_word == static_cast<int32_t>(y));
        CHECK(pairs[1].target == x);
    }
    SUBCASE("empty doc") {
        std::vector<uint32_t> doc;
        Rng rng(3);
        CHECK(word_pairs(doc, 0, 1, vocab, rng).empty());
    }
    SUBCASE("dropped token is removed before windowing") {
        Vocab dropped = vocab;
        dropped.keep_prob[y] = 0.0;
        std::vector<uint32_t> doc{x, y, z};
        Rng rng(3);
        auto pairs = word_pairs(doc, 0, 1, dropped, rng);
        REQUIRE(pairs.size() == 2);  // x<->z become window-1 neighbors
        CHECK(pairs[0].input_word == static_cast<int32_t>(x));
        CHECK(pairs[0].target == z);
        CHECK(pairs[1].input_word == static_cast<int32_t>(z));
        CHECK(pairs[1].target == x);
    }
}

TEST_CASE("build_epoch merges graph and text streams") {
    Vocab vocab = tiny_vocab({{"u", "v"}, {"u", "w"}});

    SUBCASE("no edges -> only text pairs") {
        Graph g = from_pairs({{"a", "a"}}, true);  // self-loop so walks exist
        Graph isolated = build_graph_indexed({"a", "b"}, {});
        NodeDocs docs;
        docs.docs = {{"u", "v"}, {"u", "w"}};
        EncodedDocs enc = encode_docs(docs, vocab);
        WalkConfig cfg;
        Rng rng(5);
        EpochData epoch = build_epoch(isolated, enc, vocab, cfg, 5, rng);
        CHECK(!epoch.pairs.empty());
        for (const auto& p : epoch.pairs) CHECK(p.kind == PairKind::Text);
    }

    SUBCASE("empty docs -> only graph pairs") {
        Graph g = from_pairs({{"a", "b"}, {"b", "a"}}, true);
        EncodedDocs enc;
        enc.docs = {{}, {}};
        enc.word_counts = {0, 0};
        WalkConfig cfg;
        cfg.walks_per_node = 2;
        cfg.walk_length = 10;
        Rng rng(5);
        EpochData epoch = build_epoch(g, enc, vocab, cfg, 5, rng);
        CHECK(!epoch.pairs.empty());
        for (const auto& p : epoch.pairs) {
            CHECK(p.kind == PairKind::Graph);
            CHECK(p.input_word == kNoWord);
        }
    }
}

TEST_CASE("graph pair count matches the enumeration oracle") {
    // two-node cycle: every walk is the deterministic alternation, so the
    // pair count is exactly walks x windowed-pairs-per-walk
    Graph g = from_pairs({{"a", "b"}, {"b", "a"}}, true);
    WalkConfig cfg;
    cfg.walks_per_node = 3;
    cfg.walk_length = 7;
    cfg.node_window = 2;

    std::size_t per_walk = 0;
    const std::size_t L = cfg.walk_length, W = cfg.node_window;
    for (std::size_t i = 0; i < L; ++i) {
        std::size_t lo = i > W ? i - W : 0;
        std::size_t hi = std::min(L - 1, i + W);
        per_walk += hi - lo;  // excludes i itself
    }

    EncodedDocs enc;
    enc.docs = {{}, {}};
    enc.word_counts = {0, 0};
    Vocab vocab = tiny_vocab({{"u"}});
    Rng rng(11);
    EpochData epoch = build_epoch(g, enc, vocab, cfg, 5, rng);
    CHECK(epoch.pairs.size() == 2 * cfg.walks_per_node * per_walk);
    CHECK(epoch.node_visit_counts[0] + epoch.node_visit_counts[1] ==
          2 * cfg.walks_per_node * L);
}

TEST_CASE("build_epoch is reproducible and emits valid pairs") {
    Graph g = from_pairs({{"a", "b"}, {"b", "c"}, {"c", "a"}, {"a", "c"}}, false);
    NodeDocs docs;
    docs.docs = {{"red", "blue", "red"}, {"green"}, {"blue", "blue"}};
    Vocab vocab = build_vocab(docs, 1, 1e-2);
    EncodedDocs enc = encode_docs(docs, vocab);
    WalkConfig cfg;
    cfg.walks_per_node = 2;
    cfg.walk_length = 6;
    cfg.node_window = 3;

    Rng rng1(42), rng2(42);
    EpochData e1 = build_epoch(g, enc, vocab, cfg, 2, rng1);
    EpochData e2 = build_epoch(g, enc, vocab, cfg, 2, rng2);
    CHECK(e1.pairs == e2.pairs);
    CHECK(e1.node_visit_counts == e2.node_visit_counts);

    for (const auto& p : e1.pairs) {
        CHECK(p.input_node < g.node_count());
        if (p.kind == PairKind::Text) {
            CHECK(p.input_word >= 0);
            CHECK(static_cast<std::size_t>(p.input_word) < vocab.size());
            CHECK(p.target < vocab.size());
        } else {
            CHECK(p.input_word == kNoWord);
            CHECK(p.target < g.node_count());
        }
    }
}
