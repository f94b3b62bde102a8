#include "doctest.h"

#include "grad_check.hpp"
#include "sense/model.hpp"

#include <cmath>
#include <numeric>

using namespace sense;
using gradcheck::max_rel_error_fd;

namespace {

TrainingPair text_pair(uint32_t word, uint32_t node, uint32_t target_word) {
    return {PairKind::Text, static_cast<int32_t>(word), node, target_word};
}

TrainingPair graph_pair(uint32_t node, uint32_t target_node) {
    return {PairKind::Graph, kNoWord, node, target_node};
}

void randomize_out(SenseModel& model, uint64_t seed, double scale = 0.5) {
    Rng rng(seed);
    std::uniform_real_distribution<double> uniform(-scale, scale);
    for (double& x : model.out.data) x = uniform(rng);
}

}  // namespace

TEST_CASE("init: bounded uniform inputs, zero outputs, seeded determinism") {
    SenseModel m(6, 3, 4, Variant::Add, 77);
    for (double x : m.in_word.data) CHECK(std::abs(x) <= 0.125);
    for (double x : m.in_node.data) CHECK(std::abs(x) <= 0.125);
    for (double x : m.out.data) CHECK(x == 0.0);

    SenseModel m2(6, 3, 4, Variant::Add, 77);
    CHECK(m.in_word.data == m2.in_word.data);
    CHECK(m.in_node.data == m2.in_node.data);

    SenseModel other(6, 3, 4, Variant::Add, 78);
    CHECK(m.in_word.data != other.in_word.data);
}

TEST_CASE("hidden combines word and node rows") {
    SenseModel m(2, 2, 2, Variant::Add, 1);
    m.in_word.data = {1, 0, 0.5, 0.5};
    m.in_node.data = {0, 1, 0.25, 0.25};

    CHECK(m.hidden(0, 0) == std::vector<double>{1, 1});
    CHECK(m.hidden(kNoWord, 0) == std::vector<double>{0, 1});  // zero word term

    SenseModel c(2, 2, 2, Variant::Concat, 1);
    c.in_word.data = m.in_word.data;
    c.in_node.data = m.in_node.data;
    CHECK(c.hidden_dim() == 4);
    CHECK(c.hidden(0, 1) == std::vector<double>{1, 0, 0.25, 0.25});
    CHECK(c.hidden(kNoWord, 1) == std::vector<double>{0, 0, 0.25, 0.25});
}

TEST_CASE("full_output_probs decomposes into two softmaxes") {
    SUBCASE("zero table is uniform in both blocks") {
        SenseModel m(5, 4, 3, Variant::Add, 2);
        auto h = m.hidden(1, 2);
        std::vector<double> word_probs, node_probs;
        m.full_output_probs(h, word_probs, node_probs);
        for (double p : word_probs) CHECK(p == doctest::Approx(1.0 / 5));
        for (double p : node_probs) CHECK(p == doctest::Approx(1.0 / 4));
    }
    SUBCASE("logits ln2 and 0 give 2/3 and 1/3") {
        SenseModel m(2, 1, 1, Variant::Add, 2);
        m.in_word.data = {1.0, 0.0};
        m.in_node.data = {0.0};
        m.out.data = {std::log(2.0), 0.0, 0.0};
        auto h = m.hidden(0, 0);  // h = [1]
        std::vector<double> word_probs, node_probs;
        m.full_output_probs(h, word_probs, node_probs);
        CHECK(word_probs[0] == doctest::Approx(2.0 / 3));
        CHECK(word_probs[1] == doctest::Approx(1.0 / 3));
    }
    SUBCASE("both blocks sum to 1 on random models") {
        for (uint64_t seed = 0; seed < 20; ++seed) {
            SenseModel m(7, 5, 4, seed % 2 ? Variant::Add : Variant::Concat, seed);
            randomize_out(m, seed + 100, 2.0);
            auto h = m.hidden(static_cast<int32_t>(seed % 7),
                              static_cast<uint32_t>(seed % 5));
            std::vector<double> word_probs, node_probs;
            m.full_output_probs(h, word_probs, node_probs);
            double sw = std::accumulate(word_probs.begin(), word_probs.end(), 0.0);
            double sn = std::accumulate(node_probs.begin(), node_probs.end(), 0.0);
            CHECK(std::abs(sw - 1.0) < 1e-9);
            CHECK(std::abs(sn - 1.0) < 1e-9);
        }
    }
    SUBCASE("dimension mismatch is an error") {
        SenseModel m(2, 2, 3, Variant::Concat, 2);
        std::vector<double> wrong(3, 0.0);  // needs 6
        std::vector<double> a, b;
        CHECK_THROWS_AS(m.full_output_probs(wrong, a, b), Error);
    }
}

TEST_CASE("pair loss at zero output table is (1+k) ln 2") {
    SenseModel m(5, 4, 3, Variant::Add, 3);
    std::vector<uint32_t> negatives{0, 4, 3};
    double loss = pair_loss(m, text_pair(1, 2, 2), negatives);
    CHECK(loss == doctest::Approx(4.0 * std::log(2.0)));

    double gloss = pair_loss(m, graph_pair(1, 3), std::vector<uint32_t>{0});
    CHECK(gloss == doctest::Approx(2.0 * std::log(2.0)));
}

TEST_CASE("gradient w.r.t. the true output vector at zero tables is -h/2") {
    SenseModel m(5, 4, 3, Variant::Add, 4);
    TrainingPair pair = text_pair(1, 2, 3);
    std::vector<uint32_t> negatives{0};
    PairGrads grads;
    pair_loss_and_grads(m, pair, negatives, grads);

    auto h = m.hidden(pair.input_word, pair.input_node);
    REQUIRE(grads.d_out.size() == 2);
    CHECK(grads.d_out[0].first == 3);  // word target row
    for (std::size_t j = 0; j < h.size(); ++j)
        CHECK(grads.d_out[0].second[j] == doctest::Approx(-0.5 * h[j]));
}

TEST_CASE("analytic gradients match central finite differences") {
    std::vector<uint32_t> word_negs{0, 4};
    std::vector<uint32_t> node_negs{0, 3};
    for (Variant variant : {Variant::Add, Variant::Concat}) {
        for (PairKind kind : {PairKind::Text, PairKind::Graph}) {
            SenseModel m(5, 4, 3, variant, 17);
            randomize_out(m, 18);
            TrainingPair pair = kind == PairKind::Text ? text_pair(2, 1, 3)
                                                       : graph_pair(1, 2);
            auto& negs = kind == PairKind::Text ? word_negs : node_negs;
            double worst = max_rel_error_fd(m, pair, negs);
            INFO("variant ", static_cast<int>(variant), " kind ",
                 static_cast<int>(kind));
            CHECK(worst < 1e-4);
        }
    }
}

TEST_CASE("graph pairs never touch the word matrix") {
    for (Variant variant : {Variant::Add, Variant::Concat}) {
        SenseModel m(5, 4, 3, variant, 23);
        randomize_out(m, 24);
        TrainingPair pair = graph_pair(2, 1);
        std::vector<uint32_t> negs{0, 3};

        PairGrads grads;
        pair_loss_and_grads(m, pair, negs, grads);
        CHECK(!grads.has_word);
        for (double g : grads.d_word) CHECK(g == 0.0);

        // loss is invariant to any word-matrix change
        double before = pair_loss(m, pair, negs);
        for (double& x : m.in_word.data) x += 0.37;
        CHECK(pair_loss(m, pair, negs) == before);
    }
}

TEST_CASE("sgd_step semantics") {
    TrainConfig cfg;
    cfg.beta1 = 0.05;
    cfg.beta2 = 0.025;
    cfg.lr_decay = false;

    SUBCASE("saturated pair has zero gradient and changes nothing") {
        SenseModel m(3, 3, 2, Variant::Add, 31);
        TrainingPair pair = text_pair(0, 1, 2);
        auto h = m.hidden(0, 1);
        double hsq = dot(h.data(), h.data(), h.size());
        double scale = 800.0 / hsq;  // drives sigmoid to exact 0/1
        for (std::size_t j = 0; j < m.out.cols; ++j) {
            m.out.at(2, j) = scale * h[j];    // true target strongly positive
            m.out.at(0, j) = -scale * h[j];   // negative strongly negative
        }
        auto snapshot_word = m.in_word.data;
        auto snapshot_node = m.in_node.data;
        auto snapshot_out = m.out.data;
        std::vector<uint32_t> negs{0};
        double loss = sgd_step(m, pair, negs, cfg, 0.0);
        CHECK(loss == 0.0);
        CHECK(m.in_word.data == snapshot_word);
        CHECK(m.in_node.data == snapshot_node);
        CHECK(m.out.data == snapshot_out);
    }

    SUBCASE("one step decreases the stepped pair's loss") {
        for (Variant variant : {Variant::Add, Variant::Concat}) {
            SenseModel m(5, 4, 3, variant, 37);
            randomize_out(m, 38);
            TrainingPair pair = text_pair(1, 0, 4);
            std::vector<uint32_t> negs{2, 3};
            double before = pair_loss(m, pair, negs);
            sgd_step(m, pair, negs, cfg, 0.0);
            double after = pair_loss(m, pair, negs);
            CHECK(after < before);
        }
    }

    SUBCASE("zero text rate leaves the word matrix untouched") {
        SenseModel m(5, 4, 3, Variant::Add, 41);
        randomize_out(m, 42);
        TrainConfig zero_text = cfg;
        zero_text.beta2 = 0.0;  // unvalidated on purpose
        auto snapshot = m.in_word.data;
        std::vector<uint32_t> negs{0};
        sgd_step(m, text_pair(2, 1, 3), negs, zero_text, 0.0);
        CHECK(m.in_word.data == snapshot);
    }

    SUBCASE("decay scales the applied rate") {
        SenseModel a(3, 3, 2, Variant::Add, 43);
        randomize_out(a, 44);
        SenseModel b = a;
        std::vector<uint32_t> negs{0};
        TrainingPair pair = graph_pair(0, 1);
        TrainConfig decayed = cfg;
        decayed.lr_decay = true;
        sgd_step(a, pair, negs, decayed, 0.0);   // full rate
        sgd_step(b, pair, negs, decayed, 0.999); // nearly floored rate
        // b must have moved strictly less than a
        double moved_a = 0.0, moved_b = 0.0;
        SenseModel fresh(3, 3, 2, Variant::Add, 43);
        for (std::size_t i = 0; i < a.out.data.size(); ++i) {
            moved_a += std::abs(a.out.data[i] - fresh.out.data[i]);
            moved_b += std::abs(b.out.data[i] - fresh.out.data[i]);
        }
        CHECK(moved_b < moved_a);
        CHECK(moved_b > 0.0);
    }
}

TEST_CASE("train: determinism, modes, and error paths") {
    Graph g = build_graph({{"a", "b"}, {"b", "c"}, {"c", "a"}, {"b", "a"}}, false);
    NodeDocs docs;
    docs.docs = {{"red", "team", "red"}, {"blue", "team"}, {"blue", "blue"}};
    Vocab vocab = build_vocab(docs, 1, 1e3);

    WalkConfig walk_cfg;
    walk_cfg.walks_per_node = 2;
    walk_cfg.walk_length = 8;
    walk_cfg.node_window = 3;

    TrainConfig cfg;
    cfg.dim = 6;
    cfg.epochs = 2;
    cfg.negatives = 2;
    cfg.seed = 5;
    cfg.text_window = 2;

    SUBCASE("same seed, single worker, identical parameters") {
        TrainResult r1 = train(g, docs, vocab, walk_cfg, cfg, TrainMode::Joint);
        TrainResult r2 = train(g, docs, vocab, walk_cfg, cfg, TrainMode::Joint);
        CHECK(r1.model.in_node.data == r2.model.in_node.data);
        CHECK(r1.model.in_word.data == r2.model.in_word.data);
        CHECK(r1.model.out.data == r2.model.out.data);
        CHECK(r1.epoch_mean_loss == r2.epoch_mean_loss);
    }

    SUBCASE("graph-only ignores text, text-only ignores graph") {
        TrainResult graph_only =
            train(g, docs, vocab, walk_cfg, cfg, TrainMode::GraphOnly);
        // text inputs never touched: word matrix still at its seeded init
        SenseModel fresh(vocab.size(), g.node_count(), cfg.dim, cfg.variant,
                         cfg.seed);
        CHECK(graph_only.model.in_word.data == fresh.in_word.data);

        TrainResult text_only =
            train(g, docs, vocab, walk_cfg, cfg, TrainMode::TextOnly);
        CHECK(text_only.model.in_word.data != fresh.in_word.data);
    }

    SUBCASE("empty stream is an error") {
        NodeDocs empty;
        empty.docs = {{}, {}, {}};
        CHECK_THROWS_AS(
            train(g, empty, vocab, walk_cfg, cfg, TrainMode::TextOnly), Error);
    }

    SUBCASE("config validation") {
        TrainConfig bad = cfg;
        bad.beta1 = 0.01;
        bad.beta2 = 0.02;
        CHECK_THROWS_AS(train(g, docs, vocab, walk_cfg, bad, TrainMode::Joint),
                        Error);
    }
}

TEST_CASE("node_embeddings normalization") {
    SenseModel m(2, 3, 4, Variant::Add, 51);
    m.in_node.data = {3, 0, 4, 0,   0, 0, 0, 0,   1, 1, 1, 1};

    std::vector<uint32_t> zero_rows;
    Matrix norm = node_embeddings(m, true, &zero_rows);
    CHECK(zero_rows == std::vector<uint32_t>{1});

    // unit norms, zero row untouched
    CHECK(std::sqrt(dot(norm.row(0), norm.row(0), 4)) == doctest::Approx(1.0));
    for (std::size_t j = 0; j < 4; ++j) CHECK(norm.at(1, j) == 0.0);

    // direction preserved: row 0 = (3,0,4,0)/5
    CHECK(norm.at(0, 0) == doctest::Approx(0.6));
    CHECK(norm.at(0, 2) == doctest::Approx(0.8));

    // idempotent
    SenseModel m2 = m;
    m2.in_node = norm;
    Matrix twice = node_embeddings(m2, true);
    for (std::size_t i = 0; i < twice.data.size(); ++i)
        CHECK(twice.data[i] == doctest::Approx(norm.data[i]).epsilon(1e-12));

    Matrix raw = node_embeddings(m, false);
    CHECK(raw.data == m.in_node.data);
}

TEST_CASE("embedding file round trip") {
    Matrix rows(2, 3);
    rows.data = {0.123456789, -1.5, 2e-7, 3.0, 4.25, -0.000125};
    std::vector<std::string> ids{"alpha", "beta"};
    auto path = std::string("/tmp/sense_test_embeddings.txt");
    save_embedding_file(path, rows, ids);

    LoadedEmbeddings loaded = load_embedding_file(path);
    CHECK(loaded.ids == std::vector<std::string>{"alpha", "beta"});
    REQUIRE(loaded.rows.rows == 2);
    REQUIRE(loaded.rows.cols == 3);
    for (std::size_t i = 0; i < rows.data.size(); ++i)
        CHECK(loaded.rows.data[i] ==
              doctest::Approx(rows.data[i]).epsilon(1e-8));

    std::vector<std::string> bad_ids{"with space", "beta"};
    CHECK_THROWS_AS(save_embedding_file(path, rows, bad_ids), Error);
}
