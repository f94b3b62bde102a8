#pragma once

#include "sense/common.hpp"
#include "sense/graph.hpp"
#include "sense/seq_codec.hpp"

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace sense {

struct SplitSpec {
    double train_frac = 0.6;
    double valid_frac = 0.2;
    double test_frac = 0.2;
    uint64_t seed = 1;

    void validate() const;
};

struct Split {
    std::vector<uint32_t> train, valid, test;
};

// Disjoint covering split of [0, count); fixed seed reproduces it exactly.
Split make_split(std::size_t count, const SplitSpec& spec);

struct LinearModel {
    std::vector<double> weights;
    double bias = 0.0;

    double decision(const double* x) const {
        return dot(weights.data(), x, weights.size()) + bias;
    }
};

// Full-batch gradient descent on L2-penalized logistic loss over the given
// sample rows. Step size is set from the curvature bound, so the fit is
// deterministic with no tuning knobs beyond l2.
LinearModel fit_logistic(const Matrix& features, std::span<const uint8_t> labels,
                         std::span<const uint32_t> rows, double l2,
                         std::size_t iters = 500);

inline constexpr double kL2Grid[] = {1e-4, 1e-3, 1e-2, 1e-1};

struct OvrClassifier {
    std::vector<std::string> label_names;  // kept labels, universe order
    std::vector<LinearModel> models;

    // Universe-label indices with positive margin, or the single best label
    // when none is positive.
    std::vector<uint32_t> predict(const double* x) const;
};

struct OvrReport {
    double train_error = 0.0;
    double valid_error = 0.0;
    double test_error = 0.0;
    double chosen_l2 = 0.0;
    std::size_t samples = 0;
    std::vector<std::string> skipped_labels;  // < 2 training positives
};

// One binary linear model per label, L2 penalty picked on the validation
// split from kL2Grid. Error is the exact-set-match misclassification rate:
// a node counts correct only when the predicted label set equals the true
// set. Nodes without labels are outside the task and are not scored.
std::pair<OvrClassifier, OvrReport> train_ovr_classifier(
    const Matrix& features, const LabelSet& labels, const SplitSpec& split);

struct LinkPredReport {
    std::size_t positives = 0;
    double train_error = 0.0;
    double valid_error = 0.0;
    double test_error = 0.0;
    double chosen_l2 = 0.0;
    std::vector<std::pair<uint32_t, uint32_t>> positive_pairs;  // removed arcs
    std::vector<std::pair<uint32_t, uint32_t>> negative_pairs;  // sampled non-edges
};

// Removes holdout_frac of arcs (never a node's last incident arc), trains
// embeddings on the residual graph through embed_fn, and classifies held-out
// arcs against an equal count of never-linked node pairs using element-wise
// |u - v| features.
LinkPredReport link_prediction(
    const Graph& graph, const std::function<Matrix(const Graph&)>& embed_fn,
    double holdout_frac, const SplitSpec& split, uint64_t seed);

enum class SweepMode : uint8_t { RandomNodes, RandomWalk };

struct DecodeExperiment {
    SweepMode mode = SweepMode::RandomNodes;
    std::vector<std::size_t> dims;     // RandomNodes; RandomWalk uses the table's
    std::vector<std::size_t> lengths;
    std::size_t trials = 200;
    uint64_t seed = 1;
    std::size_t random_n = 0;          // table size for RandomNodes
};

struct SweepCell {
    std::size_t dim = 0;
    std::size_t length = 0;
    double accuracy = 0.0;
    std::size_t trials = 0;
    bool skipped = false;
    std::string note;
};

// Per (dim, length) cell: encode `trials` sequences, decode them, and report
// the fraction recovered exactly at every position. Each cell derives its own
// random stream from (seed, dim, length), so cells are order-independent.
std::vector<SweepCell> decoding_sweep(const DecodeExperiment& exp,
                                      const EmbeddingTable* table = nullptr,
                                      const Graph* graph = nullptr);

void write_sweep_csv(const std::string& path, std::span<const SweepCell> cells);
void write_error_csv(const std::string& path, double train_error,
                     double valid_error, double test_error);

}  // namespace sense
