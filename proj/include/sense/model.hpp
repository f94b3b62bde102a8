#pragma once

#include "sense/common.hpp"
#include "sense/graph.hpp"
#include "sense/sampler.hpp"
#include "sense/vocab.hpp"

#include <iosfwd>
#include <span>
#include <vector>

namespace sense {

// Hidden-layer combination of the word row and node row.
enum class Variant : uint8_t { Add, Concat };

enum class TrainMode : uint8_t { Joint, GraphOnly, TextOnly };

struct TrainConfig {
    Variant variant = Variant::Add;
    std::size_t dim = 128;
    uint32_t epochs = 5;
    uint32_t negatives = 5;
    double beta1 = 0.025;    // graph-pair learning rate (must exceed beta2)
    double beta2 = 0.0125;   // text-pair learning rate
    double tau = 1.0;        // per-node vocabulary-size constant; informational,
                             // already absorbed into beta1's role
    uint64_t seed = 1;
    bool lr_decay = true;    // linear decay to a 1e-4 floor over the run
    uint32_t threads = 1;    // >1 opts into unsynchronized racy updates
    uint32_t text_window = 5;
    double noise_power = 0.75;

    void validate() const;
};

// Two input lookup tables feeding a shared output table over w+n targets.
// Output row i is the vector for word target i; row w+j for node target j.
// Rows of in_node are the node embeddings.
class SenseModel {
public:
    SenseModel(std::size_t word_count, std::size_t node_count, std::size_t dim,
               Variant variant, uint64_t seed);

    Variant variant;
    std::size_t dim;
    Matrix in_word;  // w x d, uniform init on [-0.5/d, 0.5/d]
    Matrix in_node;  // n x d, same init
    Matrix out;      // (w+n) x hidden_dim, zero init

    std::size_t word_count() const { return in_word.rows; }
    std::size_t node_count() const { return in_node.rows; }
    std::size_t hidden_dim() const {
        return variant == Variant::Add ? dim : 2 * dim;
    }
    std::size_t target_count() const { return out.rows; }
    std::size_t target_index(const TrainingPair& pair) const {
        return pair.kind == PairKind::Text ? pair.target
                                           : word_count() + pair.target;
    }

    // Word row + node row (Add) or their concatenation (Concat); the word
    // contribution is the zero vector when input_word is absent.
    std::vector<double> hidden(int32_t input_word, uint32_t input_node) const;
    void hidden_into(int32_t input_word, uint32_t input_node, double* out_h) const;

    // Reference softmax over the full output layer, decomposed into the word
    // block and the node block; each sub-vector sums to 1. Testing aid, not
    // used for training.
    void full_output_probs(std::span<const double> hidden,
                           std::vector<double>& word_probs,
                           std::vector<double>& node_probs) const;
};

struct PairGrads {
    bool has_word = false;
    std::vector<double> d_word;  // dim
    std::vector<double> d_node;  // dim
    std::vector<std::pair<uint32_t, std::vector<double>>> d_out;  // by output row
};

// Negative-sampling loss -log sig(u_t.h) - sum_j log sig(-u_j.h). Negatives
// are ids in the pair's own target space and must not equal the true target.
double pair_loss(const SenseModel& model, const TrainingPair& pair,
                 std::span<const uint32_t> negatives);

double pair_loss_and_grads(const SenseModel& model, const TrainingPair& pair,
                           std::span<const uint32_t> negatives,
                           PairGrads& grads);

// One SGD step at the pre-step parameters; graph pairs use beta1, text pairs
// beta2, both scaled by max(1e-4, 1 - progress) when lr_decay is on.
// Returns the pair loss before the update.
double sgd_step(SenseModel& model, const TrainingPair& pair,
                std::span<const uint32_t> negatives, const TrainConfig& cfg,
                double progress);

struct TrainResult {
    SenseModel model;
    std::vector<double> epoch_mean_loss;
    uint64_t pairs_processed = 0;
};

// Full training run: epochs x (fresh walks -> merged shuffled pair stream ->
// sgd_step). Deterministic for threads == 1 and a fixed seed; threads > 1
// applies racy unsynchronized updates and is only statistically reproducible.
// Reports running mean loss every 10k pairs to `log` when given.
TrainResult train(const Graph& graph, const NodeDocs& docs, const Vocab& vocab,
                  const WalkConfig& walk_cfg, const TrainConfig& cfg,
                  TrainMode mode, std::ostream* log = nullptr);

// Copy of in_node; normalize scales each row to unit length, leaving
// all-zero rows untouched and reporting their indices via zero_rows.
Matrix node_embeddings(const SenseModel& model, bool normalize,
                       std::vector<uint32_t>* zero_rows = nullptr);

// Embedding text format: "n d" header, then "id v1 ... vd" per row with
// 9 significant digits.
void save_embedding_file(const std::string& path, const Matrix& rows,
                         std::span<const std::string> ids);

struct LoadedEmbeddings {
    std::vector<std::string> ids;
    Matrix rows;
};
LoadedEmbeddings load_embedding_file(const std::string& path);

}  // namespace sense
