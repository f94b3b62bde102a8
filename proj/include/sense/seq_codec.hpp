#pragma once

#include "sense/common.hpp"
#include "sense/model.hpp"

#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace sense {

// Unit-norm node vectors used by the sequence codec. Rows are normalized at
// construction unless the caller asserts they already are; a zero-norm row
// (untrained isolated node) is rejected with an error naming the node.
struct EmbeddingTable {
    Matrix rows;  // n x d, each row unit Euclidean norm
    std::vector<std::string> ids;
    std::unordered_map<std::string, uint32_t> id_to_index;

    std::size_t size() const { return rows.rows; }
    std::size_t dim() const { return rows.cols; }
    uint32_t index_of(const std::string& id) const;

    static EmbeddingTable from_rows(Matrix rows, std::vector<std::string> ids,
                                    bool assume_normalized = false);
    static EmbeddingTable load(const std::string& path,
                               bool assume_normalized = false);
};

// One d-dimensional vector standing for an ordered node sequence of declared
// length q. q <= d is a hard bound (coordinate wraparound would make
// positions ambiguous); q > d/8 still decodes but with visibly more noise.
struct SequenceVector {
    std::vector<double> values;
    std::size_t length = 0;
};

constexpr bool sequence_length_is_risky(std::size_t q, std::size_t d) {
    return q * 8 > d;
}

// Rotate v by m positions toward higher indices: element j of the result is
// v[(j - m) mod d]. Norm-preserving bijection; shifting by d is the identity.
std::vector<double> cyclic_shift(std::span<const double> v, std::size_t m);

// Superposition sum_{i=1..q} shift(row(v_i), i-1). Repeats are allowed; they
// bind to different positions through their different shifts.
SequenceVector encode_indices(std::span<const uint32_t> node_indices,
                              const EmbeddingTable& table);
SequenceVector encode(std::span<const std::string> node_ids,
                      const EmbeddingTable& table);

// Inner product of S with the node's row shifted into position k (1-based);
// near 1 when the node occupies that position.
double score(const SequenceVector& seq, uint32_t node_index,
             std::size_t position, const EmbeddingTable& table);

// Highest-scoring node for the position; ties break to the lowest index.
std::pair<uint32_t, double> decode_position(const SequenceVector& seq,
                                            std::size_t position,
                                            const EmbeddingTable& table);

std::vector<uint32_t> decode_indices(const SequenceVector& seq,
                                     const EmbeddingTable& table);
std::vector<std::string> decode(const SequenceVector& seq,
                                const EmbeddingTable& table);

// Length-agnostic variant for vectors of unknown q: keeps decoding positions
// while the best score clears `threshold` (0.5 is a reasonable cut between
// the ~1 hit and ~0 miss regimes). Heuristic; the stored length is
// authoritative when available.
std::vector<uint32_t> decode_indices_until(std::span<const double> values,
                                           const EmbeddingTable& table,
                                           double threshold);

// Uniform on the unit sphere: normalized i.i.d. standard normal samples.
std::vector<double> random_unit_vector(std::size_t d, Rng& rng);

struct MomentStats {
    double mean = 0.0;
    double variance = 0.0;
};

// Empirical moments of x.y over independent random unit vector pairs of the
// given dimension. Converges to mean 0, variance 1/dim.
MomentStats random_dot_moments(std::size_t dim, std::size_t samples, Rng& rng);

// Empirical moments of x.shift(y, m) where y is conditioned to satisfy
// x.y = c. The conditioning is realized in the coordinate frame the
// closed form holds in: x is the first standard basis vector and
// y = c*x + sqrt(1-c^2)*u with u uniform on the unit sphere of x's
// orthogonal complement. Converges to mean 0, variance (1-c^2)/(dim-1).
// m must not be a multiple of dim (the shift would be the identity).
MomentStats shifted_dot_moments(std::size_t dim, double c, std::size_t m,
                                std::size_t samples, Rng& rng);

// Sequence vector file: line 1 "q d", line 2 the d values.
void save_sequence_vector(const std::string& path, const SequenceVector& seq);
SequenceVector load_sequence_vector(const std::string& path);

}  // namespace sense
