#include "sense/seq_codec.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace sense {

uint32_t EmbeddingTable::index_of(const std::string& id) const {
    auto it = id_to_index.find(id);
    if (it == id_to_index.end()) fail("data", "unknown node id '" + id + "'");
    return it->second;
}

EmbeddingTable EmbeddingTable::from_rows(Matrix rows, std::vector<std::string> ids,
                                         bool assume_normalized) {
    if (rows.rows != ids.size())
        fail("data", "embedding rows and ids disagree in length");
    EmbeddingTable table;
    table.rows = std::move(rows);
    table.ids = std::move(ids);
    for (uint32_t i = 0; i < table.ids.size(); ++i) {
        if (!table.id_to_index.emplace(table.ids[i], i).second)
            fail("data", "duplicate node id '" + table.ids[i] + "'");
    }
    if (!assume_normalized) {
        for (std::size_t i = 0; i < table.rows.rows; ++i) {
            double* row = table.rows.row(i);
            double norm = std::sqrt(dot(row, row, table.rows.cols));
            if (norm <= 1e-15)
                fail("data", "node '" + table.ids[i] +
                                 "' has a zero embedding row and cannot be "
                                 "normalized");
            for (std::size_t j = 0; j < table.rows.cols; ++j) row[j] /= norm;
        }
    }
    return table;
}

EmbeddingTable EmbeddingTable::load(const std::string& path,
                                    bool assume_normalized) {
    LoadedEmbeddings loaded = load_embedding_file(path);
    return from_rows(std::move(loaded.rows), std::move(loaded.ids),
                     assume_normalized);
}

std::vector<double> cyclic_shift(std::span<const double> v, std::size_t m) {
    const std::size_t d = v.size();
    if (d == 0) fail("data", "cannot shift an empty vector");
    const std::size_t shift = m % d;
    std::vector<double> out(d);
    std::rotate_copy(v.begin(), v.end() - shift, v.end(), out.begin());
    return out;
}

SequenceVector encode_indices(std::span<const uint32_t> node_indices,
                              const EmbeddingTable& table) {
    const std::size_t q = node_indices.size();
    const std::size_t d = table.dim();
    if (q < 1) fail("usage", "sequence must contain at least one node");
    if (q > d)
        fail("data", "sequence length " + std::to_string(q) +
                         " exceeds vector dimension " + std::to_string(d) +
                         "; positions would wrap around");

    SequenceVector seq;
    seq.length = q;
    seq.values.assign(d, 0.0);
    for (std::size_t i = 0; i < q; ++i) {
        if (node_indices[i] >= table.size())
            fail("data", "node index out of range");
        const double* row = table.rows.row(node_indices[i]);
        const std::size_t shift = i % d;  // i == position-1
        for (std::size_t j = 0; j < d; ++j)
            seq.values[(j + shift) % d] += row[j];
    }
    return seq;
}

SequenceVector encode(std::span<const std::string> node_ids,
                      const EmbeddingTable& table) {
    std::vector<uint32_t> indices;
    indices.reserve(node_ids.size());
    for (const auto& id : node_ids) indices.push_back(table.index_of(id));
    return encode_indices(indices, table);
}

double score(const SequenceVector& seq, uint32_t node_index,
             std::size_t position, const EmbeddingTable& table) {
    if (position < 1 || position > seq.length)
        fail("usage", "position out of range");
    if (seq.values.size() != table.dim())
        fail("data", "sequence vector dimension does not match the table");
    const std::size_t d = table.dim();
    const std::size_t shift = (position - 1) % d;
    const double* row = table.rows.row(node_index);
    double s = 0.0;
    for (std::size_t j = 0; j < d; ++j) s += seq.values[(j + shift) % d] * row[j];
    return s;
}

namespace {

// Shifts are orthogonal permutations, so S . shift(r, s) = shift(S, -s) . r;
// unshifting S once turns the per-position argmax into plain dot products.
std::pair<uint32_t, double> best_match(std::span<const double> unshifted,
                                       const EmbeddingTable& table) {
    uint32_t best = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    const std::size_t d = table.dim();
    for (uint32_t i = 0; i < table.size(); ++i) {
        double s = dot(unshifted.data(), table.rows.row(i), d);
        if (s > best_score) {
            best_score = s;
            best = i;
        }
    }
    return {best, best_score};
}

}  // namespace

std::pair<uint32_t, double> decode_position(const SequenceVector& seq,
                                            std::size_t position,
                                            const EmbeddingTable& table) {
    if (position < 1 || position > seq.length)
        fail("usage", "position out of range");
    if (seq.values.size() != table.dim())
        fail("data", "sequence vector dimension does not match the table");
    const std::size_t d = table.dim();
    const std::size_t shift = (position - 1) % d;
    std::vector<double> unshifted = cyclic_shift(seq.values, d - shift);
    return best_match(unshifted, table);
}

std::vector<uint32_t> decode_indices(const SequenceVector& seq,
                                     const EmbeddingTable& table) {
    std::vector<uint32_t> out;
    out.reserve(seq.length);
    for (std::size_t k = 1; k <= seq.length; ++k)
        out.push_back(decode_position(seq, k, table).first);
    return out;
}

std::vector<std::string> decode(const SequenceVector& seq,
                                const EmbeddingTable& table) {
    std::vector<std::string> out;
    out.reserve(seq.length);
    for (uint32_t idx : decode_indices(seq, table)) out.push_back(table.ids[idx]);
    return out;
}

std::vector<uint32_t> decode_indices_until(std::span<const double> values,
                                           const EmbeddingTable& table,
                                           double threshold) {
    if (values.size() != table.dim())
        fail("data", "sequence vector dimension does not match the table");
    const std::size_t d = table.dim();
    std::vector<uint32_t> out;
    for (std::size_t k = 1; k <= d; ++k) {
        std::vector<double> unshifted = cyclic_shift(values, d - ((k - 1) % d));
        auto [idx, s] = best_match(unshifted, table);
        if (s < threshold) break;
        out.push_back(idx);
    }
    return out;
}

std::vector<double> random_unit_vector(std::size_t d, Rng& rng) {
    if (d < 1) fail("config", "dimension must be >= 1");
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> v(d);
    double norm = 0.0;
    do {
        for (double& x : v) x = normal(rng);
        norm = std::sqrt(dot(v.data(), v.data(), d));
    } while (norm <= 1e-12);
    for (double& x : v) x /= norm;
    return v;
}

MomentStats random_dot_moments(std::size_t dim, std::size_t samples, Rng& rng) {
    if (samples < 2) fail("config", "need at least 2 samples");
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t s = 0; s < samples; ++s) {
        std::vector<double> x = random_unit_vector(dim, rng);
        std::vector<double> y = random_unit_vector(dim, rng);
        double v = dot(x.data(), y.data(), dim);
        sum += v;
        sum_sq += v * v;
    }
    MomentStats stats;
    stats.mean = sum / static_cast<double>(samples);
    stats.variance = sum_sq / static_cast<double>(samples) - stats.mean * stats.mean;
    return stats;
}

MomentStats shifted_dot_moments(std::size_t dim, double c, std::size_t m,
                                std::size_t samples, Rng& rng) {
    if (dim < 2) fail("config", "dimension must be >= 2");
    if (std::abs(c) > 1.0) fail("config", "correlation c must satisfy |c| <= 1");
    if (m % dim == 0)
        fail("config", "shift m must not be a multiple of the dimension "
                       "(the shifted vector would equal the original)");
    if (samples < 2) fail("config", "need at least 2 samples");

    // x = e1; y = c*e1 + sqrt(1-c^2)*u with u a random unit vector supported
    // on coordinates 2..dim. Then x . shift(y, m) picks out one coordinate of
    // y: y[(0 - m) mod dim], which never lands on coordinate 0 here.
    const double scale = std::sqrt(std::max(0.0, 1.0 - c * c));
    const std::size_t picked = (dim - (m % dim)) % dim;  // index into y
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t s = 0; s < samples; ++s) {
        std::vector<double> u = random_unit_vector(dim - 1, rng);
        // y coordinates 1..dim-1 hold scale*u; coordinate 0 holds c.
        double v = scale * u[picked - 1];
        sum += v;
        sum_sq += v * v;
    }
    MomentStats stats;
    stats.mean = sum / static_cast<double>(samples);
    stats.variance = sum_sq / static_cast<double>(samples) - stats.mean * stats.mean;
    return stats;
}

void save_sequence_vector(const std::string& path, const SequenceVector& seq) {
    std::ofstream out(path);
    if (!out) fail("io", "cannot write sequence vector file '" + path + "'");
    out << seq.length << ' ' << seq.values.size() << '\n';
    for (std::size_t j = 0; j < seq.values.size(); ++j) {
        if (j) out << ' ';
        out << format_g9(seq.values[j]);
    }
    out << '\n';
}

SequenceVector load_sequence_vector(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("io", "cannot open sequence vector file '" + path + "'");
    std::string line;
    if (!std::getline(in, line))
        fail("parse", "sequence vector file '" + path + "' is empty");
    std::istringstream header(line);
    std::size_t q = 0, d = 0;
    if (!(header >> q >> d) || q == 0 || d == 0 || q > d)
        fail("parse", path + ":1: expected header 'q d' with 1 <= q <= d");
    SequenceVector seq;
    seq.length = q;
    seq.values.resize(d);
    if (!std::getline(in, line))
        fail("parse", path + ":2: missing vector values");
    std::istringstream values(line);
    for (std::size_t j = 0; j < d; ++j)
        if (!(values >> seq.values[j]))
            fail("parse", path + ":2: expected " + std::to_string(d) + " values");
    std::string extra;
    if (values >> extra) fail("parse", path + ":2: trailing data");
    return seq;
}

}  // namespace sense
