#pragma once

// Synthetic graph/text fixtures shared by the unit and acceptance suites.

#include "sense/common.hpp"
#include "sense/graph.hpp"

#include <string>
#include <vector>

namespace fixtures {

// Equal-sized communities with dense intra-community and sparse
// inter-community edges, stored undirected. A ring inside each community
// guarantees minimum degree 2, so walks never hit sinks.
inline sense::Graph planted_partition(std::size_t n, std::size_t communities,
                                      double p_in, double p_out, uint64_t seed) {
    const std::size_t size = n / communities;
    auto community_of = [size](std::size_t v) { return v / size; };
    auto name = [](std::size_t v) { return "n" + std::to_string(v); };

    std::vector<std::pair<std::string, std::string>> arcs;
    for (std::size_t c = 0; c < communities; ++c) {
        for (std::size_t i = 0; i < size; ++i) {
            std::size_t u = c * size + i;
            std::size_t v = c * size + (i + 1) % size;
            arcs.emplace_back(name(u), name(v));
        }
    }
    sense::Rng rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = u + 1; v < n; ++v) {
            double p = community_of(u) == community_of(v) ? p_in : p_out;
            if (unit(rng) < p) arcs.emplace_back(name(u), name(v));
        }
    }
    return sense::build_graph(arcs, /*directed=*/false);
}

inline std::size_t community_of(std::size_t node, std::size_t n,
                                std::size_t communities) {
    return node / (n / communities);
}

// Per-node documents drawn from a community-specific vocabulary
// ("c<k>w<j>" tokens), plus labels naming the community.
struct JointFixture {
    sense::Graph graph;
    sense::NodeDocs docs;
    sense::LabelSet labels;
};

inline JointFixture joint_communities(std::size_t n, std::size_t communities,
                                      std::size_t words_per_community,
                                      std::size_t tokens_per_doc, double p_in,
                                      double p_out, uint64_t seed) {
    JointFixture fx;
    fx.graph = planted_partition(n, communities, p_in, p_out, seed);

    sense::Rng rng(seed + 1);
    std::uniform_int_distribution<std::size_t> pick(0, words_per_community - 1);
    fx.docs.docs.resize(n);
    fx.labels.labels.resize(n);
    for (std::size_t v = 0; v < n; ++v) {
        // ring arcs intern nodes in ascending order, so index v is "n<v>"
        std::size_t c = community_of(v, n, communities);
        for (std::size_t t = 0; t < tokens_per_doc; ++t)
            fx.docs.docs[v].push_back("c" + std::to_string(c) + "w" +
                                      std::to_string(pick(rng)));
        fx.labels.labels[v] = {"community" + std::to_string(c)};
    }
    for (std::size_t c = 0; c < communities; ++c)
        fx.labels.label_universe.push_back("community" + std::to_string(c));
    return fx;
}

}  // namespace fixtures
