#pragma once

#include <vector>

#include "scma/codebook.hpp"

namespace scma {

/// Bipartite layer/resource graph. All resource nodes share the same degree
/// d_f; layer degrees may differ. Edges are enumerated resource-major (all
/// edges of resource 0 first, in adjacency order).
struct FactorGraph {
    int num_resources = 0;   // K
    int num_layers = 0;      // J
    int resource_degree = 0;  // d_f
    int num_edges = 0;

    std::vector<std::vector<int>> resource_adj;  // per resource: connected layers
    std::vector<std::vector<int>> layer_adj;     // per layer: connected resources
    std::vector<int> edge_lut;                   // layer*K + resource -> edge id (-1 absent)

    int edge(int layer, int resource) const {
        return edge_lut[static_cast<std::size_t>(layer) * num_resources + resource];
    }
    double overloading_factor() const {
        return static_cast<double>(num_layers) / num_resources;
    }
};

// Builds the graph from per-layer resource lists; validates that every
// resource node has the same degree. Throws std::invalid_argument otherwise,
// naming the offending resources.
FactorGraph graph_from_adjacency(int num_resources, std::vector<std::vector<int>> layer_adj);

// One layer per unordered pair of resources, in lexicographic pair order:
// J = K(K-1)/2, d_f = K-1, every layer degree 2. Requires K >= 3.
FactorGraph build_regular_graph(int num_resources);

// Edge (j,k) exists iff layer j's support includes resource k.
FactorGraph from_codebook(const Codebook& cb);

}  // namespace scma
