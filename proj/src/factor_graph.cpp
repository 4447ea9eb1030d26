#include "scma/factor_graph.hpp"

#include <sstream>
#include <stdexcept>

namespace scma {

FactorGraph graph_from_adjacency(int num_resources, std::vector<std::vector<int>> layer_adj) {
    FactorGraph g;
    g.num_resources = num_resources;
    g.num_layers = static_cast<int>(layer_adj.size());
    g.layer_adj = std::move(layer_adj);
    g.resource_adj.resize(num_resources);

    for (int j = 0; j < g.num_layers; ++j)
        for (int k : g.layer_adj[j]) {
            if (k < 0 || k >= num_resources)
                throw std::invalid_argument("factor graph: resource index out of range");
            g.resource_adj[k].push_back(j);
        }

    g.resource_degree = g.num_resources ? static_cast<int>(g.resource_adj[0].size()) : 0;
    for (int k = 1; k < num_resources; ++k) {
        if (static_cast<int>(g.resource_adj[k].size()) != g.resource_degree) {
            std::ostringstream msg;
            msg << "factor graph: resource degrees differ (resource 0 has degree "
                << g.resource_degree << ", resource " << k << " has degree "
                << g.resource_adj[k].size() << ")";
            throw std::invalid_argument(msg.str());
        }
    }

    g.edge_lut.assign(static_cast<std::size_t>(g.num_layers) * num_resources, -1);
    int id = 0;
    for (int k = 0; k < num_resources; ++k)
        for (int j : g.resource_adj[k])
            g.edge_lut[static_cast<std::size_t>(j) * num_resources + k] = id++;
    g.num_edges = id;
    return g;
}

FactorGraph build_regular_graph(int num_resources) {
    if (num_resources < 3)
        throw std::invalid_argument("build_regular_graph: K must be >= 3");
    std::vector<std::vector<int>> layers;
    layers.reserve(static_cast<std::size_t>(num_resources) * (num_resources - 1) / 2);
    for (int a = 0; a < num_resources; ++a)
        for (int b = a + 1; b < num_resources; ++b) layers.push_back({a, b});
    return graph_from_adjacency(num_resources, std::move(layers));
}

FactorGraph from_codebook(const Codebook& cb) {
    std::vector<std::vector<int>> layers(cb.num_layers);
    for (int j = 0; j < cb.num_layers; ++j) layers[j] = cb.support(j);
    return graph_from_adjacency(cb.num_resources, std::move(layers));
}

}  // namespace scma
