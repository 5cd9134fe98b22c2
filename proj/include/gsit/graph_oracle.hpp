#ifndef GSIT_GRAPH_ORACLE_HPP
#define GSIT_GRAPH_ORACLE_HPP

#include <string>
#include <vector>

#include "gsit/attention.hpp"
#include "gsit/tensor.hpp"

namespace gsit::graph {

using num::Tensor2;

struct VertexSet {
    Tensor2 features; // N x D, one vertex per row
    std::string label;
    std::size_t count() const { return features.rows(); }
};

struct Edge {
    std::size_t target; // index into targets
    std::size_t source; // index into sources
};

// Explicit edge-list graph; targets may equal sources (complete graph).
struct ExplicitGraph {
    VertexSet targets;
    VertexSet sources;
    std::vector<Edge> edges;
};

// All N_dom x N_aux edges, direction auxiliary -> dominant.
ExplicitGraph build_bipartite(const VertexSet& dominant, const VertexSet& auxiliary);

// All ordered pairs including self-loops; N^2 edges.
ExplicitGraph build_complete(const VertexSet& set);

struct GatResult {
    Tensor2 output;                                       // N_targets x width
    std::vector<std::vector<double>> head_edge_weights;   // [head][edge index], post-softmax
};

// Slow per-vertex aggregation used as the brute-force reference: for each
// target and head, scores over its in-neighborhood via dot products of the
// projected features, softmax over the neighborhood, then the weighted sum
// of projected source features. Everything is explicit loops; the only
// shared machinery with the attention module is Tensor2 storage.
// An isolated target (no incoming edge) throws DegenerateRowError.
GatResult gat_aggregate(const ExplicitGraph& graph, const attn::EncoderWeights& weights);

} // namespace gsit::graph

#endif
