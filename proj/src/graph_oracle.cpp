#include "gsit/graph_oracle.hpp"

#include <cmath>

namespace gsit::graph {

ExplicitGraph build_bipartite(const VertexSet& dominant, const VertexSet& auxiliary) {
    if (dominant.count() == 0 || auxiliary.count() == 0)
        throw ShapeError("build_bipartite: empty vertex set");
    ExplicitGraph g{dominant, auxiliary, {}};
    g.edges.reserve(dominant.count() * auxiliary.count());
    for (std::size_t m = 0; m < dominant.count(); ++m)
        for (std::size_t n = 0; n < auxiliary.count(); ++n) g.edges.push_back({m, n});
    return g;
}

ExplicitGraph build_complete(const VertexSet& set) {
    if (set.count() == 0) throw ShapeError("build_complete: empty vertex set");
    ExplicitGraph g{set, set, {}};
    g.edges.reserve(set.count() * set.count());
    // Self-loops included: self-attention lets a vertex attend to itself.
    for (std::size_t m = 0; m < set.count(); ++m)
        for (std::size_t n = 0; n < set.count(); ++n) g.edges.push_back({m, n});
    return g;
}

namespace {

// row . W column block, accumulated scalar by scalar.
double project_entry(const Tensor2& features, std::size_t vertex, const Tensor2& w, std::size_t out_col) {
    double acc = 0.0;
    for (std::size_t k = 0; k < features.cols(); ++k) acc += features(vertex, k) * w(k, out_col);
    return acc;
}

} // namespace

GatResult gat_aggregate(const ExplicitGraph& graph, const attn::EncoderWeights& weights) {
    const std::size_t d = weights.width();
    if (graph.targets.features.cols() != d || graph.sources.features.cols() != d)
        throw ShapeError("gat_aggregate: feature width mismatch");
    const std::size_t heads = weights.heads;
    const std::size_t dh = weights.head_dim();
    const double inv_scale = 1.0 / std::sqrt(static_cast<double>(dh));

    GatResult res;
    res.output = Tensor2(graph.targets.count(), d);
    res.head_edge_weights.assign(heads, std::vector<double>(graph.edges.size(), 0.0));

    for (std::size_t m = 0; m < graph.targets.count(); ++m) {
        std::vector<std::size_t> in_edges;
        for (std::size_t e = 0; e < graph.edges.size(); ++e)
            if (graph.edges[e].target == m) in_edges.push_back(e);
        if (in_edges.empty()) throw DegenerateRowError("gat_aggregate: isolated target vertex", m);

        for (std::size_t l = 0; l < heads; ++l) {
            // scores over the in-neighborhood
            std::vector<double> scores(in_edges.size());
            for (std::size_t ei = 0; ei < in_edges.size(); ++ei) {
                const std::size_t n = graph.edges[in_edges[ei]].source;
                double e = 0.0;
                for (std::size_t c = 0; c < dh; ++c) {
                    const double qc = project_entry(graph.targets.features, m, weights.w_q, l * dh + c);
                    const double kc = project_entry(graph.sources.features, n, weights.w_k, l * dh + c);
                    e += qc * kc;
                }
                scores[ei] = e * inv_scale;
            }
            double smax = scores[0];
            for (double s : scores) smax = s > smax ? s : smax;
            double denom = 0.0;
            for (double& s : scores) {
                s = std::exp(s - smax);
                denom += s;
            }
            for (std::size_t ei = 0; ei < in_edges.size(); ++ei) {
                const double alpha = scores[ei] / denom;
                res.head_edge_weights[l][in_edges[ei]] = alpha;
                const std::size_t n = graph.edges[in_edges[ei]].source;
                for (std::size_t c = 0; c < dh; ++c)
                    res.output(m, l * dh + c) +=
                        alpha * project_entry(graph.sources.features, n, weights.w_v, l * dh + c);
            }
        }
    }
    return res;
}

} // namespace gsit::graph
