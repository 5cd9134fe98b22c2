#ifndef GSIT_TAPE_HPP
#define GSIT_TAPE_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gsit/tensor.hpp"

namespace gsit::num {

struct NodeId {
    std::uint32_t index = 0;
};

// Reverse-mode tape over the primitives the fusion models need. Nodes are
// appended in topological order (operands always precede their consumers);
// backward() visits each node exactly once in reverse creation order.
// Single-writer: one tape per training worker.
class Tape {
public:
    NodeId constant(Tensor2 value);
    NodeId param(Tensor2 value);

    NodeId matmul(NodeId a, NodeId b);
    NodeId matmul_nt(NodeId a, NodeId b); // a * b^T
    NodeId add(NodeId a, NodeId b);
    NodeId scale(NodeId a, double s);
    NodeId softmax_rows(NodeId a);
    NodeId softmax_rows(NodeId a, Tensor2 mask); // additive {0,-inf} mask
    NodeId relu(NodeId a);
    NodeId concat_cols(std::span<const NodeId> parts);
    NodeId concat_rows(std::span<const NodeId> parts);
    NodeId slice_rows(NodeId a, std::size_t r0, std::size_t r1);
    NodeId slice_cols(NodeId a, std::size_t c0, std::size_t c1);
    NodeId last_row(NodeId a);
    NodeId sum(NodeId a);                 // 1x1
    NodeId mse(NodeId pred, NodeId target); // 1x1 mean squared error

    const Tensor2& value(NodeId id) const { return nodes_[id.index].value; }
    // Zero tensor if the node received no adjoint.
    const Tensor2& grad(NodeId id) const;
    bool is_param(NodeId id) const;

    // Seeds the adjoint of a scalar (1x1) loss node with 1 and propagates.
    // Throws ContractError for a non-scalar loss.
    void backward(NodeId loss);

    std::size_t node_count() const { return nodes_.size(); }

private:
    enum class Op : std::uint8_t {
        leaf_const,
        leaf_param,
        matmul,
        matmul_nt,
        add,
        scale,
        softmax_rows,
        relu,
        concat_cols,
        concat_rows,
        slice_rows,
        slice_cols,
        sum,
        mse,
    };

    struct Node {
        Op op = Op::leaf_const;
        Tensor2 value;
        std::vector<NodeId> inputs;
        double scalar = 0.0;                 // scale factor
        std::size_t lo = 0, hi = 0;          // slice bounds
        std::optional<Tensor2> mask;         // softmax mask
    };

    static Node make_node(Op op, Tensor2 value, std::vector<NodeId> inputs);
    NodeId push(Node n);
    Tensor2& grad_slot(NodeId id);
    void accumulate(NodeId id, const Tensor2& delta);

    std::vector<Node> nodes_;
    mutable std::vector<Tensor2> grads_;
};

} // namespace gsit::num

#endif
