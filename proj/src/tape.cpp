#include "gsit/tape.hpp"

#include <cmath>

namespace gsit::num {

Tape::Node Tape::make_node(Op op, Tensor2 value, std::vector<NodeId> inputs) {
    Node n;
    n.op = op;
    n.value = std::move(value);
    n.inputs = std::move(inputs);
    return n;
}

NodeId Tape::push(Node n) {
    nodes_.push_back(std::move(n));
    return NodeId{static_cast<std::uint32_t>(nodes_.size() - 1)};
}

NodeId Tape::constant(Tensor2 value) {
    return push(make_node(Op::leaf_const, std::move(value), {}));
}

NodeId Tape::param(Tensor2 value) {
    return push(make_node(Op::leaf_param, std::move(value), {}));
}

NodeId Tape::matmul(NodeId a, NodeId b) {
    return push(make_node(Op::matmul, num::matmul(value(a), value(b)), {a, b}));
}

NodeId Tape::matmul_nt(NodeId a, NodeId b) {
    return push(make_node(Op::matmul_nt, num::matmul_nt(value(a), value(b)), {a, b}));
}

NodeId Tape::add(NodeId a, NodeId b) {
    return push(make_node(Op::add, num::add(value(a), value(b)), {a, b}));
}

NodeId Tape::scale(NodeId a, double s) {
    Node n = make_node(Op::scale, num::scale(value(a), s), {a});
    n.scalar = s;
    return push(std::move(n));
}

NodeId Tape::softmax_rows(NodeId a) {
    return push(make_node(Op::softmax_rows, num::softmax_rows(value(a)), {a}));
}

NodeId Tape::softmax_rows(NodeId a, Tensor2 mask) {
    Node n = make_node(Op::softmax_rows, num::softmax_rows(value(a), &mask), {a});
    n.mask = std::move(mask);
    return push(std::move(n));
}

NodeId Tape::relu(NodeId a) {
    return push(make_node(Op::relu, num::relu(value(a)), {a}));
}

NodeId Tape::concat_cols(std::span<const NodeId> parts) {
    std::vector<Tensor2> vals;
    vals.reserve(parts.size());
    for (NodeId p : parts) vals.push_back(value(p));
    Node n = make_node(Op::concat_cols, num::concat_cols(vals), {parts.begin(), parts.end()});
    return push(std::move(n));
}

NodeId Tape::concat_rows(std::span<const NodeId> parts) {
    std::vector<Tensor2> vals;
    vals.reserve(parts.size());
    for (NodeId p : parts) vals.push_back(value(p));
    Node n = make_node(Op::concat_rows, num::concat_rows(vals), {parts.begin(), parts.end()});
    return push(std::move(n));
}

NodeId Tape::slice_rows(NodeId a, std::size_t r0, std::size_t r1) {
    Node n = make_node(Op::slice_rows, num::slice_rows(value(a), r0, r1), {a});
    n.lo = r0;
    n.hi = r1;
    return push(std::move(n));
}

NodeId Tape::slice_cols(NodeId a, std::size_t c0, std::size_t c1) {
    Node n = make_node(Op::slice_cols, num::slice_cols(value(a), c0, c1), {a});
    n.lo = c0;
    n.hi = c1;
    return push(std::move(n));
}

NodeId Tape::last_row(NodeId a) {
    const std::size_t rows = value(a).rows();
    if (rows == 0) throw ShapeError("last_row: empty tensor");
    return slice_rows(a, rows - 1, rows);
}

NodeId Tape::sum(NodeId a) {
    Tensor2 out(1, 1);
    out(0, 0) = num::sum(value(a));
    return push(make_node(Op::sum, std::move(out), {a}));
}

NodeId Tape::mse(NodeId pred, NodeId target) {
    Tensor2 out(1, 1);
    out(0, 0) = num::mse(value(pred), value(target));
    return push(make_node(Op::mse, std::move(out), {pred, target}));
}

bool Tape::is_param(NodeId id) const {
    return nodes_[id.index].op == Op::leaf_param;
}

Tensor2& Tape::grad_slot(NodeId id) {
    if (grads_.size() < nodes_.size()) grads_.resize(nodes_.size());
    Tensor2& g = grads_[id.index];
    if (!g.same_shape(nodes_[id.index].value)) g = Tensor2(nodes_[id.index].value.rows(), nodes_[id.index].value.cols());
    return g;
}

const Tensor2& Tape::grad(NodeId id) const {
    if (grads_.size() < nodes_.size()) grads_.resize(nodes_.size());
    Tensor2& g = grads_[id.index];
    if (!g.same_shape(nodes_[id.index].value)) g = Tensor2(nodes_[id.index].value.rows(), nodes_[id.index].value.cols());
    return g;
}

void Tape::accumulate(NodeId id, const Tensor2& delta) {
    Tensor2& g = grad_slot(id);
    for (std::size_t i = 0; i < g.size(); ++i) g.flat()[i] += delta.flat()[i];
}

void Tape::backward(NodeId loss) {
    const Tensor2& lv = value(loss);
    if (lv.rows() != 1 || lv.cols() != 1) throw ContractError("backward: loss node must be 1x1");

    grads_.assign(nodes_.size(), Tensor2());
    grad_slot(loss)(0, 0) = 1.0;

    for (std::uint32_t i = loss.index + 1; i-- > 0;) {
        const Node& n = nodes_[i];
        const Tensor2& g = grads_[i];
        if (g.empty()) continue; // no adjoint reached this node

        switch (n.op) {
        case Op::leaf_const:
        case Op::leaf_param:
            break;
        case Op::matmul: {
            const Tensor2& a = value(n.inputs[0]);
            const Tensor2& b = value(n.inputs[1]);
            accumulate(n.inputs[0], num::matmul_nt(g, b)); // g * b^T
            accumulate(n.inputs[1], num::matmul_tn(a, g)); // a^T * g
            break;
        }
        case Op::matmul_nt: {
            const Tensor2& a = value(n.inputs[0]);
            const Tensor2& b = value(n.inputs[1]);
            accumulate(n.inputs[0], num::matmul(g, b));
            accumulate(n.inputs[1], num::matmul_tn(g, a)); // g^T * a
            break;
        }
        case Op::add:
            accumulate(n.inputs[0], g);
            accumulate(n.inputs[1], g);
            break;
        case Op::scale:
            accumulate(n.inputs[0], num::scale(g, n.scalar));
            break;
        case Op::softmax_rows: {
            // dX = Y .* (dY - rowsum(dY .* Y)); masked entries have Y = 0.
            const Tensor2& y = n.value;
            Tensor2 dx(y.rows(), y.cols());
            for (std::size_t r = 0; r < y.rows(); ++r) {
                double dot = 0.0;
                for (std::size_t c = 0; c < y.cols(); ++c) dot += g(r, c) * y(r, c);
                for (std::size_t c = 0; c < y.cols(); ++c) dx(r, c) = y(r, c) * (g(r, c) - dot);
            }
            accumulate(n.inputs[0], dx);
            break;
        }
        case Op::relu: {
            const Tensor2& x = value(n.inputs[0]);
            Tensor2 dx(x.rows(), x.cols());
            for (std::size_t k = 0; k < x.size(); ++k) dx.flat()[k] = x.flat()[k] > 0.0 ? g.flat()[k] : 0.0;
            accumulate(n.inputs[0], dx);
            break;
        }
        case Op::concat_cols: {
            std::size_t c0 = 0;
            for (NodeId p : n.inputs) {
                const std::size_t w = value(p).cols();
                accumulate(p, num::slice_cols(g, c0, c0 + w));
                c0 += w;
            }
            break;
        }
        case Op::concat_rows: {
            std::size_t r0 = 0;
            for (NodeId p : n.inputs) {
                const std::size_t h = value(p).rows();
                accumulate(p, num::slice_rows(g, r0, r0 + h));
                r0 += h;
            }
            break;
        }
        case Op::slice_rows: {
            const Tensor2& parent = value(n.inputs[0]);
            Tensor2 dx(parent.rows(), parent.cols());
            for (std::size_t r = n.lo; r < n.hi; ++r)
                for (std::size_t c = 0; c < parent.cols(); ++c) dx(r, c) = g(r - n.lo, c);
            accumulate(n.inputs[0], dx);
            break;
        }
        case Op::slice_cols: {
            const Tensor2& parent = value(n.inputs[0]);
            Tensor2 dx(parent.rows(), parent.cols());
            for (std::size_t r = 0; r < parent.rows(); ++r)
                for (std::size_t c = n.lo; c < n.hi; ++c) dx(r, c) = g(r, c - n.lo);
            accumulate(n.inputs[0], dx);
            break;
        }
        case Op::sum: {
            const Tensor2& a = value(n.inputs[0]);
            accumulate(n.inputs[0], Tensor2(a.rows(), a.cols(), g(0, 0)));
            break;
        }
        case Op::mse: {
            const Tensor2& a = value(n.inputs[0]);
            const Tensor2& b = value(n.inputs[1]);
            const double k = 2.0 * g(0, 0) / static_cast<double>(a.size());
            Tensor2 da(a.rows(), a.cols());
            for (std::size_t j = 0; j < a.size(); ++j) da.flat()[j] = k * (a.flat()[j] - b.flat()[j]);
            accumulate(n.inputs[0], da);
            accumulate(n.inputs[1], num::scale(da, -1.0));
            break;
        }
        }
    }
}

} // namespace gsit::num
