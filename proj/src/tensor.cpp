#include "gsit/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace gsit::num {

Tensor2 Tensor2::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.begin()->size();
    Tensor2 t(r, c);
    std::size_t i = 0;
    for (const auto& row : rows) {
        if (row.size() != c) throw ShapeError("from_rows: ragged row lengths");
        std::copy(row.begin(), row.end(), t.row(i).begin());
        ++i;
    }
    return t;
}

Tensor2 Tensor2::identity(std::size_t n) {
    Tensor2 t(n, n);
    for (std::size_t i = 0; i < n; ++i) t(i, i) = 1.0;
    return t;
}

Tensor2 matmul(const Tensor2& a, const Tensor2& b) {
    if (a.cols() != b.rows()) throw ShapeError("matmul: inner dimensions differ");
    Tensor2 out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < b.cols(); ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < a.cols(); ++k) acc += a(i, k) * b(k, j);
            out(i, j) = acc;
        }
    }
    return out;
}

Tensor2 matmul_nt(const Tensor2& a, const Tensor2& b) {
    if (a.cols() != b.cols()) throw ShapeError("matmul_nt: inner dimensions differ");
    Tensor2 out(a.rows(), b.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < b.rows(); ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < a.cols(); ++k) acc += a(i, k) * b(j, k);
            out(i, j) = acc;
        }
    }
    return out;
}

Tensor2 matmul_tn(const Tensor2& a, const Tensor2& b) {
    if (a.rows() != b.rows()) throw ShapeError("matmul_tn: inner dimensions differ");
    Tensor2 out(a.cols(), b.cols());
    for (std::size_t i = 0; i < a.cols(); ++i) {
        for (std::size_t j = 0; j < b.cols(); ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < a.rows(); ++k) acc += a(k, i) * b(k, j);
            out(i, j) = acc;
        }
    }
    return out;
}

Tensor2 transpose(const Tensor2& a) {
    Tensor2 out(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
    return out;
}

namespace {
void require_same_shape(const Tensor2& a, const Tensor2& b, const char* op) {
    if (!a.same_shape(b)) throw ShapeError(std::string(op) + ": shape mismatch");
}
} // namespace

Tensor2 add(const Tensor2& a, const Tensor2& b) {
    require_same_shape(a, b, "add");
    Tensor2 out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out.flat()[i] += b.flat()[i];
    return out;
}

Tensor2 sub(const Tensor2& a, const Tensor2& b) {
    require_same_shape(a, b, "sub");
    Tensor2 out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out.flat()[i] -= b.flat()[i];
    return out;
}

Tensor2 scale(const Tensor2& a, double s) {
    Tensor2 out = a;
    for (double& v : out.flat()) v *= s;
    return out;
}

Tensor2 hadamard(const Tensor2& a, const Tensor2& b) {
    require_same_shape(a, b, "hadamard");
    Tensor2 out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out.flat()[i] *= b.flat()[i];
    return out;
}

Tensor2 relu(const Tensor2& a) {
    Tensor2 out = a;
    for (double& v : out.flat()) v = v > 0.0 ? v : 0.0;
    return out;
}

Tensor2 softmax_rows(const Tensor2& logits, const Tensor2* mask) {
    if (mask && !mask->same_shape(logits)) throw ShapeError("softmax_rows: mask shape mismatch");
    Tensor2 out(logits.rows(), logits.cols());
    for (std::size_t r = 0; r < logits.rows(); ++r) {
        double row_max = kNegInf;
        for (std::size_t c = 0; c < logits.cols(); ++c) {
            const double v = logits(r, c) + (mask ? (*mask)(r, c) : 0.0);
            if (std::isfinite(v) && v > row_max) row_max = v;
        }
        if (!std::isfinite(row_max)) throw DegenerateRowError("softmax_rows: all entries masked", r);
        double denom = 0.0;
        for (std::size_t c = 0; c < logits.cols(); ++c) {
            const double v = logits(r, c) + (mask ? (*mask)(r, c) : 0.0);
            const double e = std::isfinite(v) ? std::exp(v - row_max) : 0.0;
            out(r, c) = e;
            denom += e;
        }
        for (std::size_t c = 0; c < logits.cols(); ++c) out(r, c) /= denom;
    }
    return out;
}

Tensor2 concat_cols(std::span<const Tensor2> parts) {
    if (parts.empty()) throw ShapeError("concat_cols: no parts");
    const std::size_t rows = parts.front().rows();
    std::size_t cols = 0;
    for (const Tensor2& p : parts) {
        if (p.rows() != rows) throw ShapeError("concat_cols: row counts differ");
        cols += p.cols();
    }
    Tensor2 out(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        std::size_t c0 = 0;
        for (const Tensor2& p : parts) {
            std::copy(p.row(r).begin(), p.row(r).end(), out.row(r).begin() + static_cast<std::ptrdiff_t>(c0));
            c0 += p.cols();
        }
    }
    return out;
}

Tensor2 concat_cols(const Tensor2& a, const Tensor2& b) {
    const Tensor2 parts[] = {a, b};
    return concat_cols(std::span<const Tensor2>(parts, 2));
}

Tensor2 concat_rows(std::span<const Tensor2> parts) {
    if (parts.empty()) throw ShapeError("concat_rows: no parts");
    const std::size_t cols = parts.front().cols();
    std::size_t rows = 0;
    for (const Tensor2& p : parts) {
        if (p.cols() != cols) throw ShapeError("concat_rows: column counts differ");
        rows += p.rows();
    }
    Tensor2 out(rows, cols);
    std::size_t r0 = 0;
    for (const Tensor2& p : parts) {
        std::copy(p.flat().begin(), p.flat().end(), out.flat().begin() + static_cast<std::ptrdiff_t>(r0 * cols));
        r0 += p.rows();
    }
    return out;
}

Tensor2 concat_rows(const Tensor2& a, const Tensor2& b) {
    const Tensor2 parts[] = {a, b};
    return concat_rows(std::span<const Tensor2>(parts, 2));
}

Tensor2 slice_rows(const Tensor2& a, std::size_t r0, std::size_t r1) {
    if (r0 > r1 || r1 > a.rows()) throw ShapeError("slice_rows: range out of bounds");
    Tensor2 out(r1 - r0, a.cols());
    std::copy(a.flat().begin() + static_cast<std::ptrdiff_t>(r0 * a.cols()),
              a.flat().begin() + static_cast<std::ptrdiff_t>(r1 * a.cols()), out.flat().begin());
    return out;
}

Tensor2 slice_cols(const Tensor2& a, std::size_t c0, std::size_t c1) {
    if (c0 > c1 || c1 > a.cols()) throw ShapeError("slice_cols: range out of bounds");
    Tensor2 out(a.rows(), c1 - c0);
    for (std::size_t r = 0; r < a.rows(); ++r)
        std::copy(a.row(r).begin() + static_cast<std::ptrdiff_t>(c0),
                  a.row(r).begin() + static_cast<std::ptrdiff_t>(c1), out.row(r).begin());
    return out;
}

double sum(const Tensor2& a) {
    double acc = 0.0;
    for (double v : a.flat()) acc += v;
    return acc;
}

double mse(const Tensor2& a, const Tensor2& b) {
    require_same_shape(a, b, "mse");
    if (a.size() == 0) throw ShapeError("mse: empty tensors");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a.flat()[i] - b.flat()[i];
        acc += d * d;
    }
    return acc / static_cast<double>(a.size());
}

double max_abs(const Tensor2& a) {
    double m = 0.0;
    for (double v : a.flat()) m = std::max(m, std::abs(v));
    return m;
}

double max_abs_diff(const Tensor2& a, const Tensor2& b) {
    require_same_shape(a, b, "max_abs_diff");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.flat()[i] - b.flat()[i]));
    return m;
}

bool all_finite(const Tensor2& a) {
    for (double v : a.flat())
        if (!std::isfinite(v)) return false;
    return true;
}

} // namespace gsit::num
