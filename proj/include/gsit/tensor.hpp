#ifndef GSIT_TENSOR_HPP
#define GSIT_TENSOR_HPP

#include <cstddef>
#include <initializer_list>
#include <limits>
#include <span>
#include <vector>

#include "gsit/errors.hpp"

namespace gsit::num {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Dense row-major 2-D array of doubles. The universal value type for
// sequences, weights, masks and attention maps. Entries are finite except
// in additive masks, whose entries are 0 or -inf only.
class Tensor2 {
public:
    Tensor2() = default;
    Tensor2(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Tensor2 from_rows(std::initializer_list<std::initializer_list<double>> rows);
    static Tensor2 identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

    std::span<double> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const noexcept { return {data_.data() + r * cols_, cols_}; }
    std::span<double> flat() noexcept { return data_; }
    std::span<const double> flat() const noexcept { return data_; }

    bool same_shape(const Tensor2& o) const noexcept { return rows_ == o.rows_ && cols_ == o.cols_; }

    friend bool operator==(const Tensor2&, const Tensor2&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// a (m x n) times b (n x k) -> m x k.
Tensor2 matmul(const Tensor2& a, const Tensor2& b);
// a (m x n) times b^T where b is (k x n) -> m x k.
Tensor2 matmul_nt(const Tensor2& a, const Tensor2& b);
// a^T (n x m) times b (n x k) -> m x k; used by backward rules.
Tensor2 matmul_tn(const Tensor2& a, const Tensor2& b);
Tensor2 transpose(const Tensor2& a);

Tensor2 add(const Tensor2& a, const Tensor2& b);
Tensor2 sub(const Tensor2& a, const Tensor2& b);
Tensor2 scale(const Tensor2& a, double s);
Tensor2 hadamard(const Tensor2& a, const Tensor2& b);
Tensor2 relu(const Tensor2& a);

// Row-wise softmax with an optional additive mask whose entries are 0 or
// -inf. Per row: add mask, subtract the max over finite entries,
// exponentiate (-inf -> 0), normalize. A row with no finite entry throws
// DegenerateRowError.
Tensor2 softmax_rows(const Tensor2& logits, const Tensor2* mask = nullptr);

Tensor2 concat_cols(std::span<const Tensor2> parts);
Tensor2 concat_cols(const Tensor2& a, const Tensor2& b);
Tensor2 concat_rows(std::span<const Tensor2> parts);
Tensor2 concat_rows(const Tensor2& a, const Tensor2& b);
Tensor2 slice_rows(const Tensor2& a, std::size_t r0, std::size_t r1);
Tensor2 slice_cols(const Tensor2& a, std::size_t c0, std::size_t c1);

double sum(const Tensor2& a);
double mse(const Tensor2& a, const Tensor2& b);
double max_abs(const Tensor2& a);
double max_abs_diff(const Tensor2& a, const Tensor2& b);
bool all_finite(const Tensor2& a);

} // namespace gsit::num

#endif
