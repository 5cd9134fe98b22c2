#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "test_support.hpp"

#include <cmath>

using namespace gsit::num;
using gsit_test::check_close;

namespace {

// Independent triple-loop product, kept free of the library path.
Tensor2 matmul_oracle(const Tensor2& a, const Tensor2& b) {
    Tensor2 out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j)
            for (std::size_t k = 0; k < a.cols(); ++k) out(i, j) += a(i, k) * b(k, j);
    return out;
}

} // namespace

TEST_CASE("matmul identity and scalar cases") {
    Rng rng(1);
    const Tensor2 x = rng.normal_tensor(3, 5);
    check_close(matmul(Tensor2::identity(3), x), x, 0.0);

    const Tensor2 two = Tensor2::from_rows({{2.0}});
    const Tensor2 three = Tensor2::from_rows({{3.0}});
    CHECK(matmul(two, three)(0, 0) == 6.0);
}

TEST_CASE("matmul matches the triple-loop oracle") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        Rng rng(seed);
        const Tensor2 a = rng.normal_tensor(4, 3);
        const Tensor2 b = rng.normal_tensor(3, 5);
        check_close(matmul(a, b), matmul_oracle(a, b), 1e-15);
        check_close(matmul_nt(a, transpose(b)), matmul_oracle(a, b), 1e-15);
        check_close(matmul_tn(transpose(a), b), matmul_oracle(a, b), 1e-15);
    }
}

TEST_CASE("matmul shape mismatch throws") {
    const Tensor2 a(2, 3), b(4, 2);
    CHECK_THROWS_AS(matmul(a, b), gsit::ShapeError);
}

TEST_CASE("softmax basics") {
    const Tensor2 flat = softmax_rows(Tensor2::from_rows({{0.0, 0.0, 0.0}}));
    for (std::size_t c = 0; c < 3; ++c) CHECK(flat(0, c) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

    const Tensor2 logits = Tensor2::from_rows({{5.0, 9.0}});
    const Tensor2 mask = Tensor2::from_rows({{0.0, kNegInf}});
    const Tensor2 masked = softmax_rows(logits, &mask);
    CHECK(masked(0, 0) == 1.0);
    CHECK(masked(0, 1) == 0.0);
}

TEST_CASE("softmax rows sum to one") {
    Rng rng(7);
    const Tensor2 logits = rng.normal_tensor(6, 9, 3.0);
    Tensor2 mask(6, 9);
    for (std::size_t r = 0; r < 6; ++r)
        for (std::size_t c = 0; c < 9; ++c)
            if (rng.uniform01() < 0.4 && c != r % 9) mask(r, c) = kNegInf;
    const Tensor2 y = softmax_rows(logits, &mask);
    for (std::size_t r = 0; r < y.rows(); ++r) {
        double s = 0.0;
        for (std::size_t c = 0; c < y.cols(); ++c) s += y(r, c);
        CHECK(std::abs(s - 1.0) <= 1e-12);
    }
}

TEST_CASE("softmax restriction identity") {
    // softmax restricted to a column subset and renormalized equals softmax
    // of the restricted logits.
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        Rng rng(seed);
        const std::size_t n = 2 + seed % 7;
        const Tensor2 logits = rng.normal_tensor(1, n, 2.0);

        std::vector<std::size_t> subset;
        for (std::size_t c = 0; c < n; ++c)
            if (rng.uniform01() < 0.5) subset.push_back(c);
        if (subset.empty()) subset.push_back(seed % n);

        const Tensor2 full = softmax_rows(logits);
        double denom = 0.0;
        for (std::size_t c : subset) denom += full(0, c);

        Tensor2 restricted(1, subset.size());
        for (std::size_t i = 0; i < subset.size(); ++i) restricted(0, i) = logits(0, subset[i]);
        const Tensor2 small = softmax_rows(restricted);

        for (std::size_t i = 0; i < subset.size(); ++i)
            CHECK(std::abs(full(0, subset[i]) / denom - small(0, i)) <= 1e-12);
    }
}

TEST_CASE("softmax shift invariance") {
    Rng rng(11);
    const Tensor2 logits = rng.normal_tensor(3, 6);
    Tensor2 shifted = logits;
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 0; c < 6; ++c) shifted(r, c) += 17.25;
    check_close(softmax_rows(logits), softmax_rows(shifted), 1e-12);
}

TEST_CASE("softmax single-column renormalization") {
    // softmax of [a, b] restricted to column 0 renormalized equals
    // softmax of [a] alone, i.e. 1.
    const Tensor2 logits = Tensor2::from_rows({{1.3, -0.4}});
    const Tensor2 mask = Tensor2::from_rows({{0.0, kNegInf}});
    const Tensor2 y = softmax_rows(logits, &mask);
    CHECK(y(0, 0) == 1.0);
}

TEST_CASE("softmax all-masked row throws with the row index") {
    const Tensor2 logits(2, 2);
    Tensor2 mask(2, 2);
    mask(1, 0) = kNegInf;
    mask(1, 1) = kNegInf;
    try {
        softmax_rows(logits, &mask);
        FAIL("expected DegenerateRowError");
    } catch (const gsit::DegenerateRowError& e) {
        CHECK(e.row_index == 1);
    }
}

TEST_CASE("concat and slice round trips") {
    Rng rng(3);
    const Tensor2 a = rng.normal_tensor(4, 3);
    const Tensor2 b = rng.normal_tensor(4, 2);
    const Tensor2 cc = concat_cols(a, b);
    CHECK(gsit_test::bit_equal(slice_cols(cc, 0, 3), a));
    CHECK(gsit_test::bit_equal(slice_cols(cc, 3, 5), b));

    const Tensor2 c = rng.normal_tensor(2, 3);
    const Tensor2 cr = concat_rows(a, c);
    CHECK(gsit_test::bit_equal(slice_rows(cr, 0, 4), a));
    CHECK(gsit_test::bit_equal(slice_rows(cr, 4, 6), c));
}

TEST_CASE("sum, mse and max_abs_diff") {
    const Tensor2 a = Tensor2::from_rows({{1.0, 2.0}, {3.0, 4.0}});
    const Tensor2 b = Tensor2::from_rows({{1.0, 2.0}, {3.0, 2.0}});
    CHECK(sum(a) == 10.0);
    CHECK(mse(a, b) == doctest::Approx(1.0).epsilon(1e-15)); // (0+0+0+4)/4
    CHECK(max_abs_diff(a, b) == 2.0);
}
