#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "test_support.hpp"

#include "gsit/gradcheck.hpp"
#include "gsit/tape.hpp"

using namespace gsit::num;
using gsit::lab::check_gradients;

TEST_CASE("linear case: d(sum(Wx))/dW is the broadcast of x") {
    Rng rng(5);
    const Tensor2 w0 = rng.normal_tensor(3, 4);
    const Tensor2 x = rng.normal_tensor(4, 1);

    Tape tape;
    const NodeId w = tape.param(w0);
    const NodeId loss = tape.sum(tape.matmul(w, tape.constant(x)));
    tape.backward(loss);

    const Tensor2& g = tape.grad(w);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 4; ++j) CHECK(g(i, j) == x(j, 0));
}

TEST_CASE("softmax-mse gradient matches finite differences") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        Rng rng(seed);
        const Tensor2 z0 = rng.normal_tensor(3, 5);
        const Tensor2 target = rng.uniform_tensor(3, 5, 0.0, 0.4);

        const auto loss = [&](const std::vector<Tensor2>& ps) {
            Tape t;
            const NodeId z = t.param(ps[0]);
            return t.value(t.mse(t.softmax_rows(z), t.constant(target)))(0, 0);
        };

        Tape t;
        const NodeId z = t.param(z0);
        t.backward(t.mse(t.softmax_rows(z), t.constant(target)));

        const auto res = check_gradients(loss, {z0}, {t.grad(z)});
        CHECK(res.max_rel_error <= 1e-6);
    }
}

TEST_CASE("masked softmax gradient is zero on denied entries") {
    Rng rng(3);
    const Tensor2 z0 = rng.normal_tensor(2, 4);
    Tensor2 mask(2, 4);
    mask(0, 2) = kNegInf;
    mask(1, 0) = kNegInf;

    Tape t;
    const NodeId z = t.param(z0);
    t.backward(t.mse(t.softmax_rows(z, mask), t.constant(Tensor2(2, 4, 0.25))));
    const Tensor2& g = t.grad(z);
    CHECK(g(0, 2) == 0.0);
    CHECK(g(1, 0) == 0.0);
}

TEST_CASE("non-scalar loss is rejected") {
    Tape t;
    const NodeId a = t.param(Tensor2(2, 2, 1.0));
    CHECK_THROWS_AS(t.backward(a), gsit::ContractError);
}

TEST_CASE("relu and slicing gradients match finite differences") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        Rng rng(Rng::mix(seed, 2));
        const Tensor2 a0 = rng.normal_tensor(4, 4);
        const Tensor2 b0 = rng.normal_tensor(4, 4);

        const auto build = [](Tape& t, NodeId a, NodeId b) {
            const NodeId cat = t.concat_cols(std::vector<NodeId>{t.relu(a), b});
            const NodeId part = t.slice_cols(cat, 2, 7);
            return t.mse(t.last_row(part), t.constant(Tensor2(1, 5, 0.3)));
        };
        const auto loss = [&](const std::vector<Tensor2>& ps) {
            Tape t;
            const NodeId a = t.param(ps[0]);
            const NodeId b = t.param(ps[1]);
            return t.value(build(t, a, b))(0, 0);
        };

        Tape t;
        const NodeId a = t.param(a0);
        const NodeId b = t.param(b0);
        t.backward(build(t, a, b));

        const auto res = check_gradients(loss, {a0, b0}, {t.grad(a), t.grad(b)});
        CHECK(res.max_rel_error <= 1e-6);
    }
}

TEST_CASE("matmul chains reused nodes accumulate") {
    // y = sum(A*A^T colmix) exercises fan-out: the same node feeds two ports.
    Rng rng(8);
    const Tensor2 a0 = rng.normal_tensor(3, 3);
    const auto build = [](Tape& t, NodeId a) { return t.sum(t.matmul_nt(a, a)); };
    const auto loss = [&](const std::vector<Tensor2>& ps) {
        Tape t;
        return t.value(build(t, t.param(ps[0])))(0, 0);
    };
    Tape t;
    const NodeId a = t.param(a0);
    t.backward(build(t, a));
    const auto res = check_gradients(loss, {a0}, {t.grad(a)});
    CHECK(res.max_rel_error <= 1e-6);
}

TEST_CASE("tape reruns are bit-identical") {
    const auto run = [] {
        Rng rng(77);
        Tape t;
        const NodeId a = t.param(rng.normal_tensor(3, 3));
        const NodeId b = t.param(rng.normal_tensor(3, 3));
        const NodeId loss = t.mse(t.softmax_rows(t.matmul(a, b)), t.constant(Tensor2(3, 3, 0.1)));
        t.backward(loss);
        return std::pair{t.value(loss), t.grad(a)};
    };
    const auto [l1, g1] = run();
    const auto [l2, g2] = run();
    CHECK(gsit_test::bit_equal(l1, l2));
    CHECK(gsit_test::bit_equal(g1, g2));
}
