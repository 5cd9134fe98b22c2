#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "test_support.hpp"

#include <cmath>
#include <vector>

#include "gsit/stats.hpp"

using namespace gsit::num;

TEST_CASE("identical seeds give identical streams") {
    Rng a(42), b(42);
    for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
    Rng c(42), d(42);
    for (int i = 0; i < 1000; ++i) {
        const double x = c.normal(), y = d.normal();
        CHECK(std::memcmp(&x, &y, sizeof(double)) == 0);
    }
}

TEST_CASE("different seeds diverge") {
    Rng a(1), b(2);
    bool any_diff = false;
    for (int i = 0; i < 16; ++i) any_diff = any_diff || (a.next_u64() != b.next_u64());
    CHECK(any_diff);
}

TEST_CASE("uniform01 stays in [0, 1)") {
    Rng rng(9);
    for (int i = 0; i < 10000; ++i) {
        const double u = rng.uniform01();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("two-point symmetric moments") {
    const std::vector<double> values{-1.0, 1.0};
    const MomentStats s = moments(values);
    CHECK(s.mean == 0.0);
    CHECK(s.variance == 1.0);
    CHECK(s.skewness_or_throw() == 0.0);
    CHECK(s.excess_kurtosis_or_throw() == -2.0);
}

TEST_CASE("constant values are a degenerate distribution") {
    const std::vector<double> values{1.0, 1.0, 1.0};
    const MomentStats s = moments(values);
    CHECK(s.degenerate());
    CHECK_THROWS_AS(s.skewness_or_throw(), gsit::DegenerateDistributionError);
    CHECK_THROWS_AS(s.excess_kurtosis_or_throw(), gsit::DegenerateDistributionError);
}

TEST_CASE("moments needs at least two values") {
    const std::vector<double> one{1.0};
    CHECK_THROWS_AS(moments(one), gsit::ContractError);
}

TEST_CASE("sampled standard normals have near-normal moments") {
    Rng rng(1234);
    std::vector<double> values(100000);
    for (double& v : values) v = rng.normal();
    const MomentStats s = moments(values);
    CHECK(std::abs(s.mean) < 0.02);
    CHECK(std::abs(s.variance - 1.0) < 0.02);
    CHECK(std::abs(s.skewness_or_throw()) < 0.05);
    CHECK(std::abs(s.excess_kurtosis_or_throw()) < 0.1);
}

TEST_CASE("mix derives distinct deterministic streams") {
    CHECK(Rng::mix(7, 0) == Rng::mix(7, 0));
    CHECK(Rng::mix(7, 0) != Rng::mix(7, 1));
    CHECK(Rng::mix(7, 0) != Rng::mix(8, 0));
}
