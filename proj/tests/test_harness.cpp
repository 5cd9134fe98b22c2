#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "test_support.hpp"

#include <cmath>
#include <sstream>

#include "gsit/config.hpp"
#include "gsit/dataset.hpp"
#include "gsit/disorder.hpp"
#include "gsit/tape_models.hpp"
#include "gsit/train.hpp"
#include "gsit/weight_report.hpp"

using namespace gsit;
using namespace gsit::lab;
using mask::Modality;
using mask::SegmentLayout;
using num::Rng;
using num::Tensor2;

TEST_CASE("config round-trips through its text form") {
    RunConfig cfg;
    cfg.layout = {2, 7, 3};
    cfg.d = 12;
    cfg.p = 24;
    cfg.heads = 3;
    cfg.structure = mask::StructureName::structure2;
    cfg.seed = 99;
    cfg.steps = 12;
    cfg.lr = 0.125;
    cfg.batch = 4;
    cfg.samples = 17;
    cfg.noise = 0.25;

    const std::string text = serialize(cfg);
    std::istringstream in(text);
    const RunConfig back = parse_config(in);
    CHECK(serialize(back) == text);
    CHECK(back.layout == cfg.layout);
    CHECK(back.lr == cfg.lr);
    CHECK(back.structure == cfg.structure);
}

TEST_CASE("config rejects unknown keys and sections") {
    std::istringstream unknown_key("[model]\nwidth = 3\n");
    CHECK_THROWS_AS(parse_config(unknown_key), ConfigError);
    std::istringstream unknown_section("[optimizer]\nlr = 1\n");
    CHECK_THROWS_AS(parse_config(unknown_section), ConfigError);
    std::istringstream bad_value("[model]\ndim = tiny\n");
    CHECK_THROWS_AS(parse_config(bad_value), ConfigError);
    std::istringstream no_eq("[model]\ndim 4\n");
    CHECK_THROWS_AS(parse_config(no_eq), ConfigError);
}

TEST_CASE("samples are bit-identical under the same key") {
    const SegmentLayout layout(3, 4, 5);
    const SyntheticSample a = gen_sample(7, 13, layout, 8, 0.3);
    const SyntheticSample b = gen_sample(7, 13, layout, 8, 0.3);
    CHECK(a.target == b.target);
    CHECK(gsit_test::bit_equal(a.v_t, b.v_t));
    CHECK(gsit_test::bit_equal(a.v_v, b.v_v));
    CHECK(gsit_test::bit_equal(a.v_a, b.v_a));

    const SyntheticSample c = gen_sample(7, 14, layout, 8, 0.3);
    CHECK_FALSE(gsit_test::bit_equal(a.v_t, c.v_t));
}

TEST_CASE("forcing a zero target leaves pure noise on the signal channels") {
    const SegmentLayout layout(2, 2, 2);
    double mean = 0.0;
    const std::size_t n = 4000;
    for (std::size_t i = 0; i < n; ++i) {
        const SyntheticSample s = gen_sample_with_target(21, i, layout, 8, 0.3, 0.0);
        mean += s.v_t(1, signal_channel(Modality::text));
        CHECK(s.v_t(1, beacon_channel()) == beacon_value());
    }
    mean /= static_cast<double>(n);
    CHECK(std::abs(mean) < 0.02);
}

TEST_CASE("single-modality probes are weak, the cross-modal average is strong") {
    const SegmentLayout layout(4, 5, 6);
    const std::size_t n = 2000;
    const auto data = gen_dataset(31, n, layout, 8, 0.3);

    // Closed-form OLS R^2 of target on one regressor.
    const auto r_squared = [&](const std::vector<double>& x) {
        double mx = 0.0, my = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            mx += x[i];
            my += data[i].target;
        }
        mx /= n;
        my /= n;
        double sxy = 0.0, sxx = 0.0, syy = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double dx = x[i] - mx, dy = data[i].target - my;
            sxy += dx * dy;
            sxx += dx * dx;
            syy += dy * dy;
        }
        return (sxy * sxy) / (sxx * syy);
    };

    std::vector<double> ct(n), cv(n), ca(n), avg(n);
    for (std::size_t i = 0; i < n; ++i) {
        ct[i] = data[i].v_t(layout.length(Modality::text) - 1, signal_channel(Modality::text));
        cv[i] = data[i].v_v(layout.length(Modality::vision) - 1, signal_channel(Modality::vision));
        ca[i] = data[i].v_a(layout.length(Modality::audio) - 1, signal_channel(Modality::audio));
        avg[i] = (ct[i] + cv[i] + ca[i]) / 3.0;
    }

    CHECK(r_squared(ct) < 0.6);
    CHECK(r_squared(cv) < 0.6);
    CHECK(r_squared(ca) < 0.6);
    CHECK(r_squared(avg) > 0.9);
}

TEST_CASE("disorder demo detects the widened normalization") {
    const SegmentLayout layout(3, 4, 5);
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        const DisorderReport rep = disorder_demo(seed, layout, 8);
        CHECK(rep.deviation > 1e-3);
        CHECK(rep.identity_residual <= 1e-12);
        CHECK(rep.disorder_detected);
        REQUIRE(rep.row_deviation.size() == 3);
    }
    // Forcing the extra block back to deny removes the deviation entirely.
    CHECK(disorder_control(1, layout, 8) == 0.0);
}

TEST_CASE("weight report flags constant arrays and matches the moment core") {
    model::ModelConfig cfg;
    cfg.layout = SegmentLayout(1, 1, 1);
    cfg.d = 8;
    cfg.p = 16;
    Rng rng(5);
    model::GsitWeights w = model::GsitWeights::random(rng, cfg, 0.02);

    auto reports = weight_report(w);
    REQUIRE(reports.size() == 4); // forward, backward, intra, all
    for (const EncoderReport& r : reports) {
        CHECK_FALSE(r.degenerate);
        if (r.name == "forward") {
            const num::MomentStats direct = num::moments(flatten(*w.forward));
            CHECK(r.stats.mean == direct.mean);
            CHECK(r.stats.variance == direct.variance);
            CHECK(std::abs(r.stats.mean) < 0.005);
            CHECK(r.stats.variance == doctest::Approx(4e-4).epsilon(0.2));
        }
    }

    // A zero-initialized encoder is degenerate.
    w.forward->w_q = Tensor2(8, 8);
    w.forward->w_k = Tensor2(8, 8);
    w.forward->w_v = Tensor2(8, 8);
    w.forward->w_1 = Tensor2(8, 16);
    w.forward->w_2 = Tensor2(16, 8);
    reports = weight_report(w);
    CHECK(reports[0].degenerate);
}

TEST_CASE("tied report counts three encoders") {
    model::ModelConfig cfg;
    cfg.layout = SegmentLayout(1, 1, 1);
    cfg.d = 4;
    cfg.p = 8;
    Rng rng(6);
    const model::GsitWeights g = model::GsitWeights::random(rng, cfg, 0.1);
    const auto reports = weight_report(model::tie_weights(g));
    CHECK(reports.size() == 4); // three distinct encoders + all
}

TEST_CASE("tape forwards agree with the plain forwards bit for bit") {
    Rng rng(7);
    model::ModelConfig cfg;
    cfg.layout = SegmentLayout(2, 3, 4);
    cfg.d = 8;
    cfg.p = 16;
    cfg.heads = 2;
    const model::GsitWeights g = model::GsitWeights::random(rng, cfg, 0.4);
    const model::MultWeights m = model::MultWeights::random(rng, cfg, 0.4);
    const model::NaiveWeights n = model::NaiveWeights::random(rng, cfg, 0.4);

    const Tensor2 v_t = rng.normal_tensor(2, 8), v_v = rng.normal_tensor(3, 8),
                  v_a = rng.normal_tensor(4, 8);
    const Tensor2 parts[] = {v_t, v_v, v_a};
    const Tensor2 v_m = num::concat_rows(std::span<const Tensor2>(parts, 3));

    {
        num::Tape tape;
        const TapeGsit ids = register_gsit(tape, g);
        const num::NodeId pred = tape_gsit_predict(tape, ids, tape.constant(v_m), cfg.layout,
                                                   mask::StructureName::original);
        const model::ModelOutput plain = model::gsit_forward(g, v_m, cfg.layout,
                                                             mask::StructureName::original);
        CHECK(gsit_test::bit_equal(tape.value(pred), plain.prediction));
    }
    {
        num::Tape tape;
        const TapeMult ids = register_mult(tape, m);
        const num::NodeId pred = tape_mult_predict(tape, ids, tape.constant(v_t), tape.constant(v_v),
                                                   tape.constant(v_a));
        CHECK(gsit_test::bit_equal(tape.value(pred), model::mult_forward(m, v_t, v_v, v_a).prediction));
    }
    {
        num::Tape tape;
        const TapeNaive ids = register_naive(tape, n);
        const num::NodeId pred = tape_naive_predict(tape, ids, tape.constant(v_m), cfg.layout);
        CHECK(gsit_test::bit_equal(tape.value(pred), model::naive_forward(n, v_m, cfg.layout).prediction));
    }
}

TEST_CASE("zero learning rate keeps the loss constant") {
    RunConfig cfg;
    cfg.layout = {2, 2, 2};
    cfg.d = 4;
    cfg.p = 8;
    cfg.heads = 1;
    cfg.steps = 5;
    cfg.lr = 0.0;
    cfg.samples = 6;
    const TrainResult res = train_model(model::ModelKind::gsit, cfg);
    for (double v : res.curve) CHECK(v == res.curve[0]);
    CHECK(res.final_full_mse == res.curve[0]);
}

TEST_CASE("short training runs are deterministic and make progress") {
    RunConfig cfg;
    cfg.layout = {2, 2, 2};
    cfg.d = 4;
    cfg.p = 8;
    cfg.heads = 1;
    cfg.steps = 40;
    cfg.lr = 0.05;
    cfg.samples = 8;
    const TrainResult a = train_model(model::ModelKind::gsit, cfg);
    const TrainResult b = train_model(model::ModelKind::gsit, cfg);
    CHECK(a.curve == b.curve);
    CHECK(a.final_full_mse == b.final_full_mse);
    CHECK(a.curve.back() < a.curve.front());

    const std::string csv = curve_csv(a);
    CHECK(csv.rfind("step,loss\n", 0) == 0);
    CHECK(csv == curve_csv(b));
}

TEST_CASE("an absurd learning rate reports the diverging step") {
    RunConfig cfg;
    cfg.layout = {2, 2, 2};
    cfg.d = 4;
    cfg.p = 8;
    cfg.heads = 1;
    cfg.steps = 200;
    cfg.lr = 1e18;
    cfg.samples = 4;
    CHECK_THROWS_AS(train_model(model::ModelKind::gsit, cfg), DivergenceError);
}
