#include "gsit/train.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "gsit/tape_models.hpp"

namespace gsit::lab {

using model::ModelKind;
using num::NodeId;
using num::Tape;
using num::Tensor2;

namespace {

Tensor2 target_tensor(const SyntheticSample& s, std::size_t out_dim) {
    return Tensor2(1, out_dim, s.target);
}

// Dispatch shims so the step loop can stay generic over the model family.
TapeGsit register_weights(Tape& tape, model::GsitWeights& w) { return register_gsit(tape, w); }
TapeMult register_weights(Tape& tape, model::MultWeights& w) { return register_mult(tape, w); }
TapeNaive register_weights(Tape& tape, model::NaiveWeights& w) { return register_naive(tape, w); }

// Forward one batch on a fresh tape, returning the mean-MSE loss value and
// optionally applying one SGD update.
template <typename Weights, typename Ids, typename Predict>
double run_step(const std::vector<SyntheticSample>& data, std::size_t first, std::size_t count,
                Weights& weights, double lr, std::size_t out_dim, Predict&& predict, bool update) {
    Tape tape;
    Ids ids = register_weights(tape, weights);
    NodeId loss{};
    for (std::size_t b = 0; b < count; ++b) {
        const SyntheticSample& s = data[(first + b) % data.size()];
        const NodeId pred = predict(tape, ids, s);
        const NodeId err = tape.mse(pred, tape.constant(target_tensor(s, out_dim)));
        loss = b == 0 ? err : tape.add(loss, err);
    }
    loss = tape.scale(loss, 1.0 / static_cast<double>(count));
    const double value = tape.value(loss)(0, 0);
    if (update) {
        tape.backward(loss);
        sgd_step(tape, ids, weights, lr);
    }
    return value;
}

template <typename Weights, typename Ids, typename Predict>
TrainResult train_loop(Weights weights, const RunConfig& cfg, Predict&& predict) {
    const mask::SegmentLayout layout = cfg.segment_layout();
    const std::vector<SyntheticSample> data = gen_dataset(cfg.seed, cfg.samples, layout, cfg.d, cfg.noise);
    const std::size_t batch = (cfg.batch == 0 || cfg.batch > data.size()) ? data.size() : cfg.batch;

    TrainResult result;
    result.curve.reserve(cfg.steps);
    for (std::size_t step = 0; step < cfg.steps; ++step) {
        double loss = 0.0;
        try {
            loss = run_step<Weights, Ids>(data, step * batch, batch, weights, cfg.lr, cfg.out_dim,
                                          predict, /*update=*/true);
        } catch (const DegenerateRowError&) {
            // Exploded weights overflow the attention scores before the
            // loss itself goes non-finite.
            throw DivergenceError(step);
        }
        if (!std::isfinite(loss)) throw DivergenceError(step);
        result.curve.push_back(loss);
    }
    result.final_full_mse = run_step<Weights, Ids>(data, 0, data.size(), weights, cfg.lr, cfg.out_dim,
                                                   predict, /*update=*/false);
    result.weights = std::move(weights);
    return result;
}

} // namespace

TrainResult train_model(ModelKind kind, const RunConfig& cfg) {
    const model::ModelConfig mc = cfg.model_config();
    const mask::SegmentLayout layout = cfg.segment_layout();
    num::Rng wrng(num::Rng::mix(cfg.seed, 0x5eed));

    switch (kind) {
    case ModelKind::gsit: {
        auto weights = model::GsitWeights::random(wrng, mc, cfg.init_std);
        return train_loop<model::GsitWeights, TapeGsit>(
            std::move(weights), cfg, [&](Tape& tape, const TapeGsit& ids, const SyntheticSample& s) {
                const NodeId v_m = tape.constant(s.concatenated());
                return tape_gsit_predict(tape, ids, v_m, layout, cfg.structure);
            });
    }
    case ModelKind::mult: {
        auto weights = model::MultWeights::random(wrng, mc, cfg.init_std);
        return train_loop<model::MultWeights, TapeMult>(
            std::move(weights), cfg, [&](Tape& tape, const TapeMult& ids, const SyntheticSample& s) {
                return tape_mult_predict(tape, ids, tape.constant(s.v_t), tape.constant(s.v_v),
                                         tape.constant(s.v_a));
            });
    }
    case ModelKind::naive: {
        auto weights = model::NaiveWeights::random(wrng, mc, cfg.init_std);
        return train_loop<model::NaiveWeights, TapeNaive>(
            std::move(weights), cfg, [&](Tape& tape, const TapeNaive& ids, const SyntheticSample& s) {
                const NodeId v_m = tape.constant(s.concatenated());
                return tape_naive_predict(tape, ids, v_m, layout);
            });
    }
    }
    throw ContractError("unknown model kind");
}

namespace {

std::string format_loss(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

void write_curve_csv(std::ostream& out, const TrainResult& result) {
    out << "step,loss\n";
    for (std::size_t i = 0; i < result.curve.size(); ++i)
        out << i << "," << format_loss(result.curve[i]) << "\n";
    out << result.curve.size() << "," << format_loss(result.final_full_mse) << "\n";
}

std::string curve_csv(const TrainResult& result) {
    std::ostringstream ss;
    write_curve_csv(ss, result);
    return ss.str();
}

void save_trained_weights(const std::string& path, const RunConfig& cfg, const TrainResult& result) {
    const model::ModelConfig mc = cfg.model_config();
    if (const auto* g = std::get_if<model::GsitWeights>(&result.weights))
        model::save_checkpoint_file(path, mc, *g);
    else if (const auto* m = std::get_if<model::MultWeights>(&result.weights))
        model::save_checkpoint_file(path, mc, *m);
    else
        model::save_checkpoint_file(path, mc, std::get<model::NaiveWeights>(result.weights));
}

} // namespace gsit::lab
