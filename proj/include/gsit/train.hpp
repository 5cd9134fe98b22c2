#ifndef GSIT_TRAIN_HPP
#define GSIT_TRAIN_HPP

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "gsit/checkpoint.hpp"
#include "gsit/config.hpp"
#include "gsit/dataset.hpp"

namespace gsit::lab {

struct TrainResult {
    std::vector<double> curve;  // per-step training loss, step 0 first
    double final_full_mse = 0.0; // over the whole dataset after the last step
    std::variant<model::GsitWeights, model::MultWeights, model::NaiveWeights> weights;
};

// Plain SGD on MSE over the synthetic dataset; deterministic for a fixed
// config. Throws DivergenceError when the loss goes non-finite.
TrainResult train_model(model::ModelKind kind, const RunConfig& cfg);

// "step,loss" rows for steps 0..N-1, then a closing row at step N holding
// the full-dataset MSE.
void write_curve_csv(std::ostream& out, const TrainResult& result);
std::string curve_csv(const TrainResult& result);

void save_trained_weights(const std::string& path, const RunConfig& cfg, const TrainResult& result);

} // namespace gsit::lab

#endif
