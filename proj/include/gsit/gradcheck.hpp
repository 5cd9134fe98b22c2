#ifndef GSIT_GRADCHECK_HPP
#define GSIT_GRADCHECK_HPP

#include <functional>
#include <vector>

#include "gsit/tensor.hpp"

namespace gsit::lab {

// Central finite differences against a scalar loss rebuilt from perturbed
// parameters. `loss` receives the full parameter set and returns the loss
// value; `params` are the baseline tensors; `grads` the reverse-mode
// results in the same order.
struct GradCheckResult {
    double max_rel_error = 0.0;
    std::size_t entries_checked = 0;
};

// Relative error with a floor so finite-difference roundoff on near-zero
// entries is compared absolutely: |g - fd| / max(|g|, |fd|, floor).
GradCheckResult check_gradients(const std::function<double(const std::vector<num::Tensor2>&)>& loss,
                                std::vector<num::Tensor2> params,
                                const std::vector<num::Tensor2>& grads, double step = 1e-5,
                                double floor = 1e-4);

} // namespace gsit::lab

#endif
