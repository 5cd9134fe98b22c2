#include "gsit/gradcheck.hpp"

#include <cmath>

namespace gsit::lab {

GradCheckResult check_gradients(const std::function<double(const std::vector<num::Tensor2>&)>& loss,
                                std::vector<num::Tensor2> params,
                                const std::vector<num::Tensor2>& grads, double step, double floor) {
    if (params.size() != grads.size()) throw ContractError("check_gradients: param/grad count mismatch");
    GradCheckResult res;
    for (std::size_t p = 0; p < params.size(); ++p) {
        if (!params[p].same_shape(grads[p])) throw ContractError("check_gradients: shape mismatch");
        for (std::size_t i = 0; i < params[p].size(); ++i) {
            const double saved = params[p].flat()[i];
            params[p].flat()[i] = saved + step;
            const double up = loss(params);
            params[p].flat()[i] = saved - step;
            const double down = loss(params);
            params[p].flat()[i] = saved;

            const double fd = (up - down) / (2.0 * step);
            const double g = grads[p].flat()[i];
            const double scale = std::max({std::abs(fd), std::abs(g), floor});
            res.max_rel_error = std::max(res.max_rel_error, std::abs(g - fd) / scale);
            ++res.entries_checked;
        }
    }
    return res;
}

} // namespace gsit::lab
