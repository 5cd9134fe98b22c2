#ifndef GSIT_WEIGHT_REPORT_HPP
#define GSIT_WEIGHT_REPORT_HPP

#include <string>
#include <vector>

#include "gsit/models.hpp"
#include "gsit/stats.hpp"

namespace gsit::lab {

// Moments over one encoder's flattened parameters. Constant (zero-variance)
// arrays are flagged degenerate rather than reported with shape moments.
struct EncoderReport {
    std::string name;
    std::size_t parameter_count = 0;
    num::MomentStats stats;
    bool degenerate = false;
};

// Per-encoder reports plus an "all" entry over every distinct parameter.
// Aliased (tied) encoders appear once.
std::vector<EncoderReport> weight_report(const model::GsitWeights& w);
std::vector<EncoderReport> weight_report(const model::MultWeights& w);

std::vector<double> flatten(const attn::EncoderWeights& w);

} // namespace gsit::lab

#endif
