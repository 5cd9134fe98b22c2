#include "gsit/disorder.hpp"

#include <cmath>

#include "gsit/attention.hpp"
#include "gsit/patterns.hpp"
#include "gsit/rng.hpp"

namespace gsit::lab {

using mask::Modality;
using num::Tensor2;

namespace {

struct DemoSetup {
    attn::EncoderWeights weights;
    Tensor2 v_m;
    Tensor2 mask_base;
    mask::BlockPattern widened;
};

DemoSetup make_setup(std::uint64_t seed, const mask::SegmentLayout& layout, std::size_t d,
                     std::size_t heads) {
    num::Rng rng(num::Rng::mix(seed, 0xd150));
    DemoSetup s{attn::EncoderWeights::random(rng, d, 2 * d, heads, 0.5),
                rng.normal_tensor(layout.total(), d),
                {},
                {}};
    const mask::BlockPattern base = mask::fusion_patterns(mask::StructureName::original).forward;
    s.mask_base = mask::materialize(base, layout);
    s.widened = base;
    s.widened.allow[static_cast<std::size_t>(Modality::text)][static_cast<std::size_t>(Modality::audio)] =
        true;
    return s;
}

} // namespace

DisorderReport disorder_demo(std::uint64_t seed, const mask::SegmentLayout& layout, std::size_t d,
                             std::size_t heads) {
    DemoSetup s = make_setup(seed, layout, d, heads);
    const Tensor2 mask_widened = mask::materialize(s.widened, layout);

    const std::vector<Tensor2> maps = attn::generate(s.weights, s.v_m, s.v_m, &s.mask_base);
    const std::vector<Tensor2> maps_w = attn::generate(s.weights, s.v_m, s.v_m, &mask_widened);

    const auto [t0, t1] = layout.range(Modality::text);
    const auto [v0, v1] = layout.range(Modality::vision);

    DisorderReport report;
    report.row_deviation.assign(t1 - t0, 0.0);
    for (std::size_t l = 0; l < maps.size(); ++l) {
        for (std::size_t r = t0; r < t1; ++r) {
            double dev = 0.0;
            for (std::size_t c = v0; c < v1; ++c)
                dev = std::max(dev, std::abs(maps[l](r, c) - maps_w[l](r, c)));
            report.row_deviation[r - t0] = std::max(report.row_deviation[r - t0], dev);

            double restricted_sum = 0.0;
            for (std::size_t c = v0; c < v1; ++c) restricted_sum += maps_w[l](r, c);
            for (std::size_t c = v0; c < v1; ++c) {
                const double renorm = maps_w[l](r, c) / restricted_sum;
                report.identity_residual =
                    std::max(report.identity_residual, std::abs(renorm - maps[l](r, c)));
            }
        }
    }
    for (double dev : report.row_deviation) report.deviation = std::max(report.deviation, dev);
    report.disorder_detected = report.deviation > 0.0;
    return report;
}

double disorder_control(std::uint64_t seed, const mask::SegmentLayout& layout, std::size_t d,
                        std::size_t heads) {
    DemoSetup s = make_setup(seed, layout, d, heads);
    // Force the widened block back to deny: both masks coincide.
    s.widened.allow[static_cast<std::size_t>(Modality::text)][static_cast<std::size_t>(Modality::audio)] =
        false;
    const Tensor2 mask_same = mask::materialize(s.widened, layout);

    const std::vector<Tensor2> maps = attn::generate(s.weights, s.v_m, s.v_m, &s.mask_base);
    const std::vector<Tensor2> maps_same = attn::generate(s.weights, s.v_m, s.v_m, &mask_same);

    double dev = 0.0;
    for (std::size_t l = 0; l < maps.size(); ++l)
        dev = std::max(dev, num::max_abs_diff(maps[l], maps_same[l]));
    return dev;
}

} // namespace gsit::lab
