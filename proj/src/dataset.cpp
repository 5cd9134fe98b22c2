#include "gsit/dataset.hpp"

#include <cmath>

#include "gsit/rng.hpp"

namespace gsit::lab {

using mask::Modality;

Tensor2 SyntheticSample::concatenated() const {
    const Tensor2 parts[] = {v_t, v_v, v_a};
    return num::concat_rows(std::span<const Tensor2>(parts, 3));
}

std::size_t signal_channel(Modality m) { return static_cast<std::size_t>(m); }
std::size_t beacon_channel() { return 3; }
double beacon_value() { return 3.0; }
double injection_gain() { return 0.5; }

namespace {

SyntheticSample generate(num::Rng& rng, double target, const mask::SegmentLayout& layout,
                         std::size_t d, double noise);

} // namespace

SyntheticSample gen_sample(std::uint64_t seed, std::size_t index, const mask::SegmentLayout& layout,
                           std::size_t d, double noise) {
    num::Rng rng(num::Rng::mix(seed, index));
    const double target = rng.uniform(-1.0, 1.0);
    return generate(rng, target, layout, d, noise);
}

SyntheticSample gen_sample_with_target(std::uint64_t seed, std::size_t index,
                                       const mask::SegmentLayout& layout, std::size_t d, double noise,
                                       double target) {
    num::Rng rng(num::Rng::mix(seed, index));
    rng.uniform01(); // consume the target draw so the noise stream matches
    return generate(rng, target, layout, d, noise);
}

namespace {

SyntheticSample generate(num::Rng& rng, double target, const mask::SegmentLayout& layout,
                         std::size_t d, double noise) {
    if (d < 4) throw ConfigError("synthetic data needs d >= 4 (three signal channels plus beacon)");

    SyntheticSample s;
    s.target = target;

    Tensor2* seqs[3] = {&s.v_t, &s.v_v, &s.v_a};
    for (Modality m : mask::kModalities)
        *seqs[static_cast<std::size_t>(m)] = rng.normal_tensor(layout.length(m), d);

    // Zero-sum noise triple with unit marginal variance plus a small
    // independent component: averaging the three channels cancels most of
    // the injection noise, a single channel keeps all of it.
    const double g1 = rng.normal();
    const double g2 = rng.normal();
    const double zeta[3] = {g1, -0.5 * g1 + std::sqrt(3.0) / 2.0 * g2,
                            -0.5 * g1 - std::sqrt(3.0) / 2.0 * g2};
    const double shared_frac = std::sqrt(0.91);
    double eps[3];
    for (int u = 0; u < 3; ++u) eps[u] = shared_frac * zeta[u] + 0.3 * rng.normal();

    for (Modality m : mask::kModalities) {
        Tensor2& seq = *seqs[static_cast<std::size_t>(m)];
        const std::size_t last = seq.rows() - 1;
        seq(last, signal_channel(m)) =
            injection_gain() * s.target + noise * eps[static_cast<std::size_t>(m)];
        seq(last, beacon_channel()) = beacon_value();
    }
    return s;
}

} // namespace

std::vector<SyntheticSample> gen_dataset(std::uint64_t seed, std::size_t n,
                                         const mask::SegmentLayout& layout, std::size_t d,
                                         double noise) {
    if (n == 0) throw ConfigError("dataset size must be >= 1");
    std::vector<SyntheticSample> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(gen_sample(seed, i, layout, d, noise));
    return out;
}

} // namespace gsit::lab
