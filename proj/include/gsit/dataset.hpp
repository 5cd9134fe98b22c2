#ifndef GSIT_DATASET_HPP
#define GSIT_DATASET_HPP

#include <cstdint>
#include <vector>

#include "gsit/layout.hpp"
#include "gsit/tensor.hpp"

namespace gsit::lab {

using num::Tensor2;

// Synthetic regression sample. The target is injected at the final
// timestep of each modality on a modality-specific channel, with the
// injection noise anti-correlated across the three modalities so that no
// single modality suffices while the cross-modal average denoises the
// target. A constant beacon on a shared channel marks the injected
// timestep so content-based attention can find it.
struct SyntheticSample {
    Tensor2 v_t, v_v, v_a; // layout-shaped, d columns
    double target = 0.0;   // in [-1, 1]

    Tensor2 concatenated() const;
};

// Deterministic under (seed, index). Requires d >= 4.
SyntheticSample gen_sample(std::uint64_t seed, std::size_t index, const mask::SegmentLayout& layout,
                           std::size_t d, double noise);

// Diagnostic variant with the target forced; the noise stream is the one
// gen_sample would have used.
SyntheticSample gen_sample_with_target(std::uint64_t seed, std::size_t index,
                                       const mask::SegmentLayout& layout, std::size_t d, double noise,
                                       double target);

std::vector<SyntheticSample> gen_dataset(std::uint64_t seed, std::size_t n,
                                         const mask::SegmentLayout& layout, std::size_t d,
                                         double noise);

// Channel conventions used by the generator.
std::size_t signal_channel(mask::Modality m); // 0, 1, 2
std::size_t beacon_channel();                 // 3
double beacon_value();
double injection_gain(); // target coefficient on the signal channel

} // namespace gsit::lab

#endif
