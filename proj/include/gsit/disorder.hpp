#ifndef GSIT_DISORDER_HPP
#define GSIT_DISORDER_HPP

#include <cstdint>
#include <vector>

#include "gsit/layout.hpp"

namespace gsit::lab {

// Demonstrates how widening a row block's softmax normalization corrupts
// the shared sub-block: the forward fusion map restricted to text rows is
// compared against a variant whose text rows additionally admit the audio
// block. The raw entries on the shared (t,v) sub-block shift (information
// disorder), yet renormalizing the widened rows over the (t,v) columns
// recovers the original map exactly (restriction identity).
struct DisorderReport {
    std::vector<double> row_deviation; // per text row, L_inf over heads and (t,v) columns
    double deviation = 0.0;            // max over rows
    double identity_residual = 0.0;    // restriction-renormalization residual
    bool disorder_detected = false;    // deviation strictly positive
};

DisorderReport disorder_demo(std::uint64_t seed, const mask::SegmentLayout& layout, std::size_t d,
                             std::size_t heads = 1);

// Same comparison but with the extra block forced back to deny, so both
// masks coincide; deviation must be exactly zero.
double disorder_control(std::uint64_t seed, const mask::SegmentLayout& layout, std::size_t d,
                        std::size_t heads = 1);

} // namespace gsit::lab

#endif
