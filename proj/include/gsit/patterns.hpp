#ifndef GSIT_PATTERNS_HPP
#define GSIT_PATTERNS_HPP

#include <array>
#include <initializer_list>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gsit/layout.hpp"
#include "gsit/tensor.hpp"

namespace gsit::mask {

using ModalityPair = std::pair<Modality, Modality>; // (row i, column j): i attends to j

// 3x3 Allow/Deny grid over modality blocks; the abstract form of every
// interlaced mask. allow[i][j] means row block i may attend to column
// block j.
struct BlockPattern {
    std::array<std::array<bool, 3>, 3> allow{};

    bool allows(Modality i, Modality j) const {
        return allow[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    std::vector<ModalityPair> allowed_pairs() const; // row-major order
    std::size_t allow_count() const;

    static BlockPattern from_pairs(std::initializer_list<ModalityPair> pairs);
    static BlockPattern all_allow();

    friend bool operator==(const BlockPattern&, const BlockPattern&) = default;
};

enum class StructureName { original, structure1, structure2, structure3, self_only, iem };

std::string to_string(StructureName s);
StructureName structure_from_string(std::string_view s); // throws ConfigError

// Forward/backward fusion masks for one structure. self_only uses the
// same pattern for both streams.
struct PatternPair {
    BlockPattern forward;
    BlockPattern backward;
};

// The fusion pattern pair for original/structure1..3/self_only.
// Throws ConfigError for iem, which has a single stream (see intra_pattern).
PatternPair fusion_patterns(StructureName s);

// Block-diagonal intra-enhancement pattern.
BlockPattern intra_pattern();

// Every stream a structure resolves to, with stream labels: the fusion
// structures yield {forward, backward}; iem yields a single {intra}.
std::vector<std::pair<std::string, BlockPattern>> patterns_of(StructureName s);

// Dense additive mask (total x total): 0 where the block is allowed,
// -inf where denied.
num::Tensor2 materialize(const BlockPattern& pattern, const SegmentLayout& layout);

// fusion_safe iff every row has exactly one Allow (the no-disorder
// condition); otherwise lists the offending row modalities.
struct ValidationResult {
    bool fusion_safe = false;
    std::vector<Modality> disorder_rows;
};
ValidationResult validate(const BlockPattern& pattern);

} // namespace gsit::mask

#endif
