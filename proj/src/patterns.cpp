#include "gsit/patterns.hpp"

namespace gsit::mask {

namespace {
constexpr Modality T = Modality::text;
constexpr Modality V = Modality::vision;
constexpr Modality A = Modality::audio;
} // namespace

std::vector<ModalityPair> BlockPattern::allowed_pairs() const {
    std::vector<ModalityPair> out;
    for (Modality i : kModalities)
        for (Modality j : kModalities)
            if (allows(i, j)) out.emplace_back(i, j);
    return out;
}

std::size_t BlockPattern::allow_count() const {
    std::size_t n = 0;
    for (const auto& row : allow)
        for (bool b : row) n += b ? 1 : 0;
    return n;
}

BlockPattern BlockPattern::from_pairs(std::initializer_list<ModalityPair> pairs) {
    BlockPattern p;
    for (auto [i, j] : pairs) p.allow[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = true;
    return p;
}

BlockPattern BlockPattern::all_allow() {
    BlockPattern p;
    for (auto& row : p.allow) row = {true, true, true};
    return p;
}

std::string to_string(StructureName s) {
    switch (s) {
    case StructureName::original: return "original";
    case StructureName::structure1: return "s1";
    case StructureName::structure2: return "s2";
    case StructureName::structure3: return "s3";
    case StructureName::self_only: return "self_only";
    case StructureName::iem: return "iem";
    }
    return "?";
}

StructureName structure_from_string(std::string_view s) {
    if (s == "original") return StructureName::original;
    if (s == "s1" || s == "structure1") return StructureName::structure1;
    if (s == "s2" || s == "structure2") return StructureName::structure2;
    if (s == "s3" || s == "structure3") return StructureName::structure3;
    if (s == "self_only") return StructureName::self_only;
    if (s == "iem") return StructureName::iem;
    throw ConfigError("unknown structure name: " + std::string(s));
}

PatternPair fusion_patterns(StructureName s) {
    switch (s) {
    case StructureName::original:
        // Two opposing unidirectional cycles.
        return {BlockPattern::from_pairs({{T, V}, {V, A}, {A, T}}),
                BlockPattern::from_pairs({{T, A}, {V, T}, {A, V}})};
    case StructureName::structure1:
        // Forward row a allows (a,t) in the published grid even though the
        // arrow set implies (a,v); the grid is kept as the fixture, so this
        // pair double-covers (a,t) and never covers (a,v).
        return {BlockPattern::from_pairs({{T, A}, {V, A}, {A, T}}),
                BlockPattern::from_pairs({{T, V}, {V, T}, {A, T}})};
    case StructureName::structure2:
        return {BlockPattern::from_pairs({{T, V}, {V, T}, {A, V}}),
                BlockPattern::from_pairs({{T, A}, {V, A}, {A, T}})};
    case StructureName::structure3:
        return {BlockPattern::from_pairs({{T, V}, {V, A}, {A, V}}),
                BlockPattern::from_pairs({{T, A}, {V, T}, {A, T}})};
    case StructureName::self_only: {
        // Denies the diagonal, allows every cross block; both streams share it.
        const BlockPattern p =
            BlockPattern::from_pairs({{T, V}, {T, A}, {V, T}, {V, A}, {A, T}, {A, V}});
        return {p, p};
    }
    case StructureName::iem:
        throw ConfigError("iem is a single intra-enhancement pattern, not a fusion pair");
    }
    throw ConfigError("unknown structure");
}

BlockPattern intra_pattern() {
    return BlockPattern::from_pairs({{T, T}, {V, V}, {A, A}});
}

std::vector<std::pair<std::string, BlockPattern>> patterns_of(StructureName s) {
    if (s == StructureName::iem) return {{"intra", intra_pattern()}};
    const PatternPair pair = fusion_patterns(s);
    return {{"forward", pair.forward}, {"backward", pair.backward}};
}

num::Tensor2 materialize(const BlockPattern& pattern, const SegmentLayout& layout) {
    num::Tensor2 m(layout.total(), layout.total());
    for (Modality i : kModalities) {
        const auto [r0, r1] = layout.range(i);
        for (Modality j : kModalities) {
            const auto [c0, c1] = layout.range(j);
            const double fill = pattern.allows(i, j) ? 0.0 : num::kNegInf;
            for (std::size_t r = r0; r < r1; ++r)
                for (std::size_t c = c0; c < c1; ++c) m(r, c) = fill;
        }
    }
    return m;
}

ValidationResult validate(const BlockPattern& pattern) {
    ValidationResult res;
    for (Modality i : kModalities) {
        std::size_t allows = 0;
        for (Modality j : kModalities)
            if (pattern.allows(i, j)) ++allows;
        if (allows != 1) res.disorder_rows.push_back(i);
    }
    res.fusion_safe = res.disorder_rows.empty();
    return res;
}

} // namespace gsit::mask
