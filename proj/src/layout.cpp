#include "gsit/layout.hpp"

namespace gsit::mask {

const char* short_name(Modality m) {
    switch (m) {
    case Modality::text: return "t";
    case Modality::vision: return "v";
    case Modality::audio: return "a";
    }
    return "?";
}

Modality modality_from_index(std::size_t i) {
    if (i > 2) throw ContractError("modality index out of range");
    return static_cast<Modality>(static_cast<int>(i));
}

SegmentLayout::SegmentLayout(std::size_t t, std::size_t v, std::size_t a) : lengths_{t, v, a} {
    if (t == 0 || v == 0 || a == 0) throw ConfigError("segment lengths must all be >= 1");
    offsets_ = {0, t, t + v};
    total_ = t + v + a;
}

Modality SegmentLayout::modality_of_row(std::size_t row) const {
    if (row >= total_) throw ShapeError("row outside the concatenated sequence");
    if (row < offsets_[1]) return Modality::text;
    if (row < offsets_[2]) return Modality::vision;
    return Modality::audio;
}

std::string SegmentLayout::to_string() const {
    return std::to_string(lengths_[0]) + "," + std::to_string(lengths_[1]) + "," + std::to_string(lengths_[2]);
}

} // namespace gsit::mask
