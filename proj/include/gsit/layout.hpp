#ifndef GSIT_LAYOUT_HPP
#define GSIT_LAYOUT_HPP

#include <array>
#include <cstddef>
#include <string>
#include <utility>

#include "gsit/errors.hpp"

namespace gsit::mask {

// Concatenation order is fixed: text, vision, audio.
enum class Modality : int { text = 0, vision = 1, audio = 2 };

inline constexpr std::array<Modality, 3> kModalities{Modality::text, Modality::vision, Modality::audio};

const char* short_name(Modality m); // "t", "v", "a"
Modality modality_from_index(std::size_t i);

// Per-modality sequence lengths; defines the block boundaries of the
// concatenated sequence. All lengths must be >= 1.
class SegmentLayout {
public:
    SegmentLayout(std::size_t t, std::size_t v, std::size_t a);

    std::size_t length(Modality m) const { return lengths_[static_cast<std::size_t>(m)]; }
    std::size_t offset(Modality m) const { return offsets_[static_cast<std::size_t>(m)]; }
    std::size_t total() const { return total_; }
    // Row range [begin, end) of the modality's block.
    std::pair<std::size_t, std::size_t> range(Modality m) const {
        return {offset(m), offset(m) + length(m)};
    }
    const std::array<std::size_t, 3>& lengths() const { return lengths_; }
    Modality modality_of_row(std::size_t row) const;

    std::string to_string() const; // "t,v,a"

    friend bool operator==(const SegmentLayout&, const SegmentLayout&) = default;

private:
    std::array<std::size_t, 3> lengths_{};
    std::array<std::size_t, 3> offsets_{};
    std::size_t total_ = 0;
};

} // namespace gsit::mask

#endif
