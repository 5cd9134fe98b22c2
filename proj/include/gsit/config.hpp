#ifndef GSIT_CONFIG_HPP
#define GSIT_CONFIG_HPP

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>

#include "gsit/models.hpp"

namespace gsit::lab {

// Run configuration for training and reporting. File form is line-oriented
// `key = value` under [model], [train] and [data] sections; unknown keys
// are rejected. CLI flags override file values.
struct RunConfig {
    // [model]
    std::array<std::size_t, 3> layout{4, 5, 6};
    std::size_t d = 8;
    std::size_t p = 16;
    std::size_t heads = 2;
    std::size_t out_dim = 1;
    mask::StructureName structure = mask::StructureName::original;
    // [train]
    std::uint64_t seed = 7;
    std::size_t steps = 500;
    double lr = 0.05;
    std::size_t batch = 0; // 0 = full batch
    double init_std = 0.25;
    // [data]
    std::size_t samples = 64;
    double noise = 0.3;

    model::ModelConfig model_config() const;
    mask::SegmentLayout segment_layout() const { return {layout[0], layout[1], layout[2]}; }
};

RunConfig parse_config(std::istream& in);              // throws ConfigError
RunConfig parse_config_file(const std::string& path);  // throws ConfigError
std::string serialize(const RunConfig& cfg);           // round-trip stable

} // namespace gsit::lab

#endif
