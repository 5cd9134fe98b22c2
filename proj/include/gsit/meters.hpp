#ifndef GSIT_METERS_HPP
#define GSIT_METERS_HPP

#include <array>
#include <cstdint>
#include <string>

#include "gsit/errors.hpp"

namespace gsit::exec {

enum class Stage : int { one = 0, two = 1 };

enum class Phase : int {
    qkv_projection = 0,
    map_generation,
    scale,
    softmax,
    aggregation,
    mlp,
    final_projection,
};

// One counter per (stage, phase) plus the stage-independent final
// projection. Conventions: matmul m x n x k costs mnk multiplications,
// scaling costs 1 op per map element, softmax costs 2 ops per finite map
// element (exp + divide); map elements are counted per head.
enum class Counter : int {
    qkv1 = 0,
    attn1_gen,
    attn1_scale,
    attn1_softmax,
    attn1_agg,
    mlp1,
    qkv2,
    attn2_gen,
    attn2_scale,
    attn2_softmax,
    attn2_agg,
    mlp2,
    final_proj,
    count_,
};

inline constexpr std::size_t kCounterCount = static_cast<std::size_t>(Counter::count_);

const char* counter_name(Counter c);
Counter counter_for(Stage stage, Phase phase);

// Multiplication/op counts for one forward pass, keyed by counter.
// Monotone non-decreasing until reset. A meter covers exactly one pass:
// starting a second pass without reset throws AccountingError.
class FlopMeter {
public:
    void add(Stage stage, Phase phase, std::uint64_t ops) { counts_[static_cast<std::size_t>(counter_for(stage, phase))] += ops; }
    void add(Counter c, std::uint64_t ops) { counts_[static_cast<std::size_t>(c)] += ops; }

    std::uint64_t count(Counter c) const { return counts_[static_cast<std::size_t>(c)]; }
    std::uint64_t total() const;
    const std::array<std::uint64_t, kCounterCount>& counts() const { return counts_; }

    void begin_pass();
    void end_pass();
    void reset();
    bool pass_complete() const { return completed_; }

private:
    std::array<std::uint64_t, kCounterCount> counts_{};
    bool in_pass_ = false;
    bool completed_ = false;
};

// Attention-map element counts for one stream: the dense map size, the sum
// over allowed blocks, and the largest single block.
struct MemMeter {
    std::uint64_t dense_total = 0; // heads * T_m^2
    std::uint64_t block_sum = 0;   // sum over allowed blocks of heads * T_i * T_j
    std::uint64_t block_peak = 0;  // max single allowed block
};

} // namespace gsit::exec

#endif
