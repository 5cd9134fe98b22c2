#ifndef GSIT_RNG_HPP
#define GSIT_RNG_HPP

#include <cstdint>

#include "gsit/tensor.hpp"

namespace gsit::num {

// Deterministic seeded generator: splitmix64 for integers, Box-Muller on
// top for standard normals. Identical seed -> identical stream.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64();
    // Uniform in [0, 1), 53-bit resolution.
    double uniform01();
    double uniform(double lo, double hi);
    // Standard normal; the Box-Muller pair partner is cached.
    double normal();

    Tensor2 normal_tensor(std::size_t rows, std::size_t cols, double stddev = 1.0, double mean = 0.0);
    Tensor2 uniform_tensor(std::size_t rows, std::size_t cols, double lo, double hi);

    // Derives an independent stream, e.g. per (seed, sample index).
    static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream);

private:
    std::uint64_t state_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

} // namespace gsit::num

#endif
