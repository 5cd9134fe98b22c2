#include "gsit/rng.hpp"

#include <cmath>

namespace gsit::num {

std::uint64_t Rng::next_u64() {
    state_ += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

double Rng::uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform01();
}

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    // 1 - u keeps the log argument in (0, 1].
    const double u1 = 1.0 - uniform01();
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * 3.14159265358979323846 * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

Tensor2 Rng::normal_tensor(std::size_t rows, std::size_t cols, double stddev, double mean) {
    Tensor2 t(rows, cols);
    for (double& v : t.flat()) v = mean + stddev * normal();
    return t;
}

Tensor2 Rng::uniform_tensor(std::size_t rows, std::size_t cols, double lo, double hi) {
    Tensor2 t(rows, cols);
    for (double& v : t.flat()) v = uniform(lo, hi);
    return t;
}

std::uint64_t Rng::mix(std::uint64_t seed, std::uint64_t stream) {
    // Two splitmix64 finalizer rounds over the combined words.
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

} // namespace gsit::num
