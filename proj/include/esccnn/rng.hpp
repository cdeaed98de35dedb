#pragma once

#include <cstdint>
#include <initializer_list>

namespace esccnn {

/// splitmix64 finalizer; full-period, passes standard statistical batteries.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/**
 * Deterministic uniform stream. All randomness in the library flows through
 * this generator so that results are reproducible from a single seed and do
 * not depend on the standard library's distribution implementations.
 *
 * Independent substreams are obtained with derive_seed(), never by sharing
 * one stream across loops; candidate batches therefore stay identical no
 * matter how the evaluation of a batch is ordered or parallelized.
 */
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform on [0, 1), 53-bit resolution.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform on [-halfwidth, +halfwidth). The closed/open boundary follows
    /// the generator convention; the endpoints have probability 2^-53.
    double uniform_sym(double halfwidth) {
        return halfwidth * (2.0 * uniform01() - 1.0);
    }

private:
    std::uint64_t state_;
};

/// Fold a counter path (iteration, grid indices, ...) into a master seed.
inline std::uint64_t derive_seed(std::uint64_t master,
                                 std::initializer_list<std::uint64_t> path) {
    std::uint64_t s = mix64(master);
    for (std::uint64_t component : path) {
        s = mix64(s ^ mix64(component));
    }
    return s;
}

}  // namespace esccnn
