#pragma once

#include <cstdint>
#include <random>

namespace qdct {

/// Reproducible random source: a seeded mt19937_64 plus a draw counter.
/// Conversions to doubles and bounded integers are done here rather than
/// with <random> distributions, whose output is implementation-defined.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed = 0) : seed_(seed), engine_(seed) {}

    std::uint64_t seed() const { return seed_; }
    std::uint64_t position() const { return position_; }

    std::uint64_t next_u64();
    /// Uniform in [0, 1) with 53 bits of resolution.
    double uniform01();
    /// Uniform in {0, ..., bound - 1}; bound must be positive.
    std::uint64_t uniform_below(std::uint64_t bound);

private:
    std::uint64_t seed_;
    std::uint64_t position_ = 0;
    std::mt19937_64 engine_;
};

/// splitmix64 finaliser.
std::uint64_t mix64(std::uint64_t x);

/// Seed for an independent sub-stream (block, trial, ...).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0);

}  // namespace qdct
