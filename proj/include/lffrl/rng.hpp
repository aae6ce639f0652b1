#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace lffrl {

/// Deterministic random stream. Every run owns one root stream seeded from the
/// config seed; components (env, init, noise, sampler, ...) work on named
/// substreams so each can be replayed independently of the others.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    /// Derive an independent stream keyed by name (and an optional index,
    /// e.g. one stream per evaluation episode).
    Rng substream(std::string_view name, std::uint64_t index = 0) const;

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform on [lo, hi).
    double uniform(double lo = 0.0, double hi = 1.0);
    /// Uniform integer on [0, n).
    std::uint64_t uniform_index(std::uint64_t n);
    /// Standard normal scaled to mean/stddev, Box-Muller with cached spare.
    double normal(double mean = 0.0, double stddev = 1.0);

private:
    std::uint64_t key_;
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace lffrl
