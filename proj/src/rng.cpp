#include "lffrl/rng.hpp"

#include <cmath>

namespace lffrl {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace

Rng::Rng(std::uint64_t seed) : key_(splitmix64(seed)), gen_(splitmix64(key_)) {}

Rng Rng::substream(std::string_view name, std::uint64_t index) const {
    return Rng(splitmix64(key_ ^ fnv1a(name)) ^ splitmix64(index * 0x9e3779b97f4a7c15ULL + 1));
}

double Rng::uniform(double lo, double hi) {
    // 53-bit mantissa yields uniform doubles in [0, 1).
    double u = static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    return lo + u * (hi - lo);
}

std::uint64_t Rng::uniform_index(std::uint64_t n) {
    // Rejection sampling keeps the draw unbiased.
    std::uint64_t limit = ~0ULL - (~0ULL % n);
    std::uint64_t x;
    do {
        x = gen_();
    } while (x >= limit);
    return x % n;
}

double Rng::normal(double mean, double stddev) {
    if (has_spare_) {
        has_spare_ = false;
        return mean + stddev * spare_;
    }
    double u1, u2;
    do {
        u1 = uniform();
    } while (u1 <= 0.0);
    u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double z0 = r * std::cos(2.0 * M_PI * u2);
    spare_ = r * std::sin(2.0 * M_PI * u2);
    has_spare_ = true;
    return mean + stddev * z0;
}

}  // namespace lffrl
