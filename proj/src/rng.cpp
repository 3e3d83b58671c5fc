#include "qjet/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qjet {

namespace {

uint64_t splitmix64(uint64_t& x) {
    x += 0x9E3779B97F4A7C15ull;
    uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

uint64_t rotl(uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

} // namespace

RngStream::RngStream(uint64_t seed) : seed_(seed) {
    uint64_t s = seed;
    for (auto& word : state_) {
        word = splitmix64(s);
    }
}

uint64_t RngStream::next_u64() {
    const uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

double RngStream::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::normal() {
    // Box-Muller; u1 nudged away from zero so log stays finite.
    double u1 = uniform();
    double u2 = uniform();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    return r * std::cos(2.0 * std::numbers::pi * u2);
}

std::complex<double> RngStream::complex_normal() {
    double u1 = uniform();
    double u2 = uniform();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(phi), r * std::sin(phi)};
}

uint64_t RngStream::uniform_below(uint64_t bound) {
    if (bound == 0) {
        throw std::invalid_argument("RngStream::uniform_below: bound must be > 0");
    }
    // Rejection sampling keeps the distribution exactly uniform.
    const uint64_t threshold = (~bound + 1) % bound;
    for (;;) {
        const uint64_t r = next_u64();
        if (r >= threshold) return r % bound;
    }
}

RngStream RngStream::derive(uint64_t a, uint64_t b) const {
    uint64_t x = seed_;
    uint64_t h = splitmix64(x);
    x = h ^ a;
    h = splitmix64(x);
    x = h ^ b;
    h = splitmix64(x);
    return RngStream(h);
}

} // namespace qjet
