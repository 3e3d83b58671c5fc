#ifndef QJET_RNG_HPP
#define QJET_RNG_HPP

#include <complex>
#include <cstdint>

namespace qjet {

/// Deterministic random stream: xoshiro256++ seeded through splitmix64.
///
/// The generator is fixed for the life of the project so that seeded runs
/// reproduce bit-identically. Gaussian variates come from Box-Muller on the
/// 53-bit uniform output. A stream is single-owner: parallel workers derive
/// their own child streams instead of sharing one.
class RngStream {
  public:
    explicit RngStream(uint64_t seed);

    uint64_t next_u64();

    /// Uniform double in [0, 1), 53-bit resolution.
    double uniform();

    /// Standard normal N(0, 1).
    double normal();

    /// Complex value with independent N(0, 1) real and imaginary parts.
    std::complex<double> complex_normal();

    /// Uniform integer in [0, bound). bound must be > 0.
    uint64_t uniform_below(uint64_t bound);

    uint64_t seed() const { return seed_; }

    /// Deterministically derived independent stream. Streams for distinct
    /// (a, b) pairs are decorrelated; the parent stream is left untouched.
    RngStream derive(uint64_t a, uint64_t b = 0) const;

  private:
    uint64_t seed_;
    uint64_t state_[4];
};

} // namespace qjet

#endif
