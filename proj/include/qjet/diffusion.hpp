#ifndef QJET_DIFFUSION_HPP
#define QJET_DIFFUSION_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "qjet/encoding.hpp"
#include "qjet/linalg.hpp"
#include "qjet/rng.hpp"

namespace qjet {

/// Classical forward-process schedule: betas with precomputed running
/// products alpha_bar_t = prod_{s<=t} (1 - beta_s). Index 0 holds step t=1.
struct NoiseSchedule {
    size_t steps = 0;
    std::vector<double> betas;
    std::vector<double> alpha_bars;
};

/// Linearly spaced betas from beta_start to beta_end over T steps.
/// Requires T >= 1 and 0 < beta_start <= beta_end < 1.
NoiseSchedule make_schedule(size_t steps, double beta_start, double beta_end);

/// x_t = sqrt(alpha_bar_t) * x0 + sqrt(1 - alpha_bar_t) * noise, 1 <= t <= T.
JetImage classical_forward(const JetImage& x0, size_t t, const JetImage& noise,
                           const NoiseSchedule& sched);

/// One 16x16 Haar unitary per channel; applied to every group of the
/// matching channel as the quantum forward process.
struct ChannelScrambler {
    std::array<ComplexMatrix, 4> unitaries;
    uint64_t seed = 0;
};

ChannelScrambler make_scrambler(RngStream& rng);

/// Applies u to every 4-qubit group of the channel. u must be unitary
/// within 1e-10.
EncodedChannel scramble_channel(const EncodedChannel& ec, const ComplexMatrix& u);

/// Applies u^s (principal branch) to every group; s in [0, 1] interpolates
/// between no scrambling and the full unitary.
EncodedChannel fractional_scramble(const EncodedChannel& ec, const ComplexMatrix& u, double s);

/// Channel whose groups are independent Haar-random states U|0000>.
EncodedChannel noise_prior_channel(RngStream& rng, size_t height, size_t width);

} // namespace qjet

#endif
