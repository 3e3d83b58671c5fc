#include "qjet/diffusion.hpp"

#include <cmath>
#include <stdexcept>

namespace qjet {

NoiseSchedule make_schedule(size_t steps, double beta_start, double beta_end) {
    if (steps < 1) {
        throw std::invalid_argument("make_schedule: need at least one step");
    }
    if (!(beta_start > 0.0) || !(beta_start <= beta_end) || !(beta_end < 1.0)) {
        throw std::invalid_argument("make_schedule: need 0 < beta_start <= beta_end < 1");
    }
    NoiseSchedule s;
    s.steps = steps;
    s.betas.resize(steps);
    s.alpha_bars.resize(steps);
    double running = 1.0;
    for (size_t t = 0; t < steps; ++t) {
        const double frac = steps == 1 ? 0.0 : static_cast<double>(t) / static_cast<double>(steps - 1);
        s.betas[t] = beta_start + frac * (beta_end - beta_start);
        running *= 1.0 - s.betas[t];
        s.alpha_bars[t] = running;
    }
    return s;
}

JetImage classical_forward(const JetImage& x0, size_t t, const JetImage& noise,
                           const NoiseSchedule& sched) {
    if (t < 1 || t > sched.steps) {
        throw std::invalid_argument("classical_forward: step out of range");
    }
    if (noise.height != x0.height || noise.width != x0.width) {
        throw std::invalid_argument("classical_forward: noise shape mismatch");
    }
    const double ab = sched.alpha_bars[t - 1];
    const double signal = std::sqrt(ab);
    const double spread = std::sqrt(1.0 - ab);
    JetImage out(x0.height, x0.width);
    for (size_t i = 0; i < x0.size(); ++i) {
        out.pixels[i] = signal * x0.pixels[i] + spread * noise.pixels[i];
    }
    return out;
}

ChannelScrambler make_scrambler(RngStream& rng) {
    ChannelScrambler s;
    s.seed = rng.seed();
    for (auto& u : s.unitaries) {
        u = haar_unitary(16, rng);
    }
    return s;
}

EncodedChannel scramble_channel(const EncodedChannel& ec, const ComplexMatrix& u) {
    if (u.rows() != 16 || u.cols() != 16) {
        throw std::invalid_argument("scramble_channel: unitary must be 16x16");
    }
    if (unitarity_error(u) > 1e-10) {
        throw std::invalid_argument("scramble_channel: matrix is not unitary");
    }
    EncodedChannel out;
    out.height = ec.height;
    out.width = ec.width;
    out.groups.reserve(ec.groups.size());
    for (const StateVector& g : ec.groups) {
        out.groups.emplace_back(4, matvec(u, g.amplitudes()));
    }
    return out;
}

EncodedChannel fractional_scramble(const EncodedChannel& ec, const ComplexMatrix& u, double s) {
    if (s < 0.0 || s > 1.0) {
        throw std::invalid_argument("fractional_scramble: s must be in [0, 1]");
    }
    return scramble_channel(ec, unitary_power(u, s));
}

EncodedChannel noise_prior_channel(RngStream& rng, size_t height, size_t width) {
    if ((height * width) % 4 != 0) {
        throw std::invalid_argument("noise_prior_channel: pixel count must be divisible by 4");
    }
    EncodedChannel ec;
    ec.height = height;
    ec.width = width;
    const size_t count = height * width / 4;
    ec.groups.reserve(count);
    StateVector zero(4);
    for (size_t g = 0; g < count; ++g) {
        const ComplexMatrix u = haar_unitary(16, rng);
        ec.groups.emplace_back(4, matvec(u, zero.amplitudes()));
    }
    return ec;
}

} // namespace qjet
