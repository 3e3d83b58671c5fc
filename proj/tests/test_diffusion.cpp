#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "qjet/diffusion.hpp"

using namespace qjet;

namespace {

JetImage random_image(size_t h, size_t w, RngStream& rng) {
    JetImage img(h, w);
    for (double& p : img.pixels) p = rng.uniform();
    return img;
}

EncodedChannel random_encoded(RngStream& rng) {
    JetImage img(8, 8);
    for (double& p : img.pixels) p = rng.uniform();
    return encode_channel(img);
}

} // namespace

TEST_CASE("make_schedule") {
    const NoiseSchedule one = make_schedule(1, 0.1, 0.1);
    CHECK(one.alpha_bars[0] == doctest::Approx(0.9).epsilon(1e-15));

    // Constant beta: alpha_bar_t = (1 - beta)^t.
    const NoiseSchedule flat = make_schedule(50, 0.03, 0.03);
    for (size_t t = 1; t <= 50; ++t) {
        CHECK(std::abs(flat.alpha_bars[t - 1] - std::pow(0.97, static_cast<double>(t))) < 1e-12);
    }

    const NoiseSchedule canonical = make_schedule(1000, 1e-4, 0.02);
    CHECK(canonical.alpha_bars.back() < 0.01);
    // Direct product oracle.
    double prod = 1.0;
    for (size_t t = 0; t < 1000; ++t) {
        prod *= 1.0 - (1e-4 + (0.02 - 1e-4) * static_cast<double>(t) / 999.0);
    }
    CHECK(canonical.alpha_bars.back() == doctest::Approx(prod).epsilon(1e-12));
    for (size_t t = 1; t < 1000; ++t) {
        CHECK(canonical.alpha_bars[t] < canonical.alpha_bars[t - 1]);
    }

    CHECK_THROWS_AS(make_schedule(0, 0.1, 0.2), std::invalid_argument);
    CHECK_THROWS_AS(make_schedule(10, 0.0, 0.2), std::invalid_argument);
    CHECK_THROWS_AS(make_schedule(10, 0.3, 0.2), std::invalid_argument);
    CHECK_THROWS_AS(make_schedule(10, 0.1, 1.0), std::invalid_argument);
}

TEST_CASE("classical_forward") {
    RngStream rng(41);
    const NoiseSchedule sched = make_schedule(100, 1e-3, 0.05);
    const JetImage x0 = random_image(4, 4, rng);
    const JetImage zero_noise(4, 4);

    // Zero noise leaves only the scaled signal.
    const JetImage xt = classical_forward(x0, 1, zero_noise, sched);
    for (size_t i = 0; i < x0.size(); ++i) {
        CHECK(xt.pixels[i] == doctest::Approx(std::sqrt(sched.alpha_bars[0]) * x0.pixels[i])
                                  .epsilon(1e-15));
    }

    // Zero signal leaves only the scaled noise.
    JetImage noise = random_image(4, 4, rng);
    const JetImage only_noise = classical_forward(JetImage(4, 4), 50, noise, sched);
    for (size_t i = 0; i < noise.size(); ++i) {
        CHECK(only_noise.pixels[i] ==
              doctest::Approx(std::sqrt(1.0 - sched.alpha_bars[49]) * noise.pixels[i])
                  .epsilon(1e-15));
    }

    // Two-line formula oracle at t = T/2.
    const size_t t = 50;
    const JetImage got = classical_forward(x0, t, noise, sched);
    const double ab = sched.alpha_bars[t - 1];
    for (size_t i = 0; i < x0.size(); ++i) {
        const double want = std::sqrt(ab) * x0.pixels[i] + std::sqrt(1.0 - ab) * noise.pixels[i];
        CHECK(std::abs(got.pixels[i] - want) < 1e-12);
    }

    CHECK_THROWS_AS(classical_forward(x0, 0, noise, sched), std::invalid_argument);
    CHECK_THROWS_AS(classical_forward(x0, 101, noise, sched), std::invalid_argument);
    CHECK_THROWS_AS(classical_forward(x0, 5, JetImage(2, 2), sched), std::invalid_argument);
}

TEST_CASE("classical_forward is linear in signal and noise") {
    RngStream rng(42);
    const NoiseSchedule sched = make_schedule(10, 0.01, 0.1);
    const JetImage x1 = random_image(4, 4, rng), x2 = random_image(4, 4, rng);
    const JetImage n1 = random_image(4, 4, rng), n2 = random_image(4, 4, rng);
    JetImage xsum(4, 4), nsum(4, 4);
    for (size_t i = 0; i < 16; ++i) {
        xsum.pixels[i] = x1.pixels[i] + x2.pixels[i];
        nsum.pixels[i] = n1.pixels[i] + n2.pixels[i];
    }
    const JetImage a = classical_forward(x1, 5, n1, sched);
    const JetImage b = classical_forward(x2, 5, n2, sched);
    const JetImage c = classical_forward(xsum, 5, nsum, sched);
    for (size_t i = 0; i < 16; ++i) {
        CHECK(std::abs(c.pixels[i] - a.pixels[i] - b.pixels[i]) < 1e-12);
    }
}

TEST_CASE("scramble_channel") {
    RngStream rng(43);
    const EncodedChannel ec = random_encoded(rng);

    const EncodedChannel same = scramble_channel(ec, ComplexMatrix::identity(16));
    for (size_t g = 0; g < ec.groups.size(); ++g) {
        for (size_t i = 0; i < 16; ++i) {
            CHECK(same.groups[g].amplitudes()[i] == ec.groups[g].amplitudes()[i]);
        }
    }

    const ComplexMatrix u = haar_unitary(16, rng);
    const EncodedChannel fwd = scramble_channel(ec, u);
    for (const StateVector& g : fwd.groups) {
        CHECK(std::abs(g.norm_squared() - 1.0) < 1e-10);
    }
    const EncodedChannel back = scramble_channel(fwd, dagger(u));
    for (size_t g = 0; g < ec.groups.size(); ++g) {
        for (size_t i = 0; i < 16; ++i) {
            CHECK(std::abs(back.groups[g].amplitudes()[i] - ec.groups[g].amplitudes()[i]) <
                  1e-10);
        }
    }

    // Per-group dense matrix-vector oracle.
    for (size_t g = 0; g < ec.groups.size(); ++g) {
        const ComplexVector want = oracle::dense_apply(u, ec.groups[g].amplitudes());
        for (size_t i = 0; i < 16; ++i) {
            CHECK(std::abs(fwd.groups[g].amplitudes()[i] - want[i]) < 1e-12);
        }
    }

    CHECK_THROWS_AS(scramble_channel(ec, oracle::random_complex(16, 16, rng)),
                    std::invalid_argument);
    CHECK_THROWS_AS(scramble_channel(ec, ComplexMatrix::identity(8)), std::invalid_argument);
}

TEST_CASE("fractional_scramble") {
    RngStream rng(44);
    const EncodedChannel ec = random_encoded(rng);
    const ComplexMatrix u = haar_unitary(16, rng);

    const EncodedChannel s0 = fractional_scramble(ec, u, 0.0);
    for (size_t g = 0; g < ec.groups.size(); ++g) {
        for (size_t i = 0; i < 16; ++i) {
            CHECK(std::abs(s0.groups[g].amplitudes()[i] - ec.groups[g].amplitudes()[i]) < 1e-10);
        }
    }

    const EncodedChannel s1 = fractional_scramble(ec, u, 1.0);
    const EncodedChannel full = scramble_channel(ec, u);
    for (size_t g = 0; g < ec.groups.size(); ++g) {
        for (size_t i = 0; i < 16; ++i) {
            CHECK(std::abs(s1.groups[g].amplitudes()[i] - full.groups[g].amplitudes()[i]) < 1e-9);
        }
    }

    const EncodedChannel twice = fractional_scramble(fractional_scramble(ec, u, 0.5), u, 0.5);
    for (size_t g = 0; g < ec.groups.size(); ++g) {
        for (size_t i = 0; i < 16; ++i) {
            CHECK(std::abs(twice.groups[g].amplitudes()[i] - full.groups[g].amplitudes()[i]) <
                  1e-9);
        }
    }

    // General composition: s1 then s2 equals s1 + s2.
    const EncodedChannel ab =
        fractional_scramble(fractional_scramble(ec, u, 0.3), u, 0.45);
    const EncodedChannel once = fractional_scramble(ec, u, 0.75);
    for (size_t g = 0; g < ec.groups.size(); ++g) {
        for (size_t i = 0; i < 16; ++i) {
            CHECK(std::abs(ab.groups[g].amplitudes()[i] - once.groups[g].amplitudes()[i]) < 1e-8);
        }
    }

    CHECK_THROWS_AS(fractional_scramble(ec, u, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(fractional_scramble(ec, u, 1.1), std::invalid_argument);
}

TEST_CASE("noise_prior_channel") {
    RngStream rng(45);
    const EncodedChannel prior = noise_prior_channel(rng, 8, 8);
    CHECK(prior.groups.size() == 16);
    for (const StateVector& g : prior.groups) {
        CHECK(std::abs(g.norm_squared() - 1.0) < 1e-12);
    }

    // Haar average of <Z> is zero.
    RngStream stat_rng(46);
    double acc = 0.0;
    size_t count = 0;
    for (int rep = 0; rep < 40; ++rep) {
        const EncodedChannel p = noise_prior_channel(stat_rng, 8, 8);
        for (const StateVector& g : p.groups) {
            for (size_t q = 0; q < 4; ++q) {
                acc += expectation_z(g, q);
                ++count;
            }
        }
    }
    CHECK(std::abs(acc / static_cast<double>(count)) < 0.02);

    // Different seeds give different states.
    RngStream ra(1), rb(2);
    const EncodedChannel pa = noise_prior_channel(ra, 8, 8);
    const EncodedChannel pb = noise_prior_channel(rb, 8, 8);
    cdouble overlap = 0.0;
    for (size_t i = 0; i < 16; ++i) {
        overlap += std::conj(pa.groups[0].amplitudes()[i]) * pb.groups[0].amplitudes()[i];
    }
    CHECK(std::norm(overlap) < 1.0 - 1e-6);
}

TEST_CASE("make_scrambler draws four independent unitaries") {
    RngStream rng(47);
    const ChannelScrambler s = make_scrambler(rng);
    for (const ComplexMatrix& u : s.unitaries) {
        CHECK(u.rows() == 16);
        CHECK(unitarity_error(u) < 1e-12);
    }
    CHECK(max_abs_diff(s.unitaries[0], s.unitaries[1]) > 0.1);
}

TEST_CASE("scrambling decorrelates decoded pixels") {
    RngStream rng(48);
    JetImage img(8, 8);
    for (double& p : img.pixels) p = rng.uniform();
    const EncodedChannel ec = encode_channel(img);

    std::vector<double> original(img.pixels);
    double corr_sum = 0.0;
    const int reps = 200;
    for (int rep = 0; rep < reps; ++rep) {
        const ComplexMatrix u = haar_unitary(16, rng);
        const JetImage decoded = decode_channel(scramble_channel(ec, u));
        corr_sum += oracle::pearson(original, decoded.pixels);
    }
    CHECK(std::abs(corr_sum / reps) < 0.1);
}
