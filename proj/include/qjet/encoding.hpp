#ifndef QJET_ENCODING_HPP
#define QJET_ENCODING_HPP

#include <array>
#include <cstddef>
#include <vector>

#include "qjet/sim.hpp"

namespace qjet {

/// Pixel grid of deposited energy. Working values are double; datasets on
/// disk store float32 (see dataset.hpp).
struct JetImage {
    size_t height = 0;
    size_t width = 0;
    std::vector<double> pixels;  // row-major

    JetImage() = default;
    JetImage(size_t h, size_t w) : height(h), width(w), pixels(h * w, 0.0) {}

    double& at(size_t r, size_t c) { return pixels[r * width + c]; }
    double at(size_t r, size_t c) const { return pixels[r * width + c]; }
    size_t size() const { return pixels.size(); }
};

/// The four 2x2-block positions of an even-sized image, each as an
/// (h/2) x (w/2) sub-image. Channel c = 2*dy + dx holds pixel
/// (2i + dy, 2j + dx) at position (i, j).
struct ChannelSet {
    std::array<JetImage, 4> channels;
};

/// A channel encoded as 4-qubit states, one per consecutive raster-order
/// quadruple of pixels.
struct EncodedChannel {
    size_t height = 0;
    size_t width = 0;
    std::vector<StateVector> groups;
};

using EncodedSample = std::array<EncodedChannel, 4>;

/// Divide by max_value, then clamp to [0, 1]. max_value must be > 0.
JetImage normalize(const JetImage& img, double max_value);

ChannelSet space_to_depth(const JetImage& img);
JetImage depth_to_space(const ChannelSet& cs);

/// Angle-encode four pixels in [0, 1] onto |0000> via Rx(pi * pixel_q) on
/// qubit q. Values outside [0, 1] by more than 1e-9 are rejected.
StateVector encode_group(const std::array<double, 4>& pixels);

/// pixel_q = arccos(clamp(<Z_q>, -1, 1)) / pi; exact inverse of encode_group
/// on product states.
std::array<double, 4> decode_group(const StateVector& state);

EncodedChannel encode_channel(const JetImage& channel);
JetImage decode_channel(const EncodedChannel& ec);

} // namespace qjet

#endif
