#ifndef QJET_DATASET_HPP
#define QJET_DATASET_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "qjet/encoding.hpp"
#include "qjet/rng.hpp"
#include "qjet/serial.hpp"

namespace qjet {

/// Jet image container, binary little-endian:
///   magic "QJET", version u16, sample count u32, height u16, width u16,
///   payload of count*h*w f32 pixels (sample-major, row-major within a
///   sample), CRC32 of the payload.
///
/// Pixels must be finite and >= 0. Values are widened to double on read and
/// narrowed to f32 on write.
void write_dataset(const std::string& path, const std::vector<JetImage>& images);
std::vector<JetImage> read_dataset(const std::string& path);

/// Centered h x w window: offsets floor((H-h)/2), floor((W-w)/2).
JetImage center_crop(const JetImage& img, size_t out_height, size_t out_width);

/// Synthetic sparse-jet generator: a few isotropic Gaussian blobs at random
/// integer centers with exponentially distributed peak intensities,
/// normalized so the maximum pixel is at most 1.
struct SyntheticJetConfig {
    size_t count = 256;
    size_t size = 16;        // square, must be even
    size_t blobs_min = 1;
    size_t blobs_max = 3;
    double sigma = 0.5;      // blob width in pixels
    double peak_rate = 1.0;  // exponential rate for peak intensities
    uint64_t seed = 1;
};

std::vector<JetImage> synth_jets(const SyntheticJetConfig& cfg);

/// 8-bit binary PGM, pixel = round(255 * clamp(value, 0, 1)).
void write_pgm(const std::string& path, const JetImage& img);

} // namespace qjet

#endif
