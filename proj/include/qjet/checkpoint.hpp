#ifndef QJET_CHECKPOINT_HPP
#define QJET_CHECKPOINT_HPP

#include <string>

#include "qjet/denoiser.hpp"
#include "qjet/serial.hpp"

namespace qjet {

/// Model checkpoint, binary little-endian:
///   magic "QDMW", version u16, model-kind u8, architecture header,
///   parameter payload (f64 per value, export_params block order),
///   CRC32 of everything before it.
void write_checkpoint(const std::string& path, const DenoiserModel& model);
DenoiserModel read_checkpoint(const std::string& path);

} // namespace qjet

#endif
