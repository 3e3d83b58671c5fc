#ifndef QJET_CRC32_HPP
#define QJET_CRC32_HPP

#include <cstddef>
#include <cstdint>

namespace qjet {

// CRC-32 (IEEE 802.3, reflected, polynomial 0xEDB88320).
// crc32("123456789") == 0xCBF43926.
uint32_t crc32(const void* data, size_t len, uint32_t seed = 0);

} // namespace qjet

#endif
