#ifndef VCC_TOOLS_MANIFEST_HPP
#define VCC_TOOLS_MANIFEST_HPP

#include <json.hpp>

#include <cstdint>
#include <string>

namespace vcctools {

// size + CRC-32 digest of a file on disk; throws vcc::IoError when missing.
struct FileDigest {
    uint64_t bytes = 0;
    uint32_t crc32 = 0;
};
FileDigest digest_file(const std::string& path);

// Current time as an ISO-8601 UTC string (second resolution).
std::string iso_utc_now();

// Atomic JSON write: serialize to <path>.tmp, then rename over path.
void write_json_atomic(const nlohmann::json& doc, const std::string& path);

} // namespace vcctools

#endif
