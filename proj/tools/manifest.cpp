#include "manifest.hpp"

#include <vcc/errors.hpp>

#include <zlib.h>

#include <cstdio>
#include <ctime>
#include <fstream>
#include <vector>

namespace vcctools {

FileDigest digest_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw vcc::IoError("cannot read " + path);
    FileDigest d;
    uint32_t crc = crc32(0L, Z_NULL, 0);
    std::vector<char> buf(1 << 16);
    while (in) {
        in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
        std::streamsize got = in.gcount();
        if (got <= 0) break;
        crc = crc32(crc, reinterpret_cast<const Bytef*>(buf.data()), static_cast<uInt>(got));
        d.bytes += static_cast<uint64_t>(got);
    }
    d.crc32 = crc;
    return d;
}

std::string iso_utc_now() {
    std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_json_atomic(const nlohmann::json& doc, const std::string& path) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw vcc::IoError("cannot write " + tmp);
        out << doc.dump(2) << "\n";
        if (!out.flush()) throw vcc::IoError("short write to " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw vcc::IoError("cannot rename " + tmp + " to " + path);
    }
}

} // namespace vcctools
