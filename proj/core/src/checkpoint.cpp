#include "vcc/checkpoint.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>

#include "vcc/errors.hpp"

namespace vcc {

namespace {

constexpr char kMagic[8] = {'V', 'C', 'C', 'C', 'K', 'P', 'T', '1'};

void put_i32(std::ofstream& out, int32_t v) { out.write(reinterpret_cast<const char*>(&v), 4); }
void put_u8(std::ofstream& out, uint8_t v) { out.write(reinterpret_cast<const char*>(&v), 1); }
void put_doubles(std::ofstream& out, const double* p, size_t n) {
    out.write(reinterpret_cast<const char*>(p), static_cast<std::streamsize>(n * 8));
}

int32_t get_i32(std::ifstream& in, const std::string& path) {
    int32_t v;
    if (!in.read(reinterpret_cast<char*>(&v), 4)) throw FormatError("'" + path + "' is truncated");
    return v;
}
uint8_t get_u8(std::ifstream& in, const std::string& path) {
    uint8_t v;
    if (!in.read(reinterpret_cast<char*>(&v), 1)) throw FormatError("'" + path + "' is truncated");
    return v;
}
void get_doubles(std::ifstream& in, double* p, size_t n, const std::string& path) {
    if (!in.read(reinterpret_cast<char*>(p), static_cast<std::streamsize>(n * 8)))
        throw FormatError("'" + path + "' is truncated");
}

} // namespace

void save_checkpoint(const Checkpoint& ck, const std::string& path) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open '" + tmp + "' for writing");
        out.write(kMagic, 8);
        put_i32(out, static_cast<int32_t>(ck.version));
        put_u8(out, static_cast<uint8_t>(ck.precision));
        put_i32(out, ck.epoch_next);
        put_i32(out, static_cast<int32_t>(ck.layer_dims.size()));
        for (int d : ck.layer_dims) put_i32(out, d);
        for (size_t l = 0; l + 1 < ck.layer_dims.size(); ++l) {
            put_doubles(out, ck.weights[l].data(), ck.weights[l].size());
            put_doubles(out, ck.biases[l].data(), ck.biases[l].size());
            put_doubles(out, ck.w_vel[l].data(), ck.w_vel[l].size());
            put_doubles(out, ck.b_vel[l].data(), ck.b_vel[l].size());
        }
        put_u8(out, ck.has_centers ? 1 : 0);
        if (ck.has_centers) {
            put_i32(out, ck.centers.rows);
            put_i32(out, ck.centers.cols);
            put_doubles(out, ck.centers.data(), ck.centers.size());
            put_doubles(out, ck.c_vel.data(), ck.c_vel.size());
        }
        if (!out) throw IoError("failed while writing '" + tmp + "'");
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw IoError("cannot move '" + tmp + "' to '" + path + "'");
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    char magic[8];
    if (!in.read(magic, 8) || std::memcmp(magic, kMagic, 8) != 0)
        throw FormatError("'" + path + "' is not a checkpoint file");

    Checkpoint ck;
    ck.version = static_cast<uint32_t>(get_i32(in, path));
    if (ck.version != 1)
        throw FormatError("unsupported checkpoint version " + std::to_string(ck.version));
    uint8_t prec = get_u8(in, path);
    if (prec > 1) throw FormatError("unknown precision tag in '" + path + "'");
    ck.precision = static_cast<Precision>(prec);
    ck.epoch_next = get_i32(in, path);
    int32_t ndims = get_i32(in, path);
    if (ndims < 2 || ndims > 64) throw FormatError("implausible layer count in '" + path + "'");
    ck.layer_dims.resize(ndims);
    for (int i = 0; i < ndims; ++i) {
        ck.layer_dims[i] = get_i32(in, path);
        if (ck.layer_dims[i] < 1) throw FormatError("bad layer dimension in '" + path + "'");
    }
    for (int l = 0; l + 1 < ndims; ++l) {
        int fin = ck.layer_dims[l], fout = ck.layer_dims[l + 1];
        ck.weights.emplace_back(fin, fout);
        get_doubles(in, ck.weights.back().data(), ck.weights.back().size(), path);
        ck.biases.emplace_back(fout);
        get_doubles(in, ck.biases.back().data(), fout, path);
        ck.w_vel.emplace_back(fin, fout);
        get_doubles(in, ck.w_vel.back().data(), ck.w_vel.back().size(), path);
        ck.b_vel.emplace_back(fout);
        get_doubles(in, ck.b_vel.back().data(), fout, path);
    }
    ck.has_centers = get_u8(in, path) != 0;
    if (ck.has_centers) {
        int k = get_i32(in, path), d = get_i32(in, path);
        if (k < 1 || d < 1) throw FormatError("bad center shape in '" + path + "'");
        ck.centers = Mat<double>(k, d);
        get_doubles(in, ck.centers.data(), ck.centers.size(), path);
        ck.c_vel = Mat<double>(k, d);
        get_doubles(in, ck.c_vel.data(), ck.c_vel.size(), path);
    }
    return ck;
}

} // namespace vcc
