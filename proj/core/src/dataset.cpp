#include "vcc/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "vcc/errors.hpp"
#include "vcc/rng.hpp"

namespace vcc {

void validate(const Dataset& ds) {
    if (ds.features.rows < 1 || ds.features.cols < 1)
        throw ShapeError("dataset is empty (need at least one row and one column)");
    for (int r = 0; r < ds.features.rows; ++r)
        for (int c = 0; c < ds.features.cols; ++c)
            if (!std::isfinite(ds.features(r, c)))
                throw ParseError("non-finite feature value at row " + std::to_string(r) +
                                 ", column " + std::to_string(c));
    if (!ds.labels.empty()) {
        if (static_cast<int>(ds.labels.size()) != ds.features.rows)
            throw LengthError("label count " + std::to_string(ds.labels.size()) +
                              " does not match row count " + std::to_string(ds.features.rows));
        for (size_t i = 0; i < ds.labels.size(); ++i)
            if (ds.labels[i] < 0)
                throw ArgumentError("negative label at row " + std::to_string(i));
    }
    if (ds.sample_ids.size() != static_cast<size_t>(ds.features.rows))
        throw LengthError("sample_ids length does not match row count");
}

namespace {

// Trims spaces, tabs and a trailing CR.
std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

double parse_cell(std::string_view cell, int row, int col) {
    cell = trim(cell);
    double v = 0.0;
    auto [p, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc() || p != cell.data() + cell.size())
        throw ParseError("cannot parse '" + std::string(cell) + "' as a number at row " +
                         std::to_string(row) + ", column " + std::to_string(col));
    if (!std::isfinite(v))
        throw ParseError("non-finite value at row " + std::to_string(row) +
                         ", column " + std::to_string(col));
    return v;
}

int parse_label(std::string_view cell, int row) {
    cell = trim(cell);
    int v = 0;
    auto [p, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc() || p != cell.data() + cell.size())
        throw ParseError("cannot parse '" + std::string(cell) + "' as an integer label at row " +
                         std::to_string(row));
    return v;
}

} // namespace

Dataset load_csv(const std::string& path, bool has_labels) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "' for reading");

    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    std::string line;
    int lineno = 0;
    size_t width = 0;
    while (std::getline(in, line)) {
        if (trim(line).empty()) { ++lineno; continue; }
        std::vector<std::string_view> cells;
        std::string_view rest = line;
        for (;;) {
            size_t comma = rest.find(',');
            cells.push_back(rest.substr(0, comma));
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
        if (rows.empty() && labels.empty()) {
            width = cells.size();
            if (has_labels && width < 2)
                throw ShapeError("need at least one feature column besides the label column");
        } else if (cells.size() != width) {
            throw ShapeError("row " + std::to_string(lineno) + " has " +
                             std::to_string(cells.size()) + " columns, expected " +
                             std::to_string(width));
        }
        size_t nfeat = has_labels ? width - 1 : width;
        std::vector<double> row(nfeat);
        for (size_t c = 0; c < nfeat; ++c)
            row[c] = parse_cell(cells[c], lineno, static_cast<int>(c));
        if (has_labels) labels.push_back(parse_label(cells[width - 1], lineno));
        rows.push_back(std::move(row));
        ++lineno;
    }
    if (rows.empty()) throw ShapeError("'" + path + "' contains no data rows");

    Dataset ds;
    ds.features = Mat<double>(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
    for (size_t r = 0; r < rows.size(); ++r)
        std::copy(rows[r].begin(), rows[r].end(), ds.features.row(static_cast<int>(r)));
    ds.labels = std::move(labels);
    ds.sample_ids.resize(rows.size());
    for (size_t i = 0; i < rows.size(); ++i) ds.sample_ids[i] = static_cast<int64_t>(i);
    validate(ds);
    return ds;
}

void write_csv(const Dataset& ds, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    char buf[40];
    for (int r = 0; r < ds.features.rows; ++r) {
        for (int c = 0; c < ds.features.cols; ++c) {
            std::snprintf(buf, sizeof buf, "%.17g", ds.features(r, c));
            if (c) out << ',';
            out << buf;
        }
        if (ds.has_labels()) out << ',' << ds.labels[r];
        out << '\n';
    }
    if (!out) throw IoError("failed while writing '" + path + "'");
}

namespace {

uint32_t read_be32(std::ifstream& in, const std::string& path) {
    unsigned char b[4];
    if (!in.read(reinterpret_cast<char*>(b), 4))
        throw FormatError("'" + path + "' is truncated");
    return (uint32_t(b[0]) << 24) | (uint32_t(b[1]) << 16) | (uint32_t(b[2]) << 8) | uint32_t(b[3]);
}

} // namespace

Dataset load_idx(const std::string& images_path, const std::string& labels_path) {
    std::ifstream in(images_path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + images_path + "' for reading");
    uint32_t magic = read_be32(in, images_path);
    if (magic != 0x00000803u)
        throw FormatError("'" + images_path + "' has magic " + std::to_string(magic) +
                          ", expected 2051 (ubyte image file)");
    uint32_t n = read_be32(in, images_path);
    uint32_t h = read_be32(in, images_path);
    uint32_t w = read_be32(in, images_path);
    size_t count = size_t(n) * h * w;
    std::vector<unsigned char> pixels(count);
    if (!in.read(reinterpret_cast<char*>(pixels.data()), static_cast<std::streamsize>(count)))
        throw FormatError("'" + images_path + "' is truncated (expected " +
                          std::to_string(count) + " pixel bytes)");

    Dataset ds;
    ds.features = Mat<double>(static_cast<int>(n), static_cast<int>(h * w));
    for (size_t k = 0; k < count; ++k) ds.features.a[k] = pixels[k] / 255.0;

    if (!labels_path.empty()) {
        std::ifstream lin(labels_path, std::ios::binary);
        if (!lin) throw IoError("cannot open '" + labels_path + "' for reading");
        uint32_t lmagic = read_be32(lin, labels_path);
        if (lmagic != 0x00000801u)
            throw FormatError("'" + labels_path + "' has magic " + std::to_string(lmagic) +
                              ", expected 2049 (ubyte label file)");
        uint32_t ln = read_be32(lin, labels_path);
        if (ln != n)
            throw LengthError("label count " + std::to_string(ln) +
                              " does not match image count " + std::to_string(n));
        std::vector<unsigned char> raw(ln);
        if (!lin.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(ln)))
            throw FormatError("'" + labels_path + "' is truncated");
        ds.labels.assign(raw.begin(), raw.end());
    }
    ds.sample_ids.resize(n);
    for (uint32_t i = 0; i < n; ++i) ds.sample_ids[i] = i;
    validate(ds);
    return ds;
}

Dataset make_blobs(int n_per_cluster, int k, int dim, double spread,
                   double separation, uint64_t seed) {
    if (n_per_cluster < 1 || k < 1 || dim < 1)
        throw ArgumentError("make_blobs counts must be positive");
    if (spread <= 0.0) throw ArgumentError("make_blobs spread must be > 0");
    if (separation < 0.0) throw ArgumentError("make_blobs separation must be >= 0");

    Rng rng(mix_seed(seed, kStreamBlobs));

    // Draw center sets in a box scaled to the separation until all pairwise
    // distances clear it. A zero separation degenerates to identical centers,
    // which is legal and useful for failure-mode tests.
    Mat<double> centers(k, dim);
    double half = 1.5 * separation;
    const int max_attempts = 10000;
    int attempt = 0;
    for (;; ++attempt) {
        if (attempt >= max_attempts)
            throw ArgumentError("could not place " + std::to_string(k) +
                                " centers mutually >= " + std::to_string(separation) +
                                " apart; increase dim or lower separation");
        for (int c = 0; c < k; ++c)
            for (int d = 0; d < dim; ++d) centers(c, d) = rng.uniform(-half, half);
        bool ok = true;
        for (int a = 0; a < k && ok; ++a)
            for (int b = a + 1; b < k && ok; ++b) {
                double s2 = 0.0;
                for (int d = 0; d < dim; ++d) {
                    double t = centers(a, d) - centers(b, d);
                    s2 += t * t;
                }
                ok = s2 >= separation * separation;
            }
        if (ok) break;
    }

    int n = n_per_cluster * k;
    Dataset ds;
    ds.features = Mat<double>(n, dim);
    ds.labels.resize(n);
    ds.sample_ids.resize(n);
    int r = 0;
    for (int c = 0; c < k; ++c)
        for (int i = 0; i < n_per_cluster; ++i, ++r) {
            for (int d = 0; d < dim; ++d)
                ds.features(r, d) = centers(c, d) + spread * rng.gaussian();
            ds.labels[r] = c;
            ds.sample_ids[r] = r;
        }
    return ds;
}

} // namespace vcc
