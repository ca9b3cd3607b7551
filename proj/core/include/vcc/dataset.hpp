#ifndef VCC_DATASET_HPP
#define VCC_DATASET_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "vcc/matrix.hpp"

namespace vcc {

// N×D feature matrix with optional ground-truth labels. Labels are only ever
// consumed by evaluation metrics, never by training.
struct Dataset {
    Mat<double> features;             // N×D
    std::vector<int> labels;          // empty when absent, else length N
    std::vector<int64_t> sample_ids;  // length N

    int n() const { return features.rows; }
    int dim() const { return features.cols; }
    bool has_labels() const { return !labels.empty(); }
};

// Throws if the dataset violates its structural guarantees (empty matrix,
// non-finite feature, label list of the wrong length, negative label).
void validate(const Dataset& ds);

// CSV with one sample per row; if has_labels, the last column is consumed as
// an integer label. Throws IoError / ParseError / ShapeError.
Dataset load_csv(const std::string& path, bool has_labels);

// Writes features (17 significant digits, round-trip exact) plus a trailing
// label column when labels are present.
void write_csv(const Dataset& ds, const std::string& path);

// IDX binary files (big-endian; magic 0x00000803 for ubyte images,
// 0x00000801 for ubyte labels). Images are flattened row-major and scaled to
// [0,1]. labels_path may be empty. Throws FormatError / LengthError.
Dataset load_idx(const std::string& images_path, const std::string& labels_path);

// k isotropic Gaussian clusters of n_per_cluster points each; cluster centers
// are mutually >= separation apart; labels hold the cluster index.
// Deterministic for a fixed seed.
Dataset make_blobs(int n_per_cluster, int k, int dim, double spread,
                   double separation, uint64_t seed);

} // namespace vcc

#endif
