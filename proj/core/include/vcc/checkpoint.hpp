#ifndef VCC_CHECKPOINT_HPP
#define VCC_CHECKPOINT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "vcc/matrix.hpp"

namespace vcc {

// Arithmetic width used for encoder parameters and training math.
enum class Precision : uint8_t { F32 = 0, F64 = 1 };

// Everything needed to resume a run at an epoch boundary. Values are stored
// as doubles: every float is exactly representable, so an F32 state round-
// trips bit for bit. Random streams are re-derived from (seed, epoch), so no
// engine state needs to be carried.
struct Checkpoint {
    uint32_t version = 1;
    Precision precision = Precision::F32;
    int32_t epoch_next = 0;             // first epoch index still to run
    std::vector<int> layer_dims;
    std::vector<Mat<double>> weights;   // per layer
    std::vector<std::vector<double>> biases;
    std::vector<Mat<double>> w_vel;     // optimizer momentum
    std::vector<std::vector<double>> b_vel;
    bool has_centers = false;
    Mat<double> centers;                // K×d when has_centers
    Mat<double> c_vel;
};

// Little-endian binary file, atomic replace on save (write + rename).
void save_checkpoint(const Checkpoint& ck, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

} // namespace vcc

#endif
