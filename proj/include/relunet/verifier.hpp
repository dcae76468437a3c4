#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "relunet/core.hpp"
#include "relunet/trainer.hpp"

namespace relunet {

struct GridError {
    double max_error = 0.0;
    std::vector<double> argmax;
    double mse = 0.0;
};

/// Errors of net against f on the closed uniform grid with grid_size points
/// per axis on [0, L]^m (tensor product for m = 2). The mean uses pairwise
/// summation. Throws DimensionError on mismatch, std::invalid_argument if
/// grid_size < 2 or m > 2.
GridError sup_error(const TargetFunction& f, const Network& net, std::size_t grid_size,
                    std::size_t threads = 1);

/// Pairwise (cascade) summation.
double pairwise_sum(std::span<const double> v);

struct ConvergenceRow {
    std::size_t J = 0;
    double mesh_norm = 0.0;
    double max_error = 0.0;
    double bound = 0.0;
    double ratio = 0.0;          ///< max_error / bound; 0 when both are 0
    double halving_ratio = 0.0;  ///< error(J) / error(J/2) if J/2 is the previous row, else NaN
};

struct ConvergenceTable {
    std::vector<ConvergenceRow> rows;
    bool estimated_norms = false;
};

/// Builds on uniform meshes for each J and reports error against the bound.
ConvergenceTable convergence_sweep(const TargetFunction& f, std::span<const std::size_t> J_list,
                                   std::size_t grid_size = 4096);

struct HardnessRow {
    std::size_t J = 0;
    double mse = 0.0;
    double max_error = 0.0;
    double seconds = 0.0;
    bool failed = false;
};

struct HardnessTable {
    std::vector<HardnessRow> rows;
    std::string note;
};

/// Note attached to every hardness report.
extern const char* const kHardnessNote;

/// Trains one network per width on the same dataset; report only.
HardnessTable hardness_sweep(const Dataset& data, std::span<const std::size_t> J_list,
                             const TrainConfig& base);

}  // namespace relunet
