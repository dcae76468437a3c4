#pragma once

#include <cstddef>
#include <vector>

#include "relunet/core.hpp"

namespace relunet {

/// Bin-aggregated unit mass b|a|/h by kink location t = xi/a and orientation.
struct BinSpectrum {
    double h = 0.0;
    std::size_t bins = 0;
    double length = 0.0;
    std::vector<double> b_plus;
    std::vector<double> b_minus;
    /// Sum of |b a| per bin over both orientations (not divided by h).
    std::vector<double> abs_mass;
    /// Sum of |b a| over units with t outside [0, L].
    double out_of_range_mass = 0.0;
    std::size_t degenerate_count = 0;
};

/// Bins are [kh, (k+1)h) with the last one closed. A kink within 1e-9 bin
/// widths of an edge is assigned to the bin starting there. Throws
/// DimensionError for m != 1 and std::invalid_argument unless 0 < h <= L
/// and L/h is an integer to 1e-9.
BinSpectrum extract_spectrum(const Network& net, double h, double length);

/// Network with units (1, kh, B+_k h) and (-1, -kh, B-_k h) plus the bias.
Network reconstruct_from_spectrum(const BinSpectrum& s, double output_bias);

struct SpectrumRow {
    std::size_t k = 0;
    double t = 0.0;
    double b_plus = 0.0;
    double b_minus = 0.0;
    double sum = 0.0;
    double f2 = 0.0;
    double residual = 0.0;
};

struct SpectrumComparison {
    std::vector<SpectrumRow> rows;  ///< every bin, including bin 0
    bool bin0_excluded = true;
    double rms_residual = 0.0;
    /// Pearson correlation of sum against f''; NaN when either is constant.
    double correlation = 0.0;
};

/// Compares B+_k + B-_k with f''(kh). Summary statistics skip bin 0 when
/// exclude_bin0 is set, since the slope unit relu(x) lands there. Throws
/// UnsupportedTarget if f has no second derivative.
SpectrumComparison compare_spectrum(const BinSpectrum& s, const TargetFunction& f,
                                    bool exclude_bin0 = true);

double pearson_correlation(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace relunet
