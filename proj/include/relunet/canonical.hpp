#pragma once

#include <vector>

#include "relunet/core.hpp"

namespace relunet {

/// Units with |a| at or below this are treated as constants.
inline constexpr double kDegenerateWeight = 1e-12;

struct Breakpoint {
    double t = 0.0;
    double coeff = 0.0;

    bool operator==(const Breakpoint&) const = default;
};

/// 1-D network in +/- breakpoint form on [0, L]:
///
///   const + slope_pos relu(x) + slope_neg relu(L - x)
///         + sum b+ relu(x - t) + sum b- relu(t - x),   t in [0, L].
struct CanonicalNetwork {
    double length = 1.0;
    double const_term = 0.0;
    double slope_pos = 0.0;
    double slope_neg = 0.0;
    std::vector<Breakpoint> forward;
    std::vector<Breakpoint> backward;

    bool operator==(const CanonicalNetwork&) const = default;
};

/// Rescales every unit to |a| = 1, keeps kinks inside [0, L] (closed) and
/// absorbs the rest into the affine part. Throws DimensionError if m != 1.
CanonicalNetwork fold_to_canonical(const Network& net, double length);

double evaluate_canonical(const CanonicalNetwork& c, double x);

/// Network realizing c: bias, nonzero slope units relu(x) and relu(L - x),
/// then the forward and backward lists as (1, t, b) and (-1, -t, b).
/// Folding the result moves the slopes into kinks at 0 and L, after which
/// fold_to_canonical(to_network(.)) is a fixed point.
Network to_network(const CanonicalNetwork& c);

struct BreakpointRatio {
    double t = 0.0;   ///< xi / a, the kink location
    int sign = 1;     ///< sign of a
    double mass = 0;  ///< b |a|
};

struct BreakpointRatios {
    std::vector<BreakpointRatio> entries;  ///< unit order, degenerate units skipped
    std::size_t degenerate_count = 0;
};

BreakpointRatios breakpoint_ratios(const Network& net);

}  // namespace relunet
