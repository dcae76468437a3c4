#pragma once

#include "relunet/core.hpp"

namespace relunet {

/// Certified sup-error bound c1 * |mesh| with c1 = L^2 |f'''| + (L/2) |f''|.
struct ErrorBound {
    double c1 = 0.0;
    double mesh_norm = 0.0;
    double bound = 0.0;
    bool estimated_norms = false;
};

struct BuildOptions {
    /// Drop units with |b| < 1e-15. Off by default so unit counts are J + 1.
    bool prune = false;
};

/// Forward construction from f(0), f'(0) and f'' sampled at left endpoints:
///
///   F(x) = f(0) + f'(0) relu(x) + sum_j f''(p_j)(p_{j+1} - p_j) relu(x - p_j)
///
/// Output has J + 1 units, the slope unit first.
Network build_network(const TargetFunction& f, const Division& d, BuildOptions opts = {});

/// Bidirectional construction splitting f'' into lambda f'' carried by
/// forward units relu(x - p_j) and (1 - lambda) f'' carried by backward units
/// relu(p_{j+1} - x). The affine part is fixed so that the continuum form is
/// exact; the integral of f''(s) s ds is taken by the trapezoid rule on d.
///
/// Unit layout: slope unit, then J forward units (omitted when lambda = 0),
/// then J backward units (omitted when lambda = 1). With lambda = 1 the
/// result equals build_network(f, d) unit for unit.
Network build_bidirectional(const TargetFunction& f, const Division& d, double lambda,
                            BuildOptions opts = {});

ErrorBound error_bound(const TargetFunction& f, const Division& d);

}  // namespace relunet
