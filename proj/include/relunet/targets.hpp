#pragma once

#include <map>
#include <string>
#include <vector>

#include "relunet/core.hpp"

namespace relunet {

/// Registry key plus parameters. Unset parameters take registry defaults.
///
///   sin    f(x) = sin(M x)                      params: M (3), L (2*pi)
///   poly   f(x) = sum_i c_i x^i                 coeffs;     L (1)
///   gauss2 two isotropic Gaussian bumps in 2-D  params: a (5), x1 (3), y1 (5),
///                                                       x2 (7), y2 (5), L (10)
///   xy     f(x, y) = x y                        params: L (1)
struct TargetSpec {
    std::string name;
    std::map<std::string, double> params;
    std::vector<double> coeffs;
};

/// Builds a registry target. 1-D entries carry analytic f', f'' and the
/// exact sup norms of f'' and f''' on [0, L]. Throws LookupError for
/// unknown names and std::invalid_argument for bad parameters.
TargetFunction make_target(const TargetSpec& spec);

std::vector<std::string> registry_names();

/// Exact max |p(x)| on [0, L] for a polynomial given by ascending coefficients.
double polynomial_sup_norm(const std::vector<double>& coeffs, double length);

}  // namespace relunet
