#include "relunet/canonical.hpp"

#include <cmath>

namespace relunet {

CanonicalNetwork fold_to_canonical(const Network& net, double length) {
    if (net.input_dim() != 1) throw DimensionError("canonical form is defined for 1-D networks only");
    if (!(length > 0.0)) throw std::invalid_argument("L must be positive");

    CanonicalNetwork c;
    c.length = length;
    c.const_term = net.output_bias();
    for (const auto& u : net.units()) {
        const double a = u.weights_in[0];
        const double b = u.weight_out;
        if (std::abs(a) <= kDegenerateWeight) {
            c.const_term += b * relu(-u.bias);
            continue;
        }
        const double t = u.bias / a;
        const double mass = b * std::abs(a);
        const bool in_range = t >= 0.0 && t <= length;
        if (a > 0.0) {
            if (in_range) {
                c.forward.push_back({t, mass});
            } else if (t < 0.0) {
                // relu(x - t) = -t + relu(x) for x >= 0
                c.const_term += mass * (-t);
                c.slope_pos += mass;
            }
            // t > L: identically zero on [0, L]
        } else {
            if (in_range) {
                c.backward.push_back({t, mass});
            } else if (t > length) {
                // relu(t - x) = (t - L) + relu(L - x) for x <= L
                c.const_term += mass * (t - length);
                c.slope_neg += mass;
            }
        }
    }
    return c;
}

double evaluate_canonical(const CanonicalNetwork& c, double x) {
    double acc = c.slope_pos * relu(x) + c.slope_neg * relu(c.length - x);
    for (const auto& bp : c.forward) acc += bp.coeff * relu(x - bp.t);
    for (const auto& bp : c.backward) acc += bp.coeff * relu(bp.t - x);
    return acc + c.const_term;
}

Network to_network(const CanonicalNetwork& c) {
    Network net(1, c.const_term);
    if (c.slope_pos != 0.0) net.add_unit(1.0, 0.0, c.slope_pos);
    if (c.slope_neg != 0.0) net.add_unit(-1.0, -c.length, c.slope_neg);
    for (const auto& bp : c.forward) net.add_unit(1.0, bp.t, bp.coeff);
    for (const auto& bp : c.backward) net.add_unit(-1.0, -bp.t, bp.coeff);
    return net;
}

BreakpointRatios breakpoint_ratios(const Network& net) {
    if (net.input_dim() != 1) throw DimensionError("breakpoint ratios are defined for 1-D networks only");
    BreakpointRatios out;
    for (const auto& u : net.units()) {
        const double a = u.weights_in[0];
        if (std::abs(a) <= kDegenerateWeight) {
            ++out.degenerate_count;
            continue;
        }
        out.entries.push_back({u.bias / a, a > 0.0 ? 1 : -1, u.weight_out * std::abs(a)});
    }
    return out;
}

}  // namespace relunet
