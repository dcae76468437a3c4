#include "relunet/constructor.hpp"

#include <cmath>
#include <string>

namespace relunet {

namespace {

void require_constructible(const TargetFunction& f, const Division& d) {
    if (f.input_dim != 1) throw DimensionError("constructor needs a 1-D target");
    if (!f.has_derivatives()) {
        throw UnsupportedTarget("target '" + f.name + "' has no analytic f' and f''");
    }
    if (std::abs(d.length() - f.domain_length) > 1e-12 * f.domain_length) {
        throw std::invalid_argument("division does not span [0, L] of the target");
    }
}

void push(Network& net, double a, double xi, double b, const BuildOptions& opts) {
    if (opts.prune && std::abs(b) < 1e-15) return;
    net.add_unit(a, xi, b);
}

}  // namespace

Network build_network(const TargetFunction& f, const Division& d, BuildOptions opts) {
    return build_bidirectional(f, d, 1.0, opts);
}

Network build_bidirectional(const TargetFunction& f, const Division& d, double lambda,
                            BuildOptions opts) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw std::invalid_argument("lambda must lie in [0, 1]");
    require_constructible(f, d);

    const auto& p = d.points();
    const std::size_t J = d.intervals();
    const double L = d.length();
    const double mu = 1.0 - lambda;

    double slope = f.f1(0.0);
    double bias = f(0.0);
    if (lambda < 1.0) {
        // Trapezoid rule for Q = int_0^L f''(s) s ds.
        double Q = 0.0;
        for (std::size_t j = 0; j < J; ++j) {
            Q += 0.5 * (f.f2(p[j]) * p[j] + f.f2(p[j + 1]) * p[j + 1]) * (p[j + 1] - p[j]);
        }
        slope += mu * (f.f1(L) - slope);
        bias -= mu * Q;
    }

    Network net(1, bias);
    net.mutable_units().reserve(1 + (lambda > 0.0 ? J : 0) + (lambda < 1.0 ? J : 0));
    push(net, 1.0, 0.0, slope, opts);
    if (lambda > 0.0) {
        for (std::size_t j = 0; j < J; ++j) {
            const double gap = p[j + 1] - p[j];
            push(net, 1.0, p[j], lambda * f.f2(p[j]) * gap, opts);
        }
    }
    if (lambda < 1.0) {
        for (std::size_t j = 0; j < J; ++j) {
            const double gap = p[j + 1] - p[j];
            // relu(-x + p_{j+1}) = relu(p_{j+1} - x)
            push(net, -1.0, -p[j + 1], mu * f.f2(p[j + 1]) * gap, opts);
        }
    }
    return net;
}

ErrorBound error_bound(const TargetFunction& f, const Division& d) {
    if (!f.sup_f2 || !f.sup_f3) {
        throw UnsupportedTarget("target '" + f.name + "' has no sup norms; estimate them first");
    }
    const double L = f.domain_length;
    ErrorBound eb;
    eb.c1 = L * L * *f.sup_f3 + (L / 2) * *f.sup_f2;
    eb.mesh_norm = d.mesh_norm();
    eb.bound = eb.c1 * eb.mesh_norm;
    eb.estimated_norms = f.norms_estimated;
    return eb;
}

}  // namespace relunet
