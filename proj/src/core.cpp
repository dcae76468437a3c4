#include "relunet/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace relunet {

namespace {

void check_finite(double v, const char* what) {
    if (!std::isfinite(v)) {
        throw std::invalid_argument(std::string("non-finite ") + what);
    }
}

}  // namespace

Network::Network(std::size_t input_dim, double output_bias)
    : input_dim_(input_dim), output_bias_(output_bias) {
    if (input_dim == 0) throw std::invalid_argument("input_dim must be positive");
    check_finite(output_bias, "output bias");
}

Network::Network(std::size_t input_dim, std::vector<Unit> units, double output_bias)
    : Network(input_dim, output_bias) {
    units_.reserve(units.size());
    for (auto& u : units) add_unit(std::move(u));
}

void Network::add_unit(Unit u) {
    if (u.weights_in.size() != input_dim_) {
        throw DimensionError("unit has " + std::to_string(u.weights_in.size()) +
                             " input weights, network expects " + std::to_string(input_dim_));
    }
    for (double a : u.weights_in) check_finite(a, "input weight");
    check_finite(u.bias, "unit bias");
    check_finite(u.weight_out, "output weight");
    units_.push_back(std::move(u));
}

double pre_activation(const Unit& u, std::span<const double> x) {
    double z = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) z += u.weights_in[i] * x[i];
    return z - u.bias;
}

double evaluate(const Network& net, std::span<const double> x) {
    if (x.size() != net.input_dim()) {
        throw DimensionError("input has dimension " + std::to_string(x.size()) +
                             ", network expects " + std::to_string(net.input_dim()));
    }
    double acc = 0.0;
    for (const auto& u : net.units()) acc += u.weight_out * relu(pre_activation(u, x));
    return acc + net.output_bias();
}

double evaluate(const Network& net, double x) {
    return evaluate(net, std::span<const double>(&x, 1));
}

Division::Division(std::vector<double> points) : points_(std::move(points)), mesh_norm_(0.0) {
    if (points_.size() < 2) throw std::invalid_argument("division needs at least two points");
    if (points_.front() != 0.0) throw std::invalid_argument("division must start at 0");
    for (std::size_t j = 0; j + 1 < points_.size(); ++j) {
        const double gap = points_[j + 1] - points_[j];
        if (!(gap > 0.0) || !std::isfinite(gap)) {
            throw std::invalid_argument("division points must be finite and strictly increasing");
        }
        mesh_norm_ = std::max(mesh_norm_, gap);
    }
}

Division uniform_division(std::size_t intervals, double length) {
    if (intervals == 0) throw std::invalid_argument("J must be at least 1");
    if (!(length > 0.0) || !std::isfinite(length)) throw std::invalid_argument("L must be positive");
    std::vector<double> pts(intervals + 1);
    const double J = static_cast<double>(intervals);
    for (std::size_t j = 0; j < intervals; ++j) pts[j] = length * static_cast<double>(j) / J;
    pts[intervals] = length;
    return Division(std::move(pts));
}

void estimate_sup_norms(TargetFunction& target, std::size_t grid_points) {
    if (target.sup_f2 && target.sup_f3) return;
    if (target.input_dim != 1 || !target.f2) {
        throw UnsupportedTarget("estimating sup norms needs a 1-D target with f''");
    }
    if (grid_points < 2) throw std::invalid_argument("grid_points must be at least 2");
    const double L = target.domain_length;
    const double step = L / static_cast<double>(grid_points - 1);
    const double fd = 1e-4 * L;
    double s2 = 0.0;
    double s3 = 0.0;
    for (std::size_t i = 0; i < grid_points; ++i) {
        const double x = step * static_cast<double>(i);
        s2 = std::max(s2, std::abs(target.f2(x)));
        const double lo = std::max(0.0, x - fd);
        const double hi = std::min(L, x + fd);
        s3 = std::max(s3, std::abs((target.f2(hi) - target.f2(lo)) / (hi - lo)));
    }
    if (!target.sup_f2) target.sup_f2 = s2;
    if (!target.sup_f3) target.sup_f3 = s3;
    target.norms_estimated = true;
}

TargetFunction target_from_network(const Network& net, double length) {
    TargetFunction t;
    t.name = "network";
    t.input_dim = net.input_dim();
    t.domain_length = length;
    t.f = [net](std::span<const double> x) { return evaluate(net, x); };
    return t;
}

}  // namespace relunet
