#include "relunet/targets.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Core>
#include <unsupported/Eigen/Polynomials>

namespace relunet {

namespace {

double param(const TargetSpec& spec, const std::string& key, double fallback) {
    auto it = spec.params.find(key);
    return it == spec.params.end() ? fallback : it->second;
}

double require_length(double L) {
    if (!(L > 0.0) || !std::isfinite(L)) throw std::invalid_argument("L must be positive");
    return L;
}

// Ascending coefficients of p'.
std::vector<double> derivative(const std::vector<double>& c) {
    std::vector<double> d;
    for (std::size_t i = 1; i < c.size(); ++i) d.push_back(static_cast<double>(i) * c[i]);
    return d;
}

double horner(const std::vector<double>& c, double x) {
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
    return acc;
}

// max |sin(w x)| over x in [0, L].
double sup_abs_sin(double w, double L) {
    const double span = std::abs(w) * L;
    if (span >= std::numbers::pi / 2) return 1.0;
    return std::sin(span);
}

TargetFunction make_sin(const TargetSpec& spec) {
    const double M = param(spec, "M", 3.0);
    const double L = require_length(param(spec, "L", 2 * std::numbers::pi));
    if (!std::isfinite(M)) throw std::invalid_argument("M must be finite");
    TargetFunction t;
    t.name = "sin";
    t.params = {{"M", M}, {"L", L}};
    t.domain_length = L;
    t.f = [M](std::span<const double> x) { return std::sin(M * x[0]); };
    t.f1 = [M](double x) { return M * std::cos(M * x); };
    t.f2 = [M](double x) { return -M * M * std::sin(M * x); };
    const double M2 = M * M;
    t.sup_f2 = M == 0.0 ? 0.0 : M2 * sup_abs_sin(M, L);
    t.sup_f3 = std::abs(M2 * M);
    return t;
}

TargetFunction make_poly(const TargetSpec& spec) {
    const double L = require_length(param(spec, "L", 1.0));
    std::vector<double> c = spec.coeffs.empty() ? std::vector<double>{0.0} : spec.coeffs;
    for (double v : c) {
        if (!std::isfinite(v)) throw std::invalid_argument("polynomial coefficients must be finite");
    }
    const auto c1 = derivative(c);
    const auto c2 = derivative(c1);
    const auto c3 = derivative(c2);
    TargetFunction t;
    t.name = "poly";
    t.params = {{"L", L}};
    t.coeffs = c;
    t.domain_length = L;
    t.f = [c](std::span<const double> x) { return horner(c, x[0]); };
    t.f1 = [c1](double x) { return horner(c1, x); };
    t.f2 = [c2](double x) { return horner(c2, x); };
    t.sup_f2 = polynomial_sup_norm(c2, L);
    t.sup_f3 = polynomial_sup_norm(c3, L);
    return t;
}

TargetFunction make_gauss2(const TargetSpec& spec) {
    const double a = param(spec, "a", 5.0);
    const double x1 = param(spec, "x1", 3.0), y1 = param(spec, "y1", 5.0);
    const double x2 = param(spec, "x2", 7.0), y2 = param(spec, "y2", 5.0);
    const double L = require_length(param(spec, "L", 10.0));
    TargetFunction t;
    t.name = "gauss2";
    t.params = {{"a", a}, {"x1", x1}, {"y1", y1}, {"x2", x2}, {"y2", y2}, {"L", L}};
    t.input_dim = 2;
    t.domain_length = L;
    t.f = [=](std::span<const double> p) {
        const double dx1 = p[0] - x1, dy1 = p[1] - y1;
        const double dx2 = p[0] - x2, dy2 = p[1] - y2;
        return std::exp(-a * dx1 * dx1 - a * dy1 * dy1) + std::exp(-a * dx2 * dx2 - a * dy2 * dy2);
    };
    return t;
}

TargetFunction make_xy(const TargetSpec& spec) {
    const double L = require_length(param(spec, "L", 1.0));
    TargetFunction t;
    t.name = "xy";
    t.params = {{"L", L}};
    t.input_dim = 2;
    t.domain_length = L;
    t.f = [](std::span<const double> p) { return p[0] * p[1]; };
    return t;
}

}  // namespace

double polynomial_sup_norm(const std::vector<double>& coeffs, double length) {
    std::vector<double> c = coeffs;
    while (!c.empty() && c.back() == 0.0) c.pop_back();
    if (c.empty()) return 0.0;
    double best = std::max(std::abs(horner(c, 0.0)), std::abs(horner(c, length)));
    const auto d = [&] {
        auto v = derivative(c);
        while (!v.empty() && v.back() == 0.0) v.pop_back();
        return v;
    }();
    if (d.size() >= 2) {
        Eigen::VectorXd poly(static_cast<Eigen::Index>(d.size()));
        for (std::size_t i = 0; i < d.size(); ++i) poly[static_cast<Eigen::Index>(i)] = d[i];
        Eigen::PolynomialSolver<double, Eigen::Dynamic> solver(poly);
        for (Eigen::Index i = 0; i < solver.roots().size(); ++i) {
            const auto r = solver.roots()[i];
            if (std::abs(r.imag()) > 1e-8 * (1.0 + std::abs(r.real()))) continue;
            const double x = std::clamp(r.real(), 0.0, length);
            best = std::max(best, std::abs(horner(c, x)));
        }
    }
    return best;
}

std::vector<std::string> registry_names() { return {"sin", "poly", "gauss2", "xy"}; }

TargetFunction make_target(const TargetSpec& spec) {
    if (spec.name == "sin") return make_sin(spec);
    if (spec.name == "poly") return make_poly(spec);
    if (spec.name == "gauss2") return make_gauss2(spec);
    if (spec.name == "xy") return make_xy(spec);
    throw LookupError("unknown target '" + spec.name + "'");
}

}  // namespace relunet
