#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace relunet {

/// Raised when an input's dimension disagrees with the network or target.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when an operation needs derivative evaluators the target lacks.
class UnsupportedTarget : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised for unknown registry names.
class LookupError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

inline double relu(double x) { return x > 0.0 ? x : 0.0; }

/// One hidden unit computing weight_out * relu(<weights_in, x> - bias).
struct Unit {
    std::vector<double> weights_in;
    double bias = 0.0;
    double weight_out = 0.0;

    bool operator==(const Unit&) const = default;
};

/// One-hidden-layer ReLU network
///
///     F(x) = output_bias + sum_j b_j relu(<a_j, x> - xi_j)
///
/// Unit order is preserved and fixes the summation order of evaluate().
class Network {
public:
    explicit Network(std::size_t input_dim = 1, double output_bias = 0.0);
    Network(std::size_t input_dim, std::vector<Unit> units, double output_bias);

    std::size_t input_dim() const { return input_dim_; }
    double output_bias() const { return output_bias_; }
    void set_output_bias(double v) { output_bias_ = v; }

    const std::vector<Unit>& units() const { return units_; }
    std::vector<Unit>& mutable_units() { return units_; }
    std::size_t size() const { return units_.size(); }

    /// Appends a unit; throws DimensionError on weight length mismatch and
    /// std::invalid_argument on non-finite parameters.
    void add_unit(Unit u);
    /// Convenience for 1-D units.
    void add_unit(double a, double xi, double b) { add_unit(Unit{{a}, xi, b}); }

    /// Total number of trainable scalars: J*(m+2) + 1.
    std::size_t parameter_count() const { return units_.size() * (input_dim_ + 2) + 1; }

    bool operator==(const Network&) const = default;

private:
    std::size_t input_dim_;
    std::vector<Unit> units_;
    double output_bias_;
};

double evaluate(const Network& net, std::span<const double> x);
double evaluate(const Network& net, double x);

/// Pre-activation <a, x> - xi for a unit.
double pre_activation(const Unit& u, std::span<const double> x);

/// Sorted breakpoint mesh 0 = p_0 < p_1 < ... < p_J = L.
class Division {
public:
    /// Validates strict monotonicity and the endpoints 0 and L.
    explicit Division(std::vector<double> points);

    const std::vector<double>& points() const { return points_; }
    double mesh_norm() const { return mesh_norm_; }
    double length() const { return points_.back(); }
    /// Number of intervals J.
    std::size_t intervals() const { return points_.size() - 1; }

private:
    std::vector<double> points_;
    double mesh_norm_;
};

Division uniform_division(std::size_t intervals, double length);

using ScalarFn = std::function<double(double)>;
using VectorFn = std::function<double(std::span<const double>)>;

/// A target f on [0, L]^m with optional analytic derivatives (m = 1 only)
/// and sup-norm bounds of f'' and f''' on [0, L].
struct TargetFunction {
    std::string name;
    std::map<std::string, double> params;
    std::vector<double> coeffs;

    std::size_t input_dim = 1;
    double domain_length = 1.0;
    VectorFn f;
    ScalarFn f1;
    ScalarFn f2;
    std::optional<double> sup_f2;
    std::optional<double> sup_f3;
    bool norms_estimated = false;

    double operator()(double x) const { return f(std::span<const double>(&x, 1)); }
    double operator()(std::span<const double> x) const { return f(x); }
    bool has_derivatives() const { return input_dim == 1 && f1 && f2; }
};

/// Fills missing sup_f2 / sup_f3 by sampling f2 on a dense grid and flags
/// the target as estimated. f''' is taken from centered differences of f2.
void estimate_sup_norms(TargetFunction& target, std::size_t grid_points = 4096);

/// Wraps a 1-D or m-D network as a target on [0, L]^m (no derivatives).
TargetFunction target_from_network(const Network& net, double length);

}  // namespace relunet
