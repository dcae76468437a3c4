#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "relunet/core.hpp"
#include "relunet/targets.hpp"

namespace relunet {

struct Sample {
    std::vector<double> x;
    double y = 0.0;

    bool operator==(const Sample&) const = default;
};

struct Dataset {
    std::size_t input_dim = 1;
    std::vector<Sample> pairs;
    std::uint64_t seed = 0;
    TargetSpec source;
};

/// Draws n points uniformly from [0, L]^m with a seeded mt19937_64 and labels
/// them with the exact target value. Throws LookupError on unknown targets.
Dataset sample_dataset(const TargetSpec& target, std::size_t n, std::uint64_t seed);

enum class Optimizer { sgd, adam };

struct TrainConfig {
    std::size_t units = 100;
    std::size_t epochs = 100;
    std::size_t batch_size = 64;
    Optimizer optimizer = Optimizer::adam;
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    /// "domain" places initial kinks inside [0, L]; "uniform" draws a and xi
    /// from U(-1, 1) for comparison.
    std::string init_scheme = "domain";
    std::uint64_t seed = 0;
    /// Points per axis of the evaluation grid; 0 picks 4096 (1-D) or 256 (2-D).
    std::size_t eval_grid_size = 0;
    /// Worker threads for batch gradients. Results are bitwise reproducible
    /// for a fixed thread count; 1 is the reference mode.
    std::size_t threads = 1;

    /// Throws std::invalid_argument when counts are zero or rates non-positive.
    void validate() const;
};

std::string to_string(Optimizer o);
Optimizer parse_optimizer(const std::string& s);

struct TrainReport {
    Network network;
    std::vector<double> loss_curve;  ///< mean minibatch MSE per epoch
    double max_error = 0.0;
    double mse = 0.0;
    double seconds = 0.0;
    bool failed = false;
    std::string failure;
};

/// Flat parameter layout: per unit [a_0 .. a_{m-1}, xi, b], then output_bias.
std::vector<double> pack_parameters(const Network& net);
void unpack_parameters(std::span<const double> params, Network& net);

struct LossGradient {
    double mse = 0.0;
    std::vector<double> grad;  ///< same layout as pack_parameters
};

/// Mean squared error over the batch and its exact gradient. relu'(0) = 0.
LossGradient loss_and_gradient(const Network& net, std::span<const Sample> batch);

/// Initial network for cfg.init_scheme on [0, L]^m.
Network initial_network(std::size_t input_dim, double length, const TrainConfig& cfg);

/// Mini-batch training from initial_network(). A non-finite loss stops the
/// run and sets failed; it never throws for divergence.
TrainReport train(const Dataset& data, const TrainConfig& cfg);

}  // namespace relunet
