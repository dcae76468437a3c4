#include "relunet/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <thread>

#include "relunet/verifier.hpp"

namespace relunet {

namespace {

// Uniform double in [0, 1) from the top 53 bits; independent of the
// standard library's distribution implementations.
double unit_uniform(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

double uniform(std::mt19937_64& gen, double lo, double hi) {
    return lo + (hi - lo) * unit_uniform(gen);
}

void shuffle(std::vector<std::size_t>& idx, std::mt19937_64& gen) {
    for (std::size_t i = idx.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(gen() % i);
        std::swap(idx[i - 1], idx[j]);
    }
}

// Flat-parameter kernel shared by loss_and_gradient and train. Accumulates
// the gradient of sum_i scale * r_i^2 into grad and returns sum_i r_i^2.
// scale is 1/n for the batch MSE.
struct Kernel {
    std::size_t m;
    std::size_t units;
    std::vector<double> z;

    Kernel(std::size_t input_dim, std::size_t unit_count) : m(input_dim), units(unit_count), z(unit_count) {}

    template <class GetSample>
    double accumulate(std::span<const double> p, std::size_t begin, std::size_t end, GetSample get,
                      double scale, std::span<double> grad) {
        const std::size_t stride = m + 2;
        const double bias = p[units * stride];
        double sq = 0.0;
        for (std::size_t s = begin; s < end; ++s) {
            const Sample& smp = get(s);
            const double* x = smp.x.data();
            double out = 0.0;
            for (std::size_t j = 0; j < units; ++j) {
                const double* u = p.data() + j * stride;
                double pre = -u[m];
                for (std::size_t i = 0; i < m; ++i) pre += u[i] * x[i];
                z[j] = pre;
                if (pre > 0.0) out += u[m + 1] * pre;
            }
            out += bias;
            const double r = out - smp.y;
            sq += r * r;
            const double g = 2.0 * r * scale;
            for (std::size_t j = 0; j < units; ++j) {
                if (!(z[j] > 0.0)) continue;
                const double* u = p.data() + j * stride;
                double* gu = grad.data() + j * stride;
                const double gb = g * u[m + 1];
                for (std::size_t i = 0; i < m; ++i) gu[i] += gb * x[i];
                gu[m] -= gb;
                gu[m + 1] += g * z[j];
            }
            grad[units * stride] += g;
        }
        return sq;
    }
};

double batch_gradient(std::span<const double> p, const std::vector<Sample>& pairs, std::span<const std::size_t> idx,
                      std::size_t threads, std::vector<Kernel>& kernels,
                      std::vector<std::vector<double>>& partial, std::vector<double>& grad) {
    const std::size_t n = idx.size();
    const double scale = 1.0 / static_cast<double>(n);
    auto get = [&](std::size_t s) -> const Sample& { return pairs[idx[s]]; };
    std::fill(grad.begin(), grad.end(), 0.0);
    const std::size_t T = std::min(threads, n);
    if (T <= 1) return kernels[0].accumulate(p, 0, n, get, scale, grad) * scale;

    std::vector<double> sq(T, 0.0);
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < T; ++t) {
        std::fill(partial[t].begin(), partial[t].end(), 0.0);
        const std::size_t b = n * t / T, e = n * (t + 1) / T;
        pool.emplace_back([&, t, b, e] { sq[t] = kernels[t].accumulate(p, b, e, get, scale, partial[t]); });
    }
    for (auto& th : pool) th.join();
    double total = 0.0;
    for (std::size_t t = 0; t < T; ++t) {
        total += sq[t];
        for (std::size_t k = 0; k < grad.size(); ++k) grad[k] += partial[t][k];
    }
    return total * scale;
}

}  // namespace

Dataset sample_dataset(const TargetSpec& target, std::size_t n, std::uint64_t seed) {
    if (n == 0) throw std::invalid_argument("dataset size must be positive");
    const TargetFunction f = make_target(target);
    Dataset d;
    d.input_dim = f.input_dim;
    d.seed = seed;
    d.source = target;
    d.pairs.reserve(n);
    std::mt19937_64 gen(seed);
    for (std::size_t i = 0; i < n; ++i) {
        Sample s;
        s.x.resize(f.input_dim);
        for (auto& v : s.x) v = f.domain_length * unit_uniform(gen);
        s.y = f(s.x);
        d.pairs.push_back(std::move(s));
    }
    return d;
}

void TrainConfig::validate() const {
    if (units == 0 || epochs == 0 || batch_size == 0 || threads == 0) {
        throw std::invalid_argument("units, epochs, batch_size and threads must be positive");
    }
    if (!(learning_rate > 0.0)) throw std::invalid_argument("learning_rate must be positive");
    if (optimizer == Optimizer::adam) {
        if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0) || !(eps > 0.0)) {
            throw std::invalid_argument("adam needs betas in [0, 1) and eps > 0");
        }
    }
    if (init_scheme != "domain" && init_scheme != "uniform") {
        throw std::invalid_argument("unknown init scheme '" + init_scheme + "'");
    }
}

std::string to_string(Optimizer o) { return o == Optimizer::adam ? "adam" : "sgd"; }

Optimizer parse_optimizer(const std::string& s) {
    if (s == "adam") return Optimizer::adam;
    if (s == "sgd") return Optimizer::sgd;
    throw std::invalid_argument("unknown optimizer '" + s + "'");
}

std::vector<double> pack_parameters(const Network& net) {
    std::vector<double> p;
    p.reserve(net.parameter_count());
    for (const auto& u : net.units()) {
        p.insert(p.end(), u.weights_in.begin(), u.weights_in.end());
        p.push_back(u.bias);
        p.push_back(u.weight_out);
    }
    p.push_back(net.output_bias());
    return p;
}

void unpack_parameters(std::span<const double> params, Network& net) {
    if (params.size() != net.parameter_count()) {
        throw DimensionError("parameter vector length does not match the network");
    }
    const std::size_t m = net.input_dim();
    std::vector<Unit> units;
    units.reserve(net.size());
    for (std::size_t j = 0; j < net.size(); ++j) {
        const double* u = params.data() + j * (m + 2);
        units.push_back(Unit{{u, u + m}, u[m], u[m + 1]});
    }
    net = Network(m, std::move(units), params.back());
}

LossGradient loss_and_gradient(const Network& net, std::span<const Sample> batch) {
    if (batch.empty()) throw std::invalid_argument("batch must be nonempty");
    for (const auto& s : batch) {
        if (s.x.size() != net.input_dim()) throw DimensionError("sample dimension does not match network");
    }
    const auto p = pack_parameters(net);
    LossGradient out;
    out.grad.assign(p.size(), 0.0);
    Kernel k(net.input_dim(), net.size());
    const double scale = 1.0 / static_cast<double>(batch.size());
    const double sq = k.accumulate(
        p, 0, batch.size(), [&](std::size_t s) -> const Sample& { return batch[s]; }, scale, out.grad);
    out.mse = sq * scale;
    return out;
}

Network initial_network(std::size_t input_dim, double length, const TrainConfig& cfg) {
    std::mt19937_64 gen(cfg.seed);
    const double scale = 1.0 / std::sqrt(static_cast<double>(cfg.units));
    Network net(input_dim, 0.0);
    net.mutable_units().reserve(cfg.units);
    for (std::size_t j = 0; j < cfg.units; ++j) {
        Unit u;
        u.weights_in.resize(input_dim);
        if (cfg.init_scheme == "uniform") {
            for (auto& a : u.weights_in) a = uniform(gen, -1.0, 1.0);
            u.bias = uniform(gen, -1.0, 1.0);
        } else {
            // Random sign pattern; the kink hyperplane <a, x> = xi passes through
            // a uniform point of [0, L]^m, so in 1-D xi/a is uniform on [0, L].
            double xi = 0.0;
            for (auto& a : u.weights_in) {
                a = (gen() >> 63) ? 1.0 : -1.0;
                xi += a * length * unit_uniform(gen);
            }
            u.bias = xi;
        }
        u.weight_out = uniform(gen, -scale, scale);
        net.add_unit(std::move(u));
    }
    return net;
}

TrainReport train(const Dataset& data, const TrainConfig& cfg) {
    cfg.validate();
    if (data.pairs.empty()) throw std::invalid_argument("dataset is empty");
    const auto start = std::chrono::steady_clock::now();

    const bool has_source = !data.source.name.empty();
    const TargetFunction target = has_source ? make_target(data.source) : TargetFunction{};
    if (has_source && target.input_dim != data.input_dim) {
        throw DimensionError("dataset dimension does not match its source target");
    }
    const double length = has_source ? target.domain_length : 1.0;
    const std::size_t m = data.input_dim;

    TrainReport rep;
    rep.network = initial_network(m, length, cfg);
    std::vector<double> p = pack_parameters(rep.network);
    std::vector<double> grad(p.size(), 0.0), m1(p.size(), 0.0), m2(p.size(), 0.0);

    const std::size_t T = cfg.threads;
    std::vector<Kernel> kernels(T, Kernel(m, cfg.units));
    std::vector<std::vector<double>> partial(T > 1 ? T : 0, std::vector<double>(p.size()));

    std::mt19937_64 gen(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
    std::vector<std::size_t> order(data.pairs.size());
    std::iota(order.begin(), order.end(), std::size_t{0});

    const std::size_t N = order.size();
    double pow1 = 1.0, pow2 = 1.0;
    for (std::size_t epoch = 0; epoch < cfg.epochs && !rep.failed; ++epoch) {
        shuffle(order, gen);
        double epoch_sq = 0.0;
        for (std::size_t b = 0; b < N; b += cfg.batch_size) {
            const std::size_t e = std::min(N, b + cfg.batch_size);
            const std::span<const std::size_t> idx(order.data() + b, e - b);
            const double mse = batch_gradient(p, data.pairs, idx, T, kernels, partial, grad);
            if (!std::isfinite(mse)) {
                rep.failed = true;
                rep.failure = "loss became non-finite in epoch " + std::to_string(epoch + 1);
                break;
            }
            epoch_sq += mse * static_cast<double>(e - b);
            if (cfg.optimizer == Optimizer::sgd) {
                for (std::size_t k = 0; k < p.size(); ++k) p[k] -= cfg.learning_rate * grad[k];
            } else {
                pow1 *= cfg.beta1;
                pow2 *= cfg.beta2;
                const double c1 = 1.0 / (1.0 - pow1);
                const double c2 = 1.0 / (1.0 - pow2);
                for (std::size_t k = 0; k < p.size(); ++k) {
                    m1[k] = cfg.beta1 * m1[k] + (1.0 - cfg.beta1) * grad[k];
                    m2[k] = cfg.beta2 * m2[k] + (1.0 - cfg.beta2) * grad[k] * grad[k];
                    p[k] -= cfg.learning_rate * (m1[k] * c1) / (std::sqrt(m2[k] * c2) + cfg.eps);
                }
            }
        }
        if (!rep.failed) rep.loss_curve.push_back(epoch_sq / static_cast<double>(N));
    }

    for (double v : p) {
        if (!std::isfinite(v) && !rep.failed) {
            rep.failed = true;
            rep.failure = "parameters became non-finite";
        }
    }
    if (!rep.failed) {
        unpack_parameters(p, rep.network);
        if (has_source) {
            const std::size_t grid = cfg.eval_grid_size ? cfg.eval_grid_size : (m == 1 ? 4096 : 256);
            const auto err = sup_error(target, rep.network, grid, cfg.threads);
            rep.max_error = err.max_error;
            rep.mse = err.mse;
        } else {
            double sq = 0.0, mx = 0.0;
            for (const auto& s : data.pairs) {
                const double r = evaluate(rep.network, s.x) - s.y;
                sq += r * r;
                mx = std::max(mx, std::abs(r));
            }
            rep.max_error = mx;
            rep.mse = sq / static_cast<double>(N);
        }
    } else {
        rep.max_error = std::numeric_limits<double>::quiet_NaN();
        rep.mse = std::numeric_limits<double>::quiet_NaN();
    }
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

}  // namespace relunet
