#include "relunet/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "relunet/constructor.hpp"

namespace relunet {

const char* const kHardnessNote =
    "f(x,y) = xy admits no exact one-hidden-layer continuum ReLU representation; "
    "finite networks only approximate it, so this table reports the error floor "
    "against width without a pass/fail threshold.";

double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 8) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.subspan(0, half)) + pairwise_sum(v.subspan(half));
}

GridError sup_error(const TargetFunction& f, const Network& net, std::size_t grid_size, std::size_t threads) {
    if (grid_size < 2) throw std::invalid_argument("grid_size must be at least 2");
    if (f.input_dim != net.input_dim()) throw DimensionError("target and network dimensions differ");
    const std::size_t m = f.input_dim;
    if (m > 2) throw std::invalid_argument("grids are supported for m <= 2");

    const double L = f.domain_length;
    std::vector<double> axis(grid_size);
    for (std::size_t i = 0; i + 1 < grid_size; ++i) {
        axis[i] = L * static_cast<double>(i) / static_cast<double>(grid_size - 1);
    }
    axis.back() = L;

    const std::size_t total = m == 1 ? grid_size : grid_size * grid_size;
    auto point = [&](std::size_t idx, std::vector<double>& x) {
        if (m == 1) {
            x[0] = axis[idx];
        } else {
            x[0] = axis[idx / grid_size];
            x[1] = axis[idx % grid_size];
        }
    };

    std::vector<double> sq(total);
    struct Best {
        double err = -1.0;
        std::size_t idx = 0;
    };
    // NaN residuals win so that a broken network cannot report a small error.
    auto beats = [](double a, double b) { return !std::isnan(b) && (std::isnan(a) || a > b); };
    auto work = [&](std::size_t b, std::size_t e) {
        Best best;
        std::vector<double> x(m);
        for (std::size_t i = b; i < e; ++i) {
            point(i, x);
            const double r = f(x) - evaluate(net, x);
            sq[i] = r * r;
            const double ar = std::abs(r);
            if (beats(ar, best.err)) best = {ar, i};
        }
        return best;
    };

    const std::size_t T = std::clamp<std::size_t>(threads, 1, total);
    std::vector<Best> bests(T);
    if (T == 1) {
        bests[0] = work(0, total);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < T; ++t) {
            pool.emplace_back([&, t] { bests[t] = work(total * t / T, total * (t + 1) / T); });
        }
        for (auto& th : pool) th.join();
    }
    // Chunks are in index order, so a strict comparison keeps the first argmax.
    Best best = bests[0];
    for (std::size_t t = 1; t < T; ++t) {
        if (beats(bests[t].err, best.err)) best = bests[t];
    }

    GridError out;
    out.max_error = best.err;
    out.argmax.resize(m);
    point(best.idx, out.argmax);
    out.mse = pairwise_sum(sq) / static_cast<double>(total);
    return out;
}

ConvergenceTable convergence_sweep(const TargetFunction& f, std::span<const std::size_t> J_list,
                                   std::size_t grid_size) {
    ConvergenceTable table;
    table.estimated_norms = f.norms_estimated;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t J : J_list) {
        const Division d = uniform_division(J, f.domain_length);
        const Network net = build_network(f, d);
        const ErrorBound eb = error_bound(f, d);
        ConvergenceRow row;
        row.J = J;
        row.mesh_norm = d.mesh_norm();
        row.max_error = sup_error(f, net, grid_size).max_error;
        row.bound = eb.bound;
        if (row.bound > 0.0) {
            row.ratio = row.max_error / row.bound;
        } else {
            row.ratio = row.max_error == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
        }
        row.halving_ratio = nan;
        if (!table.rows.empty() && table.rows.back().J * 2 == J && table.rows.back().max_error > 0.0) {
            row.halving_ratio = row.max_error / table.rows.back().max_error;
        }
        table.rows.push_back(row);
    }
    return table;
}

HardnessTable hardness_sweep(const Dataset& data, std::span<const std::size_t> J_list, const TrainConfig& base) {
    HardnessTable table;
    table.note = kHardnessNote;
    for (std::size_t J : J_list) {
        TrainConfig cfg = base;
        cfg.units = J;
        const TrainReport rep = train(data, cfg);
        table.rows.push_back({J, rep.mse, rep.max_error, rep.seconds, rep.failed});
    }
    return table;
}

}  // namespace relunet
