#include "relunet/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "relunet/canonical.hpp"

namespace relunet {

namespace {

constexpr double kEdgeSnap = 1e-9;

std::size_t bin_index(double t, double h, std::size_t bins) {
    const double u = t / h;
    const double nearest = std::round(u);
    double k = std::abs(u - nearest) <= kEdgeSnap ? nearest : std::floor(u);
    k = std::clamp(k, 0.0, static_cast<double>(bins - 1));
    return static_cast<std::size_t>(k);
}

}  // namespace

BinSpectrum extract_spectrum(const Network& net, double h, double length) {
    if (net.input_dim() != 1) throw DimensionError("spectrum extraction needs a 1-D network");
    if (!(length > 0.0) || !std::isfinite(length)) throw std::invalid_argument("L must be positive");
    if (!(h > 0.0) || h > length) throw std::invalid_argument("bin width h must satisfy 0 < h <= L");
    const double ratio = length / h;
    const double K = std::round(ratio);
    if (std::abs(ratio - K) > 1e-9 * std::max(1.0, K)) {
        throw std::invalid_argument("L / h must be an integer bin count");
    }

    BinSpectrum s;
    s.h = h;
    s.length = length;
    s.bins = static_cast<std::size_t>(K);
    s.b_plus.assign(s.bins, 0.0);
    s.b_minus.assign(s.bins, 0.0);
    s.abs_mass.assign(s.bins, 0.0);

    for (const auto& u : net.units()) {
        const double a = u.weights_in[0];
        if (std::abs(a) <= kDegenerateWeight) {
            ++s.degenerate_count;
            continue;
        }
        const double t = u.bias / a;
        const double mass = u.weight_out * std::abs(a);
        if (!(t >= 0.0 && t <= length)) {
            s.out_of_range_mass += std::abs(mass);
            continue;
        }
        const std::size_t k = bin_index(t, h, s.bins);
        (a > 0.0 ? s.b_plus : s.b_minus)[k] += mass / h;
        s.abs_mass[k] += std::abs(mass);
    }
    return s;
}

Network reconstruct_from_spectrum(const BinSpectrum& s, double output_bias) {
    Network net(1, output_bias);
    for (std::size_t k = 0; k < s.bins; ++k) {
        const double t = static_cast<double>(k) * s.h;
        net.add_unit(1.0, t, s.b_plus[k] * s.h);
        net.add_unit(-1.0, -t, s.b_minus[k] * s.h);
    }
    return net;
}

double pearson_correlation(const std::vector<double>& a, const std::vector<double>& b) {
    const std::size_t n = std::min(a.size(), b.size());
    if (n < 2) return std::numeric_limits<double>::quiet_NaN();
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= static_cast<double>(n);
    mb /= static_cast<double>(n);
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double da = a[i] - ma, db = b[i] - mb;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    if (saa == 0.0 || sbb == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return sab / std::sqrt(saa * sbb);
}

SpectrumComparison compare_spectrum(const BinSpectrum& s, const TargetFunction& f, bool exclude_bin0) {
    if (f.input_dim != 1 || !f.f2) {
        throw UnsupportedTarget("target '" + f.name + "' has no second derivative");
    }
    SpectrumComparison cmp;
    cmp.bin0_excluded = exclude_bin0;
    std::vector<double> measured, theory;
    double sq = 0.0;
    for (std::size_t k = 0; k < s.bins; ++k) {
        SpectrumRow r;
        r.k = k;
        r.t = static_cast<double>(k) * s.h;
        r.b_plus = s.b_plus[k];
        r.b_minus = s.b_minus[k];
        r.sum = r.b_plus + r.b_minus;
        r.f2 = f.f2(r.t);
        r.residual = r.sum - r.f2;
        cmp.rows.push_back(r);
        if (exclude_bin0 && k == 0) continue;
        measured.push_back(r.sum);
        theory.push_back(r.f2);
        sq += r.residual * r.residual;
    }
    cmp.rms_residual = measured.empty() ? 0.0 : std::sqrt(sq / static_cast<double>(measured.size()));
    cmp.correlation = pearson_correlation(measured, theory);
    return cmp;
}

}  // namespace relunet
