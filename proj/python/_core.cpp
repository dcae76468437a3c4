#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "relunet/canonical.hpp"
#include "relunet/constructor.hpp"
#include "relunet/io.hpp"
#include "relunet/spectral.hpp"
#include "relunet/targets.hpp"
#include "relunet/trainer.hpp"
#include "relunet/verifier.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace relunet;

namespace {

// Evaluates at every row of x: shape (n,) for 1-D networks, (n, m) otherwise.
py::array_t<double> evaluate_many(const Network& net, py::array_t<double, py::array::c_style | py::array::forcecast> x) {
    const std::size_t m = net.input_dim();
    const auto buf = x.request();
    std::size_t n = 0;
    if (buf.ndim == 1 && m == 1) {
        n = static_cast<std::size_t>(buf.shape[0]);
    } else if (buf.ndim == 2 && static_cast<std::size_t>(buf.shape[1]) == m) {
        n = static_cast<std::size_t>(buf.shape[0]);
    } else {
        throw DimensionError("input array shape does not match the network's input dimension");
    }
    const auto* p = static_cast<const double*>(buf.ptr);
    py::array_t<double> out(static_cast<py::ssize_t>(n));
    auto o = out.mutable_unchecked<1>();
    for (std::size_t i = 0; i < n; ++i) o(i) = evaluate(net, std::span<const double>(p + i * m, m));
    return out;
}

TargetSpec spec_of(const std::string& name, std::map<std::string, double> params, std::vector<double> coeffs) {
    return {name, std::move(params), std::move(coeffs)};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "One-hidden-layer ReLU networks: construction, training and spectra";

    py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
    py::register_exception<UnsupportedTarget>(m, "UnsupportedTarget", PyExc_RuntimeError);
    py::register_exception<LookupError>(m, "LookupError", PyExc_KeyError);

    py::class_<Unit>(m, "Unit")
        .def(py::init<>())
        .def(py::init([](std::vector<double> a, double xi, double b) { return Unit{std::move(a), xi, b}; }), "a"_a,
             "xi"_a, "b"_a)
        .def_readwrite("a", &Unit::weights_in)
        .def_readwrite("xi", &Unit::bias)
        .def_readwrite("b", &Unit::weight_out)
        .def(py::self == py::self)
        .def("__repr__", [](const Unit& u) {
            return "Unit(a=" + py::repr(py::cast(u.weights_in)).cast<std::string>() +
                   ", xi=" + io::format_double(u.bias) + ", b=" + io::format_double(u.weight_out) + ")";
        });

    py::class_<Network>(m, "Network")
        .def(py::init<std::size_t, double>(), "input_dim"_a = 1, "output_bias"_a = 0.0)
        .def(py::init<std::size_t, std::vector<Unit>, double>(), "input_dim"_a, "units"_a, "output_bias"_a)
        .def_property_readonly("input_dim", &Network::input_dim)
        .def_property("output_bias", &Network::output_bias, &Network::set_output_bias)
        .def_property_readonly("units", [](const Network& n) { return n.units(); })
        .def("add_unit", py::overload_cast<Unit>(&Network::add_unit), "unit"_a)
        .def("add_unit", py::overload_cast<double, double, double>(&Network::add_unit), "a"_a, "xi"_a, "b"_a)
        .def("__len__", &Network::size)
        .def_property_readonly("parameter_count", &Network::parameter_count)
        .def(py::self == py::self)
        .def("__call__", [](const Network& n, double x) { return evaluate(n, x); }, "x"_a)
        .def("__call__", [](const Network& n, std::vector<double> x) { return evaluate(n, x); }, "x"_a)
        .def("evaluate", &evaluate_many, "x"_a, "Vectorized evaluation over the rows of x");

    py::class_<Division>(m, "Division")
        .def(py::init<std::vector<double>>(), "points"_a)
        .def_property_readonly("points", &Division::points)
        .def_property_readonly("mesh_norm", &Division::mesh_norm)
        .def_property_readonly("length", &Division::length);
    m.def("uniform_division", &uniform_division, "intervals"_a, "length"_a);

    py::class_<TargetFunction>(m, "TargetFunction")
        .def_readonly("name", &TargetFunction::name)
        .def_readonly("params", &TargetFunction::params)
        .def_readonly("coeffs", &TargetFunction::coeffs)
        .def_readonly("input_dim", &TargetFunction::input_dim)
        .def_readonly("domain_length", &TargetFunction::domain_length)
        .def_readonly("sup_f2", &TargetFunction::sup_f2)
        .def_readonly("sup_f3", &TargetFunction::sup_f3)
        .def_readonly("norms_estimated", &TargetFunction::norms_estimated)
        .def("__call__", [](const TargetFunction& f, double x) { return f(x); }, "x"_a)
        .def("__call__", [](const TargetFunction& f, std::vector<double> x) { return f(x); }, "x"_a)
        .def("f1", [](const TargetFunction& f, double x) { return f.f1(x); }, "x"_a)
        .def("f2", [](const TargetFunction& f, double x) { return f.f2(x); }, "x"_a);
    m.def("make_target", [](const std::string& name, std::map<std::string, double> params,
                            std::vector<double> coeffs) { return make_target(spec_of(name, params, coeffs)); },
          "name"_a, "params"_a = std::map<std::string, double>{}, "coeffs"_a = std::vector<double>{});
    m.def("registry_names", &registry_names);

    py::class_<ErrorBound>(m, "ErrorBound")
        .def_readonly("c1", &ErrorBound::c1)
        .def_readonly("mesh_norm", &ErrorBound::mesh_norm)
        .def_readonly("bound", &ErrorBound::bound)
        .def_readonly("estimated_norms", &ErrorBound::estimated_norms);
    m.def("build_network", [](const TargetFunction& f, const Division& d, bool prune) {
        return build_network(f, d, {.prune = prune});
    }, "f"_a, "division"_a, "prune"_a = false);
    m.def("build_bidirectional", [](const TargetFunction& f, const Division& d, double lambda, bool prune) {
        return build_bidirectional(f, d, lambda, {.prune = prune});
    }, "f"_a, "division"_a, "lam"_a, "prune"_a = false);
    m.def("error_bound", &error_bound, "f"_a, "division"_a);

    py::class_<Breakpoint>(m, "Breakpoint")
        .def_readonly("t", &Breakpoint::t)
        .def_readonly("coeff", &Breakpoint::coeff);
    py::class_<CanonicalNetwork>(m, "CanonicalNetwork")
        .def_readonly("length", &CanonicalNetwork::length)
        .def_readonly("const_term", &CanonicalNetwork::const_term)
        .def_readonly("slope_pos", &CanonicalNetwork::slope_pos)
        .def_readonly("slope_neg", &CanonicalNetwork::slope_neg)
        .def_readonly("forward", &CanonicalNetwork::forward)
        .def_readonly("backward", &CanonicalNetwork::backward)
        .def("__call__", &evaluate_canonical, "x"_a)
        .def("to_network", &to_network);
    m.def("fold_to_canonical", &fold_to_canonical, "net"_a, "length"_a);

    py::class_<BinSpectrum>(m, "BinSpectrum")
        .def_readonly("h", &BinSpectrum::h)
        .def_readonly("bins", &BinSpectrum::bins)
        .def_readonly("length", &BinSpectrum::length)
        .def_readonly("b_plus", &BinSpectrum::b_plus)
        .def_readonly("b_minus", &BinSpectrum::b_minus)
        .def_readonly("abs_mass", &BinSpectrum::abs_mass)
        .def_readonly("out_of_range_mass", &BinSpectrum::out_of_range_mass)
        .def_readonly("degenerate_count", &BinSpectrum::degenerate_count);
    py::class_<SpectrumComparison>(m, "SpectrumComparison")
        .def_readonly("bin0_excluded", &SpectrumComparison::bin0_excluded)
        .def_readonly("rms_residual", &SpectrumComparison::rms_residual)
        .def_readonly("correlation", &SpectrumComparison::correlation)
        .def_property_readonly("f2", [](const SpectrumComparison& c) {
            std::vector<double> v;
            for (const auto& r : c.rows) v.push_back(r.f2);
            return v;
        })
        .def_property_readonly("residual", [](const SpectrumComparison& c) {
            std::vector<double> v;
            for (const auto& r : c.rows) v.push_back(r.residual);
            return v;
        });
    m.def("extract_spectrum", &extract_spectrum, "net"_a, "h"_a, "length"_a);
    m.def("reconstruct_from_spectrum", &reconstruct_from_spectrum, "spectrum"_a, "output_bias"_a);
    m.def("compare_spectrum", &compare_spectrum, "spectrum"_a, "f"_a, "exclude_bin0"_a = true);

    py::class_<Dataset>(m, "Dataset")
        .def_readonly("input_dim", &Dataset::input_dim)
        .def_readonly("seed", &Dataset::seed)
        .def("__len__", [](const Dataset& d) { return d.pairs.size(); })
        .def_property_readonly("x", [](const Dataset& d) {
            std::vector<std::vector<double>> v;
            for (const auto& s : d.pairs) v.push_back(s.x);
            return v;
        })
        .def_property_readonly("y", [](const Dataset& d) {
            std::vector<double> v;
            for (const auto& s : d.pairs) v.push_back(s.y);
            return v;
        });
    m.def("sample_dataset", [](const std::string& name, std::size_t n, std::uint64_t seed,
                               std::map<std::string, double> params, std::vector<double> coeffs) {
        return sample_dataset(spec_of(name, params, coeffs), n, seed);
    }, "name"_a, "n"_a, "seed"_a, "params"_a = std::map<std::string, double>{}, "coeffs"_a = std::vector<double>{});

    py::class_<TrainConfig>(m, "TrainConfig")
        .def(py::init<>())
        .def_readwrite("units", &TrainConfig::units)
        .def_readwrite("epochs", &TrainConfig::epochs)
        .def_readwrite("batch_size", &TrainConfig::batch_size)
        .def_property("optimizer", [](const TrainConfig& c) { return to_string(c.optimizer); },
                      [](TrainConfig& c, const std::string& s) { c.optimizer = parse_optimizer(s); })
        .def_readwrite("learning_rate", &TrainConfig::learning_rate)
        .def_readwrite("beta1", &TrainConfig::beta1)
        .def_readwrite("beta2", &TrainConfig::beta2)
        .def_readwrite("eps", &TrainConfig::eps)
        .def_readwrite("init_scheme", &TrainConfig::init_scheme)
        .def_readwrite("seed", &TrainConfig::seed)
        .def_readwrite("eval_grid_size", &TrainConfig::eval_grid_size)
        .def_readwrite("threads", &TrainConfig::threads)
        .def("validate", &TrainConfig::validate);
    py::class_<TrainReport>(m, "TrainReport")
        .def_readonly("network", &TrainReport::network)
        .def_readonly("loss_curve", &TrainReport::loss_curve)
        .def_readonly("max_error", &TrainReport::max_error)
        .def_readonly("mse", &TrainReport::mse)
        .def_readonly("seconds", &TrainReport::seconds)
        .def_readonly("failed", &TrainReport::failed)
        .def_readonly("failure", &TrainReport::failure);
    m.def("train", &train, "data"_a, "config"_a, py::call_guard<py::gil_scoped_release>());

    py::class_<GridError>(m, "GridError")
        .def_readonly("max_error", &GridError::max_error)
        .def_readonly("argmax", &GridError::argmax)
        .def_readonly("mse", &GridError::mse);
    m.def("sup_error", &sup_error, "f"_a, "net"_a, "grid_size"_a, "threads"_a = 1);

    py::class_<ConvergenceRow>(m, "ConvergenceRow")
        .def_readonly("J", &ConvergenceRow::J)
        .def_readonly("mesh_norm", &ConvergenceRow::mesh_norm)
        .def_readonly("max_error", &ConvergenceRow::max_error)
        .def_readonly("bound", &ConvergenceRow::bound)
        .def_readonly("ratio", &ConvergenceRow::ratio)
        .def_readonly("halving_ratio", &ConvergenceRow::halving_ratio);
    m.def("convergence_sweep", [](const TargetFunction& f, std::vector<std::size_t> Js, std::size_t grid) {
        return convergence_sweep(f, Js, grid).rows;
    }, "f"_a, "J_list"_a, "grid_size"_a = 4096);

    m.def("checkpoint_to_string", &io::checkpoint_to_string, "net"_a);
    m.def("checkpoint_from_string", [](const std::string& s) { return io::checkpoint_from_string(s); }, "text"_a);
    m.def("save_checkpoint", &io::save_checkpoint, "net"_a, "path"_a);
    m.def("load_checkpoint", &io::load_checkpoint, "path"_a);
}
