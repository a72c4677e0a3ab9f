#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <fstream>
#include <sstream>

#include "frozenperc/estimators.hpp"
#include "frozenperc/experiments.hpp"
#include "frozenperc/frozen.hpp"
#include "frozenperc/render.hpp"

namespace py = pybind11;
using namespace frozenperc;

namespace {

py::object to_py(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

ProcessConfig make_config(const std::string& rule, const std::string& boundary, double n, double domain,
                          std::uint64_t seed) {
    ProcessConfig c;
    c.size_rule = parse_size_rule(rule);
    c.boundary_rule = parse_boundary_rule(boundary);
    c.threshold = n;
    c.domain = Region::box(domain > 0.0 ? domain : 4.0 * n);
    c.seed = seed;
    return c;
}

py::dict experiment_dict(const ExperimentResult& r) {
    py::dict d;
    d["name"] = r.name;
    d["config"] = to_py(r.config);
    d["columns"] = r.columns;
    d["rows"] = r.rows;
    d["summary"] = to_py(r.summary);
    d["seed_manifest"] = to_py(r.seed_manifest);
    d["wall_seconds"] = r.wall_seconds;
    return d;
}

ExperimentOptions options(std::int64_t replicas, std::uint64_t seed, double domain, unsigned workers) {
    ExperimentOptions o;
    o.replicas = replicas;
    o.base_seed = seed;
    o.domain_radius = domain;
    o.workers = workers;
    return o;
}

// Runs `f` without the GIL, then converts its JSON result.
template <class F>
py::object released_json(F&& f) {
    nlohmann::json j;
    {
        py::gil_scoped_release release;
        j = f();
    }
    return to_py(j);
}

template <class F>
py::dict released_experiment(F&& f, const std::optional<std::filesystem::path>& out_dir) {
    ExperimentResult r;
    {
        py::gil_scoped_release release;
        r = f();
        if (out_dir) r.write(*out_dir);
    }
    return experiment_dict(r);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Frozen percolation on the triangular lattice";

    m.def("embed", [](int x, int y) {
        const Point p = embed({x, y});
        return std::pair{p.x, p.y};
    });
    m.def("neighbors", [](int x, int y) {
        std::vector<std::pair<int, int>> out;
        for (Coord c : neighbors({x, y})) out.emplace_back(c.x, c.y);
        return out;
    });
    m.def("tau", [](std::uint64_t seed, int x, int y) { return tau_at(seed, {x, y}); }, py::arg("seed"),
          py::arg("x"), py::arg("y"));
    m.def("replica_seed", &replica_seed, py::arg("base_seed"), py::arg("index"));

    py::class_<FinalState>(m, "FinalState")
        .def_property_readonly("size", [](const FinalState& f) { return f.state.size(); })
        .def_property_readonly("coords",
                               [](const FinalState& f) {
                                   py::array_t<int> a({static_cast<py::ssize_t>(f.state.size()), py::ssize_t{2}});
                                   auto v = a.mutable_unchecked<2>();
                                   for (std::size_t i = 0; i < f.state.size(); ++i) {
                                       const Coord c = f.sites->site(i);
                                       v(i, 0) = c.x;
                                       v(i, 1) = c.y;
                                   }
                                   return a;
                               })
        .def_property_readonly("state",
                               [](const FinalState& f) {
                                   py::array_t<std::uint8_t> a(static_cast<py::ssize_t>(f.state.size()));
                                   auto v = a.mutable_unchecked<1>();
                                   for (std::size_t i = 0; i < f.state.size(); ++i) v(i) = static_cast<std::uint8_t>(f.state[i]);
                                   return a;
                               },
                               "0 = white, 1 = black (not frozen), 2 = frozen")
        .def_property_readonly("freeze_time",
                               [](const FinalState& f) {
                                   return py::array_t<double>(static_cast<py::ssize_t>(f.freeze_time.size()),
                                                              f.freeze_time.data());
                               })
        .def_property_readonly("cluster",
                               [](const FinalState& f) {
                                   return py::array_t<std::int32_t>(static_cast<py::ssize_t>(f.cluster.size()),
                                                                    f.cluster.data());
                               })
        .def_property_readonly("event_count", [](const FinalState& f) { return f.events.size(); })
        .def_property_readonly("origin_frozen", &origin_freezes)
        .def_property_readonly("origin_freeze_time", &origin_freeze_time)
        .def_property_readonly("origin_diameter", &origin_cluster_diameter)
        .def("serialize", [](const FinalState& f) { return py::bytes(f.serialize()); })
        .def("save",
             [](const FinalState& f, const std::filesystem::path& path) {
                 std::ofstream out(path, std::ios::binary);
                 if (!out) throw std::runtime_error("cannot open " + path.string());
                 f.save(out);
             })
        .def("render", [](const FinalState& f, const std::string& path) { render(f, path); }, py::arg("path"))
        .def("png", [](const FinalState& f) {
            const auto bytes = encode_png(rasterize(f));
            return py::bytes(reinterpret_cast<const char*>(bytes.data()), bytes.size());
        });

    m.def("simulate",
          [](const std::string& rule, const std::string& boundary, double n, double domain, std::uint64_t seed) {
              return run(make_config(rule, boundary, n, domain, seed));
          },
          py::arg("rule") = "diam", py::arg("boundary") = "original", py::arg("N") = 30.0, py::arg("domain") = 0.0,
          py::arg("seed") = 0, py::call_guard<py::gil_scoped_release>());
    m.def("reference_simulate",
          [](const std::string& rule, const std::string& boundary, double n, double domain, std::uint64_t seed) {
              return reference_run(make_config(rule, boundary, n, domain, seed));
          },
          py::arg("rule") = "diam", py::arg("boundary") = "original", py::arg("N") = 30.0, py::arg("domain") = 0.0,
          py::arg("seed") = 0, py::call_guard<py::gil_scoped_release>());
    m.def("load_final_state", [](const std::filesystem::path& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw std::runtime_error("cannot open " + path.string());
        return FinalState::load(in);
    });

    auto orientation = [](const std::string& s) {
        if (s == "horizontal" || s == "h") return Orientation::horizontal;
        if (s == "vertical" || s == "v") return Orientation::vertical;
        throw std::invalid_argument("unknown orientation: " + s);
    };

    m.def("estimate_crossing",
          [orientation](double width, double height, double p, std::int64_t replicas, std::uint64_t seed,
                        const std::string& o) {
              const Orientation dir = orientation(o);
              return released_json([&] { return estimate_crossing(width, height, dir, p, replicas, seed).to_json(); });
          },
          py::arg("width"), py::arg("height"), py::arg("p") = 0.5, py::arg("replicas") = 1000, py::arg("seed") = 1,
          py::arg("orientation") = "horizontal");
    m.def("estimate_theta",
          [](double p, double radius, std::int64_t replicas, std::uint64_t seed) {
              return released_json([&] { return estimate_theta(p, radius, replicas, seed).to_json(); });
          },
          py::arg("p"), py::arg("radius"), py::arg("replicas") = 1000, py::arg("seed") = 1);
    m.def("estimate_pi1",
          [](int n, std::int64_t replicas, std::uint64_t seed) { return released_json([&] { return estimate_pi1(n, replicas, seed).to_json(); }); },
          py::arg("n"), py::arg("replicas") = 1000, py::arg("seed") = 1);
    m.def("estimate_pi4",
          [](int n, std::int64_t replicas, std::uint64_t seed, double p_black, double p_white) {
              return released_json([&] { return estimate_pi4(n, replicas, seed, 0, p_black, p_white).to_json(); });
          },
          py::arg("n"), py::arg("replicas") = 1000, py::arg("seed") = 1, py::arg("p_black") = kCriticalP,
          py::arg("p_white") = kCriticalP);
    m.def("estimate_L",
          [](double p, std::int64_t replicas, std::uint64_t seed, int max_n) {
              return released_json([&] { return estimate_L(p, replicas, seed, max_n).to_json(); });
          },
          py::arg("p"), py::arg("replicas") = 1000, py::arg("seed") = 1, py::arg("max_n") = 1024);
    m.def("estimate_net",
          [](int m_, int n, double p, std::int64_t replicas, std::uint64_t seed) {
              return released_json([&] { return estimate_net_prob(m_, n, p, replicas, seed).to_json(); });
          },
          py::arg("m"), py::arg("n"), py::arg("p"), py::arg("replicas") = 100, py::arg("seed") = 1);
    m.def("p_lambda",
          [](double n, double lambda, double pi4) {
              const auto r = p_lambda(n, lambda, pi4);
              return std::pair{r.p, r.clamped};
          },
          py::arg("N"), py::arg("lam"), py::arg("pi4"));
    m.def("fit_arm_exponent",
          [](const std::vector<double>& ns, const std::vector<double>& values) { return fit_arm_exponent(ns, values); });
    m.def("wilson_interval", &wilson_interval, py::arg("successes"), py::arg("trials"));

    using Dir = std::optional<std::filesystem::path>;
    m.def("origin_freeze",
          [](double n, std::int64_t replicas, std::uint64_t seed, double domain, Dir out_dir) {
              return released_experiment([&] { return exp_origin_freeze(n, all_variants(), options(replicas, seed, domain, 0)); }, out_dir);
          },
          py::arg("N"), py::arg("replicas") = 100, py::arg("seed") = 1, py::arg("domain") = 0.0,
          py::arg("out_dir") = py::none());
    m.def("freeze_window",
          [](double n, double k, const std::vector<double>& lambdas, std::int64_t replicas, std::uint64_t seed,
             double domain, std::optional<double> pi4, std::int64_t pi4_replicas, Dir out_dir) {
              return released_experiment([&] { return exp_freeze_time_window(n, k, lambdas, options(replicas, seed, domain, 0), pi4, pi4_replicas); }, out_dir);
          },
          py::arg("N"), py::arg("K") = 1.0, py::arg("lambdas") = std::vector<double>{0.5, 1.0, 2.0},
          py::arg("replicas") = 100, py::arg("seed") = 1, py::arg("domain") = 0.0, py::arg("pi4") = py::none(),
          py::arg("pi4_replicas") = 200, py::arg("out_dir") = py::none());
    m.def("macro_cluster",
          [](double n, const std::vector<double>& epsilons, const std::string& boundary, std::int64_t replicas,
             std::uint64_t seed, double domain, Dir out_dir) {
              return released_experiment([&] { return exp_macro_cluster(n, epsilons, parse_boundary_rule(boundary),
                                               options(replicas, seed, domain, 0)); }, out_dir);
          },
          py::arg("N"), py::arg("epsilons") = std::vector<double>{0.05}, py::arg("boundary") = "original",
          py::arg("replicas") = 100, py::arg("seed") = 1, py::arg("domain") = 0.0, py::arg("out_dir") = py::none());
    m.def("volume_scan",
          [](double n, const std::vector<double>& radii, const std::string& boundary, std::int64_t replicas,
             std::uint64_t seed, Dir out_dir) {
              return released_experiment([&] { return exp_volume_scale_scan(n, radii, parse_boundary_rule(boundary), options(replicas, seed, 0.0, 0)); }, out_dir);
          },
          py::arg("N"), py::arg("radii"), py::arg("boundary") = "modified", py::arg("replicas") = 100,
          py::arg("seed") = 1, py::arg("out_dir") = py::none());
}
