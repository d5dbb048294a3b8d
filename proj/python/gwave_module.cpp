#include "gwave/runner.hpp"

#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace gwave;

namespace {

/// pybind11 holders must be non-const; wrap the shared grid pointer
struct PyGrid {
    GridPtr ptr;
};

py::object json_to_py(const ordered_json& j) {
    switch (j.type()) {
        case nlohmann::detail::value_t::null: return py::none();
        case nlohmann::detail::value_t::boolean: return py::bool_(j.get<bool>());
        case nlohmann::detail::value_t::number_integer: return py::int_(j.get<long long>());
        case nlohmann::detail::value_t::number_unsigned: return py::int_(j.get<unsigned long long>());
        case nlohmann::detail::value_t::number_float: return py::float_(j.get<double>());
        case nlohmann::detail::value_t::string: return py::str(j.get<std::string>());
        case nlohmann::detail::value_t::array: {
            py::list out;
            for (const auto& e : j) out.append(json_to_py(e));
            return out;
        }
        case nlohmann::detail::value_t::object: {
            py::dict out;
            for (auto it = j.begin(); it != j.end(); ++it)
                out[py::str(it.key())] = json_to_py(it.value());
            return out;
        }
        default: return py::none();
    }
}

GeneralizedPoint make_point(const PyGrid& pg, const std::vector<std::string>& exprs,
                            const std::string& name) {
    int dim = static_cast<int>(exprs.size());
    std::vector<ExprAst> parsed;
    for (const auto& e : exprs) parsed.push_back(parse(e, 1));
    VectorNet net = VectorNet::map(pg.ptr, dim, [&parsed, dim](double eps) {
        Vec2 v{0.0, 0.0};
        for (int d = 0; d < dim; ++d)
            v[static_cast<size_t>(d)] = eval_scalar(parsed[static_cast<size_t>(d)], eps).real();
        return v;
    });
    return GeneralizedPoint(std::move(net), name);
}

GeneralizedDirection make_direction(const PyGrid& pg, const std::vector<std::string>& exprs,
                                    const std::string& name) {
    int dim = static_cast<int>(exprs.size());
    std::vector<ExprAst> parsed;
    for (const auto& e : exprs) parsed.push_back(parse(e, 1));
    VectorNet net = VectorNet::map(pg.ptr, dim, [&parsed, dim](double eps) {
        Vec2 v{0.0, 0.0};
        for (int d = 0; d < dim; ++d)
            v[static_cast<size_t>(d)] = eval_scalar(parsed[static_cast<size_t>(d)], eps).real();
        return v;
    });
    return GeneralizedDirection(net, name);
}

py::dict verdict_dict(const ScaleVerdict& v) {
    py::dict d;
    d["kind"] = scale_kind_name(v.kind);
    d["order"] = v.order;
    d["fit_exponent"] = v.fit_exponent;
    d["residual"] = v.residual;
    return d;
}

} // namespace

PYBIND11_MODULE(_gwave, m) {
    m.doc() = "pointwise microlocal regularity analysis for generalized-function representatives";

    py::register_exception<Error>(m, "GwaveError");

    py::class_<PyGrid>(m, "EpsilonGrid")
        .def_static("geometric",
                    [](int k_min, int k_max, double base) {
                        return PyGrid{EpsilonGrid::geometric(k_min, k_max, base)};
                    },
                    py::arg("k_min") = 6, py::arg("k_max") = 20, py::arg("base") = 2.0)
        .def(py::init([](std::vector<double> values) {
            return PyGrid{std::make_shared<const EpsilonGrid>(std::move(values))};
        }))
        .def("values", [](const PyGrid& g) { return g.ptr->values(); })
        .def("__len__", [](const PyGrid& g) { return g.ptr->size(); });

    py::class_<ScalarNet>(m, "ScalarNet")
        .def_static("from_expr",
                    [](const std::string& text, const PyGrid& grid) {
                        return net_from_expr(parse(text, 1), grid.ptr);
                    })
        .def_static("from_samples",
                    [](const PyGrid& grid, const std::vector<cxd>& samples) {
                        return ScalarNet(grid.ptr, samples);
                    })
        .def("samples", &ScalarNet::samples)
        .def("__len__", &ScalarNet::size);

    m.def("fit_scale_exponent",
          [](const ScalarNet& net, double tail) {
              SlopeFit f = fit_scale_exponent(net, tail);
              py::dict d;
              d["exponent"] = f.exponent;
              d["residual"] = f.residual;
              d["points_used"] = f.points_used;
              return d;
          },
          py::arg("net"), py::arg("tail_fraction") = 0.5);
    m.def("classify_scale",
          [](const ScalarNet& net) { return verdict_dict(classify_scale(net)); });
    m.def("is_negligible",
          [](const ScalarNet& net, int m_max) { return verdict_dict(is_negligible(net, m_max)); },
          py::arg("net"), py::arg("m_max") = 6);
    m.def("is_moderate",
          [](const ScalarNet& net, int n_max) { return verdict_dict(is_moderate(net, n_max)); },
          py::arg("net"), py::arg("n_max") = 10);

    py::class_<RepFamily>(m, "RepFamily")
        .def("value", [](const RepFamily& u, double eps, std::vector<double> x) {
            Vec2 p{x.size() > 0 ? x[0] : 0.0, x.size() > 1 ? x[1] : 0.0};
            return u.value(eps, p);
        })
        .def("dimension", &RepFamily::dimension)
        .def_property_readonly("provenance", &RepFamily::provenance);

    m.def("embed_smooth",
          [](const std::string& expr, int dim) { return embed_smooth(parse(expr, dim)); },
          py::arg("expr"), py::arg("dim") = 1);
    m.def("delta_family",
          [](const std::string& center, const PyGrid& grid) {
              return mollified_distribution(MollifiedKind::Delta, parse(center, 1), BumpSpec{},
                                            grid.ptr);
          },
          py::arg("center") = "0", py::arg("grid"));
    m.def("heaviside_family",
          [](const std::string& center, const PyGrid& grid) {
              return mollified_distribution(MollifiedKind::Heaviside, parse(center, 1), BumpSpec{},
                                            grid.ptr);
          },
          py::arg("center") = "0", py::arg("grid"));
    m.def("plane_wave_family",
          [](const std::string& amplitude, const std::string& frequency,
             const std::vector<std::string>& direction, std::vector<double> center, double radius) {
              std::vector<ExprAst> dir;
              for (const auto& d : direction) dir.push_back(parse(d, 1));
              BumpSpec env;
              env.profile = BumpProfile::Kind::Plateau;
              env.center = {center.size() > 0 ? center[0] : 0.0, center.size() > 1 ? center[1] : 0.0};
              env.radius = radius;
              return plane_wave(parse(amplitude, 1), parse(frequency, 1), dir, env);
          },
          py::arg("amplitude"), py::arg("frequency"), py::arg("direction"),
          py::arg("envelope_center") = std::vector<double>{0.0}, py::arg("envelope_radius") = 0.5);
    m.def("product", &product);
    m.def("scale", [](const RepFamily& u, const std::string& c) { return scale(u, parse(c, 1)); });

    py::class_<GeneralizedPoint>(m, "GeneralizedPoint")
        .def(py::init(&make_point), py::arg("grid"), py::arg("exprs"), py::arg("name") = "")
        .def_property_readonly("name", &GeneralizedPoint::name);
    py::class_<GeneralizedDirection>(m, "GeneralizedDirection")
        .def(py::init(&make_direction), py::arg("grid"), py::arg("exprs"), py::arg("name") = "")
        .def_property_readonly("name", &GeneralizedDirection::name);

    m.def("eval_at_point", &eval_at_point);

    m.def("refined_regularity_test",
          [](const RepFamily& u, const GeneralizedPoint& x0, const GeneralizedDirection& xi0,
             int m_max, int threads) {
              TestParams params;
              params.m_max = m_max;
              params.threads = threads;
              return json_to_py(to_json(refined_regularity_test(u, x0, xi0, params)));
          },
          py::arg("u"), py::arg("x0"), py::arg("xi0"), py::arg("m_max") = 6, py::arg("threads") = 1);
    m.def("classical_regularity_test",
          [](const RepFamily& u, std::vector<double> x0, std::vector<double> xi0, const PyGrid& grid,
             double r, int threads) {
              TestParams params;
              params.window_radius = r;
              params.threads = threads;
              Vec2 p{x0.size() > 0 ? x0[0] : 0.0, x0.size() > 1 ? x0[1] : 0.0};
              Vec2 d{xi0.size() > 0 ? xi0[0] : 1.0, xi0.size() > 1 ? xi0[1] : 0.0};
              return json_to_py(to_json(classical_regularity_test(u, p, d, grid.ptr, params)));
          },
          py::arg("u"), py::arg("x0"), py::arg("xi0"), py::arg("grid"), py::arg("r") = 0.25,
          py::arg("threads") = 1);
    m.def("wavefront_scan",
          [](const RepFamily& u, const std::vector<GeneralizedPoint>& pts,
             const std::vector<GeneralizedDirection>& dirs, const std::string& mode, int threads) {
              TestParams params;
              params.threads = threads;
              return json_to_py(to_json(wavefront_scan(u, pts, dirs, mode, params)));
          },
          py::arg("u"), py::arg("points"), py::arg("directions"), py::arg("mode") = "refined",
          py::arg("threads") = 1);
    m.def("singular_support_scan",
          [](const RepFamily& u, const std::vector<GeneralizedPoint>& pts,
             const std::vector<GeneralizedDirection>& extra, int threads) {
              TestParams params;
              params.threads = threads;
              return json_to_py(to_json(singular_support_scan(u, pts, extra, params)));
          },
          py::arg("u"), py::arg("points"), py::arg("extra_directions") = std::vector<GeneralizedDirection>{},
          py::arg("threads") = 1);
    m.def("consistency_check",
          [](const RepFamily& u, std::vector<double> x0, std::vector<double> xi0, double r,
             int samples, const PyGrid& grid, const std::vector<GeneralizedDirection>& extra,
             int threads) {
              TestParams params;
              params.threads = threads;
              params.window_radius = r;
              Vec2 p{x0.size() > 0 ? x0[0] : 0.0, x0.size() > 1 ? x0[1] : 0.0};
              Vec2 d{xi0.size() > 0 ? xi0[0] : 1.0, xi0.size() > 1 ? xi0[1] : 0.0};
              return json_to_py(
                  to_json(consistency_check(u, p, d, r, samples, grid.ptr, extra, params)));
          },
          py::arg("u"), py::arg("x0"), py::arg("xi0"), py::arg("r"), py::arg("samples"),
          py::arg("grid"), py::arg("extra_directions") = std::vector<GeneralizedDirection>{},
          py::arg("threads") = 1);

    m.def("load_scenario", [](const std::string& path) {
        Scenario s = load_scenario(path);
        py::dict d;
        d["name"] = s.name;
        d["dimension"] = s.dimension;
        d["family"] = s.family_kind;
        d["mode"] = s.mode;
        d["points"] = [&] {
            py::list l;
            for (const auto& [n, e] : s.points) l.append(n);
            return l;
        }();
        d["directions"] = [&] {
            py::list l;
            for (const auto& [n, e] : s.directions) l.append(n);
            return l;
        }();
        return d;
    });
    m.def("run_scenario",
          [](const std::string& path, const std::string& command, int threads) {
              Scenario s = load_scenario(path);
              RunnerOptions opts;
              opts.threads = threads;
              RunOutputs out = run_command(s, command, opts);
              py::dict d;
              d["report"] = json_to_py(out.report);
              d["exit_code"] = out.exit_code;
              return d;
          },
          py::arg("path"), py::arg("command"), py::arg("threads") = 1);
    m.def("selftest", []() {
        std::vector<std::string> lines;
        auto [passed, total] = run_selftest(lines);
        py::dict d;
        d["passed"] = passed;
        d["total"] = total;
        d["checks"] = lines;
        return d;
    });

    m.attr("__version__") = "0.1.0";
}
