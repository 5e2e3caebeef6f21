// Python bindings. Structured results cross the boundary as JSON text; the package
// wrapper decodes them.

#include "mstlens/experiments.hpp"
#include "mstlens/mst.hpp"
#include "mstlens/mst_test.hpp"
#include "mstlens/null_theory.hpp"
#include "mstlens/projection.hpp"
#include "mstlens/rf.hpp"
#include "mstlens/serialize.hpp"
#include "mstlens/service.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <numeric>

namespace py = pybind11;
using namespace mstlens;

namespace {

std::vector<std::string> index_ids(Eigen::Index n) {
    std::vector<std::string> ids(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = std::to_string(i);
    return ids;
}

GroupSelection selection_for(const WeightedTree& tree, std::vector<VertexId> g1, std::vector<VertexId> g2) {
    if (g1.empty() || g2.empty()) throw InputError("both groups need at least one row");
    const VertexId from = g1.front(), to = g2.front();
    return make_selection(tree, std::move(g1), std::move(g2), from, to);
}

std::string mst_edges(const Matrix& points) {
    return edges_json(build_mst(points), index_ids(points.rows())).dump();
}

std::string crossing(const Matrix& points, std::vector<VertexId> g1, std::vector<VertexId> g2) {
    const WeightedTree tree = build_mst(points);
    const GroupSelection sel = selection_for(tree, std::move(g1), std::move(g2));
    return crossing_json(crossing_count(tree, sel), index_ids(points.rows())).dump();
}

std::string run_mst_test(const Matrix& points, std::vector<VertexId> g1, std::vector<VertexId> g2,
                         std::size_t replicates, double variance_threshold, std::uint64_t seed) {
    TestResult r;
    {
        py::gil_scoped_release release;
        const WeightedTree tree = build_mst(points);
        const GroupSelection sel = selection_for(tree, std::move(g1), std::move(g2));
        r = mst_test(points, tree, sel, replicates, variance_threshold, seed);
    }
    Json j = test_result_json(r);
    j["null_counts"] = r.null_counts;
    j["crossing"] = crossing_json(r.crossing, index_ids(points.rows()));
    return j.dump();
}

std::string rf(const Matrix& points1, const std::vector<std::string>& labels1, const Matrix& points2,
               const std::vector<std::string>& labels2) {
    const MedoidTree a = simplified_medoid_tree(points1, Clustering(labels1));
    const MedoidTree b = simplified_medoid_tree(points2, Clustering(labels2));
    return rf_json(rf_distance(a.tree, a.medoids, b.tree, b.medoids)).dump();
}

std::string stability(const Matrix& points, const std::vector<std::string>& labels, std::size_t reps,
                      std::optional<double> noise_sd, std::uint64_t seed) {
    StabilityResult r;
    {
        py::gil_scoped_release release;
        r = stability_experiment(points, Clustering(labels), noise_sd, reps, seed);
    }
    return Json{{"noise_sd", r.noise_sd}, {"noise", r.noise_distances}, {"permutation", r.permutation_distances}}.dump();
}

std::string project(const Matrix& x, const Matrix& path, std::size_t pca_dims, std::size_t degree,
                    std::optional<double> lambda, std::size_t folds) {
    ProjectionConfig cfg;
    cfg.pca_dims = pca_dims;
    cfg.degree = degree;
    cfg.lambda = lambda;
    cfg.folds = folds;
    return projection_json(pca_rcca_project(x, path, cfg)).dump();
}

std::string density(const Matrix& coords, double bandwidth, std::size_t resolution) {
    return surface_json(kde2d(coords, bandwidth, resolution)).dump();
}

std::string null_density(double n1, double n2, double c, double eps) {
    const NullTheoryProblem p{n1, n2, c, eps};
    const MinimalCrossing m = minimal_crossing_density(p);
    Json j = density_json(m);
    j["violation"] = family_violation(m.density, p);
    return j.dump();
}

std::string power(double c, std::size_t p, std::size_t trials, std::size_t replicates, std::size_t n_each, double alpha,
                  std::uint64_t seed) {
    PowerOptions o;
    o.trials = trials;
    o.replicates = replicates;
    o.n_each = n_each;
    o.alpha = alpha;
    o.seed = seed;
    PowerCell cell;
    {
        py::gil_scoped_release release;
        cell = power_cell(c, p, o);
    }
    return Json{{"c", cell.c}, {"p", cell.p}, {"trials", cell.trials}, {"rejections", cell.rejections}, {"rate", cell.rate}}
        .dump();
}

/// Session API: requests and responses are JSON text, errors carry the HTTP status.
class PySessionStore {
public:
    explicit PySessionStore(std::optional<std::uint64_t> seed) : store_(seed) {}

    std::string call(const std::string& op, const std::string& id, const std::string& body) {
        const Json request = body.empty() ? Json::object() : Json::parse(body);
        py::gil_scoped_release release;
        if (op == "create") return store_.create_session(request).dump();
        if (op == "overview") return store_.overview(id).dump();
        if (op == "path") return store_.select_path(id, request).dump();
        if (op == "groups") return store_.select_groups(id, request).dump();
        if (op == "project") return store_.project(id, request).dump();
        if (op == "test") return store_.run_test(id, request).dump();
        if (op == "meta") return store_.meta(id).dump();
        if (op == "snapshot") return store_.snapshot(id, request).dump();
        if (op == "heatmap") {
            auto text = [&](const char* key) -> std::optional<std::string> {
                if (!request.contains(key)) return std::nullopt;
                return request[key].get<std::string>();
            };
            return store_.heatmap(id, text("rows"), text("features")).dump();
        }
        throw InputError("unknown session operation '" + op + "'");
    }

private:
    service::SessionStore store_;
};

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "mstlens core routines";

    static py::exception<DegenerateError> degenerate(m, "DegenerateError", PyExc_ArithmeticError);
    static py::exception<service::ServiceError> service_error(m, "ServiceError", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const InputError& e) {
            py::set_error(PyExc_ValueError, e.what());
        } catch (const DegenerateError& e) {
            py::set_error(degenerate, e.what());
        } catch (const service::ServiceError& e) {
            py::object err = py::handle(service_error.ptr())(e.what());
            err.attr("status") = e.status();
            PyErr_SetObject(service_error.ptr(), err.ptr());
        } catch (const nlohmann::json::exception& e) {
            py::set_error(PyExc_ValueError, e.what());
        }
    });

    m.def("mst_edges", &mst_edges, py::arg("points"));
    m.def("crossing", &crossing, py::arg("points"), py::arg("group1"), py::arg("group2"));
    m.def("mst_test", &run_mst_test, py::arg("points"), py::arg("group1"), py::arg("group2"),
          py::arg("replicates") = 100, py::arg("variance_threshold") = 0.9, py::arg("seed") = 0);
    m.def("rf_distance", &rf, py::arg("points1"), py::arg("labels1"), py::arg("points2"), py::arg("labels2"));
    m.def("stability", &stability, py::arg("points"), py::arg("labels"), py::arg("reps") = 30,
          py::arg("noise_sd") = py::none(), py::arg("seed") = 0);
    m.def("project", &project, py::arg("x"), py::arg("path"), py::arg("pca_dims") = 10, py::arg("degree") = 2,
          py::arg("lam") = py::none(), py::arg("folds") = 5);
    m.def("density", &density, py::arg("coords"), py::arg("bandwidth"), py::arg("resolution") = 101);
    m.def("null_density", &null_density, py::arg("n1"), py::arg("n2"), py::arg("c"), py::arg("eps"));
    m.def("power", &power, py::arg("c"), py::arg("p"), py::arg("trials") = 100, py::arg("replicates") = 100,
          py::arg("n_each") = 50, py::arg("alpha") = 0.05, py::arg("seed") = 0);

    py::class_<PySessionStore>(m, "SessionStore")
        .def(py::init<std::optional<std::uint64_t>>(), py::arg("seed") = py::none())
        .def("call", &PySessionStore::call, py::arg("op"), py::arg("id") = "", py::arg("body") = "");
}
