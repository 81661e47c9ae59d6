#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qmp/bench.hpp"
#include "qmp/config.hpp"
#include "qmp/dynamics.hpp"
#include "qmp/errors.hpp"
#include "qmp/estimator.hpp"
#include "qmp/lattice.hpp"
#include "qmp/planners.hpp"
#include "qmp/probability.hpp"
#include "qmp/qsearch.hpp"

namespace py = pybind11;
using namespace qmp;

namespace {

std::vector<std::vector<double>> mat_rows(const Eigen::Matrix2d& m) {
    return {{m(0, 0), m(0, 1)}, {m(1, 0), m(1, 1)}};
}

Eigen::Matrix2d mat_from(const std::array<double, 4>& v) {
    Eigen::Matrix2d m;
    m << v[0], v[1], v[2], v[3];
    return m;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "quantum-search motion planning laboratory core";

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<CapacityError>(m, "CapacityError", PyExc_ValueError);
    py::register_exception<ShapeError>(m, "ShapeError", PyExc_ValueError);
    py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);
    py::register_exception<NormalizationError>(m, "NormalizationError", PyExc_ValueError);
    py::register_exception<NoSolutionsError>(m, "NoSolutionsError", PyExc_ValueError);
    py::register_exception<EmptyFreeSpaceError>(m, "EmptyFreeSpaceError", PyExc_RuntimeError);
    py::register_exception<SamplingError>(m, "SamplingError", PyExc_RuntimeError);
    py::register_exception<NoPathFoundError>(m, "NoPathFoundError", PyExc_RuntimeError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    static py::exception<PartialTreeError> partial_exc(m, "PartialTreeError");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const PartialTreeError& e) {
            PyErr_SetString(partial_exc.ptr(), e.what());
        }
    });

    py::class_<Rng>(m, "Rng").def(py::init<uint64_t>(), py::arg("seed"));

    py::class_<Vec2>(m, "Vec2")
        .def(py::init<>())
        .def(py::init([](double x, double y) { return Vec2{x, y}; }), py::arg("x"), py::arg("y"))
        .def_readwrite("x", &Vec2::x)
        .def_readwrite("y", &Vec2::y)
        .def("__repr__", [](const Vec2& v) {
            return "Vec2(" + std::to_string(v.x) + ", " + std::to_string(v.y) + ")";
        });
    m.def("dist2", &dist2);

    // quantum search
    py::class_<QuantumRegister>(m, "QuantumRegister")
        .def_readonly("n", &QuantumRegister::n)
        .def_readonly("amp", &QuantumRegister::amp)
        .def("size", &QuantumRegister::size);
    py::class_<OracleMask>(m, "OracleMask")
        .def(py::init([](const std::vector<bool>& truth) {
                 OracleMask mk;
                 mk.truth.assign(truth.begin(), truth.end());
                 return mk;
             }),
             py::arg("truth"))
        .def_property_readonly("truth",
                               [](const OracleMask& mk) {
                                   return std::vector<bool>(mk.truth.begin(), mk.truth.end());
                               })
        .def_readonly("calls", &OracleMask::calls)
        .def("m", &OracleMask::m);
    m.attr("REGISTER_CAP") = kRegisterCap;
    m.def("uniform_superposition", &uniform_superposition, py::arg("n"));
    m.def("grover_iterate", &grover_iterate);
    m.def("amplify", &amplify, py::arg("reg"), py::arg("mask"), py::arg("iterations"));
    m.def("optimal_iterations", &optimal_iterations, py::arg("N"), py::arg("m"));
    m.def("marked_probability", &marked_probability);
    m.def("measure", &measure);
    m.def("measure_many", &measure_many);
    m.def("count_solutions", [](const OracleMask& mk) {
        uint64_t cost = 0;
        const uint64_t count = count_solutions(mk, cost);
        return py::make_tuple(count, cost);
    });
    m.def("count_solutions_noisy", [](const OracleMask& mk, double eps) {
        uint64_t cost = 0;
        const uint64_t count = count_solutions_noisy(mk, eps, cost);
        return py::make_tuple(count, cost);
    });

    // error calculus
    m.def("success_probability", &success_probability, py::arg("N"), py::arg("m"), py::arg("i"));
    m.def("p_bad", &p_bad, py::arg("N"), py::arg("m"));
    m.def("p_bad_at", &p_bad_at, py::arg("N"), py::arg("m"), py::arg("i"));
    m.def("p_bad_limit", &p_bad_limit, py::arg("r"));
    m.def("p_any_bad_tree", &p_any_bad_tree, py::arg("r"), py::arg("M"));
    m.def("p_any_bad_path", &p_any_bad_path, py::arg("r"), py::arg("path_len"));
    m.def("linear_approx_pbad", &linear_approx_pbad, py::arg("x"));

    // lattice
    py::class_<Lattice>(m, "Lattice")
        .def_readonly("d", &Lattice::d)
        .def_readonly("L", &Lattice::L)
        .def_readonly("r", &Lattice::r)
        .def_readonly("seed", &Lattice::seed)
        .def_readonly("periodic", &Lattice::periodic)
        .def("cell_count", &Lattice::cell_count)
        .def("occ", [](const Lattice& lat, int x, int y) { return lat.occ(lat.idx2(x, y)); });
    py::class_<ComponentLabels>(m, "ComponentLabels")
        .def_readonly("sizes", &ComponentLabels::sizes)
        .def_readonly("largest", &ComponentLabels::largest)
        .def_property_readonly("free_count",
                               [](const ComponentLabels& cl) { return cl.free_cells.size(); });
    m.def("generate_lattice", &generate_lattice, py::arg("d"), py::arg("L"), py::arg("r"),
          py::arg("seed"), py::arg("periodic") = false);
    m.def("components", &components);
    m.def("in_bounds", &in_bounds);
    m.def("cell_of", &cell_of);
    m.def("sample_free", &sample_free);
    m.def("sample_component", &sample_component);
    m.def("same_component", &same_component);
    m.def("lattice_to_text", &to_text);
    m.def("lattice_from_text", &from_text);
    m.def("save_lattice", &save_lattice);
    m.def("load_lattice", &load_lattice);

    // dynamics
    py::enum_<DynMode>(m, "DynMode")
        .value("Euler", DynMode::Euler)
        .value("LiteralDiscrete", DynMode::LiteralDiscrete);
    py::class_<LinearPlannerConfig>(m, "LinearPlannerConfig")
        .def(py::init<>())
        .def_readwrite("mode", &LinearPlannerConfig::mode)
        .def_readwrite("step_h", &LinearPlannerConfig::step_h)
        .def_readwrite("eps", &LinearPlannerConfig::eps)
        .def_readwrite("max_steps", &LinearPlannerConfig::max_steps)
        .def_readwrite("collide_ds", &LinearPlannerConfig::collide_ds)
        .def("set_gains",
             [](LinearPlannerConfig& c, const std::array<double, 4>& a,
                const std::array<double, 4>& b, const std::array<double, 4>& k) {
                 c.A = mat_from(a);
                 c.B = mat_from(b);
                 c.K = mat_from(k);
             },
             py::arg("A"), py::arg("B"), py::arg("K"))
        .def("closed_loop", [](const LinearPlannerConfig& c) { return mat_rows(c.closed_loop()); })
        .def("step_matrix", [](const LinearPlannerConfig& c) { return mat_rows(c.step_matrix()); });
    py::class_<Trajectory>(m, "Trajectory")
        .def_readonly("points", &Trajectory::points)
        .def_readonly("converged", &Trajectory::converged)
        .def_readonly("steps", &Trajectory::steps);
    m.def("track", &track, py::arg("from_"), py::arg("to"), py::arg("cfg"));
    m.def("path_collision_free", &path_collision_free);
    m.def("reachable", &reachable);

    // connectivity models
    py::class_<PStarModel>(m, "PStarModel")
        .def(py::init<>())
        .def_readwrite("a", &PStarModel::a)
        .def_readwrite("b", &PStarModel::b)
        .def_readwrite("c", &PStarModel::c)
        .def_readwrite("d", &PStarModel::d)
        .def_readwrite("f", &PStarModel::f);
    py::class_<L1Model>(m, "L1Model")
        .def(py::init<>())
        .def_readwrite("a", &L1Model::a)
        .def_readwrite("b", &L1Model::b)
        .def_readwrite("c", &L1Model::c)
        .def_readwrite("L_fit", &L1Model::L_fit);
    py::class_<ConnectivitySample>(m, "ConnectivitySample")
        .def(py::init<>())
        .def_readwrite("r", &ConnectivitySample::r)
        .def_readwrite("L", &ConnectivitySample::L)
        .def_readwrite("periodic", &ConnectivitySample::periodic)
        .def_readwrite("trials", &ConnectivitySample::trials)
        .def_readwrite("lattice_count", &ConnectivitySample::lattice_count)
        .def_readwrite("p_hat", &ConnectivitySample::p_hat)
        .def_readwrite("std_err", &ConnectivitySample::std_err)
        .def_readwrite("regenerated", &ConnectivitySample::regenerated);
    py::class_<PStarFit>(m, "PStarFit")
        .def_readonly("model", &PStarFit::model)
        .def_readonly("r2", &PStarFit::r2)
        .def_readonly("iterations", &PStarFit::iterations);
    py::class_<L1Fit>(m, "L1Fit")
        .def_readonly("model", &L1Fit::model)
        .def_readonly("r2", &L1Fit::r2)
        .def_readonly("iterations", &L1Fit::iterations);
    m.def("pstar_paper", &pstar_paper);
    m.def("l1_paper_L72", &l1_paper_L72);
    m.def("p_star", &p_star, py::arg("model"), py::arg("r"), py::arg("L"));
    m.def("p_star_raw", &p_star_raw, py::arg("model"), py::arg("r"), py::arg("L"));
    m.def("p2_star", &p2_star, py::arg("model"), py::arg("r"), py::arg("L"), py::arg("M"),
          py::arg("factor") = 3.0);
    m.def("l1_probability", &l1_probability, py::arg("model"), py::arg("r"), py::arg("D"));
    m.def("l1_distance_for_budget", &l1_distance_for_budget, py::arg("model"), py::arg("n_x"),
          py::arg("r"));
    m.def("monte_carlo_connectivity", &monte_carlo_connectivity, py::arg("r"), py::arg("L"),
          py::arg("trials"), py::arg("lattice_count"), py::arg("periodic"), py::arg("seed"));
    m.def("fit_pstar", &fit_pstar, py::arg("data"), py::arg("init"));
    m.def("fit_l1",
          [](const std::vector<std::tuple<double, double, double>>& data, const L1Model& init) {
              std::vector<L1Point> pts;
              pts.reserve(data.size());
              for (const auto& [r, D, p] : data) pts.push_back({r, D, p});
              return fit_l1(pts, init);
          },
          py::arg("data"), py::arg("init"));

    // planners
    py::enum_<IterEstimate>(m, "IterEstimate")
        .value("P1", IterEstimate::P1)
        .value("P2", IterEstimate::P2)
        .value("Exact", IterEstimate::Exact);
    py::class_<PlannerConfig>(m, "PlannerConfig")
        .def(py::init<>())
        .def_readwrite("n", &PlannerConfig::n)
        .def_readwrite("max_retries", &PlannerConfig::max_retries)
        .def_readwrite("final_check", &PlannerConfig::final_check)
        .def_readwrite("iter_estimate", &PlannerConfig::iter_estimate)
        .def_readwrite("clamp_p", &PlannerConfig::clamp_p)
        .def_readwrite("p2_factor", &PlannerConfig::p2_factor)
        .def_readwrite("qfps_k", &PlannerConfig::qfps_k)
        .def_readwrite("qfps_sigma", &PlannerConfig::qfps_sigma)
        .def_readwrite("rrt_sample_budget", &PlannerConfig::rrt_sample_budget)
        .def_readwrite("dyn", &PlannerConfig::dyn);
    py::class_<PlannerReport>(m, "PlannerReport")
        .def_readonly("seed", &PlannerReport::seed)
        .def_readonly("oracle_calls", &PlannerReport::oracle_calls)
        .def_readonly("counting_cost", &PlannerReport::counting_cost)
        .def_readonly("nodes_added", &PlannerReport::nodes_added)
        .def_readonly("retries", &PlannerReport::retries);
    py::class_<Tree>(m, "Tree")
        .def_readonly("root_state", &Tree::root_state)
        .def("size", &Tree::size)
        .def("nodes",
             [](const Tree& t) {
                 std::vector<std::tuple<double, double, int>> out;
                 out.reserve(t.nodes.size());
                 for (const auto& nd : t.nodes) out.push_back({nd.state.x, nd.state.y, nd.parent});
                 return out;
             })
        .def("csv", &tree_csv);
    py::class_<TreeResult>(m, "TreeResult")
        .def_readonly("tree", &TreeResult::tree)
        .def_readonly("report", &TreeResult::report);
    py::class_<QfpsResult>(m, "QfpsResult")
        .def_readonly("path", &QfpsResult::path)
        .def_readonly("report", &QfpsResult::report);
    m.def("qrrt", &qrrt, py::arg("x0"), py::arg("n"), py::arg("M"), py::arg("lat"), py::arg("cfg"),
          py::arg("rng"));
    m.def("classical_rrt", &classical_rrt, py::arg("x0"), py::arg("M"), py::arg("lat"),
          py::arg("cfg"), py::arg("rng"));
    m.def("qfps", &qfps, py::arg("x0"), py::arg("xG"), py::arg("n"), py::arg("lat"), py::arg("cfg"),
          py::arg("rng"));
    m.def("verify_tree", &verify_tree);
    m.def("save_tree", &save_tree);
    m.def("load_tree", &load_tree);

    // bench
    m.def("amplitude_table", [](int n, uint64_t marked, int i_max) {
        std::vector<std::tuple<int, double, double>> out;
        for (const auto& row : bench::amplitude_table(n, marked, i_max))
            out.push_back({row.i, row.sim, row.closed});
        return out;
    });
    m.def("known_experiments", []() {
        std::vector<std::tuple<std::string, uint64_t, std::string>> out;
        for (const auto& e : bench::known_experiments())
            out.push_back({e.id, e.default_seed, e.description});
        return out;
    });
    m.def("run_experiment",
          [](const std::string& id, const std::string& config_text, const std::string& out_path,
             bool fast) { return bench::run(id, parse_config(config_text), out_path, fast); },
          py::arg("id"), py::arg("config_text") = "", py::arg("out_path") = "out.csv",
          py::arg("fast") = true);
}
