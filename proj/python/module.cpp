#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "sbm/audit.hpp"
#include "sbm/io.hpp"
#include "sbm/linalg.hpp"
#include "sbm/model.hpp"
#include "sbm/recovery.hpp"
#include "sbm/rng.hpp"
#include "sbm/solver.hpp"

namespace py = pybind11;
using namespace sbm;

PYBIND11_MODULE(_core, m) {
  m.doc() = "SDP community detection for sparse block models";

  py::class_<CommunityAssignment>(m, "CommunityAssignment")
      .def(py::init<std::vector<int>>())
      .def_property_readonly("labels", &CommunityAssignment::labels)
      .def_property_readonly("community_count", &CommunityAssignment::community_count)
      .def("community_sizes", &CommunityAssignment::community_sizes)
      .def("__len__", &CommunityAssignment::size);

  py::class_<ModelSpec>(m, "ModelSpec")
      .def_static("classical", &ModelSpec::classical, py::arg("n"), py::arg("p"),
                  py::arg("q"))
      .def_static("balanced", &ModelSpec::balanced, py::arg("K"), py::arg("s"),
                  py::arg("p"), py::arg("q"))
      .def_static("general", &ModelSpec::general, py::arg("prob"),
                  py::arg("assignment"), py::arg("p"), py::arg("q"))
      .def("validate", &ModelSpec::validate)
      .def("truth_assignment", &ModelSpec::truth_assignment)
      .def_readonly("n", &ModelSpec::n)
      .def_readonly("p", &ModelSpec::p)
      .def_readonly("q", &ModelSpec::q)
      .def_readonly("K", &ModelSpec::K)
      .def_readonly("s", &ModelSpec::s);

  py::class_<GroundTruth>(m, "GroundTruth")
      .def_readonly("has_x", &GroundTruth::has_x)
      .def_readonly("x", &GroundTruth::x)
      .def_readonly("Z", &GroundTruth::Z)
      .def_readonly("P", &GroundTruth::P);

  py::class_<ModelStatistics>(m, "ModelStatistics")
      .def_readonly("pbar", &ModelStatistics::pbar)
      .def_readonly("g", &ModelStatistics::g)
      .def_readonly("a", &ModelStatistics::a)
      .def_readonly("b", &ModelStatistics::b);

  m.def("sample_graph", &sample_graph, py::arg("spec"), py::arg("seed"));
  m.def("expected_adjacency", &expected_adjacency, py::arg("spec"));
  m.def("ground_truth", &ground_truth, py::arg("spec"));
  m.def("model_statistics", &model_statistics, py::arg("spec"));
  m.def("expected_lambda", &expected_lambda, py::arg("spec"));
  m.def("derive_stream", &derive_stream, py::arg("master_seed"), py::arg("index"));

  py::enum_<DiagMode>(m, "DiagMode")
      .value("INEQUALITY", DiagMode::Inequality)
      .value("EQUALITY", DiagMode::Equality);

  py::class_<FeasibleSet>(m, "FeasibleSet")
      .def_static("grothendieck_psd", &FeasibleSet::grothendieck_psd)
      .def_static("sum_constrained", &FeasibleSet::sum_constrained,
                  py::arg("lambda_"))
      .def_static("k_community", &FeasibleSet::k_community, py::arg("K"),
                  py::arg("diag_mode") = DiagMode::Inequality)
      .def_readonly("lambda_", &FeasibleSet::lambda)
      .def_readonly("K", &FeasibleSet::K);

  py::class_<SolverConfig>(m, "SolverConfig")
      .def(py::init<>())
      .def_readwrite("rho", &SolverConfig::rho)
      .def_readwrite("max_iterations", &SolverConfig::max_iterations)
      .def_readwrite("tol_primal", &SolverConfig::tol_primal)
      .def_readwrite("tol_dual", &SolverConfig::tol_dual)
      .def_readwrite("over_relaxation", &SolverConfig::over_relaxation);

  py::class_<SdpSolution>(m, "SdpSolution")
      .def_readonly("Z", &SdpSolution::Z)
      .def_readonly("objective", &SdpSolution::objective)
      .def_readonly("primal_residual", &SdpSolution::primal_residual)
      .def_readonly("dual_residual", &SdpSolution::dual_residual)
      .def_readonly("iterations", &SdpSolution::iterations)
      .def_readonly("converged", &SdpSolution::converged);

  m.def("solve", &solve, py::arg("B"), py::arg("set"),
        py::arg("config") = SolverConfig{},
        py::call_guard<py::gil_scoped_release>());
  m.def("project_entrywise", &project_entrywise, py::arg("W"), py::arg("set"));
  m.def("feasibility_violation", &feasibility_violation, py::arg("Z"),
        py::arg("set"));
  m.def("duality_gap_certificate", &duality_gap_certificate, py::arg("B"),
        py::arg("set"), py::arg("solution"), py::arg("feas_tol") = 1e-4);

  py::enum_<RankMode>(m, "RankMode")
      .value("TWO_K_MINUS_3", RankMode::TwoKMinus3)
      .value("K_MINUS_1", RankMode::KMinus1);
  py::enum_<ErrorTarget>(m, "ErrorTarget")
      .value("XXT", ErrorTarget::XxT)
      .value("ZBAR", ErrorTarget::Zbar);

  m.def("estimate_lambda", &estimate_lambda, py::arg("A"));
  m.def("lambda_cluster_count", &lambda_cluster_count, py::arg("assignment"));
  m.def("round_leading_eigenvector", &round_leading_eigenvector, py::arg("Zhat"));
  m.def("spectral_projection", &spectral_projection, py::arg("Zhat"), py::arg("K"),
        py::arg("rank_mode") = RankMode::KMinus1);
  m.def("labels_from_projection", &labels_from_projection, py::arg("Phat"),
        py::arg("K"), py::arg("seed"));
  m.def("misclassification", &misclassification, py::arg("estimated"),
        py::arg("truth"));
  m.def("matrix_errors", &matrix_errors, py::arg("Zhat"), py::arg("truth"),
        py::arg("target"));

  m.def("cut_norm_exact", &cut_norm_exact, py::arg("B"),
        py::call_guard<py::gil_scoped_release>());
  m.def("cut_norm_lower", &cut_norm_lower, py::arg("B"), py::arg("restarts"),
        py::arg("seed"), py::call_guard<py::gil_scoped_release>());
  m.def("psd_project", &psd_project, py::arg("M"));

  py::enum_<CutNormMode>(m, "CutNormMode")
      .value("EXACT", CutNormMode::Exact)
      .value("LOWER", CutNormMode::Lower);

  py::class_<AuditTrial>(m, "AuditTrial")
      .def_readonly("trial", &AuditTrial::trial)
      .def_readonly("observed", &AuditTrial::observed)
      .def_readonly("bound", &AuditTrial::bound)
      .def_readonly("hypothesis_ok", &AuditTrial::hypothesis_ok)
      .def_readonly("violation", &AuditTrial::violation)
      .def_readonly("aborted", &AuditTrial::aborted);

  py::class_<AuditReport>(m, "AuditReport")
      .def_readonly("claim_id", &AuditReport::claim_id)
      .def_readonly("trials", &AuditReport::trials)
      .def_readonly("violations", &AuditReport::violations)
      .def_readonly("aborted", &AuditReport::aborted)
      .def_readonly("hypothesis_ok", &AuditReport::hypothesis_ok)
      .def_readonly("margin_min", &AuditReport::margin_min)
      .def_readonly("margin_mean", &AuditReport::margin_mean)
      .def_readonly("rows", &AuditReport::rows)
      .def("to_csv", [](const AuditReport& r) {
        std::ostringstream os;
        r.write_csv(os);
        return os.str();
      });

  m.def("audit_deviation", &audit_deviation, py::arg("spec"), py::arg("trials"),
        py::arg("seed"), py::arg("mode"),
        py::call_guard<py::gil_scoped_release>());
  m.def("audit_sum_deviation", &audit_sum_deviation, py::arg("spec"),
        py::arg("trials"), py::arg("seed"),
        py::call_guard<py::gil_scoped_release>());
  m.def("audit_grothendieck_psd", &audit_grothendieck_psd, py::arg("n"),
        py::arg("trials"), py::arg("seed"), py::arg("config") = SolverConfig{},
        py::call_guard<py::gil_scoped_release>());
  m.def("audit_almost_maximizer", &audit_almost_maximizer, py::arg("spec"),
        py::arg("trials"), py::arg("seed"), py::arg("config") = SolverConfig{},
        py::call_guard<py::gil_scoped_release>());
  m.def("audit_distinguishing", &audit_distinguishing, py::arg("spec"),
        py::arg("trials"), py::arg("seed"),
        py::call_guard<py::gil_scoped_release>());

  m.def("write_matrix_market_file", &write_matrix_market_file, py::arg("path"),
        py::arg("A"));
  m.def("read_matrix_market_file", &read_matrix_market_file, py::arg("path"));
  m.def("write_assignment_file", &write_assignment_file, py::arg("path"),
        py::arg("assignment"));
  m.def("read_assignment_file", &read_assignment_file, py::arg("path"));

  m.attr("GROTHENDIECK_CONSTANT") = kGrothendieckConstant;
}
