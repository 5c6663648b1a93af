#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "npdual/io.hpp"
#include "npdual/oracle.hpp"

namespace py = pybind11;

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

py::object json_to_py(const ordered_json& j) {
  switch (j.type()) {
    case ordered_json::value_t::null:
      return py::none();
    case ordered_json::value_t::boolean:
      return py::bool_(j.get<bool>());
    case ordered_json::value_t::number_integer:
      return py::int_(j.get<long long>());
    case ordered_json::value_t::number_unsigned:
      return py::int_(j.get<unsigned long long>());
    case ordered_json::value_t::number_float:
      return py::float_(j.get<double>());
    case ordered_json::value_t::string:
      return py::str(j.get<std::string>());
    case ordered_json::value_t::array: {
      py::list out;
      for (const ordered_json& item : j) out.append(json_to_py(item));
      return out;
    }
    case ordered_json::value_t::object: {
      py::dict out;
      for (const auto& [key, value] : j.items())
        out[py::str(key)] = json_to_py(value);
      return out;
    }
    default:
      return py::none();
  }
}

json py_to_json(const py::handle& obj) {
  if (obj.is_none()) return nullptr;
  if (py::isinstance<py::bool_>(obj)) return obj.cast<bool>();
  if (py::isinstance<py::int_>(obj)) return obj.cast<long long>();
  if (py::isinstance<py::float_>(obj)) return obj.cast<double>();
  if (py::isinstance<py::str>(obj)) return obj.cast<std::string>();
  if (py::isinstance<py::dict>(obj)) {
    json out = json::object();
    for (const auto& item : obj.cast<py::dict>())
      out[item.first.cast<std::string>()] = py_to_json(item.second);
    return out;
  }
  if (py::isinstance<py::sequence>(obj)) {
    json out = json::array();
    for (const py::handle& item : obj.cast<py::sequence>())
      out.push_back(py_to_json(item));
    return out;
  }
  throw npdual::Error(npdual::ErrorCode::InvalidArgument,
                      "unsupported value in spec dictionary");
}

npdual::TestingProblem make_problem(std::vector<std::string> atoms,
                                    std::vector<double> reference,
                                    std::vector<std::vector<double>> null_densities,
                                    std::vector<std::vector<double>> alt_densities,
                                    std::vector<double> alphas) {
  npdual::ProblemData data{std::move(atoms), std::move(reference),
                           std::move(null_densities), std::move(alt_densities),
                           std::move(alphas)};
  return npdual::validate_problem(data);
}

ordered_json solve_to_json(const npdual::SolveReport& report) {
  ordered_json j;
  j["lower"] = report.lower_value;
  j["middle"] = report.middle_value;
  j["dual"] = report.dual_value;
  j["gap"] = report.gap;
  j["test"] = report.primal.test.values();
  j["sizes"] = report.primal.sizes;
  j["powers"] = report.powers;
  j["alt_weights"] = report.dual.alt_weights;
  ordered_json prior;
  prior["weights"] = report.dual.prior.weights();
  prior["total_mass"] = report.dual.prior.total_mass();
  j["prior"] = std::move(prior);
  j["lp_iterations"] = report.lp_iterations;
  return j;
}

py::dict gaussian_to_py(const npdual::GaussianXbarSpec& spec, double alpha,
                        std::optional<std::uint64_t> seed, long trials,
                        double tol_gap, double tol_slack) {
  npdual::GaussianProblem gp = npdual::gaussian_xbar_problem(spec, alpha);
  npdual::AnalysisBundle bundle =
      npdual::analyze(gp.problem, seed, trials, tol_gap, tol_slack);
  npdual::LfpReport report = npdual::lfp_report(gp, bundle.solve);
  return json_to_py(npdual::lfp_to_json(gp, report, bundle)).cast<py::dict>();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Composite-vs-composite testing by linear programming with dual certificates";
  py::register_exception<npdual::Error>(m, "Error");

  py::class_<npdual::TestingProblem>(m, "Problem")
      .def_property_readonly("atom_count", &npdual::TestingProblem::atom_count)
      .def_property_readonly("null_count", &npdual::TestingProblem::null_count)
      .def_property_readonly("alt_count", &npdual::TestingProblem::alt_count)
      .def_property_readonly("alphas", &npdual::TestingProblem::alphas)
      .def_property_readonly(
          "atoms",
          [](const npdual::TestingProblem& p) { return p.reference().labels(); })
      .def("__repr__", [](const npdual::TestingProblem& p) {
        return "Problem(atoms=" + std::to_string(p.atom_count()) +
               ", null=" + std::to_string(p.null_count()) +
               ", alt=" + std::to_string(p.alt_count()) + ")";
      });

  m.def(
      "make_problem",
      [](std::vector<std::string> atoms, std::vector<double> reference,
         std::vector<std::vector<double>> nulls,
         std::vector<std::vector<double>> alts, double alpha) {
        return make_problem(std::move(atoms), std::move(reference),
                            std::move(nulls), std::move(alts), {alpha});
      },
      py::arg("atoms"), py::arg("reference"), py::arg("null"), py::arg("alt"),
      py::arg("alpha"),
      "Builds and validates a testing problem with a common significance level.");
  m.def(
      "make_problem",
      [](std::vector<std::string> atoms, std::vector<double> reference,
         std::vector<std::vector<double>> nulls,
         std::vector<std::vector<double>> alts, std::vector<double> alphas) {
        return make_problem(std::move(atoms), std::move(reference),
                            std::move(nulls), std::move(alts), std::move(alphas));
      },
      py::arg("atoms"), py::arg("reference"), py::arg("null"), py::arg("alt"),
      py::arg("alpha"),
      "Builds and validates a testing problem with per-member levels.");

  m.def(
      "load_problem",
      [](const std::string& path) { return npdual::load_problem_file(path); },
      py::arg("path"), "Loads a problem from a JSON file.");

  m.def(
      "solve",
      [](const npdual::TestingProblem& problem) {
        return json_to_py(solve_to_json(npdual::solve_maxmin(problem)));
      },
      py::arg("problem"),
      "Solves the max-min problem; returns values, test, and dual pair.");

  m.def(
      "analyze",
      [](const npdual::TestingProblem& problem,
         std::optional<std::uint64_t> seed, long saddle_trials, double tol_gap,
         double tol_slack) {
        npdual::AnalysisBundle bundle =
            npdual::analyze(problem, seed, saddle_trials, tol_gap, tol_slack);
        return json_to_py(npdual::bundle_to_json(problem, bundle));
      },
      py::arg("problem"), py::arg("seed") = std::nullopt,
      py::arg("saddle_trials") = 1000, py::arg("tol_gap") = 1e-7,
      py::arg("tol_slack") = 1e-7,
      "Solves and runs the certificate chain; the saddle spot-check runs only "
      "when a seed is given.");

  m.def(
      "evaluate_size",
      [](const npdual::TestingProblem& problem, std::vector<double> test) {
        npdual::SizeResult r =
            npdual::evaluate_size(problem, npdual::RandomizedTest(std::move(test)));
        py::dict out;
        out["per_member"] = r.per_member;
        out["worst"] = r.worst;
        return out;
      },
      py::arg("problem"), py::arg("test"));

  m.def(
      "evaluate_power",
      [](const npdual::TestingProblem& problem, std::vector<double> test) {
        npdual::PowerResult r = npdual::evaluate_power(
            problem, npdual::RandomizedTest(std::move(test)));
        py::dict out;
        out["per_member"] = r.per_member;
        out["worst"] = r.worst;
        return out;
      },
      py::arg("problem"), py::arg("test"));

  m.def(
      "dual_objective",
      [](const npdual::TestingProblem& problem, std::vector<double> alt_weights,
         std::vector<double> prior_weights) {
        return npdual::dual_objective(problem, alt_weights,
                                      npdual::Prior(std::move(prior_weights)));
      },
      py::arg("problem"), py::arg("alt_weights"), py::arg("prior"),
      "Dual objective for an alternative mixture and a nonnegative prior.");

  m.def(
      "classic_np",
      [](const npdual::TestingProblem& problem) {
        npdual::ClassicNpResult r = npdual::classic_np(problem);
        py::dict out;
        out["quantile"] = r.quantile;
        out["delta"] = r.delta;
        out["test"] = r.test.values();
        out["size"] = r.size;
        out["power"] = r.power;
        return out;
      },
      py::arg("problem"),
      "Likelihood-ratio oracle for singleton-vs-singleton problems.");

  m.def(
      "grid_bruteforce",
      [](const npdual::TestingProblem& problem, unsigned steps) {
        npdual::BruteForceResult r = npdual::grid_bruteforce(problem, steps);
        py::dict out;
        out["value"] = r.value;
        out["test"] = r.test.values();
        out["evaluated"] = r.evaluated;
        out["feasible"] = r.feasible;
        return out;
      },
      py::arg("problem"), py::arg("steps"),
      "Exhaustive search over tests on a value grid; small problems only.");

  m.def(
      "gaussian_case_spec",
      [](int case_id) {
        if (case_id != 1 && case_id != 2)
          throw npdual::Error(npdual::ErrorCode::InvalidArgument,
                              "case must be 1 or 2");
        const npdual::GaussianXbarSpec spec =
            case_id == 1 ? npdual::gaussian_case1_preset()
                         : npdual::gaussian_case2_preset();
        ordered_json j;
        j["side"] = spec.side;
        j["n"] = spec.n;
        j["xi1"] = spec.xi1;
        j["sigma1_sq"] = spec.sigma1_sq;
        j["sigma0_sq"] = spec.sigma0_sq;
        j["xi_grid"] = spec.xi_grid;
        j["sigma_sq_grid"] = spec.sigma_sq_grid;
        j["x_grid"] = spec.x_grid;
        return json_to_py(j);
      },
      py::arg("case_id"), "Preset binned Gaussian mean-test specification.");

  m.def(
      "solve_gaussian",
      [](const py::dict& spec_dict, double alpha,
         std::optional<std::uint64_t> seed, long saddle_trials, double tol_gap,
         double tol_slack) {
        npdual::GaussianXbarSpec spec =
            npdual::parse_gaussian_spec(py_to_json(spec_dict));
        return gaussian_to_py(spec, alpha, seed, saddle_trials, tol_gap,
                              tol_slack);
      },
      py::arg("spec"), py::arg("alpha") = 0.1, py::arg("seed") = std::nullopt,
      py::arg("saddle_trials") = 1000, py::arg("tol_gap") = 1e-7,
      py::arg("tol_slack") = 1e-7,
      "Solves a binned Gaussian mean-test family and reports the least "
      "favorable prior shape.");
}
