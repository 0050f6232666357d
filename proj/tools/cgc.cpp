#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "json.hpp"

#include "cgc/config.hpp"
#include "cgc/error.hpp"
#include "cgc/hodge.hpp"
#include "cgc/hyper3d.hpp"
#include "cgc/mesh.hpp"
#include "cgc/suites.hpp"
#include "cgc/symplectic.hpp"
#include "cgc/tensor.hpp"
#include "cgc/wolf.hpp"

using namespace cgc;
using json = nlohmann::ordered_json;

namespace {

enum Exit { Pass = 0, CheckFailure = 1, UsageError = 2, SolverFailure = 3 };

int exit_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonConvergence:
    case ErrorCode::ReconstructionFailure:
    case ErrorCode::PositivityLoss:
    case ErrorCode::NotPositiveDefinite:
    case ErrorCode::SingularOperator:
    case ErrorCode::FocalPoint:
    case ErrorCode::RankDeficient:
      return SolverFailure;
    default:
      return UsageError;
  }
}

bool is_solver_code(const std::string& error) {
  for (const char* c : {"NON_CONVERGENCE", "RECONSTRUCTION_FAILURE", "POSITIVITY_LOSS", "NOT_POSITIVE_DEFINITE",
                        "SINGULAR_OPERATOR", "FOCAL_POINT", "RANK_DEFICIENT"})
    if (error.rfind(c, 0) == 0) return true;
  return false;
}

// Command-line values collected before they are merged into the run configuration.
struct Flags {
  std::string configPath;
  std::vector<std::string> settings;
  std::optional<std::string> mesh;
  std::optional<int> refine;
  std::optional<std::string> k;
  std::optional<std::string> q;
  std::optional<std::string> suite;
  std::optional<std::string> outDir;
  std::vector<std::string> tol;
  std::string out;
  std::string kGrid;
  int chi = 4;
};

RunConfig build_config(const Flags& f) {
  RunConfig c = f.configPath.empty() ? RunConfig{} : read_config(f.configPath);
  for (const std::string& s : f.settings) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::Usage, "--set expects key=value, got '" + s + "'");
    apply_setting(c, s.substr(0, eq), s.substr(eq + 1));
  }
  if (f.mesh) c.meshPath = *f.mesh;
  if (f.refine) c.refinement = *f.refine;
  if (f.k) c.kList = parse_real_list(*f.k);
  if (f.q) apply_setting(c, "q", *f.q);
  if (f.suite) apply_setting(c, "suite", *f.suite);
  if (f.outDir) c.outputDir = *f.outDir;
  for (const std::string& t : f.tol) {
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      c.toleranceOverrides["*"] = parse_real_list(t).at(0);
    else
      apply_setting(c, "tol." + t.substr(0, eq), t.substr(eq + 1));
  }
  c.validate();
  return c;
}

SurfaceMesh load_mesh(const RunConfig& c) {
  return c.meshPath.empty() ? build_bolza(c.refinement) : read_mesh(c.meshPath);
}

QuadraticDifferential assemble_q(const RunConfig& c, const QdBasis& basis) {
  QuadraticDifferential q(basis.elements[0].size());
  for (int i = 0; i < 3; ++i) q = q + Complex(c.qCoefficients[2 * i], c.qCoefficients[2 * i + 1]) * basis.elements[i];
  return q;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path + " for writing");
  out << text << '\n';
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path);
}

std::filesystem::path output_dir(const RunConfig& c) {
  std::filesystem::path dir(c.outputDir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + dir.string());
  return dir;
}

json residual_json(const KSurface& s, const SurfaceMesh& m) {
  json j;
  j["k"] = s.k;
  j["newtonIters"] = s.iterations;
  j["curvatureResidual"] = s.residuals.curvature;
  j["codazziResidual"] = s.residuals.codazzi;
  j["gaussResidual"] = s.residuals.gauss;
  j["conformalityResidual"] = s.residuals.conformality;
  j["eq21Residual"] = s.residuals.eq21;
  j["jValue"] = j_functional(s.pair, m);
  j["mk"] = mk(s.data, m);
  return j;
}

int cmd_mesh(const Flags& f) {
  const RunConfig c = build_config(f);
  const SurfaceMesh m = build_bolza(c.refinement);
  if (f.out.empty())
    write_mesh(std::cout, m);
  else
    write_mesh(f.out, m);
  return Pass;
}

int cmd_basis(const Flags& f) {
  const RunConfig c = build_config(f);
  const SurfaceMesh m = load_mesh(c);
  const QdBasis basis = holomorphic_qd_basis(m);
  const std::filesystem::path dir = output_dir(c);
  for (int i = 0; i < 3; ++i) write_basis_csv((dir / ("basis_" + std::to_string(i) + ".csv")).string(), basis.elements[i]);
  return Pass;
}

int cmd_solve(const Flags& f) {
  const RunConfig c = build_config(f);
  const SurfaceMesh m = load_mesh(c);
  const QdBasis basis = holomorphic_qd_basis(m);
  const QuadraticDifferential q = assemble_q(c, basis);
  json reports = json::array();
  for (double k : c.kList) reports.push_back(residual_json(reconstruct_ksurface({&m, q, k}), m));
  emit(f.out, (reports.size() == 1 ? reports[0] : reports).dump(2));
  return Pass;
}

int cmd_end(const Flags& f) {
  const RunConfig c = build_config(f);
  const SurfaceMesh m = load_mesh(c);
  const QdBasis basis = holomorphic_qd_basis(m);
  const QuadraticDifferential q = assemble_q(c, basis);
  const std::filesystem::path dir = output_dir(c);
  json reports = json::array();
  for (double k : c.kList) {
    const KSurface s = reconstruct_ksurface({&m, q, k});
    json j = residual_json(s, m);
    j["determinantResidual"] = s.residuals.determinant;
    j["area"] = integrate(ScalarField(m.face_count(), 1.0), s.data.I, m);
    j["dualGaussResidual"] = dual_gauss_residual(desitter_dual(s.data, m), m);
    std::ostringstream tag;
    tag << std::setprecision(17) << k;
    write_tensor_csv((dir / ("first_form_k" + tag.str() + ".csv")).string(), s.data.I);
    write_tensor_csv((dir / ("second_form_k" + tag.str() + ".csv")).string(), s.data.II);
    reports.push_back(j);
  }
  emit(f.out, (reports.size() == 1 ? reports[0] : reports).dump(2));
  return Pass;
}

int cmd_volumes(const Flags& f) {
  const RunConfig c = build_config(f);
  const std::vector<double> grid = f.kGrid.empty() ? default_k_grid() : parse_real_list(f.kGrid);
  for (double k : grid) require_k_in_range(k);
  if (f.chi <= 0 || f.chi % 2 != 0) throw Error(ErrorCode::Usage, "--chi must be a positive even integer");
  const SurfaceMesh m = load_mesh(c);
  std::vector<VolumeReport> rows;
  for (double k : grid) rows.push_back(volume_report(m, k, f.chi));
  if (f.out.empty())
    write_volumes_csv(std::cout, rows);
  else
    write_volumes_csv(f.out, rows);
  return Pass;
}

int cmd_pairing(const Flags& f) {
  const RunConfig c = build_config(f);
  const SurfaceMesh m = load_mesh(c);
  const QdBasis basis = holomorphic_qd_basis(m);
  const TensorField& g = m.backgroundMetric;
  json tensor = json::array(), beltrami = json::array();
  double worst = 0.0;
  for (int i = 0; i < 3; ++i) {
    json rt = json::array(), rb = json::array();
    for (int j = 0; j < 3; ++j) {
      const TensorField dg = two_real_part(basis.elements[j]);
      const double a = pairing_tensor(basis.elements[i], dg, g, m);
      const double b = pairing_beltrami(basis.elements[i], beltrami_from_variation(g, dg), m).real();
      worst = std::max(worst, std::abs(a - b));
      rt.push_back(a);
      rb.push_back(b);
    }
    tensor.push_back(rt);
    beltrami.push_back(rb);
  }
  json j;
  j["tensorGram"] = tensor;
  j["beltramiGram"] = beltrami;
  j["maxDifference"] = worst;
  emit(f.out, j.dump(2));
  return Pass;
}

int cmd_verify(const Flags& f) {
  const RunConfig c = build_config(f);
  std::vector<std::string> names;
  for (const std::string& s : c.suiteSelection) {
    if (s == "all") {
      for (const std::string& n : suite_names())
        if (std::find(names.begin(), names.end(), n) == names.end()) names.push_back(n);
    } else {
      const auto known = suite_names();
      if (std::find(known.begin(), known.end(), s) == known.end()) throw Error(ErrorCode::Usage, "unknown suite '" + s + "'");
      if (std::find(names.begin(), names.end(), s) == names.end()) names.push_back(s);
    }
  }
  const int threads = configured_threads();
  Workspace ws = c.meshPath.empty() ? Workspace(c.refinement, threads) : Workspace(read_mesh(c.meshPath), threads);
  ws.overrides = c.toleranceOverrides;

  std::vector<SuiteReport> reports;
  bool solverFailed = false;
  std::cout << std::setprecision(6);
  for (const std::string& n : names) {
    reports.push_back(run_suite(n, ws));
    const SuiteReport& r = reports.back();
    std::cout << (r.passed() ? "PASS " : "FAIL ") << n << " (" << std::fixed << std::setprecision(2) << r.seconds << " s)\n"
              << std::defaultfloat << std::setprecision(6);
    for (const CheckResult& k : r.checks) {
      std::cout << "  " << (k.passed ? "ok   " : "FAIL ") << k.name << ": ";
      if (!k.error.empty())
        std::cout << k.error << '\n';
      else
        std::cout << k.measured << (k.atLeast ? " >= " : " < ") << k.tolerance << '\n';
      if (is_solver_code(k.error)) solverFailed = true;
    }
  }
  if (!f.out.empty()) emit(f.out, report_json(reports));
  if (solverFailed) return SolverFailure;
  return std::all_of(reports.begin(), reports.end(), [](const SuiteReport& r) { return r.passed(); }) ? Pass : CheckFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constant Gauss curvature ends of hyperbolic 3-manifolds"};
  app.require_subcommand(1);
  Flags f;
  app.add_option("--config", f.configPath, "key = value configuration file");
  app.add_option("--set", f.settings, "configuration override key=value (repeatable)");

  auto mesh_source = [&](CLI::App* s) {
    s->add_option("--mesh", f.mesh, "mesh file; built from --refine when absent");
    s->add_option("--refine", f.refine, "refinement level of the built mesh");
  };
  auto end_inputs = [&](CLI::App* s) {
    mesh_source(s);
    s->add_option("--q", f.q, "\"a0,b0,a1,b1,a2,b2\" against the basis");
    s->add_option("--k", f.k, "curvature, or a comma list");
    s->add_option("--out", f.out, "report path (stdout when absent)");
  };

  CLI::App* mesh = app.add_subcommand("mesh", "write a refined Bolza mesh");
  mesh->add_option("--refine", f.refine, "refinement level")->required();
  mesh->add_option("--out", f.out, "output path (stdout when absent)");

  CLI::App* basis = app.add_subcommand("basis", "export the holomorphic quadratic differential basis");
  mesh_source(basis);
  basis->add_option("--out-dir", f.outDir, "output directory");

  CLI::App* solve = app.add_subcommand("solve", "reconstruct a k-surface and report residuals");
  end_inputs(solve);

  CLI::App* end = app.add_subcommand("end", "reconstruct a k-surface, report residuals and write its forms");
  end_inputs(end);
  end->add_option("--out-dir", f.outDir, "directory for the fundamental form CSVs");

  CLI::App* volumes = app.add_subcommand("volumes", "Fuchsian volume table");
  mesh_source(volumes);
  volumes->add_option("--k-grid", f.kGrid, "comma list of k");
  volumes->add_option("--chi", f.chi, "|chi| of the boundary");
  volumes->add_option("--out", f.out, "CSV path (stdout when absent)");

  CLI::App* verify = app.add_subcommand("verify", "run verification suites");
  mesh_source(verify);
  verify->add_option("--suite", f.suite, "comma list of suites, or all");
  verify->add_option("--tol", f.tol, "tolerance override: a number for all, or name=value (repeatable)");
  verify->add_option("--out", f.out, "JSON report path");

  CLI::App* pairing = app.add_subcommand("pairing", "tensor and Beltrami Gram matrices of the basis");
  mesh_source(pairing);
  pairing->add_option("--out", f.out, "JSON path (stdout when absent)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? Pass : UsageError;
  }

  std::cout << std::setprecision(17);
  try {
    if (*mesh) return cmd_mesh(f);
    if (*basis) return cmd_basis(f);
    if (*solve) return cmd_solve(f);
    if (*end) return cmd_end(f);
    if (*volumes) return cmd_volumes(f);
    if (*verify) return cmd_verify(f);
    if (*pairing) return cmd_pairing(f);
  } catch (const Error& e) {
    std::cerr << "error " << e.what() << '\n';
    return exit_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error " << e.what() << '\n';
    return UsageError;
  }
  return UsageError;
}
