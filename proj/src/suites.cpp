#include "cgc/suites.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <thread>

#include <Eigen/Eigenvalues>

#include "cgc/error.hpp"
#include "cgc/hyper3d.hpp"
#include "cgc/symplectic.hpp"
#include "cgc/tensor.hpp"
#include "json.hpp"

namespace cgc {

namespace {

constexpr double pi = std::numbers::pi;

// Runs body(i) for i < n; results must be written by index so the order never depends on scheduling.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body) {
  if (threads <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(n);
  std::vector<std::thread> pool;
  for (int t = 0; t < std::min<int>(threads, static_cast<int>(n)); ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          body(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  for (std::thread& th : pool) th.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

const std::vector<double> kSolverK{-0.75, -0.5, -0.25};
const std::vector<double> kSolverT{0.02, 0.05, 0.1};

// Refinement ladder ending at `level`; the basis needs at least level 1.
int coarsest(int level) { return std::max(1, level - 2); }

std::vector<std::tuple<int, int, double, double>> solver_keys(int level) {
  std::vector<std::tuple<int, int, double, double>> keys;
  for (int i = 0; i < 3; ++i)
    for (double t : kSolverT)
      for (double k : kSolverK) keys.emplace_back(level, i, t, k);
  return keys;
}

using Checks = std::vector<CheckResult>;

Checks volumes(Workspace& ws) {
  Checks out;
  const SurfaceMesh& m = ws.mesh(ws.level());
  const double tol = ws.tolerance("volumes", 1e-9, false);
  double v = 0.0, h = 0.0, w = 0.0;
  for (double k : {-0.9, -0.75, -0.5, -0.25, -0.1}) {
    const VolumeReport r = volume_report(m, k, 4);
    const double e = std::atanh(std::sqrt(k + 1.0));
    v = std::max(v, rel(r.V, 4.0 * pi * (0.5 * std::sinh(2.0 * e) + e)));
    h = std::max(h, rel(r.meanH, 8.0 * pi * std::sinh(2.0 * e)));
    w = std::max(w, rel(r.W, 4.0 * pi * e));
  }
  out.push_back(CheckResult::below("volume relative error", v, tol));
  out.push_back(CheckResult::below("mean curvature integral relative error", h, tol));
  out.push_back(CheckResult::below("W relative error", w, tol));
  out.push_back(CheckResult::below("W(-3/4) against 2 pi ln 3", rel(volume_report(m, -0.75, 4).W, 2.0 * pi * std::log(3.0)), tol));
  return out;
}

Checks renormalized(Workspace& ws) {
  Checks out;
  const SurfaceMesh& m = ws.mesh(ws.level());
  double worst = 0.0;
  for (double k : default_k_grid()) worst = std::max(worst, std::abs(volume_report(m, k, 4).Wtilde));
  out.push_back(CheckResult::below("max |Wtilde| over the grid", worst, ws.tolerance("wtilde", 1e-10, false)));
  out.push_back(CheckResult::below("extrapolated limit", std::abs(renormalized_limit(m, default_k_grid(), 4)),
                                   ws.tolerance("wtilde", 1e-10, false)));
  double vs = 0.0;
  for (double k : {-0.9, -0.99, -0.999, -0.9999}) {
    const double e = std::atanh(std::sqrt(k + 1.0));
    vs = std::max(vs, rel(volume_report(m, k, 4).Vstar, 4.0 * pi * (e - 0.5 * std::sinh(2.0 * e))));
  }
  out.push_back(CheckResult::below("Vstar relative error near k = -1", vs, ws.tolerance("vstar", 1e-9, false)));
  out.push_back(CheckResult::below("|Vstar(-0.9999)| / |Vstar(-0.9)|",
                                   std::abs(volume_report(m, -0.9999, 4).Vstar / volume_report(m, -0.9, 4).Vstar), 1e-4));
  return out;
}

Checks solver(Workspace& ws) {
  Checks out;
  const int L = ws.level();
  if (L < 2) throw Error(ErrorCode::Usage, "solver suite needs refinement >= 2");
  std::vector<std::tuple<int, int, double, double>> keys;
  for (int l = coarsest(L); l <= L; ++l) {
    const auto ks = solver_keys(l);
    keys.insert(keys.end(), ks.begin(), ks.end());
  }
  ws.prepare_ends(keys);
  const char* names[] = {"gauss", "codazzi", "conformality", "eq21"};
  auto pick = [](const KSurfaceResiduals& r, int c) {
    return c == 0 ? r.gauss : c == 1 ? r.codazzi : c == 2 ? r.conformality : r.eq21;
  };
  double curvature = 0.0;
  double worst[4] = {0, 0, 0, 0}, ratio[4] = {1e300, 1e300, 1e300, 1e300};
  for (const auto& [l, i, t, k] : solver_keys(L)) {
    const KSurfaceResiduals& fine = ws.end(L, i, t, k).residuals;
    curvature = std::max(curvature, fine.curvature);
    for (int c = 0; c < 4; ++c) worst[c] = std::max(worst[c], pick(fine, c));
    for (int l = coarsest(L); l < L; ++l) {
      const KSurfaceResiduals& a = ws.end(l, i, t, k).residuals;
      const KSurfaceResiduals& b = ws.end(l + 1, i, t, k).residuals;
      for (int c = 0; c < 4; ++c) ratio[c] = std::min(ratio[c], pick(a, c) / pick(b, c));
    }
  }
  out.push_back(CheckResult::below("curvature residual", curvature, ws.tolerance("curvature", 1e-6, false)));
  for (int c = 0; c < 4; ++c)
    out.push_back(CheckResult::below(std::string(names[c]) + " residual", worst[c], ws.tolerance(names[c], 1e-3, true)));
  for (int c = 0; c < 4; ++c)
    out.push_back(CheckResult::above(std::string(names[c]) + " refinement ratio", ratio[c], ws.tolerance("ratio", 1.8, false)));
  return out;
}

Checks j_identity(Workspace& ws) {
  const int L = ws.level();
  ws.prepare_ends(solver_keys(L));
  double worst = 0.0;
  for (const auto& [l, i, t, k] : solver_keys(L)) {
    const KSurface& s = ws.end(L, i, t, k);
    const double j = j_functional(s.pair, ws.mesh(L));
    worst = std::max(worst, std::abs(j + k / std::sqrt(k + 1.0) * mk(s.data, ws.mesh(L))) / j);
  }
  return {CheckResult::below("j + k/sqrt(k+1) m_k, relative", worst, ws.tolerance("j", 1e-4, false))};
}

Checks variations(Workspace& ws) {
  Checks out;
  const SurfaceMesh& m = ws.mesh(ws.level());
  const ImmersionData core = geodesic_surface(m);
  const double step = 1e-3;
  auto meanH = [&](double r) {
    const ImmersionData top = parallel_flow(core, r, m);
    return 2.0 * integrate(top.H, top.I, m);
  };
  auto W = [&](double r) { return slab_volume(core, -r, r, m) - 0.25 * meanH(r); };
  auto Vs = [&](double r) { return slab_volume(core, -r, r, m) - 0.5 * meanH(r); };
  double dw = 0.0, dv = 0.0, sch = 0.0;
  for (double r : {0.2, 0.5, 1.0}) {
    const ImmersionData top = parallel_flow(core, r, m);
    const ImmersionData up = parallel_flow(core, r + step, m), down = parallel_flow(core, r - step, m);
    ScalarField dH(m.face_count()), dKe(m.face_count());
    for (std::size_t f = 0; f < m.face_count(); ++f) {
      dH[f] = (up.H[f] - down.H[f]) / (2.0 * step);
      dKe[f] = (up.Ke[f] - down.Ke[f]) / (2.0 * step);
    }
    const TensorField dI = (0.5 / step) * (up.I - down.I);
    const TensorField dII = (0.5 / step) * (up.II - down.II);
    dw = std::max(dw, rel(2.0 * dW_integrand(top, dII, dKe, m), (W(r + step) - W(r - step)) / (2.0 * step)));
    dv = std::max(dv, rel(2.0 * dVstar_integrand(top, dI, m), (Vs(r + step) - Vs(r - step)) / (2.0 * step)));
    sch = std::max(sch, rel(2.0 * schlafli_integrand(top.I, top.II, dI, dH, m), 4.0 * pi * (std::cosh(2.0 * r) + 1.0)));
  }
  out.push_back(CheckResult::below("dW integrand against finite differences", dw, ws.tolerance("dW", 1e-4, false)));
  out.push_back(CheckResult::below("dVstar integrand against finite differences", dv, ws.tolerance("dVstar", 1e-4, false)));
  out.push_back(CheckResult::below("Schlafli integrand against dV/deps", sch, ws.tolerance("schlafli", 1e-6, false)));
  return out;
}

TensorField random_variation(const SurfaceMesh& m, std::mt19937& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  const double a = n(rng), b = n(rng), c = n(rng), w = n(rng);
  TensorField t(m.face_count());
  for (std::size_t f = 0; f < t.size(); ++f) {
    const Eigen::Vector2d x = m.centroid(static_cast<int>(f));
    const double s = std::sin(3.0 * x.x() + w) + 0.3 * x.y();
    t[f] << a + s, b * x.x() + c, b * x.x() + c, -a + 2.0 * s * x.y();
    t[f] *= m.backgroundMetric[f](0, 0);
  }
  return t;
}

Checks pairings(Workspace& ws) {
  Checks out;
  const SurfaceMesh& m = ws.mesh(ws.level());
  const auto& basis = ws.basis(ws.level()).elements;
  const TensorField& g = m.backgroundMetric;
  double pairs = 0.0, random = 0.0;
  Eigen::Matrix3d gram;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const TensorField dg = two_real_part(basis[j]);
      gram(i, j) = pairing_tensor(basis[i], dg, g, m);
      pairs = std::max(pairs, std::abs(gram(i, j) - pairing_beltrami(basis[i], beltrami_from_variation(g, dg), m).real()));
    }
  std::mt19937 rng(20240601);
  for (int r = 0; r < 20; ++r) {
    const TensorField dg = random_variation(m, rng);
    const QuadraticDifferential& q = basis[r % 3];
    random = std::max(random, std::abs(pairing_tensor(q, dg, g, m) - pairing_beltrami(q, beltrami_from_variation(g, dg), m).real()));
  }
  const double tol = ws.tolerance("pairing", 1e-8, false);
  out.push_back(CheckResult::below("basis pairs, tensor minus Beltrami", pairs, tol));
  out.push_back(CheckResult::below("random variations, tensor minus Beltrami", random, tol));
  out.push_back(CheckResult::below("Gram asymmetry", (gram - gram.transpose()).norm(), 1e-12));
  out.push_back(CheckResult::above("Gram smallest eigenvalue", Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(gram).eigenvalues().minCoeff(), 1e-6));
  return out;
}

Checks exactness(Workspace& ws) {
  Checks out;
  const int L = ws.level();
  const SurfaceMesh& m = ws.mesh(L);
  const auto& b = ws.basis(L).elements;
  struct Case {
    std::string name;
    QuadraticDifferential q, dir;
    double k;
  };
  const QuadraticDifferential zero(m.face_count());
  const std::vector<Case> cases{
      {"Fuchsian point, basis 0", zero, b[0], -0.5},
      {"q = 0.1 b0, direction b0", 0.1 * b[0], b[0], -0.5},
      {"q = 0.1 b1, direction b1", 0.1 * b[1], b[1], -0.25},
      {"q = 0.1 b2, direction b2", 0.1 * b[2], b[2], -0.75},
      {"q = 0.1 b0, direction b0 + b1", 0.1 * b[0], b[0] + b[1], -0.5},
      {"q = 0.05 (b1 + i b2), direction b1", 0.05 * (b[1] + Complex(0.0, 1.0) * b[2]), b[1], -0.5},
  };
  std::vector<ExactnessResult> results(cases.size());
  parallel_for(cases.size(), ws.threads(), [&](std::size_t c) {
    results[c] = exactness_check({&m, cases[c].q, cases[c].k}, cases[c].dir, 1e-3);
  });
  const double tol = ws.tolerance("exactness", 5e-3, false);
  for (std::size_t c = 0; c < cases.size(); ++c) out.push_back(CheckResult::below(cases[c].name, results[c].residual, tol));
  // Second-order central differences: successive changes of the one-sided quantities shrink by four per halving.
  const ConfCotangentPoint p{&m, 0.1 * b[0], -0.5};
  std::vector<double> steps{1e-2, 5e-3, 2.5e-3};
  std::vector<ExactnessResult> conv(steps.size());
  parallel_for(steps.size(), ws.threads(), [&](std::size_t s) { conv[s] = exactness_check(p, b[0], steps[s]); });
  const double ratio = std::abs(conv[0].rhs - conv[1].rhs) / std::abs(conv[1].rhs - conv[2].rhs);
  out.push_back(CheckResult::below("step-halving ratio deviation from 4", std::abs(ratio / 4.0 - 1.0), 0.1));
  return out;
}

Checks hamiltonian(Workspace& ws) {
  const auto rows = hamiltonian_check_fuchsian({-0.9, -0.75, -0.5, -0.25, -0.1}, 4, 1e-5);
  double c = 0.0, h = 0.0;
  for (const HamiltonianRow& r : rows) {
    c = std::max(c, r.conformalResidual);
    h = std::max(h, r.hyperbolicResidual);
  }
  return {CheckResult::below("conformal balance, relative", c, ws.tolerance("hamiltonian", 1e-4, false)),
          CheckResult::below("hyperbolic balance, relative", h, ws.tolerance("hamiltonian", 1e-4, false))};
}

Checks duality(Workspace& ws) {
  Checks out;
  const int L = ws.level();
  const SurfaceMesh& m = ws.mesh(L);
  double fuchsian = 0.0, involution = 0.0;
  for (double k : {-0.75, -0.5, -0.25}) {
    const ImmersionData s = fuchsian_ksurface(m, k);
    const ImmersionData d = desitter_dual(s, m);
    fuchsian = std::max(fuchsian, dual_gauss_residual(d, m));
    const ImmersionData back = desitter_dual(d, m);
    for (std::size_t f = 0; f < m.face_count(); ++f)
      involution = std::max({involution, (back.I[f] - s.I[f]).norm(), (back.B[f] - s.B[f]).norm()});
  }
  out.push_back(CheckResult::below("Fuchsian dual Gauss residual", fuchsian, ws.tolerance("dual-exact", 1e-12, false)));
  out.push_back(CheckResult::below("involution defect", involution, 1e-12));
  if (L >= 2) {
    std::vector<std::tuple<int, int, double, double>> keys;
    for (int l = coarsest(L); l <= L; ++l) {
      const auto ks = solver_keys(l);
      keys.insert(keys.end(), ks.begin(), ks.end());
    }
    ws.prepare_ends(keys);
    double worst = 0.0, ratio = 1e300;
    for (const auto& [l, i, t, k] : solver_keys(L)) {
      double prev = -1.0;
      for (int lv = coarsest(L); lv <= L; ++lv) {
        const KSurface& s = ws.end(lv, i, t, k);
        const double r = dual_gauss_residual(desitter_dual(s.data, ws.mesh(lv)), ws.mesh(lv));
        if (prev > 0.0) ratio = std::min(ratio, prev / r);
        prev = r;
      }
      worst = std::max(worst, prev);
    }
    out.push_back(CheckResult::below("reconstructed dual Gauss residual", worst, ws.tolerance("dual", 1e-3, true)));
    out.push_back(CheckResult::above("reconstructed dual refinement ratio", ratio, 1.0));
  }
  return out;
}

Checks minimal_lagrangian(Workspace& ws) {
  Checks out;
  const int L = ws.level();
  const SurfaceMesh& m = ws.mesh(L);
  ws.prepare_ends(solver_keys(L));
  double traceless = 0.0;
  for (const auto& [l, i, t, k] : solver_keys(L)) {
    const NormalizedPair& p = ws.end(L, i, t, k).pair;
    const TensorField a = traceless_part(p.h, m.backgroundMetric), b = traceless_part(p.hStar, m.backgroundMetric);
    for (std::size_t f = 0; f < m.face_count(); ++f) traceless = std::max(traceless, (a[f] + b[f]).norm() / p.h[f].norm());
  }
  out.push_back(CheckResult::below("traceless parts of h and h* cancel", traceless, 1e-12));

  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-0.6, 0.6);
  auto spd = [&](bool unit) {
    Eigen::Matrix2d a;
    a << 1.0 + u(rng), u(rng), 0.0, 1.0 + u(rng);
    Eigen::Matrix2d s = a * a.transpose() + 0.1 * Eigen::Matrix2d::Identity();
    if (unit) s /= std::sqrt(s.determinant());
    return s;
  };
  const std::size_t n = 500;
  TensorField h(n, true), hs(n, true);
  OperatorField b(n);
  for (std::size_t f = 0; f < n; ++f) {
    h[f] = spd(false);
    const Eigen::Matrix2d root = Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(h[f]).operatorSqrt();
    b[f] = root.inverse() * spd(true) * root;
    hs[f] = b[f].transpose() * h[f] * b[f];
  }
  const OperatorField r = labourie_operator(h, hs);
  double trip = 0.0, det = 0.0;
  for (std::size_t f = 0; f < n; ++f) {
    trip = std::max(trip, (r[f] - b[f]).norm() / b[f].norm());
    det = std::max(det, std::abs(r[f].determinant() - 1.0));
  }
  out.push_back(CheckResult::below("Labourie round trip", trip, 1e-12));
  out.push_back(CheckResult::below("det b - 1", det, 1e-10));
  return out;
}

const std::vector<std::pair<std::string, Checks (*)(Workspace&)>>& registry() {
  static const std::vector<std::pair<std::string, Checks (*)(Workspace&)>> r{
      {"volumes", volumes},         {"renormalized", renormalized}, {"solver", solver},
      {"j-identity", j_identity},   {"variations", variations},     {"pairings", pairings},
      {"exactness", exactness},     {"hamiltonian", hamiltonian},   {"duality", duality},
      {"minimal-lagrangian", minimal_lagrangian},
  };
  return r;
}

}  // namespace

CheckResult CheckResult::below(std::string name, double measured, double tolerance) {
  CheckResult c;
  c.name = std::move(name);
  c.measured = measured;
  c.tolerance = tolerance;
  c.passed = measured < tolerance;
  return c;
}

CheckResult CheckResult::above(std::string name, double measured, double bound) {
  CheckResult c = below(std::move(name), measured, bound);
  c.atLeast = true;
  c.passed = measured >= bound;
  return c;
}

CheckResult CheckResult::failure(std::string name, const std::string& message) {
  CheckResult c;
  c.name = std::move(name);
  c.measured = std::nan("");
  c.error = message;
  return c;
}

bool SuiteReport::passed() const {
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

Workspace::Workspace(int level, int threads) : level_(level), threads_(threads) {
  if (level < 0 || level > 7) throw Error(ErrorCode::CapExceeded, "refinement must lie in [0, 7]");
}

Workspace::Workspace(SurfaceMesh finest, int threads) : level_(finest.level), threads_(threads) {
  meshes_[level_] = std::make_unique<SurfaceMesh>(std::move(finest));
}

const SurfaceMesh& Workspace::mesh(int level) {
  auto& slot = meshes_[level];
  if (!slot) slot = std::make_unique<SurfaceMesh>(build_bolza(level));
  return *slot;
}

const QdBasis& Workspace::basis(int level) {
  auto& slot = bases_[level];
  if (!slot) slot = std::make_unique<QdBasis>(holomorphic_qd_basis(mesh(level)));
  return *slot;
}

double Workspace::tolerance(const std::string& name, double atLevel4, bool discretization) const {
  const auto it = overrides.find(name);
  if (it != overrides.end()) return it->second;
  const auto all = overrides.find("*");
  if (all != overrides.end() && name != "ratio") return all->second;
  if (!discretization || level_ >= 4) return atLevel4;
  return atLevel4 * std::pow(4.0, 4 - level_);
}

const KSurface& Workspace::end(int level, int element, double t, double k) {
  auto& slot = ends_[{level, element, t, k}];
  if (!slot) {
    const QuadraticDifferential q = t * basis(level).elements[element];
    slot = std::make_unique<KSurface>(reconstruct_ksurface({&mesh(level), q, k}));
  }
  return *slot;
}

void Workspace::prepare_ends(const std::vector<std::tuple<int, int, double, double>>& keys) {
  std::vector<std::tuple<int, int, double, double>> missing;
  for (const auto& key : keys) {
    if (ends_.count(key) && ends_[key]) continue;
    missing.push_back(key);
    basis(std::get<0>(key));  // shared inputs are built before any worker starts
    ends_[key];
  }
  parallel_for(missing.size(), threads_, [&](std::size_t n) {
    const auto& [level, element, t, k] = missing[n];
    const QuadraticDifferential q = t * bases_.at(level)->elements[element];
    ends_.at(missing[n]) = std::make_unique<KSurface>(reconstruct_ksurface({meshes_.at(level).get(), q, k}));
  });
}

std::vector<std::string> suite_names() {
  std::vector<std::string> names;
  for (const auto& [n, f] : registry()) names.push_back(n);
  return names;
}

SuiteReport run_suite(const std::string& name, Workspace& ws) {
  for (const auto& [n, f] : registry()) {
    if (n != name) continue;
    SuiteReport report;
    report.suite = name;
    const auto start = std::chrono::steady_clock::now();
    try {
      report.checks = f(ws);
    } catch (const Error& e) {
      report.checks.push_back(CheckResult::failure(name, e.what()));
    }
    report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
  }
  throw Error(ErrorCode::Usage, "unknown suite '" + name + "'");
}

std::string report_json(const std::vector<SuiteReport>& reports) {
  nlohmann::ordered_json root;
  root["passed"] = std::all_of(reports.begin(), reports.end(), [](const SuiteReport& r) { return r.passed(); });
  nlohmann::ordered_json suites = nlohmann::ordered_json::array();
  for (const SuiteReport& r : reports) {
    nlohmann::ordered_json s;
    s["suite"] = r.suite;
    s["passed"] = r.passed();
    s["seconds"] = r.seconds;
    nlohmann::ordered_json checks = nlohmann::ordered_json::array();
    for (const CheckResult& c : r.checks) {
      nlohmann::ordered_json j;
      j["name"] = c.name;
      j["measured"] = std::isfinite(c.measured) ? nlohmann::ordered_json(c.measured) : nlohmann::ordered_json(nullptr);
      j["tolerance"] = c.tolerance;
      j["comparison"] = c.atLeast ? ">=" : "<";
      j["passed"] = c.passed;
      if (!c.error.empty()) j["error"] = c.error;
      checks.push_back(j);
    }
    s["checks"] = checks;
    suites.push_back(s);
  }
  root["suites"] = suites;
  return root.dump(2);
}

}  // namespace cgc
