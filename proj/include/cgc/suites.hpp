#pragma once

#include <map>
#include <memory>
#include <string>
#include <tuple>
#include <vector>

#include "cgc/hodge.hpp"
#include "cgc/mesh.hpp"
#include "cgc/wolf.hpp"

namespace cgc {

struct CheckResult {
  std::string name;
  double measured = 0.0;
  double tolerance = 0.0;
  bool atLeast = false;  // pass when measured >= tolerance instead of measured < tolerance
  bool passed = false;
  std::string error;  // error message when the check threw

  static CheckResult below(std::string name, double measured, double tolerance);
  static CheckResult above(std::string name, double measured, double bound);
  static CheckResult failure(std::string name, const std::string& message);  // message starts with the error code name
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckResult> checks;
  double seconds = 0.0;
  bool passed() const;
};

/// Meshes and bases per refinement level, built on demand. The finest level may come from a file.
class Workspace {
 public:
  explicit Workspace(int level, int threads = 0);
  Workspace(SurfaceMesh finest, int threads = 0);

  int level() const { return level_; }
  int threads() const { return threads_; }
  const SurfaceMesh& mesh(int level);
  const QdBasis& basis(int level);

  /// Tolerance `name`, overridable (key "*" covers every tolerance except refinement ratios);
  /// discretization-limited tolerances grow by 4 per level below 4.
  double tolerance(const std::string& name, double atLevel4, bool discretization) const;
  std::map<std::string, double> overrides;

  /// Reconstructed end for q = t * basis[element], cached.
  const KSurface& end(int level, int element, double t, double k);
  /// Builds the requested ends, in parallel when threads > 0.
  void prepare_ends(const std::vector<std::tuple<int, int, double, double>>& keys);

 private:
  int level_;
  int threads_;
  std::map<int, std::unique_ptr<SurfaceMesh>> meshes_;
  std::map<int, std::unique_ptr<QdBasis>> bases_;
  std::map<std::tuple<int, int, double, double>, std::unique_ptr<KSurface>> ends_;
};

/// Acceptance criteria and the symplectic suites, in run order.
std::vector<std::string> suite_names();
SuiteReport run_suite(const std::string& name, Workspace& ws);

/// Schema-stable JSON report.
std::string report_json(const std::vector<SuiteReport>& reports);

}  // namespace cgc
