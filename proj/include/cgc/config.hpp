#pragma once

#include <array>
#include <istream>
#include <map>
#include <string>
#include <vector>

namespace cgc {

struct RunConfig {
  std::string meshPath;
  int refinement = 3;
  std::vector<double> kList{-0.5};
  std::array<double, 6> qCoefficients{};  // re/im against the three basis elements
  std::map<std::string, double> toleranceOverrides;
  std::string outputDir = ".";
  std::vector<std::string> suiteSelection{"all"};

  /// Throws KOutOfRange, CapExceeded or Usage.
  void validate() const;
};

/// Plain `key = value` lines; `#` starts a comment. Unknown keys are a usage error.
RunConfig parse_config(std::istream& in);
RunConfig read_config(const std::string& path);
/// Applies one `key=value` override on top of a parsed config.
void apply_setting(RunConfig& config, const std::string& key, const std::string& value);

std::vector<double> parse_real_list(const std::string& text);

/// Worker count from CGC_THREADS; 0 (the default) means serial.
int configured_threads();

}  // namespace cgc
