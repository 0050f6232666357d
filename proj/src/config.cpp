#include "cgc/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "cgc/error.hpp"

namespace cgc {

namespace {

constexpr int kMaxRefinement = 7;

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_real(const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw Error(ErrorCode::Usage, "not a number: '" + text + "'");
  }
  if (trim(text.substr(used)) != "") throw Error(ErrorCode::Usage, "not a number: '" + text + "'");
  return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

std::vector<double> parse_real_list(const std::string& text) {
  std::vector<double> out;
  for (const std::string& s : split(text, ',')) out.push_back(parse_real(s));
  return out;
}

void RunConfig::validate() const {
  if (refinement < 0 || refinement > kMaxRefinement)
    throw Error(ErrorCode::CapExceeded, "refinement must lie in [0, " + std::to_string(kMaxRefinement) + "]");
  if (kList.empty()) throw Error(ErrorCode::Usage, "k list is empty");
  for (double k : kList) require_k_in_range(k);
  if (suiteSelection.empty()) throw Error(ErrorCode::Usage, "no suite selected");
}

void apply_setting(RunConfig& c, const std::string& key, const std::string& value) {
  if (key == "mesh") {
    c.meshPath = value;
  } else if (key == "refinement") {
    const double r = parse_real(value);
    if (r != static_cast<int>(r)) throw Error(ErrorCode::Usage, "refinement must be an integer");
    c.refinement = static_cast<int>(r);
  } else if (key == "k") {
    c.kList = parse_real_list(value);
  } else if (key == "q") {
    const std::vector<double> q = parse_real_list(value);
    if (q.size() != 6) throw Error(ErrorCode::Usage, "q needs 6 coefficients, got " + std::to_string(q.size()));
    for (int i = 0; i < 6; ++i) c.qCoefficients[i] = q[i];
  } else if (key == "output") {
    c.outputDir = value;
  } else if (key == "suite") {
    c.suiteSelection = split(value, ',');
  } else if (key.rfind("tol.", 0) == 0) {
    c.toleranceOverrides[key.substr(4)] = parse_real(value);
  } else {
    throw Error(ErrorCode::Usage, "unknown config key '" + key + "'");
  }
}

RunConfig parse_config(std::istream& in) {
  RunConfig c;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::Usage, "line " + std::to_string(number) + ": expected key = value");
    apply_setting(c, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return c;
}

RunConfig read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + path);
  return parse_config(in);
}

int configured_threads() {
  const char* v = std::getenv("CGC_THREADS");
  if (v == nullptr || *v == '\0') return 0;
  char* end = nullptr;
  const long n = std::strtol(v, &end, 10);
  if (*end != '\0' || n < 0) throw Error(ErrorCode::Usage, std::string("CGC_THREADS must be a non-negative integer, got ") + v);
  return static_cast<int>(n);
}

}  // namespace cgc
