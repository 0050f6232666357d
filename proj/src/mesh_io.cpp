#include <cstdio>
#include <fstream>
#include <sstream>

#include "cgc/error.hpp"
#include "cgc/mesh.hpp"

namespace cgc {

namespace {

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void expect(std::istream& in, const std::string& tag) {
  std::string t;
  if (!(in >> t) || t != tag) throw Error(ErrorCode::Io, "expected section '" + tag + "', found '" + t + "'");
}

}  // namespace

void write_mesh(std::ostream& out, const SurfaceMesh& mesh) {
  out << "CGC-MESH 1 genus=" << mesh.genus << '\n';
  out << "V " << mesh.vertices.size() << '\n';
  for (const auto& v : mesh.vertices) out << fmt(v.x()) << ' ' << fmt(v.y()) << '\n';
  out << "F " << mesh.faces.size() << '\n';
  for (const auto& f : mesh.faces) out << f[0] << ' ' << f[1] << ' ' << f[2] << '\n';
  out << "P " << mesh.sidePairings.size() << '\n';
  for (const auto& p : mesh.sidePairings)
    out << p.side << ' ' << p.partner << ' ' << fmt(p.map.a.real()) << ' ' << fmt(p.map.a.imag()) << ' '
        << fmt(p.map.b.real()) << ' ' << fmt(p.map.b.imag()) << '\n';
  out << "H " << mesh.homologyLoops.size() << '\n';
  for (const auto& loop : mesh.homologyLoops) {
    out << loop.size();
    for (int e : loop) out << ' ' << e;
    out << '\n';
  }
}

void write_mesh(const std::string& path, const SurfaceMesh& mesh) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path + " for writing");
  write_mesh(out, mesh);
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path);
}

SurfaceMesh read_mesh(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("CGC-MESH 1", 0) != 0)
    throw Error(ErrorCode::Io, "missing CGC-MESH 1 header");
  SurfaceMesh m;
  const auto g = line.find("genus=");
  if (g == std::string::npos) throw Error(ErrorCode::Io, "header lacks genus");
  m.genus = std::stoi(line.substr(g + 6));
  if (m.genus != 2) throw Error(ErrorCode::InvalidMesh, "only genus 2 is supported");

  std::size_t n = 0;
  expect(in, "V");
  in >> n;
  m.vertices.resize(n);
  for (auto& v : m.vertices) in >> v.x() >> v.y();
  expect(in, "F");
  in >> n;
  m.faces.resize(n);
  for (auto& f : m.faces) in >> f[0] >> f[1] >> f[2];
  expect(in, "P");
  in >> n;
  m.sidePairings.resize(n);
  for (auto& p : m.sidePairings) {
    double ar, ai, br, bi;
    in >> p.side >> p.partner >> ar >> ai >> br >> bi;
    p.map = Mobius{Complex(ar, ai), Complex(br, bi)};
  }
  expect(in, "H");
  in >> n;
  std::vector<EdgeLoop> loops(n);
  for (auto& loop : loops) {
    std::size_t len = 0;
    in >> len;
    loop.resize(len);
    for (int& e : loop) in >> e;
  }
  if (!in) throw Error(ErrorCode::Io, "truncated mesh file");
  for (const auto& f : m.faces)
    for (int v : f)
      if (v < 0 || static_cast<std::size_t>(v) >= m.vertices.size())
        throw Error(ErrorCode::InvalidMesh, "face references a missing vertex");
  if (m.sidePairings.size() != 8) throw Error(ErrorCode::InvalidMesh, "expected 8 side pairings");

  std::size_t faces = 8;
  m.level = 0;
  while (faces < m.faces.size()) {
    faces *= 4;
    ++m.level;
  }
  if (faces != m.faces.size()) throw Error(ErrorCode::InvalidMesh, "face count is not 8*4^L");
  detail::finalize_mesh(m, true);
  if (loops != m.homologyLoops) throw Error(ErrorCode::InvalidMesh, "stored homology loops do not match the complex");
  return m;
}

SurfaceMesh read_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  return read_mesh(in);
}

}  // namespace cgc
