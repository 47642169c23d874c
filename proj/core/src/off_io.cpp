#include <fstream>
#include <iomanip>
#include <sstream>

#include "witten/error.hpp"
#include "witten/simplicial.hpp"

namespace witten {

namespace {

[[noreturn]] void parse_error(int line, const std::string& what) {
  std::ostringstream msg;
  msg << "line " << line << ": " << what;
  throw Error(ErrorCode::ParseError, msg.str());
}

// Next line that is neither blank nor a comment; false at end of input.
bool next_line(std::istream& in, std::string& out, int& line) {
  std::string raw;
  while (std::getline(in, raw)) {
    ++line;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    if (raw.find_first_not_of(" \t\r") != std::string::npos) {
      out = raw;
      return true;
    }
  }
  return false;
}

}  // namespace

SimplicialComplex parse_off(std::istream& in) {
  int line = 0;
  std::string text;
  if (!next_line(in, text, line)) parse_error(line + 1, "empty input, expected OFF header");
  std::istringstream header(text);
  std::string magic;
  header >> magic;
  if (magic != "OFF") parse_error(line, "expected OFF header, found '" + magic + "'");

  long nv = -1;
  long nf = -1;
  long ne = 0;
  // Counts may follow the header on the same line.
  if (!(header >> nv)) {
    if (!next_line(in, text, line)) parse_error(line + 1, "missing vertex/face/edge counts");
    std::istringstream counts(text);
    if (!(counts >> nv >> nf)) parse_error(line, "malformed counts line");
    counts >> ne;
  } else if (!(header >> nf)) {
    parse_error(line, "malformed counts line");
  }
  if (nv <= 0 || nf <= 0) parse_error(line, "vertex and face counts must be positive");

  std::vector<Eigen::Vector3d> vertices;
  vertices.reserve(static_cast<std::size_t>(nv));
  for (long i = 0; i < nv; ++i) {
    if (!next_line(in, text, line)) parse_error(line + 1, "unexpected end of input in vertex list");
    std::istringstream row(text);
    Eigen::Vector3d x;
    if (!(row >> x[0] >> x[1] >> x[2])) parse_error(line, "malformed vertex coordinates");
    vertices.push_back(x);
  }

  std::vector<Simplex> faces;
  for (long i = 0; i < nf; ++i) {
    if (!next_line(in, text, line)) parse_error(line + 1, "unexpected end of input in face list");
    std::istringstream row(text);
    int k = 0;
    if (!(row >> k)) parse_error(line, "malformed face");
    if (k != 3) parse_error(line, "only triangular faces are supported");
    Simplex f(3);
    if (!(row >> f[0] >> f[1] >> f[2])) parse_error(line, "malformed face indices");
    for (int v : f) {
      if (v < 0 || v >= nv) parse_error(line, "face index " + std::to_string(v) + " out of range");
    }
    if (f[0] == f[1] || f[1] == f[2] || f[0] == f[2]) parse_error(line, "degenerate face");
    faces.push_back(f);
  }
  return SimplicialComplex::from_top_simplices(std::move(vertices), faces);
}

SimplicialComplex load_off(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
  return parse_off(in);
}

void save_off(const SimplicialComplex& c, const std::string& path) {
  if (c.top() != 2) throw Error(ErrorCode::DegreeOutOfRange, "OFF output needs a 2-dimensional complex");
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
  out << "OFF\n" << c.vertices.size() << ' ' << c.count(2) << ' ' << c.count(1) << '\n';
  out << std::setprecision(17);
  for (const auto& x : c.vertices) out << x[0] << ' ' << x[1] << ' ' << x[2] << '\n';
  for (const auto& t : c.simplices[2]) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  if (!out) throw Error(ErrorCode::IoError, "write to '" + path + "' failed");
}

}  // namespace witten
