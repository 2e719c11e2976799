#include "rigidity/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace rigidity {

namespace {

[[noreturn]] void fail(int line, const std::string& what) {
  throw ParseError("line " + std::to_string(line) + ": " + what);
}

double parse_double(const std::string& token, int line) {
  double value = 0.0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) fail(line, "bad number '" + token + "'");
  return value;
}

int parse_label(const std::string& token, int line) {
  int value = 0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || value < 1) {
    fail(line, "bad vertex label '" + token + "'");
  }
  return value;
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

FrameworkDocument parse_document(std::istream& in) {
  int dim = 0;
  bool saw_dim = false;
  std::map<int, std::vector<double>> vertices;  // 1-based label -> coords
  std::vector<std::pair<int, int>> edges;       // 1-based
  std::map<std::pair<int, int>, double> stresses;
  std::vector<int> shared;

  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream line(raw);
    std::string keyword;
    if (!(line >> keyword)) continue;

    if (keyword == "dim") {
      if (saw_dim) fail(line_no, "duplicate dim");
      if (!(line >> dim) || dim < 1) fail(line_no, "dim needs a positive integer");
      saw_dim = true;
    } else if (keyword == "vertex") {
      std::string token;
      if (!(line >> token)) fail(line_no, "vertex needs a label");
      const int label = parse_label(token, line_no);
      std::vector<double> coords;
      while (line >> token) coords.push_back(parse_double(token, line_no));
      if (!vertices.emplace(label, std::move(coords)).second) {
        fail(line_no, "vertex " + std::to_string(label) + " defined twice");
      }
    } else if (keyword == "edge") {
      std::string a, b;
      if (!(line >> a >> b)) fail(line_no, "edge needs two labels");
      edges.emplace_back(parse_label(a, line_no), parse_label(b, line_no));
    } else if (keyword == "stress") {
      std::string a, b, w;
      if (!(line >> a >> b >> w)) fail(line_no, "stress needs two labels and a value");
      const int i = parse_label(a, line_no);
      const int j = parse_label(b, line_no);
      const auto key = std::minmax(i, j);
      if (!stresses.emplace(key, parse_double(w, line_no)).second) {
        fail(line_no, "duplicate stress entry");
      }
    } else if (keyword == "shared") {
      std::string token;
      while (line >> token) shared.push_back(parse_label(token, line_no));
      if (shared.empty()) fail(line_no, "shared needs at least one label");
    } else {
      fail(line_no, "unknown keyword '" + keyword + "'");
    }
    if (line.fail() && !line.eof()) fail(line_no, "malformed line");
  }

  if (!saw_dim) throw ParseError("missing dim line");
  if (vertices.empty()) throw ParseError("document has no vertices");
  const int v = vertices.rbegin()->first;
  if (static_cast<int>(vertices.size()) != v) {
    throw ParseError("vertex labels must cover 1.." + std::to_string(v) + " without gaps");
  }

  Eigen::MatrixXd points(dim, v);
  for (const auto& [label, coords] : vertices) {
    if (static_cast<int>(coords.size()) != dim) {
      throw ParseError("vertex " + std::to_string(label) + " has " +
                       std::to_string(coords.size()) + " coordinates; expected " +
                       std::to_string(dim));
    }
    for (int r = 0; r < dim; ++r) points(r, label - 1) = coords[static_cast<std::size_t>(r)];
  }

  std::vector<Edge> zero_based;
  for (const auto& [a, b] : edges) {
    if (a > v || b > v) throw ParseError("edge references missing vertex");
    zero_based.push_back(make_edge(a - 1, b - 1));
  }

  FrameworkDocument doc;
  try {
    doc.framework = Framework(Graph(v, std::move(zero_based)), Configuration(dim, std::move(points)));
  } catch (const ParseError&) {
    throw;
  } catch (const Error& err) {
    throw ParseError(err.what());
  }

  if (!stresses.empty()) {
    const Graph& graph = doc.framework.graph();
    Eigen::VectorXd w = Eigen::VectorXd::Zero(graph.edge_count());
    for (const auto& [key, value] : stresses) {
      const int idx = graph.edge_index(key.first - 1, key.second - 1);
      if (idx < 0) {
        throw ParseError("stress entry {" + std::to_string(key.first) + "," +
                         std::to_string(key.second) + "} is not an edge");
      }
      w(idx) = value;
    }
    doc.stress = stress_vector_to_matrix(StressVector{graph, std::move(w)});
  }

  for (int label : shared) {
    if (label > v) throw ParseError("shared references missing vertex");
    doc.shared.push_back(label - 1);
  }
  return doc;
}

FrameworkDocument load_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return parse_document(in);
}

std::string serialize_document(const FrameworkDocument& doc) {
  const Framework& fw = doc.framework;
  std::ostringstream out;
  out << "dim " << fw.dim() << "\n";
  for (int i = 0; i < fw.graph().vertex_count(); ++i) {
    out << "vertex " << (i + 1);
    for (int r = 0; r < fw.dim(); ++r) out << " " << format_double(fw.config().points()(r, i));
    out << "\n";
  }
  for (const Edge& e : fw.graph().edges()) {
    out << "edge " << (e.first + 1) << " " << (e.second + 1) << "\n";
  }
  if (doc.stress) {
    for (const Edge& e : fw.graph().edges()) {
      out << "stress " << (e.first + 1) << " " << (e.second + 1) << " "
          << format_double(doc.stress->omega(e.first, e.second)) << "\n";
    }
  }
  if (!doc.shared.empty()) {
    out << "shared";
    for (int i : doc.shared) out << " " << (i + 1);
    out << "\n";
  }
  return out.str();
}

void save_document(const FrameworkDocument& doc, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  out << serialize_document(doc);
  if (!out) throw Error("write to '" + path + "' failed");
}

}  // namespace rigidity
