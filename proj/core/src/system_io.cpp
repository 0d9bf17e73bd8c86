#include "conecert/system_io.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "conecert/errors.hpp"

namespace conecert {

namespace {

using nlohmann::json;

json parse_text(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(what + ": " + e.what());
  }
}

json load_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_text(buffer.str(), "cannot parse " + path.string());
}

const json& field(const json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) throw InputError(where + ": missing field '" + key + "'");
  return *it;
}

double number_field(const json& j, const char* key, const std::string& where) {
  const json& v = field(j, key, where);
  if (!v.is_number()) throw InputError(where + ": field '" + key + "' must be a number");
  return v.get<double>();
}

Matrix matrix_field(const json& j, const char* key, const std::string& where) {
  const json& v = field(j, key, where);
  if (!v.is_array() || v.empty()) {
    throw InputError(where + ": field '" + key + "' must be a nonempty array of rows");
  }
  const int rows = static_cast<int>(v.size());
  int cols = -1;
  Vector entries;
  for (const json& row : v) {
    if (!row.is_array()) throw InputError(where + ": '" + key + "' rows must be arrays");
    if (cols < 0) {
      cols = static_cast<int>(row.size());
      if (cols == 0) throw InputError(where + ": '" + key + "' has an empty row");
    } else if (static_cast<int>(row.size()) != cols) {
      throw InputError(where + ": '" + key + "' rows have inconsistent lengths");
    }
    for (const json& x : row) {
      if (!x.is_number()) throw InputError(where + ": '" + key + "' entries must be numbers");
      entries.push_back(x.get<double>());
    }
  }
  return Matrix(rows, cols, std::move(entries));
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

int label_from_file(const json& v, const std::string& where) {
  if (!v.is_number_integer()) throw InputError(where + ": labels must be integers");
  const long label = v.get<long>();
  if (label < 1) throw InputError(where + ": labels are 1-based and must be positive");
  return static_cast<int>(label - 1);
}

}  // namespace

SystemDescription system_from_json(const std::string& text) {
  const json j = parse_text(text, "cannot parse system JSON");
  SystemDescription s;

  const json& kind = field(j, "kind", "system");
  if (kind == "pss") {
    s.kind = SystemKind::Pss;
  } else if (kind == "gss") {
    s.kind = SystemKind::Gss;
  } else {
    throw InputError("system: kind must be \"pss\" or \"gss\"");
  }

  const json& dims = field(j, "dimensions", "system");
  s.dims.n = static_cast<int>(number_field(dims, "n", "dimensions"));
  s.dims.q = static_cast<int>(number_field(dims, "q", "dimensions"));
  s.dims.r = static_cast<int>(number_field(dims, "r", "dimensions"));

  const json& modes = field(j, "modes", "system");
  if (!modes.is_array() || modes.empty()) {
    throw InputError("system: 'modes' must be a nonempty array");
  }
  std::map<int, ModeMatrices> by_label;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const std::string where = "modes[" + std::to_string(i) + "]";
    const json& mj = modes[i];
    ModeMatrices mode;
    mode.label = label_from_file(field(mj, "label", where), where);
    mode.a = matrix_field(mj, "A", where);
    mode.b = matrix_field(mj, "B", where);
    mode.c = matrix_field(mj, "C", where);
    mode.d = matrix_field(mj, "D", where);
    if (!by_label.emplace(mode.label, std::move(mode)).second) {
      throw InputError(where + ": duplicate label");
    }
  }
  for (auto& [label, mode] : by_label) {
    if (label != static_cast<int>(s.modes.size())) {
      throw InputError("system: mode labels must cover 1.." + std::to_string(by_label.size()) +
                       " without gaps");
    }
    s.modes.push_back(std::move(mode));
  }

  const json& graph = field(j, "graph", "system");
  const json& nodes = field(graph, "nodes", "graph");
  if (!nodes.is_array() || nodes.empty()) throw InputError("graph: 'nodes' must be a nonempty array");
  for (const json& name : nodes) {
    if (!name.is_string()) throw InputError("graph: node names must be strings");
    s.graph.nodes.push_back(name.get<std::string>());
  }
  s.graph.mode_count = s.mode_count();

  const json& edges = field(graph, "edges", "graph");
  if (!edges.is_array()) throw InputError("graph: 'edges' must be an array");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::string where = "edges[" + std::to_string(i) + "]";
    const json& ej = edges[i];
    Edge edge;
    const json& from = field(ej, "from", where);
    const json& to = field(ej, "to", where);
    if (!from.is_string() || !to.is_string()) {
      throw InputError(where + ": 'from' and 'to' must be node names");
    }
    edge.from = s.graph.node_index(from.get<std::string>());
    edge.to = s.graph.node_index(to.get<std::string>());
    if (edge.from < 0) throw InputError(where + ": unknown node '" + from.get<std::string>() + "'");
    if (edge.to < 0) throw InputError(where + ": unknown node '" + to.get<std::string>() + "'");
    edge.label = label_from_file(field(ej, "label", where), where);
    s.graph.edges.push_back(edge);
  }
  return s;
}

std::string system_to_json(const SystemDescription& s) {
  json j;
  j["kind"] = s.kind == SystemKind::Pss ? "pss" : "gss";
  j["dimensions"] = {{"n", s.dims.n}, {"q", s.dims.q}, {"r", s.dims.r}};
  json modes = json::array();
  for (const ModeMatrices& mode : s.modes) {
    json mj;
    mj["label"] = mode.label + 1;
    mj["A"] = matrix_to_json(mode.a);
    mj["B"] = matrix_to_json(mode.b);
    mj["C"] = matrix_to_json(mode.c);
    mj["D"] = matrix_to_json(mode.d);
    modes.push_back(std::move(mj));
  }
  j["modes"] = std::move(modes);
  json graph;
  graph["nodes"] = s.graph.nodes;
  json edges = json::array();
  for (const Edge& e : s.graph.edges) {
    edges.push_back({{"from", s.graph.nodes.at(e.from)},
                     {"label", e.label + 1},
                     {"to", s.graph.nodes.at(e.to)}});
  }
  graph["edges"] = std::move(edges);
  j["graph"] = std::move(graph);
  return j.dump(2) + "\n";
}

SystemDescription read_system(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return system_from_json(buffer.str());
}

void write_system(const SystemDescription& s, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  out << system_to_json(s);
}

namespace {

CertificateKind kind_from_json(const json& j, const std::string& where) {
  const json& kind = field(j, "kind", where);
  if (kind == "l1") return CertificateKind::L1;
  if (kind == "l2") return CertificateKind::L2;
  if (kind == "stability") return CertificateKind::Stability;
  throw InputError(where + ": kind must be \"l1\", \"l2\", or \"stability\"");
}

// Node-keyed map -> node-indexed vectors; every graph node must appear.
template <typename Parse>
auto node_map(const json& j, const char* key, const SwitchingGraph& g, const std::string& where,
              const Parse& parse) {
  const json& map = field(j, key, where);
  if (!map.is_object()) throw InputError(where + ": '" + std::string(key) + "' must be an object");
  using Value = decltype(parse(json{}, std::string{}));
  std::vector<Value> out(g.nodes.size());
  std::vector<bool> seen(g.nodes.size(), false);
  for (const auto& [name, value] : map.items()) {
    const int idx = g.node_index(name);
    if (idx < 0) throw InputError(where + ": certificate names unknown node '" + name + "'");
    out[idx] = parse(value, where + "." + name);
    seen[idx] = true;
  }
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (!seen[i]) throw InputError(where + ": certificate is missing node '" + g.nodes[i] + "'");
  }
  return out;
}

Vector parse_vector(const json& v, const std::string& where) {
  if (!v.is_array()) throw InputError(where + ": expected an array of numbers");
  Vector out;
  for (const json& x : v) {
    if (!x.is_number()) throw InputError(where + ": expected an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

Matrix parse_matrix(const json& v, const std::string& where) {
  json wrapper;
  wrapper["M"] = v;
  return matrix_field(wrapper, "M", where);
}

}  // namespace

CertificateKind read_certificate_kind(const std::filesystem::path& path) {
  return kind_from_json(load_file(path), "certificate");
}

L1Certificate read_l1_certificate(const std::filesystem::path& path, const SwitchingGraph& g) {
  const json j = load_file(path);
  if (kind_from_json(j, "certificate") != CertificateKind::L1) {
    throw InputError("certificate kind is not l1");
  }
  L1Certificate cert;
  cert.gamma = number_field(j, "gamma", "certificate");
  cert.margin = number_field(j, "margin", "certificate");
  cert.p = node_map(j, "p", g, "certificate", parse_vector);
  return cert;
}

L2Certificate read_l2_certificate(const std::filesystem::path& path, const SwitchingGraph& g) {
  const json j = load_file(path);
  if (kind_from_json(j, "certificate") != CertificateKind::L2) {
    throw InputError("certificate kind is not l2");
  }
  L2Certificate cert;
  cert.gamma = number_field(j, "gamma", "certificate");
  cert.margin = number_field(j, "margin", "certificate");
  cert.p = node_map(j, "P", g, "certificate", parse_matrix);
  return cert;
}

StabilityCertificate read_stability_certificate(const std::filesystem::path& path,
                                                const SwitchingGraph& g) {
  const json j = load_file(path);
  if (kind_from_json(j, "certificate") != CertificateKind::Stability) {
    throw InputError("certificate kind is not stability");
  }
  StabilityCertificate cert;
  cert.margin = number_field(j, "margin", "certificate");
  cert.p = node_map(j, "p", g, "certificate", parse_vector);
  return cert;
}

namespace {

json p_vectors_to_json(const std::vector<Vector>& p, const SwitchingGraph& g) {
  json map = json::object();
  for (std::size_t i = 0; i < p.size(); ++i) map[g.nodes.at(i)] = p[i];
  return map;
}

}  // namespace

std::string certificate_to_json(const L1Certificate& cert, const SwitchingGraph& g) {
  json j;
  j["kind"] = "l1";
  j["gamma"] = cert.gamma;
  j["margin"] = cert.margin;
  j["p"] = p_vectors_to_json(cert.p, g);
  return j.dump(2) + "\n";
}

std::string certificate_to_json(const L2Certificate& cert, const SwitchingGraph& g) {
  json j;
  j["kind"] = "l2";
  j["gamma"] = cert.gamma;
  j["margin"] = cert.margin;
  json map = json::object();
  for (std::size_t i = 0; i < cert.p.size(); ++i) map[g.nodes.at(i)] = matrix_to_json(cert.p[i]);
  j["P"] = std::move(map);
  return j.dump(2) + "\n";
}

std::string certificate_to_json(const StabilityCertificate& cert, const SwitchingGraph& g) {
  json j;
  j["kind"] = "stability";
  j["margin"] = cert.margin;
  j["p"] = p_vectors_to_json(cert.p, g);
  return j.dump(2) + "\n";
}

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  out << text;
}

}  // namespace

void write_certificate(const L1Certificate& cert, const SwitchingGraph& g,
                       const std::filesystem::path& path) {
  write_text(path, certificate_to_json(cert, g));
}

void write_certificate(const L2Certificate& cert, const SwitchingGraph& g,
                       const std::filesystem::path& path) {
  write_text(path, certificate_to_json(cert, g));
}

void write_certificate(const StabilityCertificate& cert, const SwitchingGraph& g,
                       const std::filesystem::path& path) {
  write_text(path, certificate_to_json(cert, g));
}

void write_trace_csv(const std::filesystem::path& path, const SystemDescription& s,
                     const Trajectory& traj, const std::vector<double>* lyapunov) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  out.precision(17);

  out << "t,node,mode";
  for (int i = 0; i < s.dims.n; ++i) out << ",x" << i + 1;
  for (int i = 0; i < s.dims.q; ++i) out << ",w" << i + 1;
  for (int i = 0; i < s.dims.r; ++i) out << ",z" << i + 1;
  if (lyapunov) out << ",V";
  out << "\n";

  int node = traj.walk.start;
  for (int t = 0; t <= traj.steps(); ++t) {
    out << t << "," << s.graph.nodes.at(node);
    if (t < traj.steps()) {
      out << ",m" << traj.walk.steps[t].label + 1;
    } else {
      out << ",";
    }
    for (double v : traj.x[t]) out << "," << v;
    for (int i = 0; i < s.dims.q; ++i) out << "," << (t < traj.steps() ? traj.w[t][i] : 0.0);
    for (int i = 0; i < s.dims.r; ++i) out << "," << (t < traj.steps() ? traj.z[t][i] : 0.0);
    if (lyapunov) out << "," << (*lyapunov)[t];
    out << "\n";
    if (t < traj.steps()) node = traj.walk.steps[t].to;
  }
}

}  // namespace conecert
