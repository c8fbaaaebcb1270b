#include "whitney/spacetime_mesh.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "json.hpp"
#include "whitney/wave_integrator.hpp"

namespace whitney {

namespace {

std::uint64_t edge_key(int i, int j) {
  if (i > j) std::swap(i, j);
  return (static_cast<std::uint64_t>(i) << 32) | static_cast<std::uint32_t>(j);
}

// locale-independent shortest round-trip formatting
std::string fmt(double v) {
  char buf[32];
  auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

void check_spec(const MeshSpec& spec) {
  if (spec.nodes_per_slice < 3) {
    throw std::invalid_argument("MeshSpec: need at least 3 nodes per slice");
  }
  if (spec.num_slices < 3) {
    throw std::invalid_argument("MeshSpec: need at least 3 slices");
  }
  if (spec.dx <= 0 || spec.dt <= 0) {
    throw std::invalid_argument("MeshSpec: dx and dt must be positive");
  }
}

void fill_slices(SpacetimeMesh& mesh) {
  mesh.slices.assign(mesh.num_slices, {});
  for (int k = 0; k < mesh.num_slices; ++k) {
    for (int i = 0; i < mesh.nodes_per_slice; ++i) {
      mesh.slices[k].push_back(k * mesh.nodes_per_slice + i);
    }
  }
}

}  // namespace

int SpacetimeMesh::node_id(int slice, int pos) const {
  return slice * nodes_per_slice +
         ((pos % nodes_per_slice) + nodes_per_slice) % nodes_per_slice;
}

bool SpacetimeMesh::has_edge(int i, int j) const {
  return edge_sq.count(edge_key(i, j)) > 0;
}

double SpacetimeMesh::edge_sq_length(int i, int j) const {
  auto it = edge_sq.find(edge_key(i, j));
  if (it == edge_sq.end()) {
    throw std::out_of_range("SpacetimeMesh: no such edge");
  }
  return it->second;
}

void SpacetimeMesh::set_edge(int i, int j, double sq_length) {
  edge_sq[edge_key(i, j)] = sq_length;
}

double SpacetimeMesh::circumference() const {
  return style == MeshStyle::lightcone ? 2.0 * nodes_per_slice * dx
                                       : nodes_per_slice * dx;
}

double SpacetimeMesh::node_x(int node) const {
  int i = pos_of(node);
  if (style == MeshStyle::lightcone) {
    return (2 * i + (slice_of(node) % 2)) * dx;
  }
  return i * dx;
}

SpacetimeMesh build_cylinder_mesh(const MeshSpec& spec) {
  check_spec(spec);
  if (spec.style != MeshStyle::regular) {
    throw std::invalid_argument("build_cylinder_mesh: style must be regular");
  }
  if (spec.dt == spec.dx) {
    std::cerr << "warning: dt == dx makes the diagonal edges lightlike\n";
  }

  SpacetimeMesh mesh;
  mesh.nodes_per_slice = spec.nodes_per_slice;
  mesh.num_slices = spec.num_slices;
  mesh.dx = spec.dx;
  mesh.dt = spec.dt;
  mesh.style = MeshStyle::regular;
  fill_slices(mesh);

  const int N = spec.nodes_per_slice;
  const double h2 = spec.dx * spec.dx;
  const double v2 = -spec.dt * spec.dt;
  for (int k = 0; k < spec.num_slices; ++k) {
    for (int i = 0; i < N; ++i) {
      mesh.set_edge(mesh.node_id(k, i), mesh.node_id(k, i + 1), h2);
      if (k + 1 < spec.num_slices) {
        mesh.set_edge(mesh.node_id(k, i), mesh.node_id(k + 1, i), v2);
        mesh.set_edge(mesh.node_id(k, i), mesh.node_id(k + 1, i + 1), h2 + v2);
        // quad (i,k) split along the up-right diagonal
        mesh.triangles.push_back({mesh.node_id(k, i), mesh.node_id(k, i + 1),
                                  mesh.node_id(k + 1, i + 1)});
        mesh.triangles.push_back({mesh.node_id(k, i),
                                  mesh.node_id(k + 1, i + 1),
                                  mesh.node_id(k + 1, i)});
      }
    }
  }
  return mesh;
}

SpacetimeMesh build_lightcone_mesh(const MeshSpec& spec) {
  check_spec(spec);
  if (spec.style != MeshStyle::lightcone) {
    throw std::invalid_argument("build_lightcone_mesh: style must be lightcone");
  }
  if (spec.dt != spec.dx) {
    throw std::invalid_argument("build_lightcone_mesh: requires dt == dx");
  }
  if (spec.nodes_per_slice % 2 != 0) {
    throw std::invalid_argument(
        "build_lightcone_mesh: nodes per slice must be even");
  }

  SpacetimeMesh mesh;
  mesh.nodes_per_slice = spec.nodes_per_slice;
  mesh.num_slices = spec.num_slices;
  mesh.dx = spec.dx;
  mesh.dt = spec.dt;
  mesh.style = MeshStyle::lightcone;
  fill_slices(mesh);

  const int N = spec.nodes_per_slice;
  const double chord2 = 4.0 * spec.dx * spec.dx;
  for (int k = 0; k < spec.num_slices; ++k) {
    for (int i = 0; i < N; ++i) {
      mesh.set_edge(mesh.node_id(k, i), mesh.node_id(k, i + 1), chord2);
    }
  }
  // cross-slice null edges: even slices sit at even multiples of dx, odd
  // slices at odd multiples; node (k,i) connects to the two nodes one dx
  // to either side on slice k+1
  for (int k = 0; k + 1 < spec.num_slices; ++k) {
    for (int i = 0; i < N; ++i) {
      int left = (k % 2 == 0) ? i - 1 : i;
      mesh.set_edge(mesh.node_id(k, i), mesh.node_id(k + 1, left), 0.0);
      mesh.set_edge(mesh.node_id(k, i), mesh.node_id(k + 1, left + 1), 0.0);
      // apex-down triangle of the diamond whose bottom is (k, i)
      mesh.triangles.push_back({mesh.node_id(k, i), mesh.node_id(k + 1, left),
                                mesh.node_id(k + 1, left + 1)});
      // apex-up triangle based on slice k
      mesh.triangles.push_back({mesh.node_id(k + 1, left + 1),
                                mesh.node_id(k, i), mesh.node_id(k, i + 1)});
    }
  }
  return mesh;
}

std::vector<std::string> validate(const SpacetimeMesh& mesh) {
  std::vector<std::string> issues;
  const int N = mesh.nodes_per_slice;
  const int M = mesh.num_slices;
  if (N < 3 || M < 3) issues.push_back("mesh too small");
  if (static_cast<int>(mesh.slices.size()) != M) {
    issues.push_back("slice list does not match num_slices");
    return issues;
  }

  std::vector<int> membership(mesh.num_nodes(), -1);
  for (int k = 0; k < M; ++k) {
    for (int node : mesh.slices[k]) {
      if (node < 0 || node >= mesh.num_nodes() || membership[node] != -1) {
        issues.push_back("node " + std::to_string(node) +
                         " missing or in more than one slice");
        continue;
      }
      membership[node] = k;
    }
  }
  for (int node = 0; node < mesh.num_nodes(); ++node) {
    if (membership[node] == -1) {
      issues.push_back("node " + std::to_string(node) + " not in any slice");
    }
  }

  for (size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    bool complete = true;
    for (int e = 0; e < 3; ++e) {
      int a = tri[e], b = tri[(e + 1) % 3];
      if (!mesh.has_edge(a, b)) {
        issues.push_back("triangle " + std::to_string(t) +
                         " references missing edge (" + std::to_string(a) +
                         "," + std::to_string(b) + ")");
        complete = false;
      }
    }
    if (!complete) continue;

    int lo = M, hi = -1;
    for (int v : tri) {
      lo = std::min(lo, mesh.slice_of(v));
      hi = std::max(hi, mesh.slice_of(v));
    }
    if (hi - lo != 1) {
      issues.push_back("triangle " + std::to_string(t) +
                       " does not connect adjacent slices");
    }

    try {
      Simplex s = triangle_simplex(mesh, static_cast<int>(t));
      if (s.gram_det() >= 0) {
        issues.push_back("triangle " + std::to_string(t) +
                         " is not Lorentzian (det G >= 0)");
      }
    } catch (const DegenerateSimplexError&) {
      issues.push_back("triangle " + std::to_string(t) + " is degenerate");
    }
  }

  // spatial periodicity: shifting every position by one maps the triangle
  // set onto itself
  auto shift = [&](int node) {
    return mesh.node_id(mesh.slice_of(node), mesh.pos_of(node) + 1);
  };
  auto canonical = [](std::array<int, 3> t) {
    std::sort(t.begin(), t.end());
    return t;
  };
  std::vector<std::array<int, 3>> base, shifted;
  for (const auto& tri : mesh.triangles) {
    base.push_back(canonical(tri));
    shifted.push_back(canonical({shift(tri[0]), shift(tri[1]), shift(tri[2])}));
  }
  std::sort(base.begin(), base.end());
  std::sort(shifted.begin(), shifted.end());
  if (base != shifted) {
    issues.push_back("triangle set is not invariant under the spatial shift");
  }

  return issues;
}

Simplex triangle_simplex(const SpacetimeMesh& mesh, int tri) {
  const auto& t = mesh.triangles.at(tri);
  Eigen::MatrixXd lengths = Eigen::MatrixXd::Zero(3, 3);
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      if (a != b) lengths(a, b) = mesh.edge_sq_length(t[a], t[b]);
    }
  }
  return Simplex::from_edge_lengths(lengths);
}

Simplex triangle_simplex_embedded(const SpacetimeMesh& mesh, int tri) {
  const auto& t = mesh.triangles.at(tri);
  const double L = mesh.circumference();
  const double x0 = mesh.node_x(t[0]);
  std::vector<Eigen::VectorXd> coords;
  for (int v : t) {
    // unwrap the periodic seam relative to the first vertex
    double dxv = mesh.node_x(v) - x0;
    dxv -= L * std::round(dxv / L);
    Eigen::VectorXd p(2);
    p << mesh.node_t(v), x0 + dxv;  // (t, x), matching the (-,+) signature
    coords.push_back(p);
  }
  return Simplex::embedded(coords, MetricSignature::lorentzian(2));
}

// ---------------------------------------------------------------------------
// file formats

void export_ply(const SpacetimeMesh& mesh, const DiscreteField& field,
                const std::string& path) {
  if (static_cast<int>(field.values.size()) != mesh.num_nodes()) {
    throw std::invalid_argument("export_ply: field size != node count");
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("export_ply: cannot open " + path);

  const double L = mesh.circumference();
  const double radius = L / (2.0 * std::numbers::pi);

  out << "ply\n"
      << "format ascii 1.0\n"
      << "comment spacetime cylinder, signature (-,+), field in quality\n"
      << "element vertex " << mesh.num_nodes() << "\n"
      << "property float x\nproperty float y\nproperty float z\n"
      << "property float quality\n"
      << "element face " << mesh.triangles.size() << "\n"
      << "property list uchar int vertex_index\n"
      << "end_header\n";

  for (int node = 0; node < mesh.num_nodes(); ++node) {
    double theta = 2.0 * std::numbers::pi * mesh.node_x(node) / L;
    double r = radius + field.values[node];
    out << fmt(r * std::cos(theta)) << ' ' << fmt(r * std::sin(theta)) << ' '
        << fmt(mesh.node_t(node)) << ' ' << fmt(field.values[node]) << '\n';
  }
  for (const auto& t : mesh.triangles) {
    out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  }
  if (!out) throw std::runtime_error("export_ply: write failed: " + path);
}

void export_csv(const DiscreteField& field, const SpacetimeMesh& mesh,
                const std::string& path) {
  if (static_cast<int>(field.values.size()) != mesh.num_nodes()) {
    throw std::invalid_argument("export_csv: field size != node count");
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("export_csv: cannot open " + path);
  out << "slice_index,node_index,t,x,value,exact_value,abs_error\n";
  const double L = mesh.circumference();
  for (int node = 0; node < mesh.num_nodes(); ++node) {
    double t = mesh.node_t(node);
    double x = mesh.node_x(node);
    double value = field.values[node];
    double exact = exact_solution(x, t, L);
    out << mesh.slice_of(node) << ',' << mesh.pos_of(node) << ',' << fmt(t)
        << ',' << fmt(x) << ',' << fmt(value) << ',' << fmt(exact) << ','
        << fmt(std::abs(value - exact)) << '\n';
  }
  if (!out) throw std::runtime_error("export_csv: write failed: " + path);
}

DiscreteField load_field_csv(const std::string& path,
                             const SpacetimeMesh& mesh) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_field_csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error("load_field_csv: empty file " + path);
  }
  DiscreteField field;
  field.values.assign(mesh.num_nodes(), 0.0);
  int rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() < 5) {
      throw std::runtime_error("load_field_csv: malformed row: " + line);
    }
    int slice = std::stoi(cells[0]);
    int pos = std::stoi(cells[1]);
    double value = 0.0;
    auto r = std::from_chars(cells[4].data(), cells[4].data() + cells[4].size(),
                             value);
    if (r.ec != std::errc()) {
      throw std::runtime_error("load_field_csv: bad value: " + cells[4]);
    }
    if (slice < 0 || slice >= mesh.num_slices || pos < 0 ||
        pos >= mesh.nodes_per_slice) {
      throw std::runtime_error("load_field_csv: node out of range");
    }
    field.values[mesh.node_id(slice, pos)] = value;
    ++rows;
  }
  if (rows != mesh.num_nodes()) {
    throw std::runtime_error("load_field_csv: row count does not match mesh");
  }
  return field;
}

void save_mesh_json(const SpacetimeMesh& mesh, const std::string& path) {
  nlohmann::json j;
  j["signature"] = {-1, 1};
  j["nodes_per_slice"] = mesh.nodes_per_slice;
  j["num_slices"] = mesh.num_slices;
  j["dx"] = mesh.dx;
  j["dt"] = mesh.dt;
  j["style"] = mesh.style == MeshStyle::lightcone ? "lightcone" : "regular";
  auto& edges = j["edges"] = nlohmann::json::array();
  std::vector<std::pair<std::uint64_t, double>> sorted(mesh.edge_sq.begin(),
                                                       mesh.edge_sq.end());
  std::sort(sorted.begin(), sorted.end());
  for (const auto& [key, sq] : sorted) {
    edges.push_back({static_cast<int>(key >> 32),
                     static_cast<int>(key & 0xffffffffu), sq});
  }
  j["triangles"] = mesh.triangles;
  j["slices"] = mesh.slices;

  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_mesh_json: cannot open " + path);
  out << j.dump(1) << '\n';
}

SpacetimeMesh load_mesh_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_mesh_json: cannot open " + path);
  nlohmann::json j;
  in >> j;

  SpacetimeMesh mesh;
  mesh.nodes_per_slice = j.at("nodes_per_slice").get<int>();
  mesh.num_slices = j.at("num_slices").get<int>();
  mesh.dx = j.value("dx", 1.0);
  mesh.dt = j.value("dt", 1.0);
  mesh.style = j.value("style", std::string("regular")) == "lightcone"
                   ? MeshStyle::lightcone
                   : MeshStyle::regular;
  if (j.contains("signature")) {
    auto sig = j["signature"].get<std::vector<int>>();
    if (sig != std::vector<int>{-1, 1}) {
      throw std::runtime_error("load_mesh_json: unsupported signature");
    }
  }
  for (const auto& e : j.at("edges")) {
    mesh.set_edge(e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<double>());
  }
  mesh.triangles = j.at("triangles").get<std::vector<std::array<int, 3>>>();
  mesh.slices = j.at("slices").get<std::vector<std::vector<int>>>();
  return mesh;
}

PlyData read_ply(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_ply: cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line != "ply") {
    throw std::runtime_error("read_ply: missing ply magic");
  }
  size_t n_vertices = 0, n_faces = 0;
  while (std::getline(in, line) && line != "end_header") {
    std::istringstream ss(line);
    std::string word;
    ss >> word;
    if (word == "element") {
      std::string kind;
      size_t count;
      ss >> kind >> count;
      if (kind == "vertex") n_vertices = count;
      if (kind == "face") n_faces = count;
    }
  }
  PlyData data;
  for (size_t i = 0; i < n_vertices; ++i) {
    if (!std::getline(in, line)) throw std::runtime_error("read_ply: truncated");
    std::istringstream ss(line);
    std::array<double, 4> v{};
    ss >> v[0] >> v[1] >> v[2] >> v[3];
    if (!ss) throw std::runtime_error("read_ply: bad vertex row");
    data.vertices.push_back(v);
  }
  for (size_t i = 0; i < n_faces; ++i) {
    if (!std::getline(in, line)) throw std::runtime_error("read_ply: truncated");
    std::istringstream ss(line);
    int count;
    std::array<int, 3> f{};
    ss >> count >> f[0] >> f[1] >> f[2];
    if (!ss || count != 3) throw std::runtime_error("read_ply: bad face row");
    data.faces.push_back(f);
  }
  return data;
}

}  // namespace whitney
