#include "gaffney/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace gaffney {

namespace {

double signed_area(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                   const Eigen::Vector2d& c) {
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) -
                (c.x() - a.x()) * (b.y() - a.y()));
}

Edge make_edge(const std::vector<Eigen::Vector2d>& vertices, int a, int b,
               int tag) {
  Edge e;
  e.v = {a, b};
  e.tag = tag;
  const Eigen::Vector2d d = vertices[b] - vertices[a];
  e.length = d.norm();
  e.tangent = d / e.length;
  e.normal = Eigen::Vector2d(e.tangent.y(), -e.tangent.x());
  return e;
}

}  // namespace

double Mesh::triangle_area(int t) const {
  const auto& tri = triangles[t];
  return signed_area(vertices[tri[0]], vertices[tri[1]], vertices[tri[2]]);
}

Eigen::Vector2d Mesh::barycenter(int t) const {
  const auto& tri = triangles[t];
  return (vertices[tri[0]] + vertices[tri[1]] + vertices[tri[2]]) / 3.0;
}

double Mesh::total_area() const {
  double s = 0.0;
  for (int t = 0; t < triangle_count(); ++t) s += triangle_area(t);
  return s;
}

double Mesh::boundary_length() const {
  double s = 0.0;
  for (const auto& e : boundary_edges) s += e.length;
  return s;
}

double Mesh::longest_edge() const {
  double h = 0.0;
  for (const auto& tri : triangles) {
    for (int i = 0; i < 3; ++i) {
      const double len =
          (vertices[tri[(i + 1) % 3]] - vertices[tri[i]]).norm();
      h = std::max(h, len);
    }
  }
  return h;
}

Eigen::Vector2d Mesh::edge_midpoint(const Edge& e) const {
  return 0.5 * (vertices[e.v[0]] + vertices[e.v[1]]);
}

int Mesh::locate(const Eigen::Vector2d& x) const {
  for (int t = 0; t < triangle_count(); ++t) {
    const auto& tri = triangles[t];
    const double area = triangle_area(t);
    const double tol = -1e-12 * std::max(1.0, area);
    const double a0 = signed_area(x, vertices[tri[1]], vertices[tri[2]]);
    const double a1 = signed_area(vertices[tri[0]], x, vertices[tri[2]]);
    const double a2 = signed_area(vertices[tri[0]], vertices[tri[1]], x);
    if (a0 >= tol && a1 >= tol && a2 >= tol) return t;
  }
  return -1;
}

Mesh generate_structured_square(int k) {
  if (k < 1) throw std::invalid_argument("generate_structured_square: k must be >= 1");
  Mesh m;
  m.segment_count = 4;
  const int n = k + 1;
  const auto id = [n](int i, int j) { return j * n + i; };
  m.vertices.reserve(n * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      m.vertices.emplace_back(double(i) / k, double(j) / k);
  m.triangles.reserve(2 * k * k);
  for (int j = 0; j < k; ++j) {
    for (int i = 0; i < k; ++i) {
      m.triangles.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      m.triangles.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  // boundary loop, counterclockwise: bottom, right, top, left
  for (int i = 0; i < k; ++i)
    m.boundary_edges.push_back(make_edge(m.vertices, id(i, 0), id(i + 1, 0), 1));
  for (int j = 0; j < k; ++j)
    m.boundary_edges.push_back(make_edge(m.vertices, id(k, j), id(k, j + 1), 2));
  for (int i = k; i > 0; --i)
    m.boundary_edges.push_back(make_edge(m.vertices, id(i, k), id(i - 1, k), 3));
  for (int j = k; j > 0; --j)
    m.boundary_edges.push_back(make_edge(m.vertices, id(0, j), id(0, j - 1), 4));
  return m;
}

Mesh generate_lshape(int k) {
  if (k < 1) throw std::invalid_argument("generate_lshape: k must be >= 1");
  // Grid with 2k subdivisions of [0,1] so the corner (1/2,1/2) is resolved;
  // cells inside [1/2,1]^2 are dropped.
  const int n = 2 * k;
  const double h = 1.0 / n;
  Mesh m;
  m.segment_count = 6;
  std::vector<int> index((n + 1) * (n + 1), -1);
  const auto raw = [n](int i, int j) { return j * (n + 1) + i; };
  const auto cell_kept = [&](int i, int j) { return i < k || j < k; };
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      bool used = false;
      for (int cj = j - 1; cj <= j && !used; ++cj)
        for (int ci = i - 1; ci <= i && !used; ++ci)
          if (ci >= 0 && cj >= 0 && ci < n && cj < n && cell_kept(ci, cj))
            used = true;
      if (used) {
        index[raw(i, j)] = static_cast<int>(m.vertices.size());
        m.vertices.emplace_back(i * h, j * h);
      }
    }
  }
  const auto id = [&](int i, int j) { return index[raw(i, j)]; };
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      if (!cell_kept(i, j)) continue;
      m.triangles.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      m.triangles.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  // counterclockwise loop: bottom, right (x=1, y in [0,1/2]), notch top
  // (y=1/2, x from 1 to 1/2), notch right (x=1/2, y from 1/2 to 1),
  // top (y=1, x from 1/2 to 0), left.
  for (int i = 0; i < n; ++i)
    m.boundary_edges.push_back(make_edge(m.vertices, id(i, 0), id(i + 1, 0), 1));
  for (int j = 0; j < k; ++j)
    m.boundary_edges.push_back(make_edge(m.vertices, id(n, j), id(n, j + 1), 2));
  for (int i = n; i > k; --i)
    m.boundary_edges.push_back(make_edge(m.vertices, id(i, k), id(i - 1, k), 3));
  for (int j = k; j < n; ++j)
    m.boundary_edges.push_back(make_edge(m.vertices, id(k, j), id(k, j + 1), 4));
  for (int i = k; i > 0; --i)
    m.boundary_edges.push_back(make_edge(m.vertices, id(i, n), id(i - 1, n), 5));
  for (int j = n; j > 0; --j)
    m.boundary_edges.push_back(make_edge(m.vertices, id(0, j), id(0, j - 1), 6));
  return m;
}

Mesh generate_regular_polygon(int sides, int k) {
  if (sides < 3) throw std::invalid_argument("generate_regular_polygon: sides must be >= 3");
  if (k < 1) throw std::invalid_argument("generate_regular_polygon: k must be >= 1");
  Mesh m;
  m.segment_count = sides;
  std::vector<Eigen::Vector2d> corner(sides);
  for (int s = 0; s < sides; ++s) {
    const double th = 2.0 * M_PI * s / sides;
    corner[s] = Eigen::Vector2d(std::cos(th), std::sin(th));
  }
  // Each fan triangle (origin, corner[s], corner[s+1]) is subdivided into
  // k^2 subtriangles on the barycentric lattice. Lattice points on shared
  // radial edges are computed by the identical expression from both fans,
  // so bit-exact keys deduplicate them.
  std::map<std::pair<std::int64_t, std::int64_t>, int> seen;
  const auto key = [](const Eigen::Vector2d& p) {
    std::int64_t a, b;
    static_assert(sizeof(double) == sizeof(std::int64_t));
    double x = p.x() == 0.0 ? 0.0 : p.x();  // normalize -0.0
    double y = p.y() == 0.0 ? 0.0 : p.y();
    std::memcpy(&a, &x, sizeof(a));
    std::memcpy(&b, &y, sizeof(b));
    return std::make_pair(a, b);
  };
  const auto add_vertex = [&](const Eigen::Vector2d& p) {
    const auto it = seen.find(key(p));
    if (it != seen.end()) return it->second;
    const int idx = static_cast<int>(m.vertices.size());
    m.vertices.push_back(p);
    seen.emplace(key(p), idx);
    return idx;
  };
  for (int s = 0; s < sides; ++s) {
    const Eigen::Vector2d& va = corner[s];
    const Eigen::Vector2d& vb = corner[(s + 1) % sides];
    std::vector<std::vector<int>> lat(k + 1);
    for (int a = 0; a <= k; ++a) {
      lat[a].resize(k + 1 - a);
      for (int b = 0; b + a <= k; ++b) {
        const Eigen::Vector2d p =
            (double(a) / k) * va + (double(b) / k) * vb;
        lat[a][b] = add_vertex(p);
      }
    }
    for (int a = 0; a < k; ++a) {
      for (int b = 0; a + b < k; ++b) {
        m.triangles.push_back({lat[a][b], lat[a + 1][b], lat[a][b + 1]});
        if (a + b < k - 1)
          m.triangles.push_back({lat[a + 1][b], lat[a + 1][b + 1], lat[a][b + 1]});
      }
    }
    for (int a = k; a > 0; --a) {
      // outer edge runs from corner[s] toward corner[s+1]
      m.boundary_edges.push_back(
          make_edge(m.vertices, lat[a][k - a], lat[a - 1][k - a + 1], s + 1));
    }
  }
  return m;
}

Mesh refine(const Mesh& m) {
  Mesh r;
  r.segment_count = m.segment_count;
  r.vertices = m.vertices;
  std::map<std::pair<int, int>, int> midpoint;
  const auto mid = [&](int a, int b) {
    const auto k = std::minmax(a, b);
    const auto it = midpoint.find({k.first, k.second});
    if (it != midpoint.end()) return it->second;
    const int idx = static_cast<int>(r.vertices.size());
    r.vertices.push_back(0.5 * (m.vertices[a] + m.vertices[b]));
    midpoint.emplace(std::make_pair(k.first, k.second), idx);
    return idx;
  };
  r.triangles.reserve(4 * m.triangles.size());
  for (const auto& tri : m.triangles) {
    const int m01 = mid(tri[0], tri[1]);
    const int m12 = mid(tri[1], tri[2]);
    const int m02 = mid(tri[0], tri[2]);
    r.triangles.push_back({tri[0], m01, m02});
    r.triangles.push_back({m01, tri[1], m12});
    r.triangles.push_back({m02, m12, tri[2]});
    r.triangles.push_back({m01, m12, m02});
  }
  r.boundary_edges.reserve(2 * m.boundary_edges.size());
  for (const auto& e : m.boundary_edges) {
    const int mm = mid(e.v[0], e.v[1]);
    r.boundary_edges.push_back(make_edge(r.vertices, e.v[0], mm, e.tag));
    r.boundary_edges.push_back(make_edge(r.vertices, mm, e.v[1], e.tag));
  }
  return r;
}

Mesh make_domain(const std::string& name, int k) {
  if (name == "square") return generate_structured_square(k);
  if (name == "lshape") return generate_lshape(k);
  if (name == "hexagon") return generate_regular_polygon(6, k);
  if (name.rfind("polygon:", 0) == 0) {
    const int sides = std::stoi(name.substr(8));
    return generate_regular_polygon(sides, k);
  }
  throw std::invalid_argument("unknown domain '" + name + "'");
}

std::vector<MeshIssue> validate(const Mesh& m) {
  std::vector<MeshIssue> issues;
  const auto add = [&](const std::string& code, const std::string& msg) {
    issues.push_back({code, msg});
  };
  const int nv = m.vertex_count();
  for (const auto& tri : m.triangles) {
    for (int i : tri) {
      if (i < 0 || i >= nv) {
        add("bad-index", "triangle references vertex " + std::to_string(i));
        return issues;
      }
    }
  }
  for (const auto& e : m.boundary_edges) {
    for (int i : e.v) {
      if (i < 0 || i >= nv) {
        add("bad-index", "boundary edge references vertex " + std::to_string(i));
        return issues;
      }
    }
  }

  for (int t = 0; t < m.triangle_count(); ++t) {
    if (m.triangle_area(t) <= 0.0)
      add("negative-area",
          "triangle " + std::to_string(t) + " has non-positive signed area");
  }

  // Triangle edges used exactly once must coincide with the boundary edges.
  std::map<std::pair<int, int>, int> edge_use;
  for (const auto& tri : m.triangles) {
    for (int i = 0; i < 3; ++i) {
      const auto k = std::minmax(tri[i], tri[(i + 1) % 3]);
      ++edge_use[{k.first, k.second}];
    }
  }
  std::set<std::pair<int, int>> boundary_set;
  for (const auto& e : m.boundary_edges) {
    const auto k = std::minmax(e.v[0], e.v[1]);
    if (!boundary_set.insert({k.first, k.second}).second)
      add("duplicate-boundary-edge",
          "edge (" + std::to_string(e.v[0]) + "," + std::to_string(e.v[1]) +
              ") listed twice");
  }
  for (const auto& [key, count] : edge_use) {
    if (count == 1 && !boundary_set.count(key))
      add("missing-boundary-edge",
          "triangle edge (" + std::to_string(key.first) + "," +
              std::to_string(key.second) + ") is exposed but not tagged");
    if (count > 2)
      add("nonmanifold-edge", "edge (" + std::to_string(key.first) + "," +
                                  std::to_string(key.second) + ") used " +
                                  std::to_string(count) + " times");
  }
  for (const auto& key : boundary_set) {
    const auto it = edge_use.find(key);
    if (it == edge_use.end() || it->second != 1)
      add("interior-boundary-edge",
          "tagged edge (" + std::to_string(key.first) + "," +
              std::to_string(key.second) + ") is not a free triangle edge");
  }

  // Closed loop: every boundary vertex has exactly two incident edges.
  std::map<int, int> incidence;
  for (const auto& e : m.boundary_edges) {
    ++incidence[e.v[0]];
    ++incidence[e.v[1]];
  }
  for (const auto& [v, count] : incidence) {
    if (count != 2)
      add("open-boundary", "vertex " + std::to_string(v) + " has " +
                               std::to_string(count) + " boundary edges");
  }

  for (std::size_t i = 0; i < m.boundary_edges.size(); ++i) {
    const auto& e = m.boundary_edges[i];
    const std::string id = "boundary edge " + std::to_string(i);
    if (e.tag < 1 || e.tag > m.segment_count)
      add("bad-tag", id + " has tag " + std::to_string(e.tag));
    const Eigen::Vector2d d = m.vertices[e.v[1]] - m.vertices[e.v[0]];
    const double len = d.norm();
    if (!(len > 0.0)) {
      add("degenerate-edge", id + " has zero length");
      continue;
    }
    if (std::abs(e.length - len) > 1e-12 * (1.0 + len))
      add("bad-length", id + " stored length disagrees with endpoints");
    if (std::abs(e.normal.norm() - 1.0) > 1e-14)
      add("normal-not-unit", id + " has |nu| = " + std::to_string(e.normal.norm()));
    if (std::abs(e.normal.dot(d) / len) > 1e-12)
      add("normal-not-orthogonal", id + " normal is not orthogonal to the edge");
    if ((e.tangent - Eigen::Vector2d(-e.normal.y(), e.normal.x())).norm() > 1e-14)
      add("tangent-mismatch", id + " tangent != (-nu_2, nu_1)");
    // outward: the adjacent triangle's centroid must lie on the inner side
    bool found = false;
    for (int t = 0; t < m.triangle_count() && !found; ++t) {
      const auto& tri = m.triangles[t];
      int hit = 0;
      for (int s : tri) hit += (s == e.v[0] || s == e.v[1]) ? 1 : 0;
      if (hit == 2) {
        found = true;
        const Eigen::Vector2d mid = m.edge_midpoint(e);
        if (e.normal.dot(m.barycenter(t) - mid) >= 0.0)
          add("normal-orientation", id + " normal points into the domain");
      }
    }
    if (!found) add("dangling-edge", id + " has no adjacent triangle");
  }
  return issues;
}

void recompute_edge_frames(Mesh& m) {
  for (auto& e : m.boundary_edges) {
    const Eigen::Vector2d d = m.vertices[e.v[1]] - m.vertices[e.v[0]];
    e.length = d.norm();
    if (e.length > 0.0) {
      e.tangent = d / e.length;
      e.normal = Eigen::Vector2d(e.tangent.y(), -e.tangent.x());
    }
  }
}

std::string to_json_string(const Mesh& m) {
  nlohmann::json j;
  j["vertices"] = nlohmann::json::array();
  for (const auto& v : m.vertices) j["vertices"].push_back({v.x(), v.y()});
  j["triangles"] = nlohmann::json::array();
  for (const auto& t : m.triangles) j["triangles"].push_back({t[0], t[1], t[2]});
  j["boundary_edges"] = nlohmann::json::array();
  for (const auto& e : m.boundary_edges)
    j["boundary_edges"].push_back({{"v", {e.v[0], e.v[1]}}, {"tag", e.tag}});
  j["segment_count"] = m.segment_count;
  return j.dump(2);
}

Mesh mesh_from_json_string(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  Mesh m;
  for (const auto& v : j.at("vertices"))
    m.vertices.emplace_back(v.at(0).get<double>(), v.at(1).get<double>());
  for (const auto& t : j.at("triangles"))
    m.triangles.push_back({t.at(0).get<int>(), t.at(1).get<int>(), t.at(2).get<int>()});
  for (const auto& e : j.at("boundary_edges")) {
    Edge edge;
    edge.v = {e.at("v").at(0).get<int>(), e.at("v").at(1).get<int>()};
    edge.tag = e.at("tag").get<int>();
    m.boundary_edges.push_back(edge);
  }
  m.segment_count = j.at("segment_count").get<int>();
  recompute_edge_frames(m);
  return m;
}

void save_mesh(const Mesh& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << to_json_string(m) << "\n";
}

Mesh load_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return mesh_from_json_string(ss.str());
}

}  // namespace gaffney
