#include "elastocq/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace elastocq {

double SurfaceMesh::total_area() const {
  double a = 0.0;
  for (double t : areas) a += t;
  return a;
}

double SurfaceMesh::enclosed_volume() const {
  double v = 0.0;
  for (int t = 0; t < num_triangles(); ++t)
    v += centroids[t].dot(normals[t]) * areas[t] / 3.0;
  return v;
}

void SurfaceMesh::finalize() {
  const int nt = num_triangles();
  normals.resize(nt);
  areas.resize(nt);
  centroids.resize(nt);
  diameters.resize(nt);
  for (int t = 0; t < nt; ++t) {
    auto [a, b, c] = triangle_vertices(t);
    const Vec3 cr = (b - a).cross(c - a);
    const double n2 = cr.norm();
    const double diam = std::max({(b - a).norm(), (c - b).norm(), (a - c).norm()});
    if (n2 <= 1e-14 * diam * diam)
      throw MeshValidationError("degenerate surface triangle", t);
    areas[t] = 0.5 * n2;
    normals[t] = cr / n2;
    centroids[t] = (a + b + c) / 3.0;
    diameters[t] = diam;
  }
  // watertightness + orientation: each directed edge must appear exactly once,
  // and its reverse exactly once.
  std::map<std::pair<int, int>, int> directed;
  for (int t = 0; t < nt; ++t) {
    for (int e = 0; e < 3; ++e) {
      int a = triangles[t][e], b = triangles[t][(e + 1) % 3];
      auto [it, fresh] = directed.insert({{a, b}, t});
      if (!fresh)
        throw MeshValidationError("directed edge used twice; inconsistent orientation", t);
      (void)it;
    }
  }
  for (const auto& [edge, t] : directed) {
    if (!directed.count({edge.second, edge.first}))
      throw MeshValidationError("boundary edge found; mesh is not watertight", t);
  }
  if (enclosed_volume() <= 0.0)
    throw MeshValidationError("negative enclosed volume; normals do not point outward", 0);
}

double tet_volume(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  return (b - a).cross(c - a).dot(d - a) / 6.0;
}

double VolumeMesh::total_volume() const {
  double v = 0.0;
  for (double t : volumes) v += t;
  return v;
}

void VolumeMesh::finalize(const SurfaceMesh& surface) {
  const int nt = num_tets();
  volumes.resize(nt);
  for (int e = 0; e < nt; ++e) {
    const auto& T = tets[e];
    volumes[e] = tet_volume(vertices[T[0]], vertices[T[1]], vertices[T[2]], vertices[T[3]]);
    if (volumes[e] <= 0.0)
      throw MeshValidationError("inverted or degenerate tetrahedron", e);
  }
  // collect once-used faces
  std::map<std::array<int, 3>, std::pair<std::array<int, 3>, int>> once;  // sorted -> (oriented, count)
  static const int face_of[4][3] = {{1, 2, 3}, {0, 3, 2}, {0, 1, 3}, {0, 2, 1}};
  for (int e = 0; e < nt; ++e) {
    for (const auto& f : face_of) {
      std::array<int, 3> ori = {tets[e][f[0]], tets[e][f[1]], tets[e][f[2]]};
      std::array<int, 3> key = ori;
      std::sort(key.begin(), key.end());
      auto it = once.find(key);
      if (it == once.end())
        once[key] = {ori, 1};
      else
        it->second.second += 1;
    }
  }
  std::map<std::array<int, 3>, std::array<int, 3>> boundary;  // sorted -> oriented (outward)
  for (const auto& [key, v] : once) {
    if (v.second == 1) boundary[key] = v.first;
    else if (v.second != 2)
      throw MeshValidationError("face shared by more than two tetrahedra", 0);
  }
  if (static_cast<std::size_t>(surface.num_triangles()) != boundary.size() ||
      boundary.size() != boundary_faces.size())
    throw MeshValidationError("boundary face count does not match the surface mesh", 0);
  // each listed boundary face must be a once-used face and match its surface
  // triangle vertex-for-vertex (same cyclic order, coincident coordinates)
  for (std::size_t k = 0; k < boundary_faces.size(); ++k) {
    const auto& bf = boundary_faces[k];
    std::array<int, 3> key = bf.v;
    std::sort(key.begin(), key.end());
    auto it = boundary.find(key);
    if (it == boundary.end())
      throw MeshValidationError("listed boundary face is not a boundary face of the tet mesh",
                                static_cast<long>(k));
    const int st = bf.surface_triangle;
    if (st < 0 || st >= surface.num_triangles())
      throw MeshValidationError("boundary face references a nonexistent surface triangle",
                                static_cast<long>(k));
    const auto& tri = surface.triangles[st];
    bool matched = false;
    for (int rot = 0; rot < 3 && !matched; ++rot) {
      bool ok = true;
      for (int c = 0; c < 3; ++c) {
        const Vec3 dv = vertices[bf.v[(c + rot) % 3]] - surface.vertices[tri[c]];
        if (dv.norm() > 1e-12 * std::max(1.0, surface.diameters[st])) ok = false;
      }
      matched = ok;
    }
    if (!matched)
      throw MeshValidationError("boundary face does not match its surface triangle vertex-for-vertex",
                                static_cast<long>(k));
  }
}

// ---------------------------------------------------------------------------

namespace {

struct IcoBase {
  std::vector<Vec3> v;
  std::vector<std::array<int, 3>> f;
};

IcoBase icosahedron() {
  const double p = (1.0 + std::sqrt(5.0)) / 2.0;
  IcoBase m;
  m.v = {{-1, p, 0}, {1, p, 0},  {-1, -p, 0}, {1, -p, 0}, {0, -1, p}, {0, 1, p},
         {0, -1, -p}, {0, 1, -p}, {p, 0, -1}, {p, 0, 1},  {-p, 0, -1}, {-p, 0, 1}};
  for (auto& x : m.v) x.normalize();
  m.f = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
         {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
         {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
         {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  return m;
}

}  // namespace

SurfaceMesh icosphere(int level, double radius) {
  if (level < 0) throw ConfigError("icosphere level must be >= 0");
  IcoBase m = icosahedron();
  for (int l = 0; l < level; ++l) {
    std::map<std::pair<int, int>, int> mid;
    auto midpoint = [&](int a, int b) {
      auto key = std::minmax(a, b);
      auto it = mid.find(key);
      if (it != mid.end()) return it->second;
      Vec3 c = (m.v[a] + m.v[b]).normalized();
      m.v.push_back(c);
      int idx = static_cast<int>(m.v.size()) - 1;
      mid[key] = idx;
      return idx;
    };
    std::vector<std::array<int, 3>> nf;
    nf.reserve(4 * m.f.size());
    for (auto [a, b, c] : m.f) {
      int ab = midpoint(a, b), bc = midpoint(b, c), ca = midpoint(c, a);
      nf.push_back({a, ab, ca});
      nf.push_back({ab, b, bc});
      nf.push_back({ca, bc, c});
      nf.push_back({ab, bc, ca});
    }
    m.f = std::move(nf);
  }
  SurfaceMesh out;
  out.vertices.reserve(m.v.size());
  for (const auto& x : m.v) out.vertices.push_back(radius * x);
  out.triangles = m.f;
  out.finalize();
  return out;
}

VolumeMesh ball_mesh(int level, double radius) {
  SurfaceMesh surf = icosphere(level, radius);
  const int ns = surf.num_vertices();
  const int layers = level + 1;  // radial subdivisions
  VolumeMesh vol;
  // vertex layout: layer `layers` (the boundary) first, then inner layers
  // outward-in, finally the center.  Boundary vertex i == surface vertex i.
  for (int k = layers; k >= 1; --k) {
    const double f = static_cast<double>(k) / layers;
    for (int i = 0; i < ns; ++i) vol.vertices.push_back(f * surf.vertices[i]);
  }
  const int center = static_cast<int>(vol.vertices.size());
  vol.vertices.push_back(Vec3::Zero());
  auto layer_index = [&](int k, int i) {  // k = layers..1
    return (layers - k) * ns + i;
  };
  auto push_tet = [&](int a, int b, int c, int d) {
    if (tet_volume(vol.vertices[a], vol.vertices[b], vol.vertices[c], vol.vertices[d]) < 0.0)
      std::swap(c, d);
    vol.tets.push_back({a, b, c, d});
  };
  // prisms between consecutive layers, split into 3 tets; the quad diagonals
  // follow global index order so neighboring prisms conform
  for (int k = layers; k >= 2; --k) {
    for (const auto& tri : surf.triangles) {
      std::array<int, 3> s = tri;
      std::sort(s.begin(), s.end());
      const int a1 = layer_index(k, s[0]), b1 = layer_index(k, s[1]), c1 = layer_index(k, s[2]);
      const int a0 = layer_index(k - 1, s[0]), b0 = layer_index(k - 1, s[1]),
                c0 = layer_index(k - 1, s[2]);
      push_tet(a0, b0, c0, c1);
      push_tet(a0, b0, c1, b1);
      push_tet(a0, b1, c1, a1);
    }
  }
  // innermost shell: cones to the center
  for (const auto& tri : surf.triangles) {
    const int a = layer_index(1, tri[0]), b = layer_index(1, tri[1]), c = layer_index(1, tri[2]);
    push_tet(center, a, b, c);
  }
  vol.boundary_faces.reserve(surf.num_triangles());
  for (int t = 0; t < surf.num_triangles(); ++t)
    vol.boundary_faces.push_back({{surf.triangles[t][0], surf.triangles[t][1],
                                   surf.triangles[t][2]}, t});
  vol.finalize(surf);
  return vol;
}

// ---------------------------------------------------------------------------

namespace {

std::istringstream next_data_line(std::istream& in, const std::string& path) {
  std::string line;
  while (std::getline(in, line)) {
    auto pos = line.find('#');
    if (pos != std::string::npos) line.erase(pos);
    std::istringstream ss(line);
    std::string probe;
    if (ss >> probe) {
      ss.clear();
      ss.seekg(0);
      return ss;
    }
  }
  throw ConfigError("unexpected end of file in " + path);
}

}  // namespace

SurfaceMesh load_surface_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open surface mesh file: " + path);
  std::string magic;
  next_data_line(in, path) >> magic;
  if (magic != "OFF") throw ConfigError("not an OFF file: " + path);
  int nv = 0, nf = 0, ne = 0;
  next_data_line(in, path) >> nv >> nf >> ne;
  SurfaceMesh mesh;
  mesh.vertices.resize(nv);
  for (int i = 0; i < nv; ++i) {
    auto ss = next_data_line(in, path);
    if (!(ss >> mesh.vertices[i].x() >> mesh.vertices[i].y() >> mesh.vertices[i].z()))
      throw ConfigError("malformed vertex line in " + path);
  }
  mesh.triangles.resize(nf);
  for (int t = 0; t < nf; ++t) {
    int cnt = 0;
    auto ss = next_data_line(in, path);
    if (!(ss >> cnt) || cnt != 3)
      throw MeshValidationError("OFF face is not a triangle", t);
    if (!(ss >> mesh.triangles[t][0] >> mesh.triangles[t][1] >> mesh.triangles[t][2]))
      throw ConfigError("malformed face line in " + path);
    for (int c : mesh.triangles[t])
      if (c < 0 || c >= nv) throw MeshValidationError("face vertex index out of range", t);
  }
  mesh.finalize();
  return mesh;
}

void save_surface_mesh(const SurfaceMesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write surface mesh file: " + path);
  out.precision(17);
  out << "OFF\n" << mesh.num_vertices() << ' ' << mesh.num_triangles() << " 0\n";
  for (const auto& v : mesh.vertices) out << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
  for (const auto& t : mesh.triangles) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

VolumeMesh load_volume_mesh(const std::string& path, const SurfaceMesh& surface) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open volume mesh file: " + path);
  VolumeMesh mesh;
  std::string kw;
  int n = 0;
  {
    auto ss = next_data_line(in, path);
    ss >> kw >> n;
    if (kw != "nodes") throw ConfigError("expected 'nodes <count>' in " + path);
  }
  mesh.vertices.resize(n);
  for (int i = 0; i < n; ++i) {
    auto ss = next_data_line(in, path);
    if (!(ss >> mesh.vertices[i].x() >> mesh.vertices[i].y() >> mesh.vertices[i].z()))
      throw ConfigError("malformed node line in " + path);
  }
  {
    auto ss = next_data_line(in, path);
    ss >> kw >> n;
    if (kw != "tets") throw ConfigError("expected 'tets <count>' in " + path);
  }
  mesh.tets.resize(n);
  for (int e = 0; e < n; ++e) {
    auto ss = next_data_line(in, path);
    for (int c = 0; c < 4; ++c)
      if (!(ss >> mesh.tets[e][c])) throw ConfigError("malformed tet line in " + path);
  }
  {
    auto ss = next_data_line(in, path);
    ss >> kw >> n;
    if (kw != "boundary-faces") throw ConfigError("expected 'boundary-faces <count>' in " + path);
  }
  mesh.boundary_faces.resize(n);
  for (int k = 0; k < n; ++k) {
    auto ss = next_data_line(in, path);
    auto& bf = mesh.boundary_faces[k];
    if (!(ss >> bf.v[0] >> bf.v[1] >> bf.v[2] >> bf.surface_triangle))
      throw ConfigError("malformed boundary-face line in " + path);
  }
  mesh.finalize(surface);
  return mesh;
}

void save_volume_mesh(const VolumeMesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write volume mesh file: " + path);
  out.precision(17);
  out << "nodes " << mesh.num_vertices() << '\n';
  for (const auto& v : mesh.vertices) out << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
  out << "tets " << mesh.num_tets() << '\n';
  for (const auto& t : mesh.tets) out << t[0] << ' ' << t[1] << ' ' << t[2] << ' ' << t[3] << '\n';
  out << "boundary-faces " << mesh.boundary_faces.size() << '\n';
  for (const auto& bf : mesh.boundary_faces)
    out << bf.v[0] << ' ' << bf.v[1] << ' ' << bf.v[2] << ' ' << bf.surface_triangle << '\n';
}

}  // namespace elastocq
