#include "elastocq/quadrature.hpp"

#include <cmath>

namespace elastocq {

void gauss_legendre_01(int n, std::vector<double>& x, std::vector<double>& w) {
  // Newton on Legendre polynomials, then map [-1,1] -> [0,1]
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[i] = 0.5 * (1.0 - z);
    x[n - 1 - i] = 0.5 * (1.0 + z);
    w[i] = w[n - 1 - i] = 1.0 / ((1.0 - z * z) * pp * pp);
  }
}

namespace {

TriangleRule from_barycentric_groups(
    int order, const std::vector<std::pair<double, double>>& groups, bool centroid,
    double centroid_weight) {
  // groups: (a, weight) meaning the 3 permutations of (1-2a, a, a)
  TriangleRule rule;
  rule.order = order;
  if (centroid) {
    rule.points.push_back({1.0 / 3.0, 1.0 / 3.0});
    rule.weights.push_back(0.5 * centroid_weight);
  }
  for (auto [a, w] : groups) {
    const double b = 1.0 - 2.0 * a;
    const double bary[3][3] = {{b, a, a}, {a, b, a}, {a, a, b}};
    for (const auto& p : bary) {
      rule.points.push_back({p[1], p[2]});
      rule.weights.push_back(0.5 * w);
    }
  }
  return rule;
}

TriangleRule collapsed_triangle(int order) {
  const int m = order / 2 + 1;
  std::vector<double> x, w;
  gauss_legendre_01(m, x, w);
  TriangleRule rule;
  rule.order = order;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      rule.points.push_back({x[i], x[j] * (1.0 - x[i])});
      rule.weights.push_back(w[i] * w[j] * (1.0 - x[i]));
    }
  }
  return rule;
}

}  // namespace

TriangleRule gauss_triangle(int order) {
  if (order < 1) throw ConfigError("triangle rule order must be >= 1");
  if (order == 1)
    return from_barycentric_groups(1, {}, true, 1.0);
  if (order == 2)
    return from_barycentric_groups(2, {{1.0 / 6.0, 1.0 / 3.0}}, false, 0.0);
  if (order <= 4)
    return from_barycentric_groups(
        4, {{0.445948490915965, 0.223381589678011}, {0.091576213509771, 0.109951743655322}},
        false, 0.0);
  if (order == 5)
    return from_barycentric_groups(
        5, {{0.470142064105115, 0.132394152788506}, {0.101286507323456, 0.125939180544827}},
        true, 0.225);
  return collapsed_triangle(order);
}

TetRule gauss_tet(int order) {
  if (order < 1) throw ConfigError("tet rule order must be >= 1");
  TetRule rule;
  rule.order = order;
  if (order == 1) {
    rule.points.push_back(Vec3(0.25, 0.25, 0.25));
    rule.weights.push_back(1.0 / 6.0);
    return rule;
  }
  if (order == 2) {
    const double a = 0.5854101966249685, b = 0.1381966011250105;
    const double pts[4][4] = {{a, b, b, b}, {b, a, b, b}, {b, b, a, b}, {b, b, b, a}};
    for (const auto& p : pts) {
      rule.points.push_back(Vec3(p[1], p[2], p[3]));
      rule.weights.push_back(1.0 / 24.0);
    }
    return rule;
  }
  // collapsed tensor Gauss, positive for any order
  const int m = (order + 3) / 2;
  std::vector<double> x, w;
  gauss_legendre_01(m, x, w);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) {
        const double u = x[i];
        const double v = x[j] * (1.0 - u);
        const double t = x[k] * (1.0 - u - v);
        rule.points.push_back(Vec3(u, v, t));
        rule.weights.push_back(w[i] * w[j] * w[k] * (1.0 - u) * (1.0 - u - v));
      }
  return rule;
}

namespace {

// Duffy-type hypercube-to-triangle-pair maps; reference coordinates on the
// unit triangle, weights carry the transformation Jacobian.
void map_coincident(double k, double n1, double n2, double n3, int simplex, PairQuadPoint& p) {
  p.w = k * k * k * n1 * n1 * n2;
  switch (simplex) {
    case 0:
      p.x1 = k * n1 * (1 - n2);        p.x2 = k * (1 - n1 * (1 - n2));
      p.y1 = k * n1 * (1 - n2 * n3);   p.y2 = k * (1 - n1);
      break;
    case 1:
      p.x1 = k * n1 * (1 - n2 * n3);   p.x2 = k * (1 - n1);
      p.y1 = k * n1 * (1 - n2);        p.y2 = k * (1 - n1 * (1 - n2));
      break;
    case 2:
      p.x1 = k * (1 - n1 * (1 - n2 * (1 - n3)));  p.x2 = k * n1 * (1 - n2 * (1 - n3));
      p.y1 = k * (1 - n1);                        p.y2 = k * n1 * (1 - n2);
      break;
    case 3:
      p.x1 = k * (1 - n1);                        p.x2 = k * n1 * (1 - n2);
      p.y1 = k * (1 - n1 * (1 - n2 * (1 - n3)));  p.y2 = k * n1 * (1 - n2 * (1 - n3));
      break;
    case 4:
      p.x1 = k * (1 - n1);             p.x2 = k * n1 * (1 - n2 * n3);
      p.y1 = k * (1 - n1 * (1 - n2));  p.y2 = k * n1 * (1 - n2);
      break;
    case 5:
      p.x1 = k * (1 - n1 * (1 - n2));  p.x2 = k * n1 * (1 - n2);
      p.y1 = k * (1 - n1);             p.y2 = k * n1 * (1 - n2 * n3);
      break;
  }
}

void map_edge(double k, double n1, double n2, double n3, int simplex, PairQuadPoint& p) {
  p.w = k * k * k * n1 * n1;
  switch (simplex) {
    case 0:
      p.x1 = k * (1 - n1 * n3);   p.x2 = k * n1 * n3;
      p.y1 = k * (1 - n1);        p.y2 = k * n1 * (1 - n2);
      break;
    case 1:
      p.x1 = k * (1 - n1);        p.x2 = k * n1;
      p.y1 = k * (1 - n1 * n2);   p.y2 = k * n1 * n2 * (1 - n3);
      p.w *= n2;
      break;
    case 2:
      p.x1 = k * (1 - n1);        p.x2 = k * n1 * (1 - n2);
      p.y1 = k * (1 - n1 * n2 * n3);  p.y2 = k * n1 * n2 * n3;
      p.w *= n2;
      break;
    case 3:
      p.x1 = k * (1 - n1 * n2);   p.x2 = k * n1 * n2 * (1 - n3);
      p.y1 = k * (1 - n1);        p.y2 = k * n1;
      p.w *= n2;
      break;
    case 4:
      p.x1 = k * (1 - n1);        p.x2 = k * n1 * (1 - n2 * n3);
      p.y1 = k * (1 - n1 * n2);   p.y2 = k * n1 * n2;
      p.w *= n2;
      break;
  }
}

void map_vertex(double k, double n1, double n2, double n3, int simplex, PairQuadPoint& p) {
  p.w = k * k * k * n2;
  switch (simplex) {
    case 0:
      p.x1 = k * (1 - n1);        p.x2 = k * n1;
      p.y1 = k * n2 * (1 - n3);   p.y2 = k * n2 * n3;
      break;
    case 1:
      p.x1 = k * n2 * (1 - n3);   p.x2 = k * n2 * n3;
      p.y1 = k * (1 - n1);        p.y2 = k * n1;
      break;
  }
}

}  // namespace

SingularPairRule singular_pair_rule(PairClass cls, int order) {
  if (order < 1) throw ConfigError("singular pair rule order must be >= 1");
  SingularPairRule rule;
  rule.cls = cls;
  rule.order = order;
  if (cls == PairClass::disjoint) {
    const TriangleRule tri = gauss_triangle(order);
    for (std::size_t i = 0; i < tri.points.size(); ++i)
      for (std::size_t j = 0; j < tri.points.size(); ++j)
        rule.points.push_back({tri.points[i].x(), tri.points[i].y(), tri.points[j].x(),
                               tri.points[j].y(),
                               tri.weights[i] * tri.weights[j]});
    return rule;
  }
  std::vector<double> gx, gw;
  gauss_legendre_01(order, gx, gw);
  const int nsimp = cls == PairClass::coincident ? 6 : (cls == PairClass::shared_edge ? 5 : 2);
  rule.points.reserve(static_cast<std::size_t>(nsimp) * order * order * order * order);
  for (int simplex = 0; simplex < nsimp; ++simplex) {
    for (int a = 0; a < order; ++a)
      for (int b = 0; b < order; ++b)
        for (int c = 0; c < order; ++c)
          for (int d = 0; d < order; ++d) {
            PairQuadPoint p{};
            switch (cls) {
              case PairClass::coincident: map_coincident(gx[a], gx[b], gx[c], gx[d], simplex, p); break;
              case PairClass::shared_edge: map_edge(gx[a], gx[b], gx[c], gx[d], simplex, p); break;
              case PairClass::shared_vertex: map_vertex(gx[a], gx[b], gx[c], gx[d], simplex, p); break;
              case PairClass::disjoint: break;
            }
            p.w *= gw[a] * gw[b] * gw[c] * gw[d];
            rule.points.push_back(p);
          }
  }
  return rule;
}

PairAdjacency classify_pair(const std::array<int, 3>& tx, const std::array<int, 3>& ty,
                            bool same_triangle) {
  if (same_triangle)
    return {PairClass::coincident, {0, 1, 2}, {0, 1, 2}};
  // shared edge: directed edge (a, a+1) of x equals reversed edge of y
  for (int rx = 0; rx < 3; ++rx) {
    for (int ry = 0; ry < 3; ++ry) {
      if (tx[rx] == ty[(ry + 1) % 3] && tx[(rx + 1) % 3] == ty[ry]) {
        return {PairClass::shared_edge,
                {rx, (rx + 1) % 3, (rx + 2) % 3},
                {(ry + 1) % 3, ry, (ry + 2) % 3}};
      }
    }
  }
  for (int rx = 0; rx < 3; ++rx)
    for (int ry = 0; ry < 3; ++ry)
      if (tx[rx] == ty[ry])
        return {PairClass::shared_vertex,
                {rx, (rx + 1) % 3, (rx + 2) % 3},
                {ry, (ry + 1) % 3, (ry + 2) % 3}};
  return {PairClass::disjoint, {0, 1, 2}, {0, 1, 2}};
}

}  // namespace elastocq
