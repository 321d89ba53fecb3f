#pragma once

#include <array>
#include <vector>

#include "elastocq/types.hpp"

namespace elastocq {

/// Quadrature rule on the reference triangle {u,v >= 0, u+v <= 1}.
/// Weights are positive and sum to the reference area 1/2; the rule is exact
/// for total polynomial degree <= order.
struct TriangleRule {
  std::vector<Eigen::Vector2d> points;
  std::vector<double> weights;
  int order = 0;
};

/// Positive rule of exactness at least `order` (rounded up to the next
/// available positive-weight rule).
TriangleRule gauss_triangle(int order);

/// Rule on the reference tetrahedron {u,v,w >= 0, u+v+w <= 1}; weights
/// positive, summing to 1/6; exact for total degree <= order.
struct TetRule {
  std::vector<Vec3> points;
  std::vector<double> weights;
  int order = 0;
};

TetRule gauss_tet(int order);

enum class PairClass { disjoint = 0, shared_vertex = 1, shared_edge = 2, coincident = 3 };

/// One tensorized quadrature point of a triangle-pair rule: reference
/// coordinates on both triangles plus the combined weight.  The physical
/// weight is w * 4 * area_x * area_y.
struct PairQuadPoint {
  double x1, x2, y1, y2, w;
};

/// Regularized 4D rule for a triangle pair of the given adjacency class,
/// built from Duffy-type hypercube transformations with `order` Gauss points
/// per axis (disjoint: tensor product of two triangle rules of that order).
struct SingularPairRule {
  PairClass cls = PairClass::disjoint;
  std::vector<PairQuadPoint> points;
  int order = 0;
};

SingularPairRule singular_pair_rule(PairClass cls, int order);

/// Adjacency of two triangles by shared global vertex indices, together with
/// the vertex permutations that bring the shared feature into the reference
/// position expected by the singular rules (shared edge first, reversed on
/// the second triangle).
struct PairAdjacency {
  PairClass cls;
  std::array<int, 3> perm_x, perm_y;
};

PairAdjacency classify_pair(const std::array<int, 3>& tri_x, const std::array<int, 3>& tri_y,
                            bool same_triangle);

/// Gauss-Legendre on [0,1].
void gauss_legendre_01(int n, std::vector<double>& x, std::vector<double>& w);

}  // namespace elastocq
