#include "elastocq/bem.hpp"

#include <cmath>

#include "elastocq/parallel.hpp"

namespace elastocq {

MatX boundary_mass_p0_p1(const SurfaceMesh& mesh) {
  MatX B = MatX::Zero(3 * mesh.num_triangles(), 3 * mesh.num_vertices());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const double v = mesh.areas[t] / 3.0;
    for (int c = 0; c < 3; ++c)
      for (int i = 0; i < 3; ++i) B(3 * t + i, 3 * mesh.triangles[t][c] + i) += v;
  }
  return B;
}

MatX boundary_mass_p1(const SurfaceMesh& mesh) {
  MatX M = MatX::Zero(3 * mesh.num_vertices(), 3 * mesh.num_vertices());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        const double v = mesh.areas[t] * (a == b ? 2.0 : 1.0) / 12.0;
        for (int i = 0; i < 3; ++i)
          M(3 * mesh.triangles[t][a] + i, 3 * mesh.triangles[t][b] + i) += v;
      }
  }
  return M;
}

VecX boundary_mass_p0(const SurfaceMesh& mesh) {
  VecX d(3 * mesh.num_triangles());
  for (int t = 0; t < mesh.num_triangles(); ++t)
    for (int i = 0; i < 3; ++i) d(3 * t + i) = mesh.areas[t];
  return d;
}

namespace {

/// Mapped quadrature data of one triangle pair, buffers reused across pairs.
struct PairBuffer {
  std::vector<Vec3> x, y;
  std::vector<double> shx, shy;   // 3 P1 shape values per point
  std::vector<double> w;          // physical weights
  std::array<int, 3> gx{}, gy{};  // global vertices matching the shape slots

  void fill(const SurfaceMesh& mesh, int a, int b, const PairAdjacency& adj,
            const SingularPairRule& rule) {
    const std::size_t n = rule.points.size();
    x.resize(n);
    y.resize(n);
    shx.resize(3 * n);
    shy.resize(3 * n);
    w.resize(n);
    std::array<Vec3, 3> va, vb;
    for (int c = 0; c < 3; ++c) {
      gx[c] = mesh.triangles[a][adj.perm_x[c]];
      gy[c] = mesh.triangles[b][adj.perm_y[c]];
      va[c] = mesh.vertices[gx[c]];
      vb[c] = mesh.vertices[gy[c]];
    }
    const double scale = 4.0 * mesh.areas[a] * mesh.areas[b];
    for (std::size_t q = 0; q < n; ++q) {
      const auto& p = rule.points[q];
      x[q] = va[0] + (va[1] - va[0]) * p.x1 + (va[2] - va[0]) * p.x2;
      y[q] = vb[0] + (vb[1] - vb[0]) * p.y1 + (vb[2] - vb[0]) * p.y2;
      shx[3 * q + 0] = 1.0 - p.x1 - p.x2;
      shx[3 * q + 1] = p.x1;
      shx[3 * q + 2] = p.x2;
      shy[3 * q + 0] = 1.0 - p.y1 - p.y2;
      shy[3 * q + 1] = p.y1;
      shy[3 * q + 2] = p.y2;
      w[q] = p.w * scale;
    }
  }
  std::size_t size() const { return w.size(); }
};

struct RuleSet {
  SingularPairRule regular, near, vertex, edge, coincident;
  const SingularPairRule& select(PairClass cls, bool near_pair) const {
    switch (cls) {
      case PairClass::coincident: return coincident;
      case PairClass::shared_edge: return edge;
      case PairClass::shared_vertex: return vertex;
      case PairClass::disjoint: break;
    }
    return near_pair ? near : regular;
  }
};

RuleSet make_rules(const BemOptions& o) {
  RuleSet r;
  r.regular = singular_pair_rule(PairClass::disjoint, o.regular_order);
  r.near = singular_pair_rule(PairClass::disjoint, o.near_order);
  r.vertex = singular_pair_rule(PairClass::shared_vertex, o.singular_order);
  r.edge = singular_pair_rule(PairClass::shared_edge, o.singular_order);
  r.coincident = singular_pair_rule(PairClass::coincident, o.singular_order);
  return r;
}

bool is_near_pair(const SurfaceMesh& mesh, int a, int b) {
  const double sep = (mesh.centroids[a] - mesh.centroids[b]).norm() -
                     0.5 * (mesh.diameters[a] + mesh.diameters[b]);
  return sep < std::max(mesh.diameters[a], mesh.diameters[b]);
}

/// merged vertex slots of a pair and the x-minus-y shape differences
struct DiffWeights {
  std::array<int, 6> verts{};
  int count = 0;
  std::array<int, 3> sx{}, sy{};

  void build(const PairBuffer& buf) {
    count = 0;
    auto slot = [&](int g) {
      for (int k = 0; k < count; ++k)
        if (verts[k] == g) return k;
      verts[count] = g;
      return count++;
    };
    for (int c = 0; c < 3; ++c) sx[c] = slot(buf.gx[c]);
    for (int c = 0; c < 3; ++c) sy[c] = slot(buf.gy[c]);
  }
  void at(const PairBuffer& buf, std::size_t q, std::array<double, 6>& dv) const {
    dv.fill(0.0);
    for (int c = 0; c < 3; ++c) {
      dv[sx[c]] += buf.shx[3 * q + c];
      dv[sy[c]] -= buf.shy[3 * q + c];
    }
  }
};

}  // namespace

BemAssembler::BemAssembler(const SurfaceMesh& mesh, const IsotropicExterior& mat, BemOptions opts)
    : mesh_(&mesh), kernel_(mat), opts_(opts) {}

const MatX& BemAssembler::static_hypersingular() const {
  if (w_static_) return *w_static_;
  const SurfaceMesh& mesh = *mesh_;
  const std::size_t nt = mesh.num_triangles();
  const int nW = 3 * mesh.num_vertices();
  const RuleSet rules = make_rules(opts_);
  const int workers = opts_.parallel ? std::min(worker_count(), static_cast<int>(nt)) : 1;
  std::vector<MatX> partial(workers, MatX::Zero(nW, nW));
  const std::size_t chunk = (nt + workers - 1) / workers;

  parallel_for_workers(workers, [&](std::size_t wid, int) {
    MatX& W0 = partial[wid];
    PairBuffer buf;
    DiffWeights dw;
    std::array<double, 6> dv{};
    const std::size_t a0 = std::min(nt, wid * chunk), a1 = std::min(nt, a0 + chunk);
    for (std::size_t a = a0; a < a1; ++a) {
      for (std::size_t b = a; b < nt; ++b) {
        const PairAdjacency adj = classify_pair(mesh.triangles[a], mesh.triangles[b], a == b);
        buf.fill(mesh, a, b, adj, rules.select(adj.cls, is_near_pair(mesh, a, b)));
        dw.build(buf);
        const Vec3& nx = mesh.normals[a];
        const Vec3& ny = mesh.normals[b];
        const double half = (a == b) ? 0.5 : 1.0;  // diagonal enters P + P^T twice
        for (std::size_t q = 0; q < buf.size(); ++q) {
          const Vec3 d = buf.x[q] - buf.y[q];
          const double r = d.norm();
          if (!(r > 0.0)) continue;
          dw.at(buf, q, dv);
          const SecondTensor T4 =
              KupradzeKernel::second_tensor(kernel_.static_scalars(r), d / r);
          const Mat3 KW0 = kernel_.hyper_from_second(T4, nx, ny).real();
          const double wq = -0.5 * half * buf.w[q];
          for (int ka = 0; ka < dw.count; ++ka) {
            if (dv[ka] == 0.0) continue;
            for (int kb = 0; kb < dw.count; ++kb) {
              if (dv[kb] == 0.0) continue;
              W0.block<3, 3>(3 * dw.verts[ka], 3 * dw.verts[kb]).noalias() +=
                  (wq * dv[ka] * dv[kb]) * KW0;
            }
          }
        }
      }
    }
  });
  MatX P = std::move(partial[0]);
  for (int w = 1; w < workers; ++w) P += partial[w];
  w_static_.emplace(P + P.transpose());
  return *w_static_;
}

BoundaryOperatorSet BemAssembler::assemble(cd s) const {
  if (!(s.real() > 0.0)) throw AssemblyError("operators require Re s > 0");
  const SurfaceMesh& mesh = *mesh_;
  const std::size_t nt = mesh.num_triangles();
  const int nP0 = 3 * static_cast<int>(nt);
  const int nP1 = 3 * mesh.num_vertices();
  const RuleSet rules = make_rules(opts_);
  const double zs_split = 0.5;  // below: series path of the difference scalars

  BoundaryOperatorSet ops;
  ops.s = s;
  ops.V.setZero(nP0, nP0);

  const int workers = opts_.parallel ? std::min(worker_count(), static_cast<int>(nt)) : 1;
  std::vector<MatXc> partialK(workers, MatXc::Zero(nP0, nP1));
  std::vector<MatXc> partialW(workers, MatXc::Zero(nP1, nP1));
  const std::size_t chunk = (nt + workers - 1) / workers;
  const double cs = kernel_.material().cs();

  parallel_for_workers(workers, [&](std::size_t wid, int) {
    MatXc& K = partialK[wid];
    MatXc& dW = partialW[wid];
    PairBuffer buf;
    DiffWeights dw;
    std::array<double, 6> dv{};
    const std::size_t a0 = std::min(nt, wid * chunk), a1 = std::min(nt, a0 + chunk);
    for (std::size_t a = a0; a < a1; ++a) {
      for (std::size_t b = a; b < nt; ++b) {
        const PairAdjacency adj = classify_pair(mesh.triangles[a], mesh.triangles[b], a == b);
        buf.fill(mesh, a, b, adj, rules.select(adj.cls, is_near_pair(mesh, a, b)));
        dw.build(buf);
        const Vec3& nx = mesh.normals[a];
        const Vec3& ny = mesh.normals[b];
        const bool diag = (a == b);
        const double half = diag ? 0.5 : 1.0;
        Mat3c Vblk = Mat3c::Zero();
        for (std::size_t q = 0; q < buf.size(); ++q) {
          const Vec3 d = buf.x[q] - buf.y[q];
          const double r = d.norm();
          if (!(r > 0.0)) continue;
          const Vec3 rhat = d / r;
          const double wq = buf.w[q];
          const RadialScalars sc = kernel_.scalars(r, s);
          // V
          Vblk.noalias() += wq * KupradzeKernel::e_tensor(sc, rhat);
          // K for rows of panel a ...
          const GradTensor G = KupradzeKernel::grad_tensor(sc, rhat);
          const Mat3c DLab = kernel_.traction_from_grad(G, ny).transpose();
          for (int c = 0; c < 3; ++c) {
            K.block<3, 3>(3 * a, 3 * buf.gy[c]).noalias() += (wq * buf.shy[3 * q + c]) * DLab;
          }
          // ... and, from the same tensors, for rows of panel b (x and y roles
          // swapped; the gradient is odd in the direction)
          if (!diag) {
            const Mat3c DLba = (-kernel_.traction_from_grad(G, nx)).transpose();
            for (int c = 0; c < 3; ++c) {
              K.block<3, 3>(3 * b, 3 * buf.gx[c]).noalias() += (wq * buf.shx[3 * q + c]) * DLba;
            }
          }
          // dynamic remainder of W
          RadialScalars dsc;
          if (std::abs(s) * r / cs >= zs_split) {
            const RadialScalars st = kernel_.static_scalars(r);
            dsc = RadialScalars{sc.A - st.A, sc.B - st.B, sc.Ap - st.Ap,
                                sc.Bp - st.Bp, sc.App - st.App, sc.Bpp - st.Bpp, r};
          } else {
            dsc = kernel_.delta_scalars(r, s);
          }
          const Mat3c KWd =
              kernel_.hyper_from_second(KupradzeKernel::second_tensor(dsc, rhat), nx, ny);
          for (int ca = 0; ca < 3; ++ca) {
            const double va = buf.shx[3 * q + ca];
            if (va == 0.0) continue;
            for (int cb = 0; cb < 3; ++cb) {
              dW.block<3, 3>(3 * buf.gx[ca], 3 * buf.gy[cb]).noalias() +=
                  (half * wq * va * buf.shy[3 * q + cb]) * KWd;
            }
          }
        }
        // V blocks are written exactly once per (a,b); symmetry is exact
        if (diag) {
          ops.V.block<3, 3>(3 * a, 3 * a) = 0.5 * (Vblk + Vblk.transpose());
        } else {
          ops.V.block<3, 3>(3 * a, 3 * b) = Vblk;
          ops.V.block<3, 3>(3 * b, 3 * a) = Vblk.transpose();
        }
      }
    }
  });

  MatXc K = std::move(partialK[0]);
  MatXc dW = std::move(partialW[0]);
  for (int w = 1; w < workers; ++w) {
    K += partialK[w];
    dW += partialW[w];
  }
  ops.K = std::move(K);
  ops.Kp = ops.K.transpose();
  ops.W = (dW + dW.transpose()) + static_hypersingular();
  if (!ops.V.allFinite() || !ops.K.allFinite() || !ops.W.allFinite())
    throw AssemblyError("non-finite entry in assembled boundary operators");
  return ops;
}

BoundaryOperatorSet assemble_operators(const SurfaceMesh& mesh, cd s,
                                       const IsotropicExterior& mat, BemOptions opts) {
  return BemAssembler(mesh, mat, opts).assemble(s);
}

// ---------------------------------------------------------------------------

PotentialEvaluator::PotentialEvaluator(const SurfaceMesh& mesh, const IsotropicExterior& mat,
                                       int base_order, int max_refine_depth)
    : mesh_(&mesh), kernel_(mat), rule_(gauss_triangle(base_order)), max_depth_(max_refine_depth) {}

double PotentialEvaluator::distance_to_surface(const Vec3& x) const {
  double d = std::numeric_limits<double>::max();
  for (int t = 0; t < mesh_->num_triangles(); ++t) {
    const double dc = (x - mesh_->centroids[t]).norm() - mesh_->diameters[t];
    d = std::min(d, std::max(dc, 0.0));
    // refine estimate with vertex distances
    for (int c = 0; c < 3; ++c)
      d = std::min(d, (x - mesh_->vertices[mesh_->triangles[t][c]]).norm());
  }
  return d;
}

namespace {

/// Kernel application per quadrature point: accum += w * k(x, y, shape).
template <typename F>
void integrate_panel(const TriangleRule& rule, const Vec3& x, const std::array<Vec3, 3>& v,
                     const Mat3& corner_shape, double area, int depth, int max_depth, F&& fn) {
  // corner_shape: rows = local corners, cols = P1 shape slots of the root panel
  const double diam = std::max({(v[1] - v[0]).norm(), (v[2] - v[1]).norm(), (v[0] - v[2]).norm()});
  const double dist = std::max(((v[0] + v[1] + v[2]) / 3.0 - x).norm() - 0.6 * diam, 0.0);
  if (depth < max_depth && dist < 1.5 * diam) {
    const std::array<Vec3, 3> m = {0.5 * (v[0] + v[1]), 0.5 * (v[1] + v[2]), 0.5 * (v[2] + v[0])};
    const Eigen::RowVector3d s01 = 0.5 * (corner_shape.row(0) + corner_shape.row(1));
    const Eigen::RowVector3d s12 = 0.5 * (corner_shape.row(1) + corner_shape.row(2));
    const Eigen::RowVector3d s20 = 0.5 * (corner_shape.row(2) + corner_shape.row(0));
    Mat3 cs;
    auto rec = [&](const std::array<Vec3, 3>& vv, const Mat3& ss) {
      integrate_panel(rule, x, vv, ss, area / 4.0, depth + 1, max_depth, fn);
    };
    cs.row(0) = corner_shape.row(0); cs.row(1) = s01; cs.row(2) = s20;
    rec({v[0], m[0], m[2]}, cs);
    cs.row(0) = s01; cs.row(1) = corner_shape.row(1); cs.row(2) = s12;
    rec({m[0], v[1], m[1]}, cs);
    cs.row(0) = s20; cs.row(1) = s12; cs.row(2) = corner_shape.row(2);
    rec({m[2], m[1], v[2]}, cs);
    cs.row(0) = s01; cs.row(1) = s12; cs.row(2) = s20;
    rec({m[0], m[1], m[2]}, cs);
    return;
  }
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    const double u = rule.points[q].x(), t = rule.points[q].y();
    const Vec3 y = v[0] + (v[1] - v[0]) * u + (v[2] - v[0]) * t;
    const Eigen::RowVector3d shape = (1.0 - u - t) * corner_shape.row(0) +
                                     u * corner_shape.row(1) + t * corner_shape.row(2);
    fn(y, shape, rule.weights[q] * 2.0 * area);
  }
}

}  // namespace

Vec3c PotentialEvaluator::single(const VecXc& p0, const Vec3& x, cd s, bool* near_warning) const {
  Vec3c out = Vec3c::Zero();
  double min_dist = std::numeric_limits<double>::max();
  for (int t = 0; t < mesh_->num_triangles(); ++t) {
    const Vec3c lam = p0.segment<3>(3 * t);
    min_dist = std::min(min_dist, (x - mesh_->centroids[t]).norm() - 0.6 * mesh_->diameters[t]);
    integrate_panel(rule_, x, mesh_->triangle_vertices(t), Mat3::Identity(), mesh_->areas[t], 0,
                    max_depth_, [&](const Vec3& y, const Eigen::RowVector3d&, double w) {
                      out += w * (kernel_.fundamental(x, y, s) * lam);
                    });
  }
  if (near_warning)
    *near_warning = min_dist < 0.1 * mesh_->diameters[0];
  return out;
}

Vec3c PotentialEvaluator::double_layer(const VecXc& p1, const Vec3& x, cd s,
                                       bool* near_warning) const {
  Vec3c out = Vec3c::Zero();
  double min_dist = std::numeric_limits<double>::max();
  for (int t = 0; t < mesh_->num_triangles(); ++t) {
    const auto& tri = mesh_->triangles[t];
    Eigen::Matrix3cd corner;  // rows = corners, cols = components
    for (int c = 0; c < 3; ++c) corner.row(c) = p1.segment<3>(3 * tri[c]).transpose();
    const Vec3& ny = mesh_->normals[t];
    min_dist = std::min(min_dist, (x - mesh_->centroids[t]).norm() - 0.6 * mesh_->diameters[t]);
    integrate_panel(rule_, x, mesh_->triangle_vertices(t), Mat3::Identity(), mesh_->areas[t], 0,
                    max_depth_, [&](const Vec3& y, const Eigen::RowVector3d& sh, double w) {
                      const Vec3c phi = (sh * corner.cast<cd>()).transpose()
                                            .unaryExpr([](cd v) { return v; });
                      out += w * (kernel_.double_layer(x, y, s, ny) * phi);
                    });
  }
  if (near_warning)
    *near_warning = min_dist < 0.1 * mesh_->diameters[0];
  return out;
}

Vec3c PotentialEvaluator::traction_single(const VecXc& p0, const Vec3& x, cd s,
                                          const Vec3& n) const {
  Vec3c out = Vec3c::Zero();
  for (int t = 0; t < mesh_->num_triangles(); ++t) {
    const Vec3c lam = p0.segment<3>(3 * t);
    integrate_panel(rule_, x, mesh_->triangle_vertices(t), Mat3::Identity(), mesh_->areas[t], 0,
                    max_depth_, [&](const Vec3& y, const Eigen::RowVector3d&, double w) {
                      const GradTensor G = kernel_.gradient(x, y, s);
                      // traction at x: same contraction, +d/dx sign
                      out -= w * (kernel_.traction_from_grad(G, n) * lam);
                    });
  }
  return out;
}

Vec3c PotentialEvaluator::traction_double(const VecXc& p1, const Vec3& x, cd s,
                                          const Vec3& n) const {
  Vec3c out = Vec3c::Zero();
  for (int t = 0; t < mesh_->num_triangles(); ++t) {
    const auto& tri = mesh_->triangles[t];
    Eigen::Matrix3cd corner;
    for (int c = 0; c < 3; ++c) corner.row(c) = p1.segment<3>(3 * tri[c]).transpose();
    const Vec3& ny = mesh_->normals[t];
    integrate_panel(rule_, x, mesh_->triangle_vertices(t), Mat3::Identity(), mesh_->areas[t], 0,
                    max_depth_, [&](const Vec3& y, const Eigen::RowVector3d& sh, double w) {
                      const Vec3c phi = (sh * corner.cast<cd>()).transpose()
                                            .unaryExpr([](cd v) { return v; });
                      out -= w * (kernel_.hypersingular(x, y, s, n, ny,
                                                        KupradzeKernel::WVariant::dynamic) *
                                  phi);
                    });
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

/// f(eps) sampled at eps, eps/2, eps/4 -> limit as eps -> 0 assuming
/// f = f0 + a eps + b eps^2.
Vec3c richardson(const Vec3c& f1, const Vec3c& f2, const Vec3c& f3) {
  return (8.0 * f3 - 6.0 * f2 + f1) / 3.0;
}

struct Anchors {
  std::vector<Vec3> points;
  std::vector<Vec3> normals;
  std::vector<double> weights;
  std::vector<int> panel;
  std::vector<Eigen::RowVector3d> shape;
};

Anchors make_anchors(const SurfaceMesh& mesh) {
  const TriangleRule rule = gauss_triangle(2);
  Anchors a;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto v = mesh.triangle_vertices(t);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const double u = rule.points[q].x(), w = rule.points[q].y();
      a.points.push_back(v[0] + (v[1] - v[0]) * u + (v[2] - v[0]) * w);
      a.normals.push_back(mesh.normals[t]);
      a.weights.push_back(rule.weights[q] * 2.0 * mesh.areas[t]);
      a.panel.push_back(t);
      a.shape.push_back(Eigen::RowVector3d(1.0 - u - w, u, w));
    }
  }
  return a;
}

}  // namespace

JumpTestResult jump_test_single(const BemAssembler& assembler, const VecXc& lambda, cd s) {
  const SurfaceMesh& mesh = assembler.mesh();
  PotentialEvaluator pot(mesh, assembler.kernel().material(), assembler.options().regular_order,
                         8);
  const Anchors anchors = make_anchors(mesh);
  double jump2 = 0, scale_tr2 = 0, defect2 = 0, scale_lam2 = 0;
  for (std::size_t q = 0; q < anchors.points.size(); ++q) {
    const Vec3& x0 = anchors.points[q];
    const Vec3& n = anchors.normals[q];
    const double eps0 = mesh.diameters[anchors.panel[q]];
    std::array<Vec3c, 3> in, out, tin, tout;
    for (int k = 0; k < 3; ++k) {
      const double eps = eps0 / (1 << k);
      in[k] = pot.single(lambda, x0 - eps * n, s);
      out[k] = pot.single(lambda, x0 + eps * n, s);
      tin[k] = pot.traction_single(lambda, x0 - eps * n, s, n);
      tout[k] = pot.traction_single(lambda, x0 + eps * n, s, n);
    }
    const Vec3c lim_in = richardson(in[0], in[1], in[2]);
    const Vec3c lim_out = richardson(out[0], out[1], out[2]);
    const Vec3c tlim_in = richardson(tin[0], tin[1], tin[2]);
    const Vec3c tlim_out = richardson(tout[0], tout[1], tout[2]);
    const Vec3c lam_here = lambda.segment<3>(3 * anchors.panel[q]);
    const double w = anchors.weights[q];
    jump2 += w * (lim_in - lim_out).squaredNorm();
    scale_tr2 += w * (0.5 * (lim_in + lim_out)).squaredNorm();
    defect2 += w * (tlim_in - tlim_out - lam_here).squaredNorm();
    scale_lam2 += w * lam_here.squaredNorm();
  }
  JumpTestResult r;
  r.trace_jump = std::sqrt(jump2 / std::max(scale_tr2, 1e-300));
  r.traction_defect = std::sqrt(defect2 / std::max(scale_lam2, 1e-300));
  return r;
}

JumpTestDoubleResult jump_test_double(const BemAssembler& assembler, const VecXc& phi, cd s) {
  const SurfaceMesh& mesh = assembler.mesh();
  PotentialEvaluator pot(mesh, assembler.kernel().material(), assembler.options().regular_order,
                         8);
  const Anchors anchors = make_anchors(mesh);
  double defect2 = 0, scale_phi2 = 0, jump2 = 0, scale_t2 = 0;
  for (std::size_t q = 0; q < anchors.points.size(); ++q) {
    const Vec3& x0 = anchors.points[q];
    const Vec3& n = anchors.normals[q];
    const double eps0 = mesh.diameters[anchors.panel[q]];
    std::array<Vec3c, 3> in, out, tin, tout;
    for (int k = 0; k < 3; ++k) {
      const double eps = eps0 / (1 << k);
      in[k] = pot.double_layer(phi, x0 - eps * n, s);
      out[k] = pot.double_layer(phi, x0 + eps * n, s);
      tin[k] = pot.traction_double(phi, x0 - eps * n, s, n);
      tout[k] = pot.traction_double(phi, x0 + eps * n, s, n);
    }
    const Vec3c lim_in = richardson(in[0], in[1], in[2]);
    const Vec3c lim_out = richardson(out[0], out[1], out[2]);
    const Vec3c tlim_in = richardson(tin[0], tin[1], tin[2]);
    const Vec3c tlim_out = richardson(tout[0], tout[1], tout[2]);
    const auto& tri = mesh.triangles[anchors.panel[q]];
    Vec3c phi_here = Vec3c::Zero();
    for (int c = 0; c < 3; ++c) phi_here += anchors.shape[q](c) * phi.segment<3>(3 * tri[c]);
    const double w = anchors.weights[q];
    defect2 += w * (lim_in - lim_out + phi_here).squaredNorm();
    scale_phi2 += w * phi_here.squaredNorm();
    jump2 += w * (tlim_in - tlim_out).squaredNorm();
    scale_t2 += w * (0.5 * (tlim_in + tlim_out)).squaredNorm();
  }
  JumpTestDoubleResult r;
  r.trace_defect = std::sqrt(defect2 / std::max(scale_phi2, 1e-300));
  r.traction_jump = std::sqrt(jump2 / std::max(scale_t2, 1e-300));
  return r;
}

AverageIdentityResult average_identities_test(const BemAssembler& assembler,
                                              const BoundaryOperatorSet& ops,
                                              const VecXc& lambda, const VecXc& phi, cd s) {
  const SurfaceMesh& mesh = assembler.mesh();
  PotentialEvaluator pot(mesh, assembler.kernel().material(), assembler.options().regular_order,
                         8);
  const Anchors anchors = make_anchors(mesh);
  const int nP0 = 3 * mesh.num_triangles();
  const int nP1 = 3 * mesh.num_vertices();
  VecXc tS_ext = VecXc::Zero(nP1), tS_int = VecXc::Zero(nP1);
  VecXc gD_ext = VecXc::Zero(nP0), gD_int = VecXc::Zero(nP0);
  for (std::size_t q = 0; q < anchors.points.size(); ++q) {
    const Vec3& x0 = anchors.points[q];
    const Vec3& n = anchors.normals[q];
    const double eps0 = mesh.diameters[anchors.panel[q]];
    std::array<Vec3c, 3> ts_in, ts_out, gd_in, gd_out;
    for (int k = 0; k < 3; ++k) {
      const double eps = eps0 / (1 << k);
      ts_in[k] = pot.traction_single(lambda, x0 - eps * n, s, n);
      ts_out[k] = pot.traction_single(lambda, x0 + eps * n, s, n);
      gd_in[k] = pot.double_layer(phi, x0 - eps * n, s);
      gd_out[k] = pot.double_layer(phi, x0 + eps * n, s);
    }
    const Vec3c TSp = richardson(ts_out[0], ts_out[1], ts_out[2]);
    const Vec3c TSm = richardson(ts_in[0], ts_in[1], ts_in[2]);
    const Vec3c gDp = richardson(gd_out[0], gd_out[1], gd_out[2]);
    const Vec3c gDm = richardson(gd_in[0], gd_in[1], gd_in[2]);
    const double w = anchors.weights[q];
    const auto& tri = mesh.triangles[anchors.panel[q]];
    for (int c = 0; c < 3; ++c) {
      const double sv = w * anchors.shape[q](c);
      tS_ext.segment<3>(3 * tri[c]) += sv * TSp;
      tS_int.segment<3>(3 * tri[c]) += sv * TSm;
    }
    gD_ext.segment<3>(3 * anchors.panel[q]) += w * gDp;
    gD_int.segment<3>(3 * anchors.panel[q]) += w * gDm;
  }
  const MatX B = boundary_mass_p0_p1(mesh);
  const VecXc rhs_t_ext = (-0.5 * B.transpose()) * lambda + ops.Kp * lambda;
  const VecXc rhs_t_int = (0.5 * B.transpose()) * lambda + ops.Kp * lambda;
  const VecXc rhs_g_ext = (0.5 * B) * phi + ops.K * phi;
  const VecXc rhs_g_int = (-0.5 * B) * phi + ops.K * phi;
  AverageIdentityResult r;
  const double st = std::max(rhs_t_ext.norm(), rhs_t_int.norm());
  const double sg = std::max(rhs_g_ext.norm(), rhs_g_int.norm());
  r.traction_exterior = (tS_ext - rhs_t_ext).norm() / std::max(st, 1e-300);
  r.traction_interior = (tS_int - rhs_t_int).norm() / std::max(st, 1e-300);
  r.trace_exterior = (gD_ext - rhs_g_ext).norm() / std::max(sg, 1e-300);
  r.trace_interior = (gD_int - rhs_g_int).norm() / std::max(sg, 1e-300);
  return r;
}

}  // namespace elastocq
