#include "elastocq/fem.hpp"

#include "elastocq/quadrature.hpp"

namespace elastocq {

InteriorBlocks assemble_interior(const VolumeMesh& volume, const SurfaceMesh& surface,
                                 const FunctionSpaces& spaces, const AnisotropicInterior& mat) {
  if (!mat.uniform() && mat.size() != static_cast<std::size_t>(volume.num_tets()))
    throw AssemblyError("per-element material data does not match the tet count");
  const int n = spaces.volume_dofs();
  InteriorBlocks blocks;
  blocks.stiffness = MatX::Zero(n, n);
  blocks.mass = MatX::Zero(n, n);

  for (int e = 0; e < volume.num_tets(); ++e) {
    const auto& T = volume.tets[e];
    const Vec3& v0 = volume.vertices[T[0]];
    Mat3 J;
    J.col(0) = volume.vertices[T[1]] - v0;
    J.col(1) = volume.vertices[T[2]] - v0;
    J.col(2) = volume.vertices[T[3]] - v0;
    const double vol = volume.volumes[e];
    if (vol <= 0.0) throw AssemblyError("degenerate element " + std::to_string(e));
    const Mat3 Jit = J.inverse().transpose();
    std::array<Vec3, 4> grad;
    grad[1] = Jit.col(0);
    grad[2] = Jit.col(1);
    grad[3] = Jit.col(2);
    grad[0] = -(grad[1] + grad[2] + grad[3]);
    // Voigt strain of each of the 12 local basis fields
    Eigen::Matrix<double, 6, 12> B;
    for (int a = 0; a < 4; ++a) {
      for (int i = 0; i < 3; ++i) {
        Mat3 gu = Mat3::Zero();
        gu.row(i) = grad[a].transpose();  // grad of (phi_a e_i): d_k u_i = e_i grad_k
        const Mat3 eps = 0.5 * (gu + gu.transpose());
        B.col(3 * a + i) = strain_to_voigt(eps);
      }
    }
    const Eigen::Matrix<double, 12, 12> Ke = vol * B.transpose() * mat.stiffness(e) * B;
    const double mfac = mat.density(e) * vol / 20.0;
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) {
        for (int i = 0; i < 3; ++i) {
          for (int j = 0; j < 3; ++j)
            blocks.stiffness(3 * T[a] + i, 3 * T[b] + j) += Ke(3 * a + i, 3 * b + j);
          blocks.mass(3 * T[a] + i, 3 * T[b] + i) += mfac * (a == b ? 2.0 : 1.0);
        }
      }
    }
  }
  // coupling <mu, gamma- V> through the trace index map
  const MatX Bsurf = boundary_mass_p0_p1(surface);
  blocks.coupling = MatX::Zero(spaces.p0_dofs(), n);
  for (int sv = 0; sv < spaces.p1_dofs() / 3; ++sv) {
    const int vv = spaces.boundary_to_volume(sv);
    blocks.coupling.middleCols<3>(3 * vv) += Bsurf.middleCols<3>(3 * sv);
  }
  return blocks;
}

VecXc assemble_load(const VolumeMesh& volume,
                    const std::function<Vec3c(const Vec3&)>& body_force) {
  const TetRule rule = gauss_tet(2);
  VecXc load = VecXc::Zero(3 * volume.num_vertices());
  for (int e = 0; e < volume.num_tets(); ++e) {
    const auto& T = volume.tets[e];
    const Vec3& v0 = volume.vertices[T[0]];
    const Vec3 e1 = volume.vertices[T[1]] - v0;
    const Vec3 e2 = volume.vertices[T[2]] - v0;
    const Vec3 e3 = volume.vertices[T[3]] - v0;
    const double jac = 6.0 * volume.volumes[e];
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const Vec3& p = rule.points[q];
      const Vec3 x = v0 + p.x() * e1 + p.y() * e2 + p.z() * e3;
      const Vec3c f = body_force(x);
      const double sh[4] = {1.0 - p.x() - p.y() - p.z(), p.x(), p.y(), p.z()};
      const double w = rule.weights[q] * jac;
      for (int a = 0; a < 4; ++a)
        load.segment<3>(3 * T[a]) += (w * sh[a]) * f;
    }
  }
  return load;
}

VecXc boundary_functional_p1(const SurfaceMesh& mesh,
                             const std::function<Vec3c(const Vec3&, const Vec3&)>& g,
                             int order) {
  const TriangleRule rule = gauss_triangle(order);
  VecXc out = VecXc::Zero(3 * mesh.num_vertices());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto v = mesh.triangle_vertices(t);
    const Vec3& n = mesh.normals[t];
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const double u = rule.points[q].x(), w2 = rule.points[q].y();
      const Vec3 x = v[0] + (v[1] - v[0]) * u + (v[2] - v[0]) * w2;
      const Vec3c gx = g(x, n);
      const double w = rule.weights[q] * 2.0 * mesh.areas[t];
      const double sh[3] = {1.0 - u - w2, u, w2};
      for (int c = 0; c < 3; ++c)
        out.segment<3>(3 * mesh.triangles[t][c]) += (w * sh[c]) * gx;
    }
  }
  return out;
}

VecXc boundary_functional_p0(const SurfaceMesh& mesh,
                             const std::function<Vec3c(const Vec3&, const Vec3&)>& g,
                             int order) {
  const TriangleRule rule = gauss_triangle(order);
  VecXc out = VecXc::Zero(3 * mesh.num_triangles());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto v = mesh.triangle_vertices(t);
    const Vec3& n = mesh.normals[t];
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const double u = rule.points[q].x(), w2 = rule.points[q].y();
      const Vec3 x = v[0] + (v[1] - v[0]) * u + (v[2] - v[0]) * w2;
      out.segment<3>(3 * t) += (rule.weights[q] * 2.0 * mesh.areas[t]) * g(x, n);
    }
  }
  return out;
}

double energy_norm_squared(const InteriorBlocks& blocks, const VecXc& u, cd s) {
  const double k = (u.adjoint() * (blocks.stiffness * u)).value().real();
  const double m = (u.adjoint() * (blocks.mass * u)).value().real();
  return k + std::norm(s) * m;
}

}  // namespace elastocq
