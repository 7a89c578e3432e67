#include "polysafe/barrier.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <utility>

#include "polysafe/errors.hpp"
#include "polysafe/rng.hpp"
#include "polysafe/solver.hpp"

namespace polysafe {

Barrier Barrier::quadratic(Eigen::VectorXd center, Eigen::MatrixXd shape, double level) {
  const auto n = center.size();
  if (shape.rows() != n || shape.cols() != n)
    throw DimensionMismatch("barrier: center and shape dimensions differ");
  if (!(level > 0)) throw InvalidParameter("barrier: level must be positive");
  const double scale = std::max(1.0, shape.cwiseAbs().maxCoeff());
  if ((shape - shape.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw InvalidParameter("barrier: shape matrix must be symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(shape);
  if (es.eigenvalues().minCoeff() <= 0)
    throw InvalidParameter("barrier: shape matrix must be positive definite");

  Barrier b;
  b.kind_ = Kind::Quadratic;
  b.dim_ = n;
  b.center_ = std::move(center);
  b.shape_ = std::move(shape);
  b.level_ = level;
  b.inv_sqrt_shape_ = es.eigenvectors() *
                      es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                      es.eigenvectors().transpose();
  return b;
}

Barrier Barrier::affine(Eigen::VectorXd normal, double offset, bool acknowledge_noncompact) {
  if (normal.norm() < 1e-12) throw InvalidParameter("barrier: affine normal must be nonzero");
  if (!acknowledge_noncompact)
    throw InvalidParameter(
        "barrier: affine kind yields a non-compact safe set; construction must acknowledge it");
  Barrier b;
  b.kind_ = Kind::Affine;
  b.dim_ = normal.size();
  b.center_ = std::move(normal);
  b.level_ = offset;
  return b;
}

double Barrier::value(const Eigen::VectorXd& x) const {
  if (x.size() != dim_) throw DimensionMismatch("barrier: state dimension differs");
  if (kind_ == Kind::Quadratic) {
    const Eigen::VectorXd dx = x - center_;
    return dx.dot(shape_ * dx) - level_;
  }
  return center_.dot(x) - level_;
}

Eigen::VectorXd Barrier::gradient(const Eigen::VectorXd& x) const {
  if (x.size() != dim_) throw DimensionMismatch("barrier: state dimension differs");
  if (kind_ == Kind::Quadratic) return 2.0 * (shape_ * (x - center_));
  return center_;
}

void Barrier::bounding_box(Eigen::VectorXd& lo, Eigen::VectorXd& hi) const {
  if (kind_ != Kind::Quadratic)
    throw UnsupportedBarrierKind("bounding_box: affine safe sets are unbounded");
  // extent along e_i is sqrt(level * (P^{-1})_{ii})
  const Eigen::MatrixXd inv = inv_sqrt_shape_ * inv_sqrt_shape_;
  Eigen::VectorXd ext(dim_);
  for (Eigen::Index i = 0; i < dim_; ++i) ext[i] = std::sqrt(level_ * inv(i, i));
  lo = center_ - ext;
  hi = center_ + ext;
}

AlphaFunction AlphaFunction::linear(double k) {
  if (!(k > 0)) throw InvalidParameter("alpha: gain must be positive");
  return {Kind::Linear, k};
}

AlphaFunction AlphaFunction::cubic(double k) {
  if (!(k > 0)) throw InvalidParameter("alpha: gain must be positive");
  return {Kind::Cubic, k};
}

double AlphaFunction::operator()(double s) const {
  return kind == Kind::Linear ? gain * s : gain * s * s * s;
}

SystemDynamics SystemDynamics::single_integrator(int n) {
  if (n < 1) throw InvalidParameter("dynamics: state dimension must be positive");
  SystemDynamics sys;
  sys.n = n;
  sys.m = n;
  sys.F.setZero(n, n);
  sys.d.setZero(n);
  sys.G0.setIdentity(n, n);
  return sys;
}

SystemDynamics SystemDynamics::linear(Eigen::MatrixXd F, Eigen::MatrixXd G0, Eigen::VectorXd d) {
  SystemDynamics sys;
  sys.n = static_cast<int>(F.rows());
  sys.m = static_cast<int>(G0.cols());
  if (F.cols() != sys.n || G0.rows() != sys.n)
    throw DimensionMismatch("dynamics: F and G0 dimensions disagree");
  if (d.size() == 0) d = Eigen::VectorXd::Zero(sys.n);
  if (d.size() != sys.n) throw DimensionMismatch("dynamics: offset dimension differs");
  sys.F = std::move(F);
  sys.G0 = std::move(G0);
  sys.d = std::move(d);
  return sys;
}

SystemDynamics SystemDynamics::affine_quadratic(int n, int m, Eigen::MatrixXd F,
                                                Eigen::VectorXd d,
                                                std::vector<Eigen::MatrixXd> drift_quad,
                                                Eigen::MatrixXd G0,
                                                std::vector<Eigen::MatrixXd> G_state) {
  if (n < 1 || m < 1) throw InvalidParameter("dynamics: dimensions must be positive");
  SystemDynamics sys;
  sys.n = n;
  sys.m = m;
  sys.F = F.size() ? std::move(F) : Eigen::MatrixXd::Zero(n, n);
  sys.d = d.size() ? std::move(d) : Eigen::VectorXd::Zero(n);
  sys.G0 = std::move(G0);
  if (sys.F.rows() != n || sys.F.cols() != n || sys.d.size() != n || sys.G0.rows() != n ||
      sys.G0.cols() != m)
    throw DimensionMismatch("dynamics: linear part dimensions disagree");
  if (!drift_quad.empty()) {
    if (static_cast<int>(drift_quad.size()) != n)
      throw DimensionMismatch("dynamics: need one quadratic form per state coordinate");
    for (const auto& Q : drift_quad)
      if (Q.rows() != n || Q.cols() != n)
        throw DimensionMismatch("dynamics: quadratic form dimensions disagree");
  }
  if (!G_state.empty()) {
    if (static_cast<int>(G_state.size()) != n)
      throw DimensionMismatch("dynamics: need one input-map term per state coordinate");
    for (const auto& G : G_state)
      if (G.rows() != n || G.cols() != m)
        throw DimensionMismatch("dynamics: input-map term dimensions disagree");
  }
  sys.drift_quad = std::move(drift_quad);
  sys.G_state = std::move(G_state);
  return sys;
}

Eigen::VectorXd SystemDynamics::drift(const Eigen::VectorXd& x) const {
  if (x.size() != n) throw DimensionMismatch("dynamics: state dimension differs");
  Eigen::VectorXd f = F * x + d;
  for (std::size_t i = 0; i < drift_quad.size(); ++i) f[i] += x.dot(drift_quad[i] * x);
  return f;
}

Eigen::MatrixXd SystemDynamics::input_map(const Eigen::VectorXd& x) const {
  if (x.size() != n) throw DimensionMismatch("dynamics: state dimension differs");
  Eigen::MatrixXd g = G0;
  for (std::size_t k = 0; k < G_state.size(); ++k) g += x[k] * G_state[k];
  return g;
}

Eigen::VectorXd SystemDynamics::flow(const Eigen::VectorXd& x, const Eigen::VectorXd& u) const {
  if (u.size() != m) throw DimensionMismatch("dynamics: input dimension differs");
  return drift(x) + input_map(x) * u;
}

LieDerivatives lie_derivatives(const SystemDynamics& sys, const Barrier& h,
                               const Eigen::VectorXd& x) {
  if (h.dim() != sys.n) throw DimensionMismatch("lie_derivatives: barrier/system dimensions differ");
  const Eigen::VectorXd grad = h.gradient(x);
  LieDerivatives ld;
  ld.Lf = grad.dot(sys.drift(x));
  ld.Lg = grad.transpose() * sys.input_map(x);
  return ld;
}

double fd_gradient_check(const Barrier& h, const Eigen::VectorXd& x, double step) {
  if (!(step > 0)) throw InvalidParameter("fd_gradient_check: step must be positive");
  const Eigen::VectorXd grad = h.gradient(x);
  double worst = 0.0;
  Eigen::VectorXd xp = x, xm = x;
  for (int i = 0; i < x.size(); ++i) {
    xp[i] = x[i] + step;
    xm[i] = x[i] - step;
    const double cd = (h.value(xp) - h.value(xm)) / (2.0 * step);
    worst = std::max(worst, std::abs(grad[i] - cd));
    xp[i] = x[i];
    xm[i] = x[i];
  }
  return worst / std::max(1.0, grad.norm());
}

double strict_cbf_margin(const SystemDynamics& sys, const Barrier& h, const Polytope& input_set,
                         const Eigen::VectorXd& x) {
  if (input_set.dim() != sys.m)
    throw DimensionMismatch("strict_cbf_margin: input polytope dimension differs");
  const LieDerivatives ld = lie_derivatives(sys, h, x);
  const SolveOutcome sol = solve_lp({ld.Lg.transpose(), input_set});
  switch (sol.status) {
    case SolveStatus::Optimal:
      return ld.Lf + sol.objective;
    case SolveStatus::Infeasible:
      throw EmptyPolytope("strict_cbf_margin: input polytope is empty");
    case SolveStatus::Unbounded:
      throw UnboundedDirection("strict_cbf_margin: input polytope is unbounded");
    default:
      throw InvalidParameter("strict_cbf_margin: simplex iteration limit reached");
  }
}

std::vector<Eigen::VectorXd> boundary_sample(const Barrier& h, int count, std::uint64_t seed) {
  if (count < 0) throw InvalidParameter("boundary_sample: count must be nonnegative");
  if (h.kind() != Barrier::Kind::Quadratic)
    throw UnsupportedBarrierKind("boundary_sample: affine boundaries need a caller-supplied box");
  Rng rng(seed);
  std::vector<Eigen::VectorXd> pts;
  pts.reserve(count);
  const double scale = std::sqrt(h.level());
  for (int k = 0; k < count; ++k)
    pts.push_back(h.center() + scale * (h.inv_sqrt_shape_ * rng.unit_vector(h.dim())));
  return pts;
}

}  // namespace polysafe
