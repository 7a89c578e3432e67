#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "polysafe/geometry.hpp"

namespace polysafe {

// smooth barrier h with safe set S = { x : h(x) <= 0 }
//   quadratic: h(x) = (x-c)'P(x-c) - r,  P symmetric positive definite, r > 0
//   affine:    h(x) = a'x - beta (non-compact S; construction must acknowledge this)
class Barrier {
 public:
  enum class Kind { Quadratic, Affine };

  static Barrier quadratic(Eigen::VectorXd center, Eigen::MatrixXd shape, double level);
  static Barrier affine(Eigen::VectorXd normal, double offset, bool acknowledge_noncompact);

  Kind kind() const { return kind_; }
  int dim() const { return static_cast<int>(dim_); }
  bool compact() const { return kind_ == Kind::Quadratic; }

  double value(const Eigen::VectorXd& x) const;
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const;

  const Eigen::VectorXd& center() const { return center_; }
  const Eigen::MatrixXd& shape() const { return shape_; }
  double level() const { return level_; }
  const Eigen::VectorXd& normal() const { return center_; }
  double offset() const { return level_; }

  // axis-aligned bounding box of S (quadratic kind only)
  void bounding_box(Eigen::VectorXd& lo, Eigen::VectorXd& hi) const;

 private:
  Barrier() = default;
  Kind kind_ = Kind::Quadratic;
  Eigen::Index dim_ = 0;
  Eigen::VectorXd center_;  // doubles as the affine normal
  Eigen::MatrixXd shape_;
  double level_ = 0.0;       // doubles as the affine offset
  Eigen::MatrixXd inv_sqrt_shape_;  // P^{-1/2}, cached for boundary sampling

  friend std::vector<Eigen::VectorXd> boundary_sample(const Barrier&, int, std::uint64_t);
};

// class-K_infty comparison function
struct AlphaFunction {
  enum class Kind { Linear, Cubic };
  Kind kind = Kind::Linear;
  double gain = 1.0;

  static AlphaFunction linear(double k);
  static AlphaFunction cubic(double k);
  double operator()(double s) const;
};

// control-affine dynamics xdot = f(x) + g(x) u with
//   f(x) = F x + d + quad(x), quad_i(x) = x'Q_i x
//   g(x) = G0 + sum_k x_k Gk
struct SystemDynamics {
  int n = 0;
  int m = 0;
  Eigen::MatrixXd F;
  Eigen::VectorXd d;
  std::vector<Eigen::MatrixXd> drift_quad;  // empty or n matrices (n x n)
  Eigen::MatrixXd G0;
  std::vector<Eigen::MatrixXd> G_state;  // empty or n matrices (n x m)

  static SystemDynamics single_integrator(int n);
  static SystemDynamics linear(Eigen::MatrixXd F, Eigen::MatrixXd G0, Eigen::VectorXd d = {});
  static SystemDynamics affine_quadratic(int n, int m, Eigen::MatrixXd F, Eigen::VectorXd d,
                                         std::vector<Eigen::MatrixXd> drift_quad,
                                         Eigen::MatrixXd G0,
                                         std::vector<Eigen::MatrixXd> G_state);

  Eigen::VectorXd drift(const Eigen::VectorXd& x) const;      // f(x)
  Eigen::MatrixXd input_map(const Eigen::VectorXd& x) const;  // g(x)
  Eigen::VectorXd flow(const Eigen::VectorXd& x, const Eigen::VectorXd& u) const;
};

struct LieDerivatives {
  double Lf = 0.0;
  Eigen::RowVectorXd Lg;
};
LieDerivatives lie_derivatives(const SystemDynamics& sys, const Barrier& h,
                               const Eigen::VectorXd& x);

// max_i |grad_i - central_diff_i| / max(1, ||grad||_2)
double fd_gradient_check(const Barrier& h, const Eigen::VectorXd& x, double step);

// inf_{u in U} [ L_f h(x) + L_g h(x) u ]; strictly negative on the boundary is
// the certificate condition
double strict_cbf_margin(const SystemDynamics& sys, const Barrier& h, const Polytope& input_set,
                         const Eigen::VectorXd& x);

// seeded points on { h = 0 } (quadratic kind only)
std::vector<Eigen::VectorXd> boundary_sample(const Barrier& h, int count, std::uint64_t seed);

}  // namespace polysafe
