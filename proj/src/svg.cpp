#include "polysafe/svg.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "polysafe/errors.hpp"

namespace polysafe {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

void write_trajectory_svg(const Trajectory& traj, const SafetySpec& spec, std::ostream& out) {
  if (spec.state_dim() != 2 || traj.states.cols() != 2)
    throw InvalidParameter("trajectory plot: planar state only");
  if (traj.states.rows() < 1) throw InvalidParameter("trajectory plot: empty trajectory");

  Eigen::Vector2d lo = traj.states.colwise().minCoeff().transpose();
  Eigen::Vector2d hi = traj.states.colwise().maxCoeff().transpose();
  for (const auto& b : spec.barriers) {
    if (b.kind() != Barrier::Kind::Quadratic) continue;
    Eigen::VectorXd bl(2), bh(2);
    b.bounding_box(bl, bh);
    lo = lo.cwiseMin(Eigen::Vector2d(bl));
    hi = hi.cwiseMax(Eigen::Vector2d(bh));
  }
  Eigen::Vector2d span = hi - lo;
  if (span.minCoeff() < 1e-9) span.array() += 1.0;
  lo -= 0.1 * span;
  hi += 0.1 * span;
  span = hi - lo;

  const double W = 640.0;
  const double H = W * span[1] / span[0];
  auto px = [&](double x) { return (x - lo[0]) / span[0] * W; };
  auto py = [&](double y) { return H - (y - lo[1]) / span[1] * H; };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(W) << "\" height=\""
      << num(H) << "\" viewBox=\"0 0 " << num(W) << ' ' << num(H) << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  for (const auto& b : spec.barriers) {
    out << "<polyline fill=\"none\" stroke=\"#888888\" stroke-width=\"1.5\" points=\"";
    if (b.kind() == Barrier::Kind::Quadratic) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b.shape());
      const Eigen::MatrixXd inv_sqrt = es.eigenvectors() *
                                       es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                                       es.eigenvectors().transpose();
      const double r = std::sqrt(b.level());
      for (int k = 0; k <= 256; ++k) {
        const double th = 2.0 * M_PI * k / 256.0;
        const Eigen::Vector2d p =
            b.center() + r * (inv_sqrt * Eigen::Vector2d(std::cos(th), std::sin(th)));
        out << (k ? " " : "") << num(px(p[0])) << ',' << num(py(p[1]));
      }
    } else {
      const Eigen::Vector2d a = b.normal();
      const Eigen::Vector2d base = a * (b.offset() / a.squaredNorm());
      const Eigen::Vector2d tang = Eigen::Vector2d(-a[1], a[0]).normalized();
      const double L = 2.0 * span.norm();
      const Eigen::Vector2d p0 = base - L * tang;
      const Eigen::Vector2d p1 = base + L * tang;
      out << num(px(p0[0])) << ',' << num(py(p0[1])) << ' ' << num(px(p1[0])) << ','
          << num(py(p1[1]));
    }
    out << "\"/>\n";
  }

  out << "<polyline fill=\"none\" stroke=\"#1565c0\" stroke-width=\"1.5\" points=\"";
  for (int k = 0; k < traj.states.rows(); ++k)
    out << (k ? " " : "") << num(px(traj.states(k, 0))) << ',' << num(py(traj.states(k, 1)));
  out << "\"/>\n";

  out << "<circle cx=\"" << num(px(traj.states(0, 0))) << "\" cy=\"" << num(py(traj.states(0, 1)))
      << "\" r=\"4\" fill=\"#2e7d32\"/>\n";
  const int last = static_cast<int>(traj.states.rows()) - 1;
  out << "<circle cx=\"" << num(px(traj.states(last, 0))) << "\" cy=\""
      << num(py(traj.states(last, 1))) << "\" r=\"4\" fill=\"#c62828\"/>\n";
  out << "</svg>\n";
}

}  // namespace polysafe
