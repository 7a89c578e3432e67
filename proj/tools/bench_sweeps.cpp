// serial vs OpenMP timings for the certification sweep and batch simulation
#include <chrono>
#include <cstdio>

#include "polysafe/analysis.hpp"
#include "polysafe/batch.hpp"
#include "polysafe/rng.hpp"

using namespace polysafe;

namespace {

SafetySpec two_disk_spec() {
  const Eigen::MatrixXd I2 = Eigen::MatrixXd::Identity(2, 2);
  std::vector<Barrier> barriers{
      Barrier::quadratic(Eigen::Vector2d(-0.5, 0.0), I2, 1.0),
      Barrier::quadratic(Eigen::Vector2d(0.5, 0.0), I2, 1.0),
  };
  std::vector<AlphaFunction> alphas{AlphaFunction::linear(1.0), AlphaFunction::linear(1.0)};
  return SafetySpec(std::move(barriers), std::move(alphas), box_input_polytope(2, 1.0));
}

template <typename F>
double seconds(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count();
}

}  // namespace

int main() {
  const SafetySpec spec = two_disk_spec();
  const SystemDynamics sys = SystemDynamics::single_integrator(2);

  CertificationReport serial_cert, parallel_cert;
  const double t_cert_serial =
      seconds([&] { serial_cert = certify(spec, sys, 200, 500, 7, false); });
  const double t_cert_parallel =
      seconds([&] { parallel_cert = certify(spec, sys, 200, 500, 7, true); });
  std::printf("certify      serial %8.3fs  parallel %8.3fs  speedup %5.2fx  agree %s\n",
              t_cert_serial, t_cert_parallel, t_cert_serial / t_cert_parallel,
              serial_cert.certified == parallel_cert.certified &&
                      serial_cert.sweep_passed == parallel_cert.sweep_passed
                  ? "yes"
                  : "NO");

  const DomainSampler sampler = make_interior_sampler(spec, sys, 11, true);
  std::vector<RunCase> cases;
  for (int i = 0; i < 8; ++i) cases.push_back({11, i, sampler(static_cast<std::uint64_t>(i))});
  SimConfig cfg;
  cfg.dt = 1e-3;
  cfg.T = 2.0;
  cfg.gamma = 0.2;
  const Policy policy = Policy::chebyshev_center();

  BatchResult serial_batch, parallel_batch;
  const double t_batch_serial =
      seconds([&] { serial_batch = run_batch(spec, sys, policy, cases, cfg, false); });
  const double t_batch_parallel =
      seconds([&] { parallel_batch = run_batch(spec, sys, policy, cases, cfg, true); });
  std::printf("batch (8x2s) serial %8.3fs  parallel %8.3fs  speedup %5.2fx  agree %s\n",
              t_batch_serial, t_batch_parallel, t_batch_serial / t_batch_parallel,
              serial_batch.worst_h == parallel_batch.worst_h ? "yes" : "NO");
  return 0;
}
