#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <random>

namespace polysafe {

// splitmix64 step; used to derive independent sub-seeds from (seed, stream)
inline std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// mt19937_64 with hand-rolled uniform/normal mapping so draws are identical
// across standard library implementations
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform01() {  // [0, 1)
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  double normal() {  // Box-Muller, one value per two draws
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

  Eigen::VectorXd unit_vector(int dim) {
    Eigen::VectorXd v(dim);
    double norm = 0.0;
    do {
      for (int i = 0; i < dim; ++i) v[i] = normal();
      norm = v.norm();
    } while (norm < 1e-12);
    return v / norm;
  }

  Eigen::VectorXd in_box(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) {
    Eigen::VectorXd x(lo.size());
    for (int i = 0; i < lo.size(); ++i) x[i] = uniform(lo[i], hi[i]);
    return x;
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace polysafe
