#pragma once

#include <random>
#include <vector>

#include "cqcode/channels.hpp"
#include "cqcode/infomeasure.hpp"
#include "cqcode/qmat.hpp"

namespace cqtest {

using namespace cqcode;

inline HermMat random_hermitian(int dim, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  Mat m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = Cplx(g(rng), g(rng));
  return HermMat(0.5 * (m + m.adjoint().eval()));
}

inline DensityMat random_density(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Mat m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = Cplx(g(rng), g(rng));
  Mat rho = m * m.adjoint();
  rho /= rho.trace().real();
  return DensityMat(HermMat(std::move(rho)));
}

inline Dist random_dist(int size, std::mt19937_64& rng) {
  std::exponential_distribution<double> ex(1.0);
  std::vector<double> p(static_cast<std::size_t>(size));
  double sum = 0.0;
  for (double& v : p) {
    v = ex(rng);
    sum += v;
  }
  for (double& v : p) v /= sum;
  return Dist(std::move(p));
}

inline CQChannel random_cq_channel(int input_size, int out_dim, std::mt19937_64& rng) {
  std::vector<DensityMat> states;
  states.reserve(static_cast<std::size_t>(input_size));
  for (int x = 0; x < input_size; ++x) states.push_back(random_density(out_dim, rng));
  return CQChannel(input_size, std::move(states));
}

inline MACChannel random_mac_channel(int a_size, int b_size, int out_dim, std::mt19937_64& rng) {
  std::vector<DensityMat> states;
  states.reserve(static_cast<std::size_t>(a_size * b_size));
  for (int i = 0; i < a_size * b_size; ++i) states.push_back(random_density(out_dim, rng));
  return MACChannel(a_size, b_size, std::move(states));
}

inline CQChannel bsc_channel(double p) {
  return classical_embed({{1.0 - p, p}, {p, 1.0 - p}});
}

inline CQChannel noiseless_bit() { return classical_embed({{1.0, 0.0}, {0.0, 1.0}}); }

}  // namespace cqtest
