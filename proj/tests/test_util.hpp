#pragma once

#include <cmath>
#include <random>

#include "puropt/channel_tools.hpp"
#include "puropt/operator_reduction.hpp"
#include "puropt/types.hpp"

namespace testutil {

inline std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline puropt::Vec random_simplex(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> unit(1e-12, 1.0);
  puropt::Vec v(n);
  double s = 0.0;
  for (double& x : v) {
    x = -std::log(unit(rng));
    s += x;
  }
  for (double& x : v) x /= s;
  return v;
}

inline puropt::Vec random_gaussian(std::mt19937_64& rng, std::size_t n, double sigma = 1.0) {
  std::normal_distribution<double> gauss(0.0, sigma);
  puropt::Vec v(n);
  for (double& x : v) x = gauss(rng);
  return v;
}

inline double purity_of(const puropt::Vec& p) {
  double s = 0.0;
  for (double x : p) s += x * x;
  return s;
}

inline puropt::CMat random_ginibre(std::mt19937_64& rng, int rows, int cols) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  puropt::CMat g(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) g(r, c) = std::complex<double>(gauss(rng), gauss(rng));
  }
  return g;
}

inline puropt::CMat random_hermitian(std::mt19937_64& rng, int d) {
  puropt::CMat g = random_ginibre(rng, d, d);
  return 0.5 * (g + g.adjoint());
}

inline puropt::CMat random_unitary(std::mt19937_64& rng, int d) {
  Eigen::HouseholderQR<puropt::CMat> qr(random_ginibre(rng, d, d));
  puropt::CMat q = qr.householderQ();
  return q;
}

inline puropt::CMat random_density(std::mt19937_64& rng, int d) {
  puropt::CMat g = random_ginibre(rng, d, d);
  puropt::CMat rho = g * g.adjoint();
  return rho / rho.trace().real();
}

// Random density operator with Tr(rho^2) <= t: Ginibre state shrunk toward
// the maximally mixed state.
inline puropt::CMat random_density_capped(std::mt19937_64& rng, int d, double t) {
  puropt::CMat rho = random_density(rng, d);
  const double inv_d = 1.0 / d;
  const double purity = (rho * rho).trace().real();
  if (purity <= t) return rho;
  const double alpha = 0.999999 * std::sqrt(std::max(0.0, t - inv_d) / (purity - inv_d));
  return puropt::CMat::Identity(d, d) * inv_d +
         alpha * (rho - puropt::CMat::Identity(d, d) * inv_d);
}

// Random CPTP channel from k Ginibre Kraus candidates, normalized through
// the inverse square root of their Gram sum.
inline puropt::ChannelRep random_channel(std::mt19937_64& rng, int d_in, int d_out, int k) {
  std::vector<puropt::CMat> kraus;
  kraus.reserve(static_cast<std::size_t>(k));
  puropt::CMat gram = puropt::CMat::Zero(d_in, d_in);
  for (int i = 0; i < k; ++i) {
    kraus.push_back(random_ginibre(rng, d_out, d_in));
    gram += kraus.back().adjoint() * kraus.back();
  }
  Eigen::SelfAdjointEigenSolver<puropt::CMat> es(gram);
  puropt::CMat fix = es.operatorInverseSqrt();
  for (puropt::CMat& m : kraus) m = m * fix;
  return puropt::ChannelRep::from_kraus(std::move(kraus));
}

inline puropt::CMat max_entangled_projector(int d) {
  Eigen::VectorXcd phi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(d) * d);
  for (int i = 0; i < d; ++i) phi(static_cast<Eigen::Index>(i) * d + i) = 1.0 / std::sqrt(d);
  return phi * phi.adjoint();
}

}  // namespace testutil
