// Slow, independent reference computations used as test oracles.
#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using cd = std::complex<double>;

// Joint cumulant of n variables from their joint moments, by summing over
// all set partitions: sum_pi (|pi|-1)! (-1)^(|pi|-1) prod_B E[prod_{i in B} X_i].
// `moment(mask)` returns E[prod_{i in mask} X_i].
inline cd joint_cumulant(int n, const std::function<cd(unsigned)>& moment) {
  cd total{};
  std::vector<int> block(static_cast<std::size_t>(n), 0);
  std::function<void(int, int)> rec = [&](int i, int nblocks) {
    if (i == n) {
      cd prod{1.0, 0.0};
      for (int b = 0; b < nblocks; ++b) {
        unsigned mask = 0;
        for (int k = 0; k < n; ++k)
          if (block[static_cast<std::size_t>(k)] == b) mask |= 1U << k;
        prod *= moment(mask);
      }
      double fact = 1.0;
      for (int k = 2; k < nblocks; ++k) fact *= k;
      total += ((nblocks - 1) % 2 ? -fact : fact) * prod;
      return;
    }
    for (int b = 0; b <= nblocks; ++b) {
      block[static_cast<std::size_t>(i)] = b;
      rec(i + 1, std::max(nblocks, b + 1));
    }
  };
  rec(0, 0);
  return total;
}

// cum(s,...,s, s*,...,s*) with `p` plain and `q` conjugated copies, over an
// equiprobable finite point set (or a sample).
inline cd cumulant_pq(std::span<const cd> points, int p, int q) {
  const int n = p + q;
  auto moment = [&](unsigned mask) {
    cd acc{};
    for (const cd& s : points) {
      cd prod{1.0, 0.0};
      for (int k = 0; k < n; ++k)
        if (mask & (1U << k)) prod *= (k < p ? s : std::conj(s));
      acc += prod;
    }
    return acc / static_cast<double>(points.size());
  };
  return joint_cumulant(n, moment);
}

// Square M-QAM (or BPSK for m == 2) with unit average power, built from the
// integer grid directly.
inline std::vector<cd> unit_constellation(int m) {
  std::vector<cd> pts;
  if (m == 2) return {cd{1, 0}, cd{-1, 0}};
  const int side = static_cast<int>(std::lround(std::sqrt(m)));
  for (int i = 0; i < side; ++i)
    for (int q = 0; q < side; ++q) pts.emplace_back(2 * i - side + 1, 2 * q - side + 1);
  double p = 0.0;
  for (const auto& s : pts) p += std::norm(s);
  p /= static_cast<double>(pts.size());
  for (auto& s : pts) s /= std::sqrt(p);
  return pts;
}

inline std::vector<cd> naive_dft(std::span<const cd> x) {
  const std::size_t n = x.size();
  std::vector<cd> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    cd acc{};
    for (std::size_t t = 0; t < n; ++t)
      acc += x[t] * std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(k * t % n) / static_cast<double>(n));
    out[k] = acc;
  }
  return out;
}

// Full linear convolution.
inline std::vector<cd> naive_convolve(std::span<const cd> x, std::span<const double> h) {
  std::vector<cd> y(x.size() + h.size() - 1);
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t k = 0; k < h.size(); ++k) y[i + k] += h[k] * x[i];
  return y;
}

// Biased autocorrelation by direct summation.
inline cd naive_autocorr(std::span<const cd> x, std::size_t lag) {
  cd acc{};
  for (std::size_t n = 0; n + lag < x.size(); ++n) acc += x[n + lag] * std::conj(x[n]);
  return acc / static_cast<double>(x.size());
}

struct SvmSolution {
  Eigen::VectorXd w;  // includes the bias weight as the last entry
  double objective = 0.0;
};

// Projected accelerated gradient (FISTA) on the box-constrained dual of
// 0.5 |w~|^2 + C sum hinge with x~ = [x, 1]. Slow but simple.
inline SvmSolution reference_svm(const Eigen::MatrixXd& X, std::span<const int> y, double c, int iterations) {
  const Eigen::Index n = X.rows();
  Eigen::MatrixXd Z(n, X.cols() + 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    Z.row(i).head(X.cols()) = X.row(i) * y[static_cast<std::size_t>(i)];
    Z(i, X.cols()) = y[static_cast<std::size_t>(i)];
  }
  const Eigen::MatrixXd Q = Z * Z.transpose();
  const double lipschitz = Q.selfadjointView<Eigen::Lower>().eigenvalues().maxCoeff();
  Eigen::VectorXd a = Eigen::VectorXd::Zero(n), a_prev = a, v = a;
  double t = 1.0;
  for (int it = 0; it < iterations; ++it) {
    const Eigen::VectorXd grad = Q * v - Eigen::VectorXd::Ones(n);
    a = (v - grad / lipschitz).cwiseMax(0.0).cwiseMin(c);
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    v = a + ((t - 1.0) / t_next) * (a - a_prev);
    a_prev = a;
    t = t_next;
  }
  SvmSolution s;
  s.w = Z.transpose() * a;
  double hinge = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) hinge += std::max(0.0, 1.0 - Z.row(i).dot(s.w));
  s.objective = 0.5 * s.w.squaredNorm() + c * hinge;
  return s;
}

inline double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

}  // namespace oracle
