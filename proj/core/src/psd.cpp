#include "shiftlab/psd.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <optional>
#include <cmath>

namespace shiftlab {

bool is_psd(RationalMatrix a) {
  std::size_t n = a.size();
  std::vector<std::size_t> live(n);
  for (std::size_t i = 0; i < n; ++i) live[i] = i;

  while (!live.empty()) {
    // A negative diagonal entry already rules out semidefiniteness.
    std::optional<std::size_t> pivot;
    for (std::size_t idx = 0; idx < live.size(); ++idx) {
      const auto& d = a[live[idx]][live[idx]];
      if (sgn(d) < 0) return false;
      if (!pivot && sgn(d) > 0) pivot = idx;
    }
    if (!pivot) {
      // All diagonal entries vanish; semidefinite iff the block is zero.
      for (auto i : live) {
        for (auto j : live) {
          if (!is_zero(a[i][j])) return false;
        }
      }
      return true;
    }
    const std::size_t p = live[*pivot];
    live.erase(live.begin() + static_cast<std::ptrdiff_t>(*pivot));
    const Rational d = a[p][p];
    for (auto i : live) {
      if (is_zero(a[i][p])) continue;
      const Rational f = a[i][p] / d;
      for (auto j : live) a[i][j] -= f * a[p][j];
    }
  }
  return true;
}

bool is_psd(const std::vector<std::vector<double>>& a, double tol) {
  const auto n = static_cast<Eigen::Index>(a.size());
  if (n == 0) return true;
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = a[i][j];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
  return ev.minCoeff() >= -tol * scale;
}

}  // namespace shiftlab
