#include "basis_factor.hpp"

#include <cmath>
#include <limits>

namespace deafs::milp {

bool BasisFactor::factorize(const Eigen::SparseMatrix<double>& basis) {
  etas_.clear();
  if (basis.cols() == 0) return true;
  lu_.analyzePattern(basis);
  lu_.factorize(basis);
  if (lu_.info() != Eigen::Success) return false;
  // SparseLU accepts numerically tiny pivots; reject them here.
  const auto [lo, hi] = lu_.pivot_range();
  return basis.cols() == 0 || lo > 1e-11 * std::max(1.0, hi);
}

std::pair<double, double> BasisFactor::LU::pivot_range() const {
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (Eigen::Index j = 0; j < m_Lstore.cols(); ++j) {
    double d = 0.0;
    for (SCMatrix::InnerIterator it(m_Lstore, j); it; ++it) {
      if (it.index() == j) {
        d = std::abs(it.value());
        break;
      }
    }
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  return {lo, hi};
}

void BasisFactor::ftran(Eigen::VectorXd& v) const {
  Eigen::VectorXd w = lu_.solve(v);
  for (const auto& eta : etas_) {
    const double xr = w[eta.pos] / eta.pivot;
    if (xr != 0.0) {
      for (std::size_t t = 0; t < eta.index.size(); ++t) w[eta.index[t]] -= eta.value[t] * xr;
    }
    w[eta.pos] = xr;
  }
  v.swap(w);
}

void BasisFactor::btran(Eigen::VectorXd& v) const {
  for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
    double s = v[it->pos];
    for (std::size_t t = 0; t < it->index.size(); ++t) s -= it->value[t] * v[it->index[t]];
    v[it->pos] = s / it->pivot;
  }
  Eigen::VectorXd w = lu_.transpose().solve(v);
  v.swap(w);
}

void BasisFactor::push_eta(int pos, const Eigen::VectorXd& alpha) {
  Eta eta{pos, alpha[pos], {}, {}};
  for (Eigen::Index i = 0; i < alpha.size(); ++i) {
    if (i != pos && alpha[i] != 0.0 && std::abs(alpha[i]) > 1e-14) {
      eta.index.push_back(static_cast<int>(i));
      eta.value.push_back(alpha[i]);
    }
  }
  etas_.push_back(std::move(eta));
}

}  // namespace deafs::milp
