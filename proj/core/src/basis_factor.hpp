#pragma once

#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

namespace deafs::milp {

/// LU factors of a simplex basis plus a product-form eta file for the
/// column replacements applied since the last refactorization.
class BasisFactor {
 public:
  /// Returns false when the matrix is singular.
  bool factorize(const Eigen::SparseMatrix<double>& basis);

  /// v <- B^{-1} v
  void ftran(Eigen::VectorXd& v) const;
  /// v <- B^{-T} v
  void btran(Eigen::VectorXd& v) const;

  /// Records that basis column `pos` was replaced; `alpha` = B^{-1} a_entering
  /// computed before the replacement.
  void push_eta(int pos, const Eigen::VectorXd& alpha);
  std::size_t num_etas() const { return etas_.size(); }

 private:
  struct Eta {
    int pos;
    double pivot;
    std::vector<int> index;
    std::vector<double> value;
  };

  // Exposes the pivot magnitudes kept in the supernodal L store.
  class LU : public Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> {
   public:
    /// min and max |u_jj|
    std::pair<double, double> pivot_range() const;
  };

  mutable LU lu_;  // SparseLU::transpose() is non-const
  std::vector<Eta> etas_;
};

}  // namespace deafs::milp
