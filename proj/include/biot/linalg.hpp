#pragma once

#include <atomic>
#include <memory>
#include <vector>

#include "biot/types.hpp"

namespace biot {

enum class MatrixKind { SPD, SymmetricIndefinite, General };

/// Immutable sparse direct factorization; solve() may be called concurrently.
class Factorization {
 public:
  Factorization() = default;
  Factorization(const Factorization& o) : impl_(o.impl_), rows_(o.rows_), kind_(o.kind_), solves_(o.solves()) {}
  Factorization& operator=(const Factorization& o) {
    impl_ = o.impl_;
    rows_ = o.rows_;
    kind_ = o.kind_;
    solves_.store(o.solves());
    return *this;
  }

  Vector solve(const Vector& b) const;
  long rows() const { return rows_; }
  MatrixKind kind() const { return kind_; }
  bool valid() const { return impl_ != nullptr; }
  /// Number of solves performed with this factorization.
  long solves() const { return solves_.load(); }

  friend Factorization factor(const SparseMatrix& A, MatrixKind kind);

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
  long rows_ = 0;
  MatrixKind kind_ = MatrixKind::General;
  mutable std::atomic<long> solves_{0};
};

/// Throws SingularMatrixError naming the offending dof when a pivot vanishes
/// (or is non-positive for SPD).
Factorization factor(const SparseMatrix& A, MatrixKind kind);

/// Per-slab flow system: unknowns ordered block-wise [q_1, p_1, q_2, p_2, ...].
struct BlockSystem {
  SparseMatrix matrix;
  int n_q = 0;
  int n_p = 0;
  int temporal_blocks = 0;
  bool symmetric = false;
  Factorization fact;

  int block_size() const { return n_q + n_p; }
  int q_offset(int j) const { return j * block_size(); }
  int p_offset(int j) const { return j * block_size() + n_q; }
};

/// Solves the block system and checks the residual (<= 1e-9 relative).
Vector solve_slab_system(const BlockSystem& sys, const Vector& rhs);

/// max |A - A^T| / max |A|.
double asymmetry(const SparseMatrix& A);

}  // namespace biot
