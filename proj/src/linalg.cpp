#include "biot/linalg.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <cmath>
#include <regex>
#include <string>

#include "biot/errors.hpp"

namespace biot {

using ColMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor>;

struct Factorization::Impl {
  Eigen::SimplicialLDLT<ColMatrix, Eigen::Lower, Eigen::AMDOrdering<int>> ldlt;
  Eigen::SparseLU<ColMatrix, Eigen::COLAMDOrdering<int>> lu;
  bool use_lu = false;
};

Vector Factorization::solve(const Vector& b) const {
  if (!impl_) throw SolverError("solve on an empty factorization");
  if (b.size() != rows_) throw InvalidArgument("right-hand side length does not match the factorization");
  solves_.fetch_add(1, std::memory_order_relaxed);
  Vector x = impl_->use_lu ? Vector(impl_->lu.solve(b)) : Vector(impl_->ldlt.solve(b));
  return x;
}

Factorization factor(const SparseMatrix& A, MatrixKind kind) {
  if (A.rows() != A.cols()) throw InvalidArgument("factorization needs a square matrix");
  auto impl = std::make_shared<Factorization::Impl>();
  const ColMatrix Ac = A;
  if (kind == MatrixKind::General) {
    impl->use_lu = true;
    impl->lu.analyzePattern(Ac);
    impl->lu.factorize(Ac);
    if (impl->lu.info() != Eigen::Success) {
      const std::string msg = impl->lu.lastErrorMessage();
      long dof = -1;
      std::smatch m;
      if (std::regex_search(msg, m, std::regex("(\\d+)\\s*$"))) dof = std::stol(m[1]) - 1;
      throw SingularMatrixError("LU factorization failed: " + msg, dof);
    }
  } else {
    impl->ldlt.compute(Ac);
    const Vector D = impl->ldlt.vectorD();
    const double scale = D.size() ? D.cwiseAbs().maxCoeff() : 1.0;
    const auto& pinv = impl->ldlt.permutationPinv().indices();
    for (long k = 0; k < D.size(); ++k) {
      const bool bad = kind == MatrixKind::SPD ? !(D[k] > 1e-14 * scale) : !(std::abs(D[k]) > 1e-14 * scale);
      if (bad) {
        const long dof = pinv[k];
        throw SingularMatrixError(std::string(kind == MatrixKind::SPD ? "non-positive" : "zero") +
                                      " pivot at dof " + std::to_string(dof),
                                  dof);
      }
    }
    if (impl->ldlt.info() != Eigen::Success) throw SingularMatrixError("LDLT factorization failed", -1);
  }
  Factorization f;
  f.impl_ = std::move(impl);
  f.rows_ = A.rows();
  f.kind_ = kind;
  return f;
}

Vector solve_slab_system(const BlockSystem& sys, const Vector& rhs) {
  if (rhs.size() != sys.matrix.rows()) throw InvalidArgument("slab right-hand side has wrong length");
  const double bn = rhs.norm();
  if (bn == 0.0) return Vector::Zero(rhs.size());
  Vector x = sys.fact.solve(rhs);
  const double res = (sys.matrix * x - rhs).norm();
  if (!(res <= 1e-9 * bn)) throw SolverError("slab system residual " + std::to_string(res / bn) + " exceeds 1e-9");
  return x;
}

double asymmetry(const SparseMatrix& A) {
  const SparseMatrix At = A.transpose();
  const SparseMatrix D = A - At;
  double mx = 0.0, md = 0.0;
  for (int k = 0; k < A.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(A, k); it; ++it) mx = std::max(mx, std::abs(it.value()));
  for (int k = 0; k < D.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(D, k); it; ++it) md = std::max(md, std::abs(it.value()));
  return mx > 0.0 ? md / mx : 0.0;
}

}  // namespace biot
