#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace biot {

using Vector = Eigen::VectorXd;
using DenseMatrix = Eigen::MatrixXd;
/// Compressed row storage with sorted column indices per row.
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using Triplet = Eigen::Triplet<double>;

/// Spatial points and vectors always carry three components; the unused
/// trailing component is zero in two dimensions.
using Point = Eigen::Vector3d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

}  // namespace biot
