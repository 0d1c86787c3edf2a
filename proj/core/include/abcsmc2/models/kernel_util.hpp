#pragma once

#include <Eigen/Dense>

namespace abcsmc2::models {

/// Cholesky factor of a covariance matrix, retrying with an added ridge of
/// 1e-8 * I when the plain factorization fails. Sets *regularized when the
/// ridge was needed.
Eigen::MatrixXd safe_cholesky(const Eigen::MatrixXd& cov, bool* regularized);

}  // namespace abcsmc2::models
