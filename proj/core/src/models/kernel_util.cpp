#include "abcsmc2/models/kernel_util.hpp"

namespace abcsmc2::models {

Eigen::MatrixXd safe_cholesky(const Eigen::MatrixXd& cov, bool* regularized) {
  if (regularized) *regularized = false;
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() == Eigen::Success) return llt.matrixL();
  const Eigen::MatrixXd ridged =
      cov + 1e-8 * Eigen::MatrixXd::Identity(cov.rows(), cov.cols());
  if (regularized) *regularized = true;
  Eigen::LLT<Eigen::MatrixXd> retry(ridged);
  if (retry.info() == Eigen::Success) return retry.matrixL();
  // Still not factorizable (e.g. an exactly collapsed cloud): no move.
  return Eigen::MatrixXd::Zero(cov.rows(), cov.cols());
}

}  // namespace abcsmc2::models
