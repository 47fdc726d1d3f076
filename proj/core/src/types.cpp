#include "biham/types.hpp"

#include <string>

#include "biham/errors.hpp"

namespace biham {

NhMatrix::NhMatrix(CMatrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() < 1 || entries_.rows() != entries_.cols()) {
    throw Error(ErrorCode::InvalidArgument,
                "generator must be a non-empty square matrix, got " +
                    std::to_string(entries_.rows()) + "x" + std::to_string(entries_.cols()));
  }
  if (!entries_.allFinite()) {
    throw Error(ErrorCode::InvalidArgument, "generator has non-finite entries");
  }
}

double NhMatrix::operator_norm() const {
  if (entries_.rows() == 1) return std::abs(entries_(0, 0));
  Eigen::JacobiSVD<CMatrix> svd(entries_);
  return svd.singularValues()(0);
}

bool NhMatrix::is_hermitian(double tol) const {
  return (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace biham
