#include "biham/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "biham/errors.hpp"

namespace biham {
namespace {

// Components below this magnitude (of a unit vector) are not used to fix
// the phase gauge.
constexpr double kGaugeThreshold = 1e-8;

void fix_gauge(CMatrix& right) {
  for (Eigen::Index j = 0; j < right.cols(); ++j) {
    auto col = right.col(j);
    col.normalize();
    for (Eigen::Index k = 0; k < col.size(); ++k) {
      const double mag = std::abs(col(k));
      if (mag > kGaugeThreshold) {
        col *= std::conj(col(k)) / mag;
        col(k) = Complex(mag, 0.0);
        break;
      }
    }
  }
}

double max_abs(const CMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace

BiorthogonalSystem biorthogonal_decompose(const NhMatrix& h, double tol) {
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tol must be positive");

  const Eigen::Index n = h.size();
  Eigen::ComplexEigenSolver<CMatrix> solver(h.matrix(), /*computeEigenvectors=*/true);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::NotDiagonalizable, "eigenvalue iteration did not converge");
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  const CVector& raw_values = solver.eigenvalues();
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    const Complex ea = raw_values(a);
    const Complex eb = raw_values(b);
    if (ea.real() != eb.real()) return ea.real() < eb.real();
    return ea.imag() < eb.imag();
  });

  BiorthogonalSystem sys;
  sys.eigenvalues.resize(n);
  sys.right.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto src = order[static_cast<std::size_t>(j)];
    sys.eigenvalues(j) = raw_values(src);
    sys.right.col(j) = solver.eigenvectors().col(src);
  }
  fix_gauge(sys.right);

  Eigen::JacobiSVD<CMatrix> svd(sys.right);
  const RVector& sv = svd.singularValues();
  const double smax = sv(0);
  const double smin = sv(n - 1);
  if (!(smin >= tol * smax)) {
    throw Error(ErrorCode::NotDiagonalizable,
                "eigenvector matrix is numerically singular (sigma_min/sigma_max = " +
                    std::to_string(smin / smax) + "); exceptional point or defective h");
  }
  sys.cond = smax / smin;

  // B^dagger = A^{-1} makes <b_i|a_j> = delta_ij by construction.
  sys.left = sys.right.partialPivLu().inverse().adjoint();

  const double left_res = left_eigen_residual(h, sys);
  if (!(left_res <= std::sqrt(tol))) {
    throw Error(ErrorCode::NotDiagonalizable,
                "left eigenvectors fail the h^dagger cross-check (residual " +
                    std::to_string(left_res) + ")");
  }
  return sys;
}

double biorthonormality_residual(const BiorthogonalSystem& sys) {
  const CMatrix gram = sys.left.adjoint() * sys.right;
  return max_abs(gram - CMatrix::Identity(gram.rows(), gram.cols()));
}

double completeness_residual(const BiorthogonalSystem& sys) {
  const Eigen::Index n = sys.dimension();
  const CMatrix resolvent = sys.right * sys.left.adjoint();
  return max_abs(resolvent - CMatrix::Identity(n, n));
}

double right_eigen_residual(const NhMatrix& h, const BiorthogonalSystem& sys) {
  const double scale = std::max(h.operator_norm(), 1e-300);
  double worst = 0.0;
  for (Eigen::Index j = 0; j < sys.modes(); ++j) {
    const CVector a = sys.right.col(j).normalized();
    worst = std::max(worst, (h.matrix() * a - sys.eigenvalues(j) * a).norm());
  }
  return h.matrix().isZero(0.0) ? worst : worst / scale;
}

double left_eigen_residual(const NhMatrix& h, const BiorthogonalSystem& sys) {
  const double scale = std::max(h.operator_norm(), 1e-300);
  const CMatrix hd = h.matrix().adjoint();
  double worst = 0.0;
  for (Eigen::Index j = 0; j < sys.modes(); ++j) {
    const CVector b = sys.left.col(j).normalized();
    worst = std::max(worst, (hd * b - std::conj(sys.eigenvalues(j)) * b).norm());
  }
  return h.matrix().isZero(0.0) ? worst : worst / scale;
}

bool spectrum_is_real(const BiorthogonalSystem& sys, double tol) {
  if (sys.eigenvalues.size() == 0) return true;
  const double max_imag = sys.eigenvalues.imag().cwiseAbs().maxCoeff();
  const double max_mag = sys.eigenvalues.cwiseAbs().maxCoeff();
  if (max_mag == 0.0) return max_imag <= tol;
  return max_imag <= tol * max_mag;
}

BiorthogonalSystem align_modes(const BiorthogonalSystem& reference, BiorthogonalSystem next) {
  const Eigen::Index m = next.modes();
  if (reference.modes() != m || reference.dimension() != next.dimension()) {
    throw Error(ErrorCode::InvalidArgument, "align_modes: systems differ in shape");
  }
  // overlap(i, j) = |<a_ref_i|a_next_j>| for unit-normalized vectors.
  Eigen::MatrixXd overlap(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const CVector ref = reference.right.col(i).normalized();
    for (Eigen::Index j = 0; j < m; ++j) {
      overlap(i, j) = std::abs(ref.dot(next.right.col(j).normalized()));
    }
  }

  // Greedy assignment on the globally largest remaining overlap.
  std::vector<Eigen::Index> assign(static_cast<std::size_t>(m), -1);
  std::vector<bool> row_used(static_cast<std::size_t>(m), false);
  std::vector<bool> col_used(static_cast<std::size_t>(m), false);
  for (Eigen::Index round = 0; round < m; ++round) {
    double best = -1.0;
    Eigen::Index bi = 0;
    Eigen::Index bj = 0;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (row_used[static_cast<std::size_t>(i)]) continue;
      for (Eigen::Index j = 0; j < m; ++j) {
        if (col_used[static_cast<std::size_t>(j)]) continue;
        if (overlap(i, j) > best) {
          best = overlap(i, j);
          bi = i;
          bj = j;
        }
      }
    }
    assign[static_cast<std::size_t>(bi)] = bj;
    row_used[static_cast<std::size_t>(bi)] = true;
    col_used[static_cast<std::size_t>(bj)] = true;
  }

  BiorthogonalSystem out;
  out.cond = next.cond;
  out.eigenvalues.resize(m);
  out.right.resize(next.dimension(), m);
  out.left.resize(next.dimension(), m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto j = assign[static_cast<std::size_t>(i)];
    out.eigenvalues(i) = next.eigenvalues(j);
    out.right.col(i) = next.right.col(j);
    out.left.col(i) = next.left.col(j);
  }
  return out;
}

}  // namespace biham
