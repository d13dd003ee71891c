#include "mqcloc/linalg.hpp"

#include <lapacke.h>

namespace mqcloc::linalg {

SymmetricEigen eigh(RMatrix a) {
  if (a.rows() != a.cols()) fail(ErrorKind::shape, "eigh needs a square matrix");
  const auto n = static_cast<lapack_int>(a.rows());
  RVector w(n);
  if (n == 0) return {w, a};
  const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n, a.data(), n, w.data());
  if (info != 0) fail(ErrorKind::diagnostic, "dsyevd failed with info=" + std::to_string(info));
  return {std::move(w), std::move(a)};
}

HermitianEigen eigh(CMatrix a) {
  if (a.rows() != a.cols()) fail(ErrorKind::shape, "eigh needs a square matrix");
  const auto n = static_cast<lapack_int>(a.rows());
  RVector w(n);
  if (n == 0) return {w, a};
  const lapack_int info =
      LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'L', n, reinterpret_cast<lapack_complex_double*>(a.data()),
                     n, w.data());
  if (info != 0) fail(ErrorKind::diagnostic, "zheevd failed with info=" + std::to_string(info));
  return {std::move(w), std::move(a)};
}

CMatrix reconstruct(const RMatrix& q, const Eigen::VectorXcd& phases) {
  const CMatrix scaled = q.cast<cplx>() * phases.asDiagonal();
  return scaled * q.transpose().cast<cplx>();
}

CMatrix reconstruct(const CMatrix& q, const Eigen::VectorXcd& phases) {
  return (q * phases.asDiagonal()) * q.adjoint();
}

}  // namespace mqcloc::linalg
