#pragma once

#include "mqcloc/spin_hilbert.hpp"

namespace mqcloc::linalg {

/// Eigenpairs of a real symmetric matrix, ascending eigenvalues, orthonormal
/// eigenvectors in the columns of `vectors`.
struct SymmetricEigen {
  RVector values;
  RMatrix vectors;
};

struct HermitianEigen {
  RVector values;
  CMatrix vectors;
};

/// Divide-and-conquer LAPACK drivers (dsyevd / zheevd); only the lower
/// triangle of the input is referenced.
SymmetricEigen eigh(RMatrix a);
HermitianEigen eigh(CMatrix a);

/// q diag(phases) q^dagger for real q.
CMatrix reconstruct(const RMatrix& q, const Eigen::VectorXcd& phases);
CMatrix reconstruct(const CMatrix& q, const Eigen::VectorXcd& phases);

}  // namespace mqcloc::linalg
