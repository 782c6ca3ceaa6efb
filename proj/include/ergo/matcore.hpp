#pragma once

// Dense complex matrix kernels shared by every other module.

#include <complex>

#include <Eigen/Dense>

#include "ergo/error.hpp"

namespace ergo {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

/// Global numerical tolerances. Read concurrently by all kernels; change them
/// only before starting work.
struct Tolerances {
  double hermitian = 1e-12;   // max |m - m^dag| entry
  double unitary = 1e-10;     // ||u^dag u - I||_F
  double branch_cut = 1e-10;  // eigenphase distance to -pi that raises a warning
  double degeneracy = 1e-10;  // relative gap below which eigenvalues are grouped
};

const Tolerances& tolerances();
void set_tolerances(const Tolerances& tol);

/// Ascending eigenvalues with orthonormal eigenvector columns.
struct HermEig {
  RVector values;
  CMatrix vectors;
};

/// Eigenphases of a unitary in [-pi, pi) with orthonormal eigenvectors.
struct UnitaryPhases {
  RVector phases;
  CMatrix vectors;
  bool near_branch_cut = false;
};

struct UnitaryLog {
  CMatrix chi;  // Hermitian, exp(i chi) = u
  UnitaryPhases phases;
};

double hermiticity_defect(const CMatrix& m);
double unitarity_defect(const CMatrix& u);
bool all_finite(const CMatrix& m);

/// Eigendecomposition of a Hermitian matrix. Eigenvectors are canonicalised:
/// inside a degenerate block the basis is rebuilt by pivoted Gram-Schmidt of
/// the projected standard basis, and every column has its largest component
/// real and positive, so identical inputs give identical outputs.
HermEig hermitian_eig(const CMatrix& m);

/// chi = -i log(u) on the principal branch, eigenphases in [-pi, pi).
UnitaryLog principal_log_unitary(const CMatrix& u);

/// exp(-i h dt) through the spectral decomposition of h.
CMatrix exp_minus_iH_dt(const CMatrix& h, double dt);

/// Nearest unitary (polar factor). Input must be within Frobenius distance
/// 0.1 of the unitary group.
CMatrix reunitarize(const CMatrix& u);

/// Frobenius-norm distance of the closest unitary to u.
double distance_to_unitary(const CMatrix& u);

CMatrix pauli_x();
CMatrix pauli_y();
CMatrix pauli_z();

namespace detail {
// Unchecked kernels for inner loops whose inputs are Hermitian by construction.
CMatrix expm_hermitian(const CMatrix& h, double dt);
void wrap_principal(RVector& phases);
}  // namespace detail

}  // namespace ergo
