#pragma once

// Quantum states and Hamiltonians: validation, dephasing, passive states,
// entropies, thermal states and majorization.

#include <vector>

#include "ergo/matcore.hpp"

namespace ergo {

/// Hermitian observable with its cached ascending spectral decomposition.
class HamiltonianOp {
 public:
  explicit HamiltonianOp(const CMatrix& m);
  static HamiltonianOp diagonal(const RVector& energies);

  const CMatrix& matrix() const { return mat_; }
  const HermEig& spectrum() const { return eig_; }
  const RVector& energies() const { return eig_.values; }
  Eigen::Index dim() const { return mat_.rows(); }
  /// e_max - e_min
  double width() const;

 private:
  CMatrix mat_;
  HermEig eig_;
};

/// Unit-trace positive-semidefinite Hermitian matrix. Eigenvalues in
/// [-1e-12, 0) are clamped to zero in the cached spectrum.
class DensityMatrix {
 public:
  explicit DensityMatrix(const CMatrix& m);
  static DensityMatrix diagonal(const RVector& populations);
  static DensityMatrix pure(const CVector& psi);
  /// sum_n p_n |v_n><v_n| for orthonormal columns v_n. The given decomposition
  /// is kept as the cached spectrum rather than recomputed, so tiny clustered
  /// populations keep accurate eigenvectors.
  static DensityMatrix from_spectrum(const RVector& populations, const CMatrix& vectors);

  const CMatrix& matrix() const { return mat_; }
  /// Ascending, clamped eigenvalues with eigenvectors.
  const HermEig& spectrum() const { return eig_; }
  Eigen::Index dim() const { return mat_.rows(); }

  /// Eigenvalues sorted non-increasing, with the matching eigenvectors. Ties
  /// keep the ascending-index order of the eigensolver.
  RVector eigenvalues_descending() const;
  CMatrix eigenvectors_descending() const;

  double purity() const;

 private:
  DensityMatrix() = default;

  CMatrix mat_;
  HermEig eig_;
};

/// Probability vector: non-negative entries summing to one.
class ProbVector {
 public:
  explicit ProbVector(std::vector<double> p);
  explicit ProbVector(const RVector& p);

  const std::vector<double>& values() const { return p_; }
  std::size_t size() const { return p_.size(); }
  double operator[](std::size_t i) const { return p_[i]; }
  std::vector<double> sorted_descending() const;

 private:
  std::vector<double> p_;
};

struct ThermalSolveResult {
  double beta;
  DensityMatrix state;
  double residual;

  bool negative_temperature() const { return beta < 0.0; }
};

void require_same_dim(const DensityMatrix& rho, const HamiltonianOp& h);

/// Tr(rho h).
double energy(const DensityMatrix& rho, const HamiltonianOp& h);

/// Diagonal entries <e_n|rho|e_n> in h's ascending eigenbasis.
RVector populations(const DensityMatrix& rho, const HamiltonianOp& h);

DensityMatrix dephase(const DensityMatrix& rho, const HamiltonianOp& h);

/// Spectrum of rho sorted non-increasing on the ascending levels of h.
DensityMatrix passive_state(const DensityMatrix& rho, const HamiltonianOp& h);

/// sum_n r_n e_n with r non-increasing, e ascending: energy of passive_state.
double passive_energy(const RVector& spectrum, const RVector& ascending_energies);

/// Entropy in nats.
double von_neumann_entropy(const DensityMatrix& rho);
double shannon_entropy(const RVector& p);

/// Tr rho (ln rho - ln sigma); +infinity when supp(rho) is not inside supp(sigma).
double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma);

/// S(dephase(rho, h)) - S(rho).
double coherence_rel_entropy(const DensityMatrix& rho, const HamiltonianOp& h);

/// Gibbs populations exp(-beta e_n)/Z on the ascending levels of h.
RVector thermal_populations(const HamiltonianOp& h, double beta);
DensityMatrix thermal_state(const HamiltonianOp& h, double beta);

/// Upper end of the bisection bracket for beta: 1e4 / spectral width.
double beta_max(const HamiltonianOp& h);

/// Finds beta with Tr(rho_th(beta) h) = energy; negative beta is allowed.
ThermalSolveResult solve_beta_for_energy(const HamiltonianOp& h, double energy);

/// Finds beta >= 0 with S(rho_th(beta)) = entropy. Entropies below what
/// beta_max can reach return beta_max with the residual reported.
ThermalSolveResult solve_beta_for_entropy(const HamiltonianOp& h, double entropy);

/// (1/2) ||a - b||_1 for Hermitian a, b.
double trace_distance(const CMatrix& a, const CMatrix& b);
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

/// p majorizes q: partial sums of sorted p dominate those of q (1e-12 slack).
bool majorizes(const ProbVector& p, const ProbVector& q);

}  // namespace ergo
