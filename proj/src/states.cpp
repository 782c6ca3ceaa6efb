#include "ergo/states.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>

namespace ergo {

namespace {

constexpr double kTraceTol = 1e-12;
constexpr double kPsdClamp = 1e-12;

std::vector<Eigen::Index> descending_order(const RVector& v) {
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(v.size()));
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return v(a) > v(b); });
  return idx;
}

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

double thermal_energy(const HamiltonianOp& h, double beta) {
  return thermal_populations(h, beta).dot(h.energies());
}

}  // namespace

// ---------------------------------------------------------------- HamiltonianOp

HamiltonianOp::HamiltonianOp(const CMatrix& m) : eig_(hermitian_eig(m)) {
  mat_ = 0.5 * (m + m.adjoint());
}

HamiltonianOp HamiltonianOp::diagonal(const RVector& energies) {
  return HamiltonianOp(energies.cast<cplx>().asDiagonal().toDenseMatrix());
}

double HamiltonianOp::width() const {
  return eig_.values(eig_.values.size() - 1) - eig_.values(0);
}

// ---------------------------------------------------------------- DensityMatrix

DensityMatrix::DensityMatrix(const CMatrix& m) : eig_(hermitian_eig(m)) {
  mat_ = 0.5 * (m + m.adjoint());
  const double tr = mat_.trace().real();
  if (std::abs(tr - 1.0) > kTraceTol) {
    throw Error(ErrorKind::InvalidState, "trace is " + std::to_string(tr) + ", expected 1");
  }
  for (auto& v : eig_.values) {
    if (v < -kPsdClamp) {
      throw Error(ErrorKind::InvalidState,
                  "negative eigenvalue " + std::to_string(v) + " in density matrix");
    }
    if (v < 0.0) v = 0.0;
  }
}

DensityMatrix DensityMatrix::diagonal(const RVector& populations) {
  return DensityMatrix(populations.cast<cplx>().asDiagonal().toDenseMatrix());
}

DensityMatrix DensityMatrix::pure(const CVector& psi) {
  const double n = psi.norm();
  if (!(n > 0.0)) throw Error(ErrorKind::InvalidState, "zero state vector");
  const CVector v = psi / n;
  return DensityMatrix(v * v.adjoint());
}

DensityMatrix DensityMatrix::from_spectrum(const RVector& populations, const CMatrix& vectors) {
  if (vectors.rows() != vectors.cols() || vectors.cols() != populations.size()) {
    throw Error(ErrorKind::DimMismatch, "populations and eigenvector columns differ in size");
  }
  if (!populations.allFinite() || !all_finite(vectors)) {
    throw Error(ErrorKind::InvalidInput, "non-finite spectrum");
  }
  if (unitarity_defect(vectors) > tolerances().unitary) {
    throw Error(ErrorKind::InvalidState, "eigenvector columns are not orthonormal");
  }
  const double tr = populations.sum();
  if (std::abs(tr - 1.0) > kTraceTol) {
    throw Error(ErrorKind::InvalidState, "trace is " + std::to_string(tr) + ", expected 1");
  }
  DensityMatrix out;
  const CMatrix m = vectors * populations.cast<cplx>().asDiagonal() * vectors.adjoint();
  out.mat_ = 0.5 * (m + m.adjoint());
  // ascending order, ties in the given column order
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(populations.size()));
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return populations(a) < populations(b); });
  out.eig_.values.resize(populations.size());
  out.eig_.vectors.resize(vectors.rows(), vectors.cols());
  for (Eigen::Index k = 0; k < populations.size(); ++k) {
    const Eigen::Index j = idx[static_cast<std::size_t>(k)];
    double v = populations(j);
    if (v < -kPsdClamp) {
      throw Error(ErrorKind::InvalidState,
                  "negative eigenvalue " + std::to_string(v) + " in density matrix");
    }
    out.eig_.values(k) = std::max(v, 0.0);
    out.eig_.vectors.col(k) = vectors.col(j);
  }
  return out;
}

RVector DensityMatrix::eigenvalues_descending() const {
  const auto order = descending_order(eig_.values);
  RVector out(dim());
  for (Eigen::Index k = 0; k < dim(); ++k) out(k) = eig_.values(order[static_cast<std::size_t>(k)]);
  return out;
}

CMatrix DensityMatrix::eigenvectors_descending() const {
  const auto order = descending_order(eig_.values);
  CMatrix out(dim(), dim());
  for (Eigen::Index k = 0; k < dim(); ++k) {
    out.col(k) = eig_.vectors.col(order[static_cast<std::size_t>(k)]);
  }
  return out;
}

double DensityMatrix::purity() const { return eig_.values.squaredNorm(); }

// ---------------------------------------------------------------- ProbVector

ProbVector::ProbVector(std::vector<double> p) : p_(std::move(p)) {
  if (p_.empty()) throw Error(ErrorKind::InvalidInput, "empty probability vector");
  double sum = 0.0;
  for (double x : p_) {
    if (!std::isfinite(x) || x < 0.0 || x > 1.0 + kTraceTol) {
      throw Error(ErrorKind::InvalidInput, "probability " + std::to_string(x) + " outside [0, 1]");
    }
    sum += x;
  }
  if (std::abs(sum - 1.0) > kTraceTol) {
    throw Error(ErrorKind::InvalidInput, "probabilities sum to " + std::to_string(sum));
  }
}

ProbVector::ProbVector(const RVector& p) : ProbVector(std::vector<double>(p.begin(), p.end())) {}

std::vector<double> ProbVector::sorted_descending() const {
  auto s = p_;
  std::sort(s.begin(), s.end(), std::greater<>());
  return s;
}

// ---------------------------------------------------------------- operations

void require_same_dim(const DensityMatrix& rho, const HamiltonianOp& h) {
  if (rho.dim() != h.dim()) {
    throw Error(ErrorKind::DimMismatch, "state has dimension " + std::to_string(rho.dim()) +
                                            ", Hamiltonian " + std::to_string(h.dim()));
  }
}

double energy(const DensityMatrix& rho, const HamiltonianOp& h) {
  require_same_dim(rho, h);
  return (rho.matrix() * h.matrix()).trace().real();
}

RVector populations(const DensityMatrix& rho, const HamiltonianOp& h) {
  require_same_dim(rho, h);
  const CMatrix& v = h.spectrum().vectors;
  return (v.adjoint() * rho.matrix() * v).diagonal().real();
}

DensityMatrix dephase(const DensityMatrix& rho, const HamiltonianOp& h) {
  return DensityMatrix::from_spectrum(populations(rho, h), h.spectrum().vectors);
}

DensityMatrix passive_state(const DensityMatrix& rho, const HamiltonianOp& h) {
  require_same_dim(rho, h);
  return DensityMatrix::from_spectrum(rho.eigenvalues_descending(), h.spectrum().vectors);
}

double passive_energy(const RVector& spectrum, const RVector& ascending_energies) {
  if (spectrum.size() != ascending_energies.size()) {
    throw Error(ErrorKind::DimMismatch, "spectrum and energy vectors differ in length");
  }
  RVector r = spectrum;
  std::sort(r.begin(), r.end(), std::greater<>());
  return r.dot(ascending_energies);
}

double shannon_entropy(const RVector& p) {
  double s = 0.0;
  for (double x : p) s -= xlogx(x);
  return s;
}

double von_neumann_entropy(const DensityMatrix& rho) {
  return shannon_entropy(rho.spectrum().values);
}

double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) throw Error(ErrorKind::DimMismatch, "relative entropy operands");
  const HermEig& s = sigma.spectrum();
  // weights <s_k|rho|s_k>
  const RVector w = (s.vectors.adjoint() * rho.matrix() * s.vectors).diagonal().real();
  double cross = 0.0;
  for (Eigen::Index k = 0; k < w.size(); ++k) {
    if (s.values(k) <= kPsdClamp) {
      if (w(k) > kPsdClamp) return std::numeric_limits<double>::infinity();
      continue;
    }
    cross += w(k) * std::log(s.values(k));
  }
  return -von_neumann_entropy(rho) - cross;
}

double coherence_rel_entropy(const DensityMatrix& rho, const HamiltonianOp& h) {
  return von_neumann_entropy(dephase(rho, h)) - von_neumann_entropy(rho);
}

RVector thermal_populations(const HamiltonianOp& h, double beta) {
  if (!std::isfinite(beta)) throw Error(ErrorKind::InvalidInput, "beta must be finite");
  const RVector& e = h.energies();
  RVector x = -beta * e;
  x.array() -= x.maxCoeff();
  RVector p = x.array().exp();
  return p / p.sum();
}

DensityMatrix thermal_state(const HamiltonianOp& h, double beta) {
  return DensityMatrix::from_spectrum(thermal_populations(h, beta), h.spectrum().vectors);
}

double beta_max(const HamiltonianOp& h) {
  const double w = h.width();
  return w > 0.0 ? 1e4 / w : 1e4;
}

ThermalSolveResult solve_beta_for_energy(const HamiltonianOp& h, double target) {
  const RVector& e = h.energies();
  const double lo_e = e(0);
  const double hi_e = e(e.size() - 1);
  if (!std::isfinite(target) || !(target > lo_e) || !(target < hi_e)) {
    throw Error(ErrorKind::EnergyOutOfRange, "energy " + std::to_string(target) +
                                                 " not strictly inside the spectrum [" +
                                                 std::to_string(lo_e) + ", " +
                                                 std::to_string(hi_e) + "]");
  }
  const double bmax = beta_max(h);
  const double tol = 1e-10 * h.width();
  // energy decreases monotonically in beta
  double lo = -bmax;
  double hi = bmax;
  for (int iter = 0; iter < 400 && hi - lo > 1e-16 * std::max(1.0, std::abs(lo + hi)); ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (thermal_energy(h, mid) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double beta = 0.5 * (lo + hi);
  const double residual = std::abs(thermal_energy(h, beta) - target);
  if (residual > tol) {
    throw Error(ErrorKind::NoConvergence,
                "beta bisection residual " + std::to_string(residual) + " above tolerance");
  }
  return ThermalSolveResult{beta, thermal_state(h, beta), residual};
}

ThermalSolveResult solve_beta_for_entropy(const HamiltonianOp& h, double entropy) {
  const double smax = std::log(static_cast<double>(h.dim()));
  if (!std::isfinite(entropy) || entropy < -1e-12 || entropy > smax + 1e-12) {
    throw Error(ErrorKind::EntropyOutOfRange, "entropy " + std::to_string(entropy) +
                                                  " outside [0, ln d]");
  }
  const double bmax = beta_max(h);
  auto s_of = [&](double b) { return shannon_entropy(thermal_populations(h, b)); };
  if (h.width() == 0.0 || s_of(bmax) >= entropy) {
    // unreachable at finite beta (or flat spectrum): saturate
    const double beta = h.width() == 0.0 ? 0.0 : bmax;
    return ThermalSolveResult{beta, thermal_state(h, beta), std::abs(s_of(beta) - entropy)};
  }
  if (entropy >= smax) return ThermalSolveResult{0.0, thermal_state(h, 0.0), 0.0};
  double lo = 0.0;
  double hi = bmax;
  for (int iter = 0; iter < 400 && hi - lo > 1e-16 * std::max(1.0, hi); ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (s_of(mid) > entropy) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double beta = 0.5 * (lo + hi);
  const double residual = std::abs(s_of(beta) - entropy);
  if (residual > 1e-10) {
    throw Error(ErrorKind::NoConvergence,
                "entropy bisection residual " + std::to_string(residual) + " above tolerance");
  }
  return ThermalSolveResult{beta, thermal_state(h, beta), residual};
}

double trace_distance(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorKind::DimMismatch, "trace distance operands");
  }
  const CMatrix d = a - b;
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(0.5 * (d + d.adjoint()), Eigen::EigenvaluesOnly);
  return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  return trace_distance(a.matrix(), b.matrix());
}

bool majorizes(const ProbVector& p, const ProbVector& q) {
  if (p.size() != q.size()) {
    throw Error(ErrorKind::LengthMismatch, "majorization needs vectors of equal length");
  }
  const auto ps = p.sorted_descending();
  const auto qs = q.sorted_descending();
  double sp = 0.0;
  double sq = 0.0;
  for (std::size_t k = 0; k < ps.size(); ++k) {
    sp += ps[k];
    sq += qs[k];
    if (sp < sq - 1e-12) return false;
  }
  return true;
}

}  // namespace ergo
