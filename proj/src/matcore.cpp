#include "ergo/matcore.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

namespace ergo {

namespace {

Tolerances g_tolerances{};

void require_square(const CMatrix& m, const char* what) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    throw Error(ErrorKind::DimMismatch, std::string(what) + " must be a non-empty square matrix");
  }
  if (!all_finite(m)) {
    throw Error(ErrorKind::InvalidInput, std::string(what) + " has non-finite entries");
  }
}

// Largest component real and positive; ties resolved towards the lower index.
void fix_column_phase(Eigen::Ref<CVector> v) {
  const double vmax = v.cwiseAbs().maxCoeff();
  if (vmax == 0.0) return;
  Eigen::Index pivot = 0;
  for (Eigen::Index j = 0; j < v.size(); ++j) {
    if (std::abs(v(j)) >= vmax * (1.0 - 1e-9)) {
      pivot = j;
      break;
    }
  }
  v *= std::conj(v(pivot)) / std::abs(v(pivot));
}

// Rebuilds an orthonormal basis of span(block) from projections of the
// standard basis vectors, picking the largest residual at each step.
CMatrix canonical_block_basis(const CMatrix& block) {
  const Eigen::Index d = block.rows();
  const Eigen::Index k = block.cols();
  const CMatrix proj = block * block.adjoint();
  CMatrix candidates = proj;  // column j = P e_j
  CMatrix basis(d, k);
  std::vector<bool> used(static_cast<std::size_t>(d), false);
  for (Eigen::Index col = 0; col < k; ++col) {
    Eigen::Index best = -1;
    double best_norm = -1.0;
    for (Eigen::Index j = 0; j < d; ++j) {
      if (used[static_cast<std::size_t>(j)]) continue;
      const double n = candidates.col(j).norm();
      if (n > best_norm * (1.0 + 1e-9)) {
        best_norm = n;
        best = j;
      }
    }
    used[static_cast<std::size_t>(best)] = true;
    CVector v = candidates.col(best) / best_norm;
    // second pass of Gram-Schmidt for stability
    for (Eigen::Index c = 0; c < col; ++c) v -= basis.col(c) * basis.col(c).dot(v);
    v.normalize();
    basis.col(col) = v;
    for (Eigen::Index j = 0; j < d; ++j) {
      if (!used[static_cast<std::size_t>(j)]) {
        candidates.col(j) -= v * v.dot(candidates.col(j));
      }
    }
  }
  return basis;
}

}  // namespace

const Tolerances& tolerances() { return g_tolerances; }
void set_tolerances(const Tolerances& tol) { g_tolerances = tol; }

double hermiticity_defect(const CMatrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double unitarity_defect(const CMatrix& u) {
  if (u.rows() != u.cols()) return std::numeric_limits<double>::infinity();
  return (u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols())).norm();
}

bool all_finite(const CMatrix& m) {
  return m.real().allFinite() && m.imag().allFinite();
}

HermEig hermitian_eig(const CMatrix& m) {
  require_square(m, "hermitian_eig input");
  const double defect = hermiticity_defect(m);
  if (defect > g_tolerances.hermitian) {
    throw Error(ErrorKind::NotHermitian,
                "max |m - m^dag| = " + std::to_string(defect) + " exceeds tolerance");
  }
  const CMatrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::NoConvergence, "self-adjoint eigensolver did not converge");
  }
  HermEig out{solver.eigenvalues(), solver.eigenvectors()};

  const Eigen::Index d = out.values.size();
  const double scale = std::max(1.0, out.values.cwiseAbs().maxCoeff());
  const double gap = g_tolerances.degeneracy * scale;
  Eigen::Index start = 0;
  while (start < d) {
    Eigen::Index stop = start + 1;
    while (stop < d && out.values(stop) - out.values(stop - 1) <= gap) ++stop;
    const Eigen::Index width = stop - start;
    if (width > 1) {
      out.vectors.middleCols(start, width) =
          canonical_block_basis(out.vectors.middleCols(start, width));
    }
    start = stop;
  }
  for (Eigen::Index c = 0; c < d; ++c) fix_column_phase(out.vectors.col(c));
  return out;
}

void detail::wrap_principal(RVector& phases) {
  constexpr double pi = std::numbers::pi;
  for (auto& p : phases) {
    // std::arg lands in (-pi, pi]; fold +pi (and anything beyond) onto -pi.
    if (p >= pi) p -= 2.0 * pi;
    if (p < -pi) p += 2.0 * pi;
  }
}

UnitaryLog principal_log_unitary(const CMatrix& u) {
  require_square(u, "principal_log_unitary input");
  const double defect = unitarity_defect(u);
  if (defect > g_tolerances.unitary) {
    throw Error(ErrorKind::NotUnitary,
                "||u^dag u - I||_F = " + std::to_string(defect) + " exceeds tolerance");
  }
  Eigen::ComplexSchur<CMatrix> schur(u);
  if (schur.info() != Eigen::Success) {
    throw Error(ErrorKind::NoConvergence, "complex Schur decomposition did not converge");
  }
  const CMatrix& t = schur.matrixT();
  const CMatrix& q = schur.matrixU();
  const Eigen::Index d = u.rows();

  RVector raw(d);
  for (Eigen::Index k = 0; k < d; ++k) raw(k) = std::arg(t(k, k));
  detail::wrap_principal(raw);

  std::vector<Eigen::Index> order(static_cast<std::size_t>(d));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return raw(a) < raw(b); });

  UnitaryLog out;
  out.phases.phases.resize(d);
  out.phases.vectors.resize(d, d);
  for (Eigen::Index k = 0; k < d; ++k) {
    const auto src = order[static_cast<std::size_t>(k)];
    out.phases.phases(k) = raw(src);
    out.phases.vectors.col(k) = q.col(src);
  }
  constexpr double pi = std::numbers::pi;
  for (double p : out.phases.phases) {
    if (p + pi < g_tolerances.branch_cut || pi - p < g_tolerances.branch_cut) {
      out.phases.near_branch_cut = true;
    }
  }
  const CMatrix& v = out.phases.vectors;
  CMatrix chi = v * out.phases.phases.cast<cplx>().asDiagonal() * v.adjoint();
  out.chi = 0.5 * (chi + chi.adjoint());
  return out;
}

CMatrix detail::expm_hermitian(const CMatrix& h, double dt) {
  if (h.rows() == 2) {
    // h = m I + n.sigma: exp(-i h dt) = e^{-i m dt} (cos(r dt) - i sin(r dt) n.sigma / r)
    const double m = 0.5 * (h(0, 0).real() + h(1, 1).real());
    const double z = 0.5 * (h(0, 0).real() - h(1, 1).real());
    const cplx b = h(0, 1);
    const double r = std::sqrt(z * z + std::norm(b));
    const double rt = r * dt;
    const double sinc = r > 0.0 ? std::sin(rt) / r : dt;
    const cplx g = std::polar(1.0, -m * dt);
    const cplx mi(0.0, -1.0);
    CMatrix out(2, 2);
    out(0, 0) = g * (std::cos(rt) + mi * sinc * z);
    out(1, 1) = g * (std::cos(rt) - mi * sinc * z);
    out(0, 1) = g * mi * sinc * b;
    out(1, 0) = g * mi * sinc * std::conj(b);
    return out;
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h);
  const RVector& w = solver.eigenvalues();
  CVector phase(w.size());
  for (Eigen::Index k = 0; k < w.size(); ++k) phase(k) = std::polar(1.0, -w(k) * dt);
  const CMatrix& v = solver.eigenvectors();
  return v * phase.asDiagonal() * v.adjoint();
}

CMatrix exp_minus_iH_dt(const CMatrix& h, double dt) {
  require_square(h, "exp_minus_iH_dt generator");
  if (!std::isfinite(dt)) throw Error(ErrorKind::InvalidInput, "time step must be finite");
  const double defect = hermiticity_defect(h);
  if (defect > g_tolerances.hermitian) {
    throw Error(ErrorKind::NotHermitian,
                "max |h - h^dag| = " + std::to_string(defect) + " exceeds tolerance");
  }
  if (dt == 0.0) return CMatrix::Identity(h.rows(), h.cols());
  return detail::expm_hermitian(0.5 * (h + h.adjoint()), dt);
}

CMatrix reunitarize(const CMatrix& u) {
  require_square(u, "reunitarize input");
  const Eigen::Index d = u.rows();
  // Scaled Newton iteration for the unitary polar factor:
  //   X <- (g X + (g X)^{-dag}) / 2,  g = (||X^{-1}||_F / ||X||_F)^{1/2}.
  CMatrix x = u;
  bool converged = false;
  for (int iter = 0; iter < 60; ++iter) {
    Eigen::PartialPivLU<CMatrix> lu(x);
    if (!(std::abs(lu.determinant()) > 1e-300)) {
      throw Error(ErrorKind::TooFarFromUnitary, "matrix is singular");
    }
    const CMatrix inv = lu.inverse();
    if (!all_finite(inv)) throw Error(ErrorKind::TooFarFromUnitary, "matrix is singular");
    const double g = std::sqrt(inv.norm() / x.norm());
    const bool scale = (iter < 6) && std::abs(g - 1.0) > 1e-3;
    const CMatrix next = scale ? CMatrix(0.5 * (g * x + inv.adjoint() / g))
                               : CMatrix(0.5 * (x + inv.adjoint()));
    const double step = (next - x).norm();
    x = next;
    if (step <= 1e-15 * std::sqrt(static_cast<double>(d))) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    // Newton stalls at rounding level; accept if the result is unitary.
    if (unitarity_defect(x) > 1e-13) {
      throw Error(ErrorKind::NoConvergence, "polar iteration did not converge");
    }
  }
  const double dist = (u - x).norm();
  if (dist > 0.1) {
    throw Error(ErrorKind::TooFarFromUnitary,
                "Frobenius distance to the unitary group is " + std::to_string(dist));
  }
  return x;
}

double distance_to_unitary(const CMatrix& u) {
  require_square(u, "distance_to_unitary input");
  Eigen::JacobiSVD<CMatrix> svd(u);
  return (svd.singularValues().array() - 1.0).matrix().norm();
}

CMatrix pauli_x() {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 1) = 1.0;
  m(1, 0) = 1.0;
  return m;
}

CMatrix pauli_y() {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 1) = cplx(0.0, -1.0);
  m(1, 0) = cplx(0.0, 1.0);
  return m;
}

CMatrix pauli_z() {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = -1.0;
  return m;
}

}  // namespace ergo
