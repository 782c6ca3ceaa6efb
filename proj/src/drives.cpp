#include "ergo/drives.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

#include "ergo/ergotropy.hpp"
#include "ergo/rng.hpp"

namespace ergo {

namespace {

constexpr double pi = std::numbers::pi;
constexpr int kReunitarizeEvery = 64;
constexpr int kMaxSteps = 100000;
constexpr double kDoublingTol = 1e-8;

double wrap(double x) {
  if (x >= pi) x -= 2.0 * pi;
  if (x < -pi) x += 2.0 * pi;
  return x;
}

// Overlaps A_mn = <r_m| U0^dag |e_n^f>.
CMatrix overlap_matrix(const DensityMatrix& rho_i, const HamiltonianOp& h_f,
                       const CMatrix& u0_final) {
  return rho_i.eigenvectors_descending().adjoint() * u0_final.adjoint() * h_f.spectrum().vectors;
}

RVector reference_from_overlaps(const CMatrix& a) {
  const Eigen::Index d = a.rows();
  RVector phi = RVector::Zero(d);
  Eigen::Index first_zero = -1;
  for (Eigen::Index n = 0; n < d; ++n) {
    if (std::abs(a(n, n)) > 1e-12) {
      phi(n) = -std::arg(a(n, n));
    } else if (first_zero < 0) {
      first_zero = n;
    }
  }
  if (first_zero >= 0) {
    CVector ph(d);
    for (Eigen::Index n = 0; n < d; ++n) ph(n) = std::polar(1.0, phi(n));
    const cplx det = (a * ph.asDiagonal()).determinant();
    phi(first_zero) = wrap(phi(first_zero) - std::arg(det));
  }
  return phi;
}

// (sum theta^2)^{1/2} over the principal eigenphases of a unitary.
double phase_norm(const CMatrix& m) {
  if (m.rows() == 1) return std::abs(std::arg(m(0, 0)));
  if (m.rows() == 2) {
    const cplx tr = m(0, 0) + m(1, 1);
    const cplx det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    const cplx disc = std::sqrt(tr * tr - 4.0 * det);
    const double a = wrap(std::arg(0.5 * (tr + disc)));
    const double b = wrap(std::arg(0.5 * (tr - disc)));
    return std::sqrt(a * a + b * b);
  }
  Eigen::ComplexEigenSolver<CMatrix> solver(m, false);
  double s = 0.0;
  for (const cplx& l : solver.eigenvalues()) {
    const double t = wrap(std::arg(l));
    s += t * t;
  }
  return std::sqrt(s);
}

CMatrix with_phases(const CMatrix& a, const RVector& phi) {
  CMatrix m = a;
  for (Eigen::Index n = 0; n < a.cols(); ++n) m.col(n) *= std::polar(1.0, phi(n));
  return m;
}

CMatrix hermitian_part(const CMatrix& m) { return 0.5 * (m + m.adjoint()); }

double max_entry(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

void require_phases(const RVector& phases, Eigen::Index d) {
  if (phases.size() != d) {
    throw Error(ErrorKind::DimMismatch, "expected " + std::to_string(d) + " phases, got " +
                                            std::to_string(phases.size()));
  }
  if (!phases.allFinite()) throw Error(ErrorKind::InvalidInput, "phases must be finite");
}

}  // namespace

double simpson(const std::vector<double>& y, double h) {
  const std::size_t n = y.empty() ? 0 : y.size() - 1;
  if (n == 0) return 0.0;
  if (n == 1) return 0.5 * h * (y[0] + y[1]);
  std::size_t even = (n % 2 == 0) ? n : n - 3;
  double sum = 0.0;
  if (even > 0) {
    double acc = y[0] + y[even];
    for (std::size_t k = 1; k < even; ++k) acc += (k % 2 ? 4.0 : 2.0) * y[k];
    sum = acc * h / 3.0;
  }
  if (even != n) {
    sum += 3.0 * h / 8.0 * (y[n - 3] + 3.0 * y[n - 2] + 3.0 * y[n - 1] + y[n]);
  }
  return sum;
}

// ---------------------------------------------------------------- propagation

PropagatorTrace propagate_u0_fixed(const HamiltonianOp& h_i, const HamiltonianOp& h_f,
                                   const Schedule& sched, int n_steps) {
  if (n_steps < 1) throw Error(ErrorKind::InvalidSchedule, "n_steps must be positive");
  const Eigen::Index d = h_i.dim();
  const double dt = sched.tau() / n_steps;
  PropagatorTrace out;
  out.times.reserve(static_cast<std::size_t>(n_steps) + 1);
  out.u_samples.reserve(static_cast<std::size_t>(n_steps) + 1);
  CMatrix u = CMatrix::Identity(d, d);
  out.times.push_back(sched.t_i());
  out.u_samples.push_back(u);
  for (int k = 0; k < n_steps; ++k) {
    const double t = sched.t_i() + k * dt;
    u = detail::expm_hermitian(hermitian_part(sched.h0(t + 0.5 * dt, h_i, h_f)), dt) * u;
    if ((k + 1) % kReunitarizeEvery == 0) u = reunitarize(u);
    out.times.push_back(k + 1 == n_steps ? sched.t_f() : sched.t_i() + (k + 1) * dt);
    out.u_samples.push_back(u);
  }
  for (const auto& s : out.u_samples) {
    out.unitarity_drift = std::max(out.unitarity_drift, unitarity_defect(s));
  }
  return out;
}

PropagatorTrace propagate_u0(const HamiltonianOp& h_i, const HamiltonianOp& h_f,
                             const Schedule& sched) {
  sched.check_endpoints(h_i, h_f);
  int n = sched.n_steps();
  if (n < 100) {
    throw Error(ErrorKind::InvalidSchedule, "propagation needs at least 100 steps");
  }
  PropagatorTrace coarse = propagate_u0_fixed(h_i, h_f, sched, n);
  while (true) {
    if (2 * static_cast<long>(n) > kMaxSteps) {
      throw Error(ErrorKind::NoConvergence,
                  "U_0(t_f) not converged to 1e-8 under grid doubling within " +
                      std::to_string(kMaxSteps) + " steps");
    }
    PropagatorTrace fine = propagate_u0_fixed(h_i, h_f, sched, 2 * n);
    const double change = (fine.u_samples.back() - coarse.u_samples.back()).norm();
    if (change <= kDoublingTol) {
      fine.doubling_change = change;
      return fine;
    }
    coarse = std::move(fine);
    n *= 2;
  }
}

// ---------------------------------------------------------------- targets

CMatrix target_unitary(const DensityMatrix& rho_i, const HamiltonianOp& h_f,
                       const RVector& phases_phi) {
  require_same_dim(rho_i, h_f);
  require_phases(phases_phi, rho_i.dim());
  CVector ph(rho_i.dim());
  for (Eigen::Index n = 0; n < ph.size(); ++n) ph(n) = std::polar(1.0, phases_phi(n));
  return h_f.spectrum().vectors * ph.asDiagonal() * rho_i.eigenvectors_descending().adjoint();
}

RVector reference_phases(const DensityMatrix& rho_i, const HamiltonianOp& h_f,
                         const CMatrix& u0_final) {
  require_same_dim(rho_i, h_f);
  if (u0_final.rows() != rho_i.dim() || u0_final.cols() != rho_i.dim()) {
    throw Error(ErrorKind::DimMismatch, "U_0(t_f) has the wrong dimension");
  }
  return reference_from_overlaps(overlap_matrix(rho_i, h_f, u0_final));
}

double theta_norm(const DensityMatrix& rho_i, const HamiltonianOp& h_f, const CMatrix& u0_final,
                  const RVector& aligned_phases) {
  require_phases(aligned_phases, rho_i.dim());
  const CMatrix a = overlap_matrix(rho_i, h_f, u0_final);
  return phase_norm(with_phases(a, reference_from_overlaps(a) + aligned_phases));
}

// ---------------------------------------------------------------- synthesis

DriveSynthesis synthesize_drive(const DensityMatrix& rho_i, const HamiltonianOp& h_i,
                                const HamiltonianOp& h_f, const Schedule& sched,
                                const RVector& phases_phi, PhaseFrame frame) {
  auto trace = std::make_shared<const PropagatorTrace>(propagate_u0(h_i, h_f, sched));
  return synthesize_drive(rho_i, h_i, h_f, sched, std::move(trace), phases_phi, frame);
}

DriveSynthesis synthesize_drive(const DensityMatrix& rho_i, const HamiltonianOp& h_i,
                                const HamiltonianOp& h_f, const Schedule& sched,
                                std::shared_ptr<const PropagatorTrace> trace,
                                const RVector& phases_phi, PhaseFrame frame) {
  require_same_dim(rho_i, h_i);
  require_same_dim(rho_i, h_f);
  sched.check_endpoints(h_i, h_f);
  if (!trace || trace->u_samples.size() < 2) {
    throw Error(ErrorKind::InvalidInput, "empty propagator trace");
  }
  require_phases(phases_phi, rho_i.dim());

  const CMatrix& u0f = trace->u_samples.back();
  const RVector total = frame == PhaseFrame::aligned
                            ? RVector(reference_phases(rho_i, h_f, u0f) + phases_phi)
                            : phases_phi;
  const CMatrix r = target_unitary(rho_i, h_f, total);
  const UnitaryLog log = principal_log_unitary(u0f.adjoint() * r);

  const double tau = sched.tau();
  std::vector<CMatrix> v;
  std::vector<double> vnorm;
  v.reserve(trace->u_samples.size());
  vnorm.reserve(trace->u_samples.size());
  for (std::size_t k = 0; k < trace->u_samples.size(); ++k) {
    const CMatrix& u = trace->u_samples[k];
    CMatrix vk = -sched.f_rate(trace->times[k]) * (u * log.chi * u.adjoint());
    vnorm.push_back(vk.norm());
    v.push_back(hermitian_part(vk));
  }
  const double h = tau / static_cast<double>(trace->u_samples.size() - 1);

  const CMatrix& q = log.phases.vectors;
  CVector eth(q.cols());
  for (Eigen::Index n = 0; n < eth.size(); ++n) eth(n) = std::polar(1.0, log.phases.phases(n));
  const CMatrix u_total = u0f * q * eth.asDiagonal() * q.adjoint();
  const CMatrix rho_f = u_total * rho_i.matrix() * u_total.adjoint();

  DriveSynthesis out{log.chi,
                     log.phases.phases,
                     phases_phi,
                     total,
                     frame,
                     std::move(v),
                     simpson(vnorm, h) / tau,
                     log.phases.phases.norm() / tau,
                     DensityMatrix(hermitian_part(rho_f)),
                     passive_state(rho_i, h_f),
                     log.phases.near_branch_cut,
                     std::move(trace)};
  return out;
}

// ---------------------------------------------------------------- phase search

PhaseOptimum optimize_phases_given_u0(const DensityMatrix& rho_i, const HamiltonianOp& h_f,
                                      const CMatrix& u0_final, double tau,
                                      const PhaseSearch& search) {
  require_same_dim(rho_i, h_f);
  if (!(tau > 0.0)) throw Error(ErrorKind::ParamOutOfRange, "tau must be positive");
  const Eigen::Index d = rho_i.dim();
  const CMatrix a = overlap_matrix(rho_i, h_f, u0_final);
  const RVector ref = reference_from_overlaps(a);
  const auto cost = [&](const RVector& phi) { return phase_norm(with_phases(a, ref + phi)) / tau; };

  PhaseOptimum out;
  switch (search.mode) {
    case PhaseMode::analytic2: {
      if (d != 2) throw Error(ErrorKind::DimMismatch, "analytic2 phase choice needs d = 2");
      // Zero offsets are optimal here: U0^dag R has equal real diagonals a and
      // unit determinant, so theta = +-arccos(a) and |tr| <= 2a for any phases.
      out.phases = RVector::Zero(2);
      out.w = cost(out.phases);
      return out;
    }
    case PhaseMode::grid: {
      if (d > 3) {
        throw Error(ErrorKind::DimTooLarge, "grid phase search supports d <= 3");
      }
      const int res = search.grid_resolution;
      if (res < 1) throw Error(ErrorKind::ParamOutOfRange, "grid resolution must be positive");
      std::vector<int> idx(static_cast<std::size_t>(d), 0);
      RVector phi(d);
      out.w = std::numeric_limits<double>::infinity();
      while (true) {
        for (Eigen::Index n = 0; n < d; ++n) {
          phi(n) = -pi + 2.0 * pi * idx[static_cast<std::size_t>(n)] / res;
        }
        const double c = cost(phi);
        if (c < out.w) {
          out.w = c;
          out.phases = phi;
        }
        std::size_t k = 0;
        while (k < idx.size() && ++idx[k] == res) idx[k++] = 0;
        if (k == idx.size()) break;
      }
      return out;
    }
    case PhaseMode::monte_carlo: {
      if (search.samples < 2) {
        throw Error(ErrorKind::ParamOutOfRange, "Monte Carlo needs at least 2 samples");
      }
      Rng rng(search.seed);
      RVector phi(d);
      double mean = 0.0;
      double m2 = 0.0;
      for (std::int64_t s = 0; s < search.samples; ++s) {
        for (Eigen::Index n = 0; n < d; ++n) phi(n) = -pi + 2.0 * pi * uniform01(rng);
        const double c = cost(phi);
        const double delta = c - mean;
        mean += delta / static_cast<double>(s + 1);
        m2 += delta * (c - mean);
      }
      const double n = static_cast<double>(search.samples);
      out.w = mean;
      out.stderr_ = std::sqrt(m2 / (n - 1.0) / n);
      return out;
    }
  }
  return out;
}

PhaseOptimum optimize_phases(const DensityMatrix& rho_i, const HamiltonianOp& h_i,
                             const HamiltonianOp& h_f, const Schedule& sched,
                             const PhaseSearch& search) {
  require_same_dim(rho_i, h_i);
  const PropagatorTrace trace = propagate_u0(h_i, h_f, sched);
  return optimize_phases_given_u0(rho_i, h_f, trace.u_samples.back(), sched.tau(), search);
}

// ---------------------------------------------------------------- verification

VerificationResult verify_drive(const DriveSynthesis& synth, const DensityMatrix& rho_i,
                                const HamiltonianOp& h_i, const HamiltonianOp& h_f,
                                const Schedule& sched, bool strict) {
  require_same_dim(rho_i, h_i);
  require_same_dim(rho_i, h_f);
  if (!synth.trace) throw Error(ErrorKind::InvalidInput, "synthesis carries no trace");
  const PropagatorTrace& tr = *synth.trace;
  const std::size_t n = tr.u_samples.size() - 1;
  const Eigen::Index d = rho_i.dim();
  const CMatrix& chi = synth.chi;

  const auto x_at = [&](const CMatrix& u0) { return hermitian_part(u0 * chi * u0.adjoint()); };
  const auto work_density = [&](double t, const CMatrix& u0, const CMatrix& u) {
    const CMatrix x = x_at(u0);
    const CMatrix h0 = sched.h0(t, h_i, h_f);
    const CMatrix dh = sched.h0_rate(t, h_i, h_f) - sched.f_accel(t) * x +
                       cplx(0.0, sched.f_rate(t)) * (h0 * x - x * h0);
    return (u * rho_i.matrix() * u.adjoint() * dh).trace().real();
  };

  CMatrix u = CMatrix::Identity(d, d);
  std::vector<double> power;
  power.reserve(n + 1);
  power.push_back(work_density(tr.times[0], tr.u_samples[0], u));
  for (std::size_t k = 0; k < n; ++k) {
    const double t = tr.times[k];
    const double dt = tr.times[k + 1] - t;
    const double tm = t + 0.5 * dt;
    const CMatrix u0_mid =
        detail::expm_hermitian(hermitian_part(sched.h0(t + 0.25 * dt, h_i, h_f)), 0.5 * dt) *
        tr.u_samples[k];
    const CMatrix h = hermitian_part(sched.h0(tm, h_i, h_f) - sched.f_rate(tm) * x_at(u0_mid));
    u = detail::expm_hermitian(h, dt) * u;
    if ((k + 1) % kReunitarizeEvery == 0) u = reunitarize(u);
    power.push_back(work_density(tr.times[k + 1], tr.u_samples[k + 1], u));
  }
  const double h = sched.tau() / static_cast<double>(n);
  const double work = simpson(power, h);

  const DensityMatrix rho_f(hermitian_part(u * rho_i.matrix() * u.adjoint()));
  const double e_i = energy(rho_i, h_i);
  const double e_f = energy(rho_f, h_f);
  const double e_target = passive_energy(rho_i.spectrum().values, h_f.energies());
  const double scale = energy_scale(h_f);

  VerificationResult res{};
  res.state_distance = trace_distance(rho_f, synth.target_passive);
  res.final_energy_residual = std::abs(e_f - e_target);
  res.work_residual = std::abs(work - (e_f - e_i));
  res.endpoint_residual =
      std::max(max_entry(sched.h0(sched.t_i(), h_i, h_f) + synth.v_samples.front() - h_i.matrix()),
               max_entry(sched.h0(sched.t_f(), h_i, h_f) + synth.v_samples.back() - h_f.matrix()));
  res.passed = res.state_distance <= 1e-6 && res.final_energy_residual <= 1e-8 * scale &&
               res.work_residual <= 1e-6 * scale && res.endpoint_residual <= 1e-12;
  if (strict && !res.passed) {
    throw Error(ErrorKind::VerificationFailed,
                "state distance " + std::to_string(res.state_distance) + ", energy residual " +
                    std::to_string(res.final_energy_residual) + ", work residual " +
                    std::to_string(res.work_residual) + ", endpoint residual " +
                    std::to_string(res.endpoint_residual));
  }
  return res;
}

// ---------------------------------------------------------------- counterdiabatic

CounterdiabaticCost counterdiabatic_cost(const Schedule& sched) {
  const HamiltonianOp h_i(sched.rotating_h(sched.t_i()));
  const HamiltonianOp h_f(sched.rotating_h(sched.t_f()));
  return counterdiabatic_cost(h_i, h_f, sched);
}

CounterdiabaticCost counterdiabatic_cost(const HamiltonianOp& h_i, const HamiltonianOp& h_f,
                                         const Schedule& sched) {
  sched.check_endpoints(h_i, h_f);
  const int n = sched.n_steps();
  if (n < 4) throw Error(ErrorKind::InvalidSchedule, "need at least 4 steps for the stencil");
  const double h = sched.tau() / n;
  const Eigen::Index d = h_i.dim();

  std::vector<CMatrix> e(static_cast<std::size_t>(n) + 1);
  std::vector<double> times(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) {
    const double t = k == n ? sched.t_f() : sched.t_i() + k * h;
    times[static_cast<std::size_t>(k)] = t;
    const HermEig eig = hermitian_eig(sched.h0(t, h_i, h_f));
    const double gap_tol = 1e-10 * std::max(1.0, eig.values.cwiseAbs().maxCoeff());
    for (Eigen::Index j = 0; j + 1 < d; ++j) {
      if (eig.values(j + 1) - eig.values(j) <= gap_tol) {
        throw Error(ErrorKind::GaugeFailure,
                    "degenerate instantaneous spectrum at t = " + std::to_string(t));
      }
    }
    CMatrix v = eig.vectors;
    if (k > 0) {
      const CMatrix& prev = e[static_cast<std::size_t>(k) - 1];
      for (Eigen::Index j = 0; j < d; ++j) {
        const cplx ov = prev.col(j).dot(v.col(j));
        if (std::abs(ov) < 0.5) {
          throw Error(ErrorKind::GaugeFailure,
                      "eigenvector overlap " + std::to_string(std::abs(ov)) + " at t = " +
                          std::to_string(t) + "; refine the grid");
        }
        v.col(j) *= std::conj(ov) / std::abs(ov);
      }
    }
    e[static_cast<std::size_t>(k)] = std::move(v);
  }

  // Fourth-order first derivative, one-sided near the ends.
  const auto deriv = [&](int k) -> CMatrix {
    const auto at = [&](int j) -> const CMatrix& { return e[static_cast<std::size_t>(j)]; };
    if (k >= 2 && k <= n - 2) {
      return (at(k - 2) - 8.0 * at(k - 1) + 8.0 * at(k + 1) - at(k + 2)) / (12.0 * h);
    }
    if (k == 0) {
      return (-25.0 * at(0) + 48.0 * at(1) - 36.0 * at(2) + 16.0 * at(3) - 3.0 * at(4)) /
             (12.0 * h);
    }
    if (k == 1) {
      return (-3.0 * at(0) - 10.0 * at(1) + 18.0 * at(2) - 6.0 * at(3) + at(4)) / (12.0 * h);
    }
    if (k == n) {
      return (25.0 * at(n) - 48.0 * at(n - 1) + 36.0 * at(n - 2) - 16.0 * at(n - 3) +
              3.0 * at(n - 4)) /
             (12.0 * h);
    }
    return (3.0 * at(n) + 10.0 * at(n - 1) - 18.0 * at(n - 2) + 6.0 * at(n - 3) - at(n - 4)) /
           (12.0 * h);
  };

  CounterdiabaticCost out{};
  out.times = times;
  out.norm_trace.resize(static_cast<std::size_t>(n) + 1);
  out.frobenius_trace.resize(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) {
    const CMatrix de = deriv(k);
    const CMatrix& ek = e[static_cast<std::size_t>(k)];
    double speed2 = 0.0;
    for (Eigen::Index j = 0; j < d; ++j) {
      speed2 += de.col(j).squaredNorm() - std::norm(ek.col(j).dot(de.col(j)));
    }
    speed2 = std::max(speed2, 0.0);
    out.frobenius_trace[static_cast<std::size_t>(k)] = std::sqrt(speed2);
    out.norm_trace[static_cast<std::size_t>(k)] = std::sqrt(2.0 * speed2);
  }
  out.w_sta = simpson(out.norm_trace, h) / sched.tau();
  out.w_sta_frobenius = simpson(out.frobenius_trace, h) / sched.tau();
  if (sched.is_rotating()) {
    out.closed_form = std::abs(sched.rotating_profile().mu) * sched.omega_bar(sched.t_f()) /
                      sched.tau();
    out.residual = std::abs(out.w_sta - out.closed_form);
  } else {
    out.closed_form = std::numeric_limits<double>::quiet_NaN();
    out.residual = std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

}  // namespace ergo
