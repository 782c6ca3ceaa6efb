#include <doctest.h>

#include <cmath>

#include "ergo/ergotropy.hpp"
#include "oracles.hpp"

using namespace ergo;
using doctest::Approx;

namespace {

bool throws_kind(ErrorKind kind, auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind() == kind;
  }
  return false;
}

RVector vec(std::initializer_list<double> xs) {
  RVector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index k = 0;
  for (double x : xs) v(k++) = x;
  return v;
}

CMatrix tls(double p, cplx c) {
  CMatrix m(2, 2);
  m << p, c, std::conj(c), 1.0 - p;
  return m;
}

// State with prescribed populations on a diagonal Hamiltonian and random
// coherences: D^{1/2} C D^{1/2} with C a random correlation matrix.
CMatrix with_coherences(const RVector& pops, oracle::Rng& rng, double strength = 1.0) {
  const int d = static_cast<int>(pops.size());
  const CMatrix g = oracle::ginibre(d, rng);
  CMatrix m = g * g.adjoint();
  CMatrix c(d, d);
  for (int r = 0; r < d; ++r)
    for (int k = 0; k < d; ++k) c(r, k) = m(r, k) / std::sqrt(m(r, r).real() * m(k, k).real());
  c = strength * c + (1.0 - strength) * CMatrix::Identity(d, d);
  const RVector s = pops.cwiseSqrt();
  CMatrix rho = s.cast<cplx>().asDiagonal() * c * s.cast<cplx>().asDiagonal();
  return 0.5 * (rho + rho.adjoint());
}

// Oracle for E_nc: initial energy minus the permutation minimum on h_f.
double enc_oracle(const CMatrix& rho, const CMatrix& hi, const CMatrix& hf) {
  return (rho * hi).trace().real() -
         oracle::passive_energy_bruteforce(oracle::herm_values(rho), oracle::herm_values(hf));
}

}  // namespace

TEST_CASE("non-cyclic ergotropy examples") {
  const HamiltonianOp h(0.5 * pauli_z());
  const DensityMatrix passive = DensityMatrix::diagonal(vec({0.3, 0.7}));
  CHECK(noncyclic_ergotropy(passive, h, h) == Approx(0.0));

  const DensityMatrix pure(tls(0.4, std::sqrt(0.24)));
  CHECK(noncyclic_ergotropy(pure, h, h) == Approx(0.4).epsilon(1e-12));

  const HamiltonianOp hi = HamiltonianOp::diagonal(vec({0.0, 0.9, 1.0}));
  const HamiltonianOp hf = HamiltonianOp::diagonal(vec({0.0, 0.5, 1.0}));
  const DensityMatrix th = thermal_state(hi, 1.0);
  const double p2 = th.matrix()(1, 1).real();
  CHECK(p2 == Approx(0.229).epsilon(0.001 / 0.229));
  CHECK(noncyclic_ergotropy(th, hi, hf) == Approx(0.4 * p2).epsilon(1e-12));
  CHECK(noncyclic_ergotropy(th, hi, hf) == Approx(0.0916).epsilon(0.0005 / 0.0916));
}

TEST_CASE("non-cyclic ergotropy against the permutation oracle") {
  oracle::Rng rng(100);
  for (int trial = 0; trial < 300; ++trial) {
    const int d = 2 + trial % 4;
    const CMatrix rho = oracle::random_density(d, rng);
    const CMatrix hi = oracle::random_hermitian(d, rng);
    const CMatrix hf = oracle::random_hermitian(d, rng);
    const DensityMatrix r(rho);
    const HamiltonianOp a(hi), b(hf);
    CHECK(noncyclic_ergotropy(r, a, b) == Approx(enc_oracle(rho, hi, hf)).epsilon(1e-10));
    CHECK(noncyclic_ergotropy(r, a, b) == Approx(energy(r, a) - energy(passive_state(r, b), b)).epsilon(1e-12));
  }
  CHECK(throws_kind(ErrorKind::DimMismatch, [] {
    noncyclic_ergotropy(DensityMatrix::diagonal(vec({1.0, 0.0})), HamiltonianOp(pauli_z()),
                        HamiltonianOp(CMatrix::Identity(3, 3)));
  }));
}

TEST_CASE("decomposition") {
  const HamiltonianOp h = HamiltonianOp::diagonal(vec({0.0, 1.0, 2.0}));
  const DensityMatrix asc = DensityMatrix::diagonal(vec({0.1, 0.3, 0.6}));
  const Decomposition d = decompose(asc, h, h);
  const double brute = 0.3 * 1.0 + 0.6 * 2.0 - oracle::passive_energy_bruteforce(vec({0.1, 0.3, 0.6}), vec({0.0, 1.0, 2.0}));
  CHECK(d.e_inc == Approx(brute));
  CHECK(d.e_inc > 0.0);
  CHECK(d.e_coh == Approx(0.0));

  oracle::Rng rng(101);
  const HamiltonianOp h3 = HamiltonianOp::diagonal(vec({0.0, 0.4, 1.0}));
  const DensityMatrix coh(with_coherences(thermal_populations(h3, 1.5), rng));
  CHECK(std::abs(decompose(coh, h3, h3).e_inc) < 1e-14);

  for (int trial = 0; trial < 1000; ++trial) {
    const int d2 = 2 + trial % 4;
    const DensityMatrix rho(oracle::random_density(d2, rng));
    const HamiltonianOp hi(oracle::random_hermitian(d2, rng));
    const HamiltonianOp hf(oracle::random_hermitian(d2, rng));
    const Decomposition dec = decompose(rho, hi, hf);
    const double scale = energy_scale(hf);
    CHECK(dec.e_inc + dec.e_pas + dec.e_coh ==
          Approx(enc_oracle(rho.matrix(), hi.matrix(), hf.matrix())).epsilon(1e-10 * scale));
    CHECK(dec.e_inc >= -1e-12);
    CHECK(dec.e_coh >= -1e-12);
  }
}

TEST_CASE("coherent entropy identity holds at two temperatures") {
  const HamiltonianOp h(0.5 * pauli_z());
  CVector plus(2);
  plus << 1.0, 1.0;
  const DensityMatrix p = DensityMatrix::pure(plus / std::sqrt(2.0));
  for (double beta : {0.3, 1.0, 2.0}) CHECK(coherent_entropy_identity_check(p, h, h, beta) <= 1e-9);
  CHECK(coherent_entropy_identity_check(DensityMatrix::diagonal(vec({0.3, 0.7})), h, h, 1.0) <= 1e-12);
  CHECK(throws_kind(ErrorKind::ParamOutOfRange, [&] { coherent_entropy_identity_check(p, h, h, 0.0); }));

  oracle::Rng rng(102);
  for (int trial = 0; trial < 500; ++trial) {
    const int d = 2 + trial % 4;
    const DensityMatrix rho(oracle::random_density(d, rng));
    const HamiltonianOp hi(oracle::random_hermitian(d, rng));
    const HamiltonianOp hf(oracle::random_hermitian(d, rng));
    const double scale = energy_scale(hf);
    CHECK(coherent_entropy_identity_check(rho, hi, hf, 1.0) <= 1e-9 * scale);
    CHECK(coherent_entropy_identity_check(rho, hi, hf, 2.0) <= 1e-9 * scale);
  }
}

TEST_CASE("delta_noncyclic") {
  const HamiltonianOp h(0.5 * pauli_z());
  const DensityMatrix th = thermal_state(h, 0.7);
  CHECK(std::abs(delta_noncyclic(th, h, h).delta) < 1e-10);
  const DeltaResult pure = delta_noncyclic(DensityMatrix(tls(0.4, std::sqrt(0.24))), h, h);
  CHECK(pure.delta == Approx(0.4).epsilon(1e-10));
  CHECK_FALSE(pure.negative_temperature);
  const DeltaResult inv = delta_noncyclic(DensityMatrix(tls(0.7, 0.1)), h, h);
  CHECK(inv.negative_temperature);
  CHECK(throws_kind(ErrorKind::EnergyOutOfRange,
                    [&] { delta_noncyclic(DensityMatrix::diagonal(vec({0.0, 1.0})), h, h); }));

  // independent evaluation: thermal populations at the returned beta, energies
  // matched, then permutation minima
  oracle::Rng rng(103);
  for (int trial = 0; trial < 300; ++trial) {
    const int d = 2 + trial % 4;
    const DensityMatrix rho(oracle::random_density(d, rng));
    const RVector ei = oracle::random_levels(d, rng);
    const RVector ef = oracle::random_levels(d, rng);
    const HamiltonianOp hi = HamiltonianOp::diagonal(ei);
    const HamiltonianOp hf = HamiltonianOp::diagonal(ef);
    const DeltaResult r = delta_noncyclic(rho, hi, hf);
    RVector pth(d);
    for (int n = 0; n < d; ++n) pth(n) = std::exp(-r.beta_same_energy * (ei(n) - ei(0)));
    pth /= pth.sum();
    CHECK(pth.dot(ei) == Approx(energy(rho, hi)).epsilon(1e-9));
    const double expect = oracle::passive_energy_bruteforce(pth, ef) -
                          oracle::passive_energy_bruteforce(oracle::herm_values(rho.matrix()), ef);
    CHECK(r.delta == Approx(expect).epsilon(1e-9));
  }
}

TEST_CASE("gain G") {
  const HamiltonianOp h(0.5 * pauli_z());
  CHECK(gain_g(DensityMatrix::diagonal(vec({0.2, 0.8})), h, h) == Approx(0.0));

  oracle::Rng rng(104);
  for (int trial = 0; trial < 300; ++trial) {
    const int d = 2 + trial % 4;
    const DensityMatrix rho(oracle::random_density(d, rng));
    const HamiltonianOp hi(oracle::random_hermitian(d, rng));
    const HamiltonianOp hf(oracle::random_hermitian(d, rng));
    // transported state: populations on H_i levels moved to the matching H_f levels
    const CMatrix& vi = hi.spectrum().vectors;
    const CMatrix& vf = hf.spectrum().vectors;
    const CMatrix u_ad = vf * vi.adjoint();
    const CMatrix moved = u_ad * rho.matrix() * u_ad.adjoint();
    const double cyclic = (moved * hf.matrix()).trace().real() -
                          oracle::passive_energy_bruteforce(oracle::herm_values(moved),
                                                            oracle::herm_values(hf.matrix()));
    const double g = gain_g(rho, hi, hf);
    CHECK(g >= -1e-12);
    // the transported state keeps its coherences, so G (populations only) is
    // bounded by its cyclic ergotropy and equals it when rho commutes with H_i
    CHECK(g <= cyclic + 1e-10);
    const DensityMatrix dph = dephase(rho, hi);
    const CMatrix moved_d = u_ad * dph.matrix() * u_ad.adjoint();
    const double cyc_d = (moved_d * hf.matrix()).trace().real() -
                         oracle::passive_energy_bruteforce(oracle::herm_values(rho.matrix()),
                                                           oracle::herm_values(hf.matrix()));
    CHECK(g == Approx(cyc_d).epsilon(1e-10));

    // rephasing coherences in the H_i basis leaves G unchanged
    CVector ph(d);
    for (int n = 0; n < d; ++n) ph(n) = std::polar(1.0, oracle::uniform(rng, -3.0, 3.0));
    const CMatrix dphase = vi * ph.asDiagonal() * vi.adjoint();
    const DensityMatrix rotated(dphase * rho.matrix() * dphase.adjoint());
    CHECK(gain_g(rotated, hi, hf) == Approx(g).epsilon(1e-10));
  }
}

TEST_CASE("coherence-only non-passivity gives delta = e_coh = G") {
  oracle::Rng rng(105);
  for (int trial = 0; trial < 300; ++trial) {
    const int d = 2 + trial % 4;
    const RVector ei = oracle::random_levels(d, rng);
    const RVector ef = oracle::random_levels(d, rng);
    const HamiltonianOp hi = HamiltonianOp::diagonal(ei);
    const HamiltonianOp hf = HamiltonianOp::diagonal(ef);
    const double beta = oracle::uniform(rng, 0.2, 3.0);
    const DensityMatrix rho(with_coherences(thermal_populations(hi, beta), rng, oracle::uniform(rng, 0.1, 1.0)));
    const DeltaResult dr = delta_noncyclic(rho, hi, hf);
    const Decomposition dec = decompose(rho, hi, hf);
    CHECK(dr.delta == Approx(dec.e_coh).epsilon(1e-10));
    CHECK(dr.delta == Approx(gain_g(rho, hi, hf)).epsilon(1e-10));
    CHECK(dr.delta >= -1e-12);
  }
}

TEST_CASE("majorization implies a non-negative delta") {
  oracle::Rng rng(106);
  int majorizing = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    const int d = 2 + trial % 4;
    const RVector ei = oracle::random_levels(d, rng);
    const HamiltonianOp hi = HamiltonianOp::diagonal(ei);
    const HamiltonianOp hf(oracle::random_hermitian(d, rng));
    // coherent thermal states always majorize; generic ones only sometimes
    const RVector pth = thermal_populations(hi, oracle::uniform(rng, 0.1, 3.0));
    const DensityMatrix rho(trial % 3 == 0 ? oracle::random_density(d, rng)
                                           : with_coherences(pth, rng, oracle::uniform(rng, 0.0, 1.0)));
    DeltaResult dr{};
    try {
      dr = delta_noncyclic(rho, hi, hf);
    } catch (const Error&) {
      continue;
    }
    if (dr.beta_same_energy <= 0.0) continue;
    const RVector same = thermal_populations(hi, dr.beta_same_energy);
    if (!majorizes(ProbVector(rho.spectrum().values), ProbVector(same))) continue;
    ++majorizing;
    CHECK(dr.delta >= -1e-12);
  }
  CHECK(majorizing > 100);
  CHECK(majorizing < 2000);
}

TEST_CASE("upper bound") {
  oracle::Rng rng(107);
  for (int trial = 0; trial < 300; ++trial) {
    const int d = 2 + trial % 2;
    const RVector ei = oracle::random_levels(d, rng);
    const HamiltonianOp hi = HamiltonianOp::diagonal(ei);
    const HamiltonianOp hf(oracle::random_hermitian(d, rng));
    const DensityMatrix rho(with_coherences(thermal_populations(hi, oracle::uniform(rng, 0.3, 3.0)), rng,
                                            oracle::uniform(rng, 0.0, 0.9)));
    const UpperBound ub = upper_bound_delta(rho, hi, hf);
    const double delta = delta_noncyclic(rho, hi, hf).delta;
    const double scale = energy_scale(hf);
    CHECK(ub.entropy_gap >= -1e-10);
    CHECK(ub.relative_entropy_term >= -1e-12);
    CHECK(delta <= ub.bound + 1e-10 * scale);
    CHECK(ub.crosscheck_residual <= 1e-9 * scale);
    // bound recomputed from the entropy side with oracle entropies
    const double s_rho = oracle::entropy_nats(oracle::herm_values(rho.matrix()));
    const double s_th = oracle::entropy_nats(thermal_populations(hi, delta_noncyclic(rho, hi, hf).beta_same_energy));
    CHECK(ub.entropy_gap == Approx(s_th - s_rho).epsilon(1e-9));
    if (d == 2) CHECK(ub.bound - delta <= 1e-10 * scale);
  }
  // thermal input: zero gap, bound >= 0 = delta
  const HamiltonianOp h3 = HamiltonianOp::diagonal(vec({0.0, 0.3, 1.0}));
  const HamiltonianOp h3f = HamiltonianOp::diagonal(vec({0.0, 0.8, 1.2}));
  const UpperBound t = upper_bound_delta(thermal_state(h3, 1.0), h3, h3f);
  CHECK(std::abs(t.entropy_gap) < 1e-10);
  CHECK(t.bound >= -1e-12);
}

TEST_CASE("upper bound needs a positive same-entropy temperature") {
  const HamiltonianOp h(0.5 * pauli_z());
  CHECK(throws_kind(ErrorKind::NegativeBeta,
                    [&] { upper_bound_delta(DensityMatrix(CMatrix::Identity(2, 2) / 2.0), h, h); }));
}

TEST_CASE("three-level counterexample") {
  const CounterexampleB c = counterexample_appendix_b(1.0, 0.9, 0.5);
  const double pth[] = {0.564, 0.229, 0.207};
  const double q[] = {0.565, 0.217, 0.218};
  for (int k = 0; k < 3; ++k) {
    CHECK(std::abs(c.p_th[static_cast<std::size_t>(k)] - pth[k]) <= 0.001);
    CHECK(std::abs(c.q[static_cast<std::size_t>(k)] - q[k]) <= 0.001);
  }
  CHECK(c.energy_residual <= 1e-12);
  CHECK(c.delta < 0.0);
  CHECK_FALSE(majorizes(c.q, c.p_th));
  CHECK(counterexample_appendix_b(1.0, 0.9, 0.95).delta > 0.0);
  for (double e2f : {0.1, 0.3, 0.5, 0.7, 0.85}) CHECK(counterexample_appendix_b(1.0, 0.9, e2f).delta < 0.0);
  CHECK(counterexample_appendix_b(1.0, 0.9, 0.87).delta < 0.0);
  CHECK(counterexample_appendix_b(1.0, 0.9, 0.89).delta > 0.0);
  CHECK(throws_kind(ErrorKind::ParamOutOfRange, [] { counterexample_appendix_b(-1.0, 0.9, 0.5); }));
  CHECK(throws_kind(ErrorKind::ParamOutOfRange, [] { counterexample_appendix_b(1.0, 1.2, 0.5); }));
  CHECK(throws_kind(ErrorKind::ParamOutOfRange, [] { counterexample_appendix_b(1.0, 0.9, 1.5); }));
}

TEST_CASE("report fields") {
  const HamiltonianOp h(0.5 * pauli_z());
  const ErgotropyReport th = make_report(thermal_state(h, 0.8), h, h);
  REQUIRE(th.delta_e_nc);
  CHECK(std::abs(*th.delta_e_nc) < 1e-10);
  CHECK(th.reported_gain_kind == "delta_e_nc");
  CHECK(th.majorization_holds);

  const ErgotropyReport pure = make_report(DensityMatrix(tls(0.4, std::sqrt(0.24))), h, h);
  CHECK(pure.e_nc == Approx(0.4));
  CHECK(pure.e_inc + pure.e_pas + pure.e_coh == Approx(pure.e_nc).epsilon(1e-12));
  REQUIRE(pure.upper_bound);
  CHECK(*pure.delta_e_nc <= *pure.upper_bound + 1e-10);

  const ErgotropyReport inv = make_report(DensityMatrix(tls(0.8, 0.1)), h, h);
  CHECK(inv.negative_temperature_flag);
  CHECK(inv.reported_gain_kind == "gain_g");
  CHECK(inv.reported_gain == Approx(inv.gain_g));
  CHECK_FALSE(inv.upper_bound);

  const ErgotropyReport edge = make_report(DensityMatrix::diagonal(vec({0.0, 1.0})), h, h);
  CHECK_FALSE(edge.delta_e_nc);
  CHECK(edge.reported_gain_kind == "gain_g");
}
