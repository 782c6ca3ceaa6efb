#include "ergo/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace ergo {

namespace {

json optional_json(const std::optional<double>& x) {
  return x ? json(*x) : json(nullptr);
}

json vector_json(const RVector& v) {
  json out = json::array();
  for (double x : v) out.push_back(x);
  return out;
}

std::vector<double> number_array(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array()) {
    throw Error(ErrorKind::InvalidInput, std::string("matrix field '") + key + "' must be an array");
  }
  std::vector<double> out;
  out.reserve(j.at(key).size());
  for (const auto& x : j.at(key)) {
    if (!x.is_number()) {
      throw Error(ErrorKind::InvalidInput, std::string("matrix field '") + key + "' holds a non-number");
    }
    out.push_back(x.get<double>());
  }
  return out;
}

}  // namespace

CMatrix matrix_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorKind::InvalidInput, "matrix must be a JSON object");
  if (!j.contains("dim") || !j.at("dim").is_number_integer() || j.at("dim").get<long long>() <= 0) {
    throw Error(ErrorKind::InvalidInput, "matrix 'dim' must be a positive integer");
  }
  const auto d = static_cast<Eigen::Index>(j.at("dim").get<long long>());
  const auto re = number_array(j, "re");
  const auto im = j.contains("im") ? number_array(j, "im") : std::vector<double>(re.size(), 0.0);
  const auto n = static_cast<std::size_t>(d * d);
  if (re.size() != n || im.size() != n) {
    throw Error(ErrorKind::DimMismatch, "matrix arrays must hold dim^2 = " + std::to_string(n) + " entries");
  }
  CMatrix m(d, d);
  for (Eigen::Index r = 0; r < d; ++r) {
    for (Eigen::Index c = 0; c < d; ++c) {
      const auto k = static_cast<std::size_t>(r * d + c);
      m(r, c) = cplx(re[k], im[k]);
    }
  }
  return m;
}

json matrix_to_json(const CMatrix& m) {
  json re = json::array();
  json im = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      re.push_back(m(r, c).real());
      im.push_back(m(r, c).imag());
    }
  }
  return {{"dim", m.rows()}, {"re", re}, {"im", im}};
}

json to_json(const ErgotropyReport& r) {
  return {
      {"e_nc", r.e_nc},
      {"e_inc", r.e_inc},
      {"e_pas", r.e_pas},
      {"e_coh", r.e_coh},
      {"delta_e_nc", optional_json(r.delta_e_nc)},
      {"gain_g", r.gain_g},
      {"upper_bound", optional_json(r.upper_bound)},
      {"majorization_holds", r.majorization_holds},
      {"beta_same_energy", optional_json(r.beta_same_energy)},
      {"negative_temperature_flag", r.negative_temperature_flag},
      {"reported_gain_kind", r.reported_gain_kind},
      {"reported_gain", r.reported_gain},
  };
}

json to_json(const CounterexampleB& c) {
  return {
      {"q", c.q.values()},
      {"p_th", c.p_th.values()},
      {"alpha", c.alpha},
      {"delta", c.delta},
      {"energy_residual", c.energy_residual},
  };
}

json to_json(const VerificationResult& v) {
  return {
      {"state_distance", v.state_distance},
      {"final_energy_residual", v.final_energy_residual},
      {"work_residual", v.work_residual},
      {"endpoint_residual", v.endpoint_residual},
      {"passed", v.passed},
  };
}

json to_json(const DriveSynthesis& s) {
  json out = {
      {"chi", matrix_to_json(s.chi)},
      {"thetas", vector_json(s.thetas)},
      {"phases_phi", vector_json(s.phases_phi)},
      {"phases_total", vector_json(s.phases_total)},
      {"phase_frame", s.frame == PhaseFrame::aligned ? "aligned" : "raw"},
      {"w", s.w},
      {"w_min", s.w_min},
      {"final_state", matrix_to_json(s.final_state.matrix())},
      {"target_passive", matrix_to_json(s.target_passive.matrix())},
      {"branch_warning", s.branch_warning},
  };
  if (s.trace) {
    out["n_steps"] = s.trace->times.size() - 1;
    out["unitarity_drift"] = s.trace->unitarity_drift;
    out["doubling_change"] = s.trace->doubling_change;
  }
  return out;
}

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_v_csv(std::ostream& os, const DriveSynthesis& s) {
  const Eigen::Index d = s.chi.rows();
  os << "t";
  for (Eigen::Index r = 0; r < d; ++r) {
    for (Eigen::Index c = 0; c < d; ++c) os << ",re_" << r << c << ",im_" << r << c;
  }
  os << '\n';
  const std::vector<double>* times = s.trace ? &s.trace->times : nullptr;
  for (std::size_t k = 0; k < s.v_samples.size(); ++k) {
    os << (times ? format_real((*times)[k]) : std::to_string(k));
    const CMatrix& v = s.v_samples[k];
    for (Eigen::Index r = 0; r < d; ++r) {
      for (Eigen::Index c = 0; c < d; ++c) {
        os << ',' << format_real(v(r, c).real()) << ',' << format_real(v(r, c).imag());
      }
    }
    os << '\n';
  }
}

json error_json(const Error& e) {
  return {{"error", std::string(to_string(e.kind()))}, {"message", e.what()}};
}

}  // namespace ergo
