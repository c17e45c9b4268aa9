#include "ppt/io.hpp"

#include <cmath>
#include <sstream>

#include "ppt/errors.hpp"

#ifndef PPT_VERSION
#define PPT_VERSION "0.0.0"
#endif

namespace ppt {

namespace {

int int_field(const Json& j, const char* name) {
  if (!j.contains(name)) throw ParseError(std::string("missing field '") + name + "'");
  const Json& v = j.at(name);
  if (!v.is_number_integer() && !v.is_number_unsigned()) {
    throw ParseError(std::string("field '") + name + "' must be an integer");
  }
  return v.get<int>();
}

std::vector<double> flat_numbers(const Json& v, int n, const char* name) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  auto take = [&](const Json& x, std::size_t pos) {
    if (!x.is_number()) {
      std::ostringstream os;
      os << "field '" << name << "' entry " << pos << " is not a number";
      throw ParseError(os.str());
    }
    out.push_back(x.get<double>());
  };
  if (!v.is_array()) throw ParseError(std::string("field '") + name + "' must be an array");
  if (!v.empty() && v.front().is_array()) {
    if (v.size() != static_cast<std::size_t>(n)) {
      throw ParseError(std::string("field '") + name + "' must have dim rows");
    }
    for (const Json& row : v) {
      if (!row.is_array() || row.size() != static_cast<std::size_t>(n)) {
        throw ParseError(std::string("field '") + name + "' has a row of the wrong length");
      }
      for (const Json& x : row) take(x, out.size());
    }
  } else {
    if (v.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n)) {
      std::ostringstream os;
      os << "field '" << name << "' must hold dim*dim = " << n * n << " numbers, got " << v.size();
      throw ParseError(os.str());
    }
    for (const Json& x : v) take(x, out.size());
  }
  return out;
}

Json eigen_to_json(const Eigen::Matrix2cd& m) {
  Json re = Json::array();
  Json im = Json::array();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      re.push_back(m(i, j).real());
      im.push_back(m(i, j).imag());
    }
  return {{"dim", 2}, {"re", re}, {"im", im}};
}

Json complex_to_json(Complex z) {
  return {{"re", z.real()}, {"im", z.imag()}};
}

template <typename T>
Json optional_to_json(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

}  // namespace

std::string tool_version() {
  return PPT_VERSION;
}

Json parse_json_text(std::string_view text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(source + ": " + e.what());
  }
}

HermitianMatrix matrix_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("matrix JSON must be an object");
  const int n = int_field(j, "dim");
  if (n < 1) throw ParseError("field 'dim' must be >= 1");
  if (!j.contains("re")) throw ParseError("missing field 're'");
  const std::vector<double> re = flat_numbers(j.at("re"), n, "re");
  std::vector<double> im(re.size(), 0.0);
  if (j.contains("im")) im = flat_numbers(j.at("im"), n, "im");

  ComplexMatrix m(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      const auto idx = static_cast<std::size_t>(r * n + c);
      m(r, c) = Complex(re[idx], im[idx]);
    }
  if (!m.allFinite()) throw ParseError("matrix entries must be finite");
  return HermitianMatrix(m);
}

Json matrix_to_json(const HermitianMatrix& m) {
  const int n = m.dim();
  Json re = Json::array();
  Json im = Json::array();
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      re.push_back(m(r, c).real());
      im.push_back(m(r, c).imag());
    }
  return {{"dim", n}, {"re", std::move(re)}, {"im", std::move(im)}};
}

DensityMatrix density_from_json(const Json& j, const Tolerances& tol) {
  HermitianMatrix m = matrix_from_json(j);
  const int a = int_field(j, "dimA");
  const int b = int_field(j, "dimB");
  if (a < 1 || b < 1) throw ParseError("fields 'dimA' and 'dimB' must be >= 1");
  if (a * b != m.dim()) {
    std::ostringstream os;
    os << "dimA * dimB = " << a * b << " does not match dim = " << m.dim();
    throw ParseError(os.str());
  }
  return DensityMatrix(std::move(m), BipartiteShape(a, b), tol);
}

Json density_to_json(const DensityMatrix& rho) {
  Json j = matrix_to_json(rho.matrix());
  j["dimA"] = rho.shape().dim_a();
  j["dimB"] = rho.shape().dim_b();
  return j;
}

Json to_json(const NegativeSpectrumReport& r) {
  return {
      {"tool_version", tool_version()},
      {"shape", {{"dimA", r.shape.dim_a()}, {"dimB", r.shape.dim_b()}}},
      {"eigenvalues", r.eigenvalues},
      {"negative_count", r.negative_count},
      {"negative_count_at_tol_div_10", r.negative_count_tight},
      {"negative_count_at_tol_mul_10", r.negative_count_loose},
      {"most_negative", r.most_negative},
      {"negativity", r.negativity},
      {"theorem1_bound", r.theorem1_bound},
      {"conjecture_bound", optional_to_json(r.conjecture_bound)},
      {"tolerance_used", r.tolerance_used},
  };
}

Json to_json(const CanonicalForm2Q& f) {
  return {
      {"a11", f.a11},
      {"a22", f.a22},
      {"a33", f.a33},
      {"a44", f.a44},
      {"A", f.A},
      {"B", f.B},
      {"alpha", complex_to_json(f.alpha)},
      {"beta", complex_to_json(f.beta)},
      {"u_local", eigen_to_json(f.u_local)},
      {"v_local", eigen_to_json(f.v_local)},
      {"residual", f.residual},
      {"transformed", matrix_to_json(f.transformed)},
  };
}

Json to_json(const Theorem2Report& r) {
  return {
      {"tool_version", tool_version()},
      {"applicable", r.applicable},
      {"det_gap_1_closed", r.det_gap_1_closed},
      {"det_gap_1_direct", r.det_gap_1_direct},
      {"det_gap_2_closed", r.det_gap_2_closed},
      {"det_gap_2_direct", r.det_gap_2_direct},
      {"det_gap_2_a11_variant", r.det_gap_2_a11_variant},
      {"block1_pt_min_eig", r.block1_pt_min_eig},
      {"block2_pt_min_eig", r.block2_pt_min_eig},
      {"some_block_psd", r.some_block_psd},
      {"negative_count", r.negative_count},
  };
}

Json to_json(const Theorem3Report& r) {
  Json j = {
      {"tool_version", tool_version()},
      {"applicable", r.applicable},
      {"near_degenerate", r.near_degenerate},
      {"negative_count", r.negative_count},
      {"E", r.e},
      {"abs_pt_pt_min_eig", r.abs_pt_pt_min_eig},
      {"negativity", r.negativity},
      {"sqrt_abs_E", r.sqrt_abs_e},
  };
  if (!r.details) return j;
  const Theorem3Details& d = *r.details;
  j["schmidt_alpha"] = d.schmidt_alpha;
  j["schmidt_beta"] = d.schmidt_beta;
  j["k"] = optional_to_json(d.k);
  j["mu"] = d.mu;
  j["nu"] = d.nu;
  j["A11"] = d.a11;
  j["E1"] = optional_to_json(d.e1);
  j["E2"] = optional_to_json(d.e2);
  j["E_within_bounds"] = d.e_within_bounds;
  j["S"] = d.s_matrix ? matrix_to_json(*d.s_matrix) : Json(nullptr);
  j["S_min_eig"] = d.s_matrix ? Json(d.s_min_eig) : Json(nullptr);
  j["S_psd"] = d.s_psd;
  j["beta_zero"] = d.beta_zero;
  j["ratio_in_window"] = d.ratio_in_window;
  j["constraints"] = {{"a11_ge_mu", d.a11_ge_mu},
                      {"a11_ge_nu2_over_mu", d.a11_ge_nu2_over_mu},
                      {"trace_compatible", d.trace_compatible},
                      {"det_s_nonneg", d.det_s_nonneg}};
  j["annihilation_residual"] = d.annihilation_residual;
  j["schur_residual"] = d.schur_residual;
  j["u_local"] = eigen_to_json(d.u_local);
  j["v_local"] = eigen_to_json(d.v_local);
  if (d.beta_zero_dets) {
    j["beta_zero_determinants"] = {{"det_gap", d.beta_zero_dets->det_gap}, {"predicted", d.beta_zero_dets->predicted}};
  }
  return j;
}

}  // namespace ppt
