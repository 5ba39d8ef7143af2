#include "srpt/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace srpt {
namespace {

using nlohmann::json;

bool finite_or_unset(double x) { return std::isfinite(x); }

bool rows_equal(const std::vector<std::vector<double>>& m) {
  for (std::size_t i = 1; i < m.size(); ++i)
    if (m[i] != m[0]) return false;
  return true;
}

std::vector<std::vector<double>> column(const std::vector<double>& v) {
  std::vector<std::vector<double>> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = {v[i]};
  return out;
}

}  // namespace

int ModelSpec::arity() const {
  switch (family) {
    case Family::DQR:
    case Family::Biased:
    case Family::TwoQubitXYZ:
      return 1;
    case Family::AnisoInhomogeneous:
    case Family::TavisCummings:
      return 2;
    case Family::TwoPhoton:
      return two_photon_reduced ? 1 : 2;
    case Family::Multimode:
      return params.n_modes();
  }
  return 0;
}

ModelSpec reduce(const PhysicalParams& p, Family family, MeanRule rule) {
  const int N = p.n_spins();
  const int M = p.n_modes();
  if (N < 1 || M < 1) throw std::invalid_argument("reduce: need at least one spin and one mode");
  if (static_cast<int>(p.g_i_nu.size()) != N)
    throw std::invalid_argument("reduce: g_i_nu must have one row per spin");
  for (const auto& row : p.g_i_nu)
    if (static_cast<int>(row.size()) != M)
      throw std::invalid_argument("reduce: g_i_nu rows must have one entry per mode");
  for (double w : p.omega)
    if (!(w > 0.0) || !std::isfinite(w))
      throw std::invalid_argument("reduce: mode frequencies must be positive and finite");

  double Delta_ref = 0.0;
  if (rule == MeanRule::ArithmeticAbs) {
    for (double d : p.Delta_i) Delta_ref += std::abs(d);
    Delta_ref /= N;
  } else {
    for (double d : p.Delta_i) Delta_ref += d * d;
    Delta_ref = std::sqrt(Delta_ref / N);
  }
  if (!(Delta_ref > 0.0)) throw std::invalid_argument("reduce: reference splitting is zero");

  ModelSpec spec;
  spec.family = family;
  ReducedParams& r = spec.params;
  r.Delta_ref = Delta_ref;
  r.mean_rule = rule;
  r.delta_i.resize(N);
  for (int i = 0; i < N; ++i) r.delta_i[i] = p.Delta_i[i] / Delta_ref;
  r.gamma_i_nu.assign(N, std::vector<double>(M));
  for (int i = 0; i < N; ++i)
    for (int nu = 0; nu < M; ++nu)
      r.gamma_i_nu[i][nu] = p.g_i_nu[i][nu] / std::sqrt(Delta_ref * p.omega[nu]);
  r.lambda_i = p.lambda_i;
  r.epsilon_bias_i.resize(p.e_i.size());
  for (std::size_t i = 0; i < p.e_i.size(); ++i) r.epsilon_bias_i[i] = p.e_i[i] / Delta_ref;
  r.gamma_prime = p.g_prime / p.omega[0];
  for (int a = 0; a < 3; ++a) r.epsilon_alpha[a] = p.J_alpha[a] / Delta_ref;
  r.beta_Delta = std::isinf(p.beta) ? kInf : p.beta * Delta_ref;
  // Macroscopicity relative to the first mode; the exchange-coupled pair
  // counts the reference splitting once.
  const double c = (family == Family::TwoQubitXYZ ? 1.0 : static_cast<double>(N)) *
                   Delta_ref / p.omega[0];
  r.C = c;
  return spec;
}

PhysicalParams unreduce(const ReducedParams& r, Family family, double omega) {
  if (!r.C || !(*r.C > 0.0) || !std::isfinite(*r.C))
    throw std::invalid_argument("unreduce: reduced params carry no macroscopicity C");
  if (!(omega > 0.0) || !std::isfinite(omega))
    throw std::invalid_argument("unreduce: omega must be positive and finite");
  const int N = r.n_spins();
  const int M = r.n_modes();
  const double n_eff = family == Family::TwoQubitXYZ ? 1.0 : static_cast<double>(N);
  const double Delta_ref = *r.C * omega / n_eff;

  PhysicalParams p;
  p.omega.assign(M, omega);
  p.Delta_i.resize(N);
  for (int i = 0; i < N; ++i) p.Delta_i[i] = r.delta_i[i] * Delta_ref;
  p.g_i_nu.assign(N, std::vector<double>(M));
  const double g_scale = std::sqrt(Delta_ref * omega);
  for (int i = 0; i < N; ++i)
    for (int nu = 0; nu < M; ++nu) p.g_i_nu[i][nu] = r.gamma_i_nu[i][nu] * g_scale;
  p.lambda_i = r.lambda_i;
  p.e_i.resize(r.epsilon_bias_i.size());
  for (std::size_t i = 0; i < r.epsilon_bias_i.size(); ++i)
    p.e_i[i] = r.epsilon_bias_i[i] * Delta_ref;
  p.g_prime = r.gamma_prime * omega;
  for (int a = 0; a < 3; ++a) p.J_alpha[a] = r.epsilon_alpha[a] * Delta_ref;
  p.beta = r.beta_Delta == kInf ? kInf : r.beta_Delta / Delta_ref;
  return p;
}

std::vector<Violation> validate(const ModelSpec& spec) {
  std::vector<Violation> v;
  const ReducedParams& r = spec.params;
  const int N = r.n_spins();
  const int M = r.n_modes();
  auto add = [&v](const char* code, std::string msg) { v.push_back({code, std::move(msg)}); };

  if (N < 1 || static_cast<int>(r.gamma_i_nu.size()) != N || M < 1) {
    add("FamilyShapeMismatch", "need one gamma row per spin and at least one mode");
    return v;
  }
  for (const auto& row : r.gamma_i_nu)
    if (static_cast<int>(row.size()) != M) {
      add("FamilyShapeMismatch", "ragged gamma_i_nu");
      return v;
    }

  if (!(r.Delta_ref > 0.0) || !std::isfinite(r.Delta_ref))
    add("NonPositiveScale", "Delta_ref must be positive and finite");
  if (std::isnan(r.beta_Delta) || r.beta_Delta <= 0.0)
    add("NonPositiveScale", "beta_Delta must be positive (kInf = zero temperature)");
  if (r.C && !(*r.C > 0.0))
    add("NonPositiveScale", "macroscopicity C must be positive when set");

  bool all_finite = true;
  for (const auto& row : r.gamma_i_nu)
    for (double g : row) all_finite = all_finite && finite_or_unset(g);
  for (double d : r.delta_i) all_finite = all_finite && finite_or_unset(d);
  for (double l : r.lambda_i) all_finite = all_finite && finite_or_unset(l);
  for (double e : r.epsilon_bias_i) all_finite = all_finite && finite_or_unset(e);
  for (double e : r.epsilon_alpha) all_finite = all_finite && finite_or_unset(e);
  all_finite = all_finite && finite_or_unset(r.gamma_prime);
  if (!all_finite) add("NonFiniteParameter", "couplings must be finite");

  if (!r.lambda_i.empty() && static_cast<int>(r.lambda_i.size()) != N)
    add("FamilyShapeMismatch", "lambda_i must be empty or one entry per spin");
  if (!r.epsilon_bias_i.empty() && static_cast<int>(r.epsilon_bias_i.size()) != N)
    add("FamilyShapeMismatch", "epsilon_bias_i must be empty or one entry per spin");

  const bool single_mode = (M == 1);
  auto require_single_mode = [&](const char* fam) {
    if (!single_mode) add("FamilyShapeMismatch", std::string(fam) + " is a single-mode family");
  };
  auto forbid_bias = [&](const char* fam) {
    for (double e : r.epsilon_bias_i)
      if (e != 0.0) {
        add("ForeignParameter", std::string(fam) + " does not take a static bias");
        break;
      }
  };
  auto forbid_exchange = [&](const char* fam) {
    if (r.epsilon_alpha != std::array<double, 3>{0.0, 0.0, 0.0})
      add("ForeignParameter", std::string(fam) + " does not take a two-spin exchange");
  };
  auto forbid_two_photon = [&](const char* fam) {
    if (r.gamma_prime != 0.0)
      add("ForeignParameter", std::string(fam) + " does not take a two-photon coupling");
  };

  switch (spec.family) {
    case Family::DQR: {
      require_single_mode("DQR");
      if (!rows_equal(r.gamma_i_nu))
        add("HomogeneityViolation", "DQR requires identical couplings");
      for (double d : r.delta_i)
        if (std::abs(std::abs(d) - std::abs(r.delta_i[0])) > 1e-12 * std::abs(r.delta_i[0]))
          add("HomogeneityViolation", "DQR requires identical splittings");
      for (double l : r.lambda_i)
        if (l != 1.0) add("ForeignParameter", "DQR is the lambda = 1 line");
      forbid_bias("DQR");
      forbid_exchange("DQR");
      forbid_two_photon("DQR");
      break;
    }
    case Family::AnisoInhomogeneous:
    case Family::TavisCummings: {
      const char* fam =
          spec.family == Family::TavisCummings ? "TavisCummings" : "AnisoInhomogeneous";
      require_single_mode(fam);
      if (spec.family == Family::TavisCummings)
        for (double l : r.lambda_i)
          if (l != 0.0) add("FamilyShapeMismatch", "TavisCummings requires lambda = 0");
      forbid_bias(fam);
      forbid_exchange(fam);
      forbid_two_photon(fam);
      break;
    }
    case Family::Biased: {
      require_single_mode("Biased");
      for (double l : r.lambda_i)
        if (l != 1.0) add("ForeignParameter", "Biased is the lambda = 1 line");
      forbid_exchange("Biased");
      forbid_two_photon("Biased");
      break;
    }
    case Family::TwoPhoton: {
      require_single_mode("TwoPhoton");
      if (!rows_equal(r.gamma_i_nu))
        add("HomogeneityViolation", "TwoPhoton requires identical couplings");
      if (!(std::abs(r.gamma_prime) < 0.5))
        add("StabilityViolation", "TwoPhoton requires |gamma_prime| < 1/2");
      for (double l : r.lambda_i)
        if (l != 1.0) add("ForeignParameter", "TwoPhoton is the lambda = 1 line");
      forbid_bias("TwoPhoton");
      forbid_exchange("TwoPhoton");
      break;
    }
    case Family::TwoQubitXYZ: {
      require_single_mode("TwoQubitXYZ");
      if (N != 2) add("FamilyShapeMismatch", "TwoQubitXYZ requires exactly two spins");
      for (double l : r.lambda_i)
        if (l != 1.0) add("ForeignParameter", "TwoQubitXYZ is the lambda = 1 line");
      forbid_bias("TwoQubitXYZ");
      forbid_two_photon("TwoQubitXYZ");
      break;
    }
    case Family::Multimode: {
      if (!rows_equal(r.gamma_i_nu))
        add("HomogeneityViolation", "Multimode requires spin-independent couplings");
      for (double l : r.lambda_i)
        if (l != 1.0) add("ForeignParameter", "Multimode is the lambda = 1 line");
      forbid_bias("Multimode");
      forbid_exchange("Multimode");
      forbid_two_photon("Multimode");
      break;
    }
  }
  if (spec.two_photon_reduced && spec.family != Family::TwoPhoton)
    add("FamilyShapeMismatch", "two_photon_reduced applies to TwoPhoton only");
  return v;
}

void require_valid(const ModelSpec& spec) {
  const auto v = validate(spec);
  if (v.empty()) return;
  std::ostringstream oss;
  oss << "invalid model spec:";
  for (const auto& x : v) oss << ' ' << x.code;
  throw std::invalid_argument(oss.str());
}

std::string family_name(Family f) {
  switch (f) {
    case Family::DQR: return "DQR";
    case Family::AnisoInhomogeneous: return "AnisoInhomogeneous";
    case Family::TavisCummings: return "TavisCummings";
    case Family::Biased: return "Biased";
    case Family::TwoPhoton: return "TwoPhoton";
    case Family::TwoQubitXYZ: return "TwoQubitXYZ";
    case Family::Multimode: return "Multimode";
  }
  throw std::invalid_argument("family_name: unknown family");
}

Family family_from_name(const std::string& name) {
  for (Family f : {Family::DQR, Family::AnisoInhomogeneous, Family::TavisCummings,
                   Family::Biased, Family::TwoPhoton, Family::TwoQubitXYZ, Family::Multimode})
    if (family_name(f) == name) return f;
  throw std::invalid_argument("family_from_name: unknown family '" + name + "'");
}

std::string mean_rule_name(MeanRule r) {
  return r == MeanRule::ArithmeticAbs ? "arithmetic_abs" : "rms";
}

namespace {

json beta_to_json(double bd) {
  if (std::isinf(bd)) return json("inf");
  return json(bd);
}

double beta_from_json(const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "inf") return kInf;
    throw std::invalid_argument("model_from_json: beta_Delta string must be \"inf\"");
  }
  return j.get<double>();
}

}  // namespace

std::string to_json(const ModelSpec& spec, int indent) {
  const ReducedParams& r = spec.params;
  json jp;
  jp["gamma_i_nu"] = r.gamma_i_nu;
  jp["delta_i"] = r.delta_i;
  jp["lambda_i"] = r.lambda_i;
  jp["epsilon_bias_i"] = r.epsilon_bias_i;
  jp["gamma_prime"] = r.gamma_prime;
  jp["epsilon_alpha"] = r.epsilon_alpha;
  jp["beta_Delta"] = beta_to_json(r.beta_Delta);
  jp["C"] = r.C ? json(*r.C) : json(nullptr);
  jp["Delta_ref"] = r.Delta_ref;
  jp["mean_rule"] = mean_rule_name(r.mean_rule);
  json j;
  j["family"] = family_name(spec.family);
  j["params"] = jp;
  j["two_photon_reduced"] = spec.two_photon_reduced;
  return indent >= 0 ? j.dump(indent) : j.dump();
}

ModelSpec model_from_json(const std::string& text) {
  const json j = json::parse(text);
  ModelSpec spec;
  spec.family = family_from_name(j.at("family").get<std::string>());
  const json& jp = j.at("params");
  ReducedParams& r = spec.params;
  r.gamma_i_nu = jp.at("gamma_i_nu").get<std::vector<std::vector<double>>>();
  r.delta_i = jp.at("delta_i").get<std::vector<double>>();
  r.lambda_i = jp.at("lambda_i").get<std::vector<double>>();
  r.epsilon_bias_i = jp.at("epsilon_bias_i").get<std::vector<double>>();
  r.gamma_prime = jp.at("gamma_prime").get<double>();
  r.epsilon_alpha = jp.at("epsilon_alpha").get<std::array<double, 3>>();
  r.beta_Delta = beta_from_json(jp.at("beta_Delta"));
  if (!jp.at("C").is_null()) r.C = jp.at("C").get<double>();
  r.Delta_ref = jp.at("Delta_ref").get<double>();
  const std::string rule = jp.at("mean_rule").get<std::string>();
  if (rule == "arithmetic_abs")
    r.mean_rule = MeanRule::ArithmeticAbs;
  else if (rule == "rms")
    r.mean_rule = MeanRule::Rms;
  else
    throw std::invalid_argument("model_from_json: unknown mean_rule '" + rule + "'");
  if (j.contains("two_photon_reduced")) spec.two_photon_reduced = j.at("two_photon_reduced").get<bool>();
  return spec;
}

// ---- convenience constructors ----

namespace {
ModelSpec with_common(Family fam, std::vector<std::vector<double>> gamma,
                      std::vector<double> delta, double beta_Delta) {
  ModelSpec spec;
  spec.family = fam;
  spec.params.gamma_i_nu = std::move(gamma);
  spec.params.delta_i = std::move(delta);
  spec.params.lambda_i.assign(spec.params.delta_i.size(), 1.0);
  spec.params.beta_Delta = beta_Delta;
  return spec;
}
}  // namespace

ModelSpec make_dqr(double gamma, double beta_Delta, int n_spins) {
  return with_common(Family::DQR,
                     std::vector<std::vector<double>>(n_spins, std::vector<double>{gamma}),
                     std::vector<double>(n_spins, 1.0), beta_Delta);
}

ModelSpec make_aniso(const std::vector<double>& gamma_i, const std::vector<double>& delta_i,
                     const std::vector<double>& lambda_i, double beta_Delta) {
  ModelSpec spec = with_common(Family::AnisoInhomogeneous, column(gamma_i), delta_i, beta_Delta);
  spec.params.lambda_i = lambda_i;
  return spec;
}

ModelSpec make_tavis_cummings(const std::vector<double>& gamma_i,
                              const std::vector<double>& delta_i, double beta_Delta) {
  ModelSpec spec = with_common(Family::TavisCummings, column(gamma_i), delta_i, beta_Delta);
  spec.params.lambda_i.assign(delta_i.size(), 0.0);
  return spec;
}

ModelSpec make_biased(const std::vector<double>& gamma_i, const std::vector<double>& delta_i,
                      const std::vector<double>& epsilon_i, double beta_Delta) {
  ModelSpec spec = with_common(Family::Biased, column(gamma_i), delta_i, beta_Delta);
  spec.params.epsilon_bias_i = epsilon_i;
  return spec;
}

ModelSpec make_two_photon(double gamma, double gamma_prime, double beta_Delta, bool reduced) {
  ModelSpec spec = with_common(Family::TwoPhoton, {{gamma}}, {1.0}, beta_Delta);
  spec.params.gamma_prime = gamma_prime;
  spec.two_photon_reduced = reduced;
  return spec;
}

ModelSpec make_xyz(double gamma_1, double gamma_2, double delta_1, double delta_2,
                   const std::array<double, 3>& epsilon_alpha, double beta_Delta) {
  ModelSpec spec = with_common(Family::TwoQubitXYZ, {{gamma_1}, {gamma_2}}, {delta_1, delta_2},
                               beta_Delta);
  spec.params.epsilon_alpha = epsilon_alpha;
  return spec;
}

ModelSpec make_multimode(const std::vector<double>& gamma_nu, const std::vector<double>& delta_i,
                         double beta_Delta) {
  ModelSpec spec;
  spec.family = Family::Multimode;
  spec.params.gamma_i_nu.assign(delta_i.size(), gamma_nu);
  spec.params.delta_i = delta_i;
  spec.params.lambda_i.assign(delta_i.size(), 1.0);
  spec.params.beta_Delta = beta_Delta;
  return spec;
}

}  // namespace srpt
