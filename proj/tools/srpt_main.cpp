// srpt_main.cpp — command-line front end: model construction from flags or
// JSON, transition scans, phase-diagram rasters, exact diagonalization, and
// partition-function bounds checks. Emits plot-ready CSV/JSON.
//
// Exit codes: 0 success, 2 validation/usage error (violations as JSON lines
// on stderr), 3 numerical failure or violated bounds.
#include <cmath>
#include <cstdio>
#include <initializer_list>
#include <iostream>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "srpt/bounds.hpp"
#include "srpt/critical.hpp"
#include "srpt/ed.hpp"
#include "srpt/io.hpp"
#include "srpt/landau.hpp"
#include "srpt/model.hpp"
#include "srpt/spinblock.hpp"

using nlohmann::json;
using namespace srpt;

namespace {

// ---- flag state ----

struct ModelFlags {
  std::string model = "dqr";  // family alias or path to a model JSON file
  std::string gamma, gamma1, gamma2, gamma_prime, bias, lambda;
  std::string eps_x, eps_y, eps_z;
  std::string beta_delta = "inf";
  std::vector<double> gammas;  // multimode couplings, one per mode
  std::vector<double> deltas;  // detunings, one per spin (scalar broadcasts)
  std::vector<double> eps;     // exchange shorthand x,y,z
  int n_spins = 0;             // 0 = default (1)
  double C = 0.0;              // macroscopicity; 0 = unset
  double delta_over_omega = 0.0;  // alternative to --C; 0 = unset
  double omega = 1.0;
};

struct JobFlags {
  std::string out;        // empty = stdout
  std::string format;     // empty = command default
  std::string range = "0:2";  // critical-line bracket lo:hi
  int points = 401;       // critical-line ray grid
  int points_per_axis = 2001;
  int workers = 0;
  int n_max = 0;          // 0 = auto
  int order = 80;         // quadrature order
  double beta_omega = 1.0;
  std::string observables = "photon";
  std::string dump_matrix;
  std::string edges_out;
  bool compare_ed = false;
  bool closed_form = false;
};

// Scalar or "lo:hi:third" range; the third field is a step for scans and a
// count for grids.
struct FlagValue {
  bool present = false;
  bool is_range = false;
  double value = 0.0;
  double lo = 0.0, hi = 0.0, third = 0.0;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    const size_t pos = s.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

double parse_number(const std::string& s, const std::string& flag) {
  if (s == "inf") return kInf;
  try {
    size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument(flag + ": cannot parse number '" + s + "'");
  }
}

FlagValue parse_flag_value(const std::string& s, const std::string& flag) {
  FlagValue f;
  if (s.empty()) return f;
  f.present = true;
  const auto parts = split(s, ':');
  if (parts.size() == 1) {
    f.value = parse_number(parts[0], flag);
    return f;
  }
  if (parts.size() != 3)
    throw std::invalid_argument(flag + ": expected a scalar or lo:hi:third, got '" + s + "'");
  f.is_range = true;
  f.lo = parse_number(parts[0], flag);
  f.hi = parse_number(parts[1], flag);
  f.third = parse_number(parts[2], flag);
  if (!(f.hi > f.lo))
    throw std::invalid_argument(flag + ": range needs hi > lo, got '" + s + "'");
  return f;
}

// ---- model construction ----

Family family_from_alias(const std::string& name, bool& force_single_spin) {
  force_single_spin = false;
  if (name == "dqr" || name == "dicke") return Family::DQR;
  if (name == "rabi") {
    force_single_spin = true;
    return Family::DQR;
  }
  if (name == "aniso") return Family::AnisoInhomogeneous;
  if (name == "tc" || name == "tavis-cummings") return Family::TavisCummings;
  if (name == "biased") return Family::Biased;
  if (name == "two-photon" || name == "twophoton") return Family::TwoPhoton;
  if (name == "xyz" || name == "two-qubit-xyz") return Family::TwoQubitXYZ;
  if (name == "multimode") return Family::Multimode;
  return family_from_name(name);  // canonical names pass through
}

bool model_is_file(const std::string& model) {
  return model.find('/') != std::string::npos ||
         model.find(".json") != std::string::npos;
}

struct AxisRequest {
  std::string name;  // apply_axis vocabulary
  double lo = 0.0, hi = 0.0, third = 0.0;
};

std::vector<double> broadcast(std::vector<double> v, int n, const char* what) {
  if (v.empty()) v.assign(n, 1.0);
  if (v.size() == 1) v.assign(n, v[0]);
  if (static_cast<int>(v.size()) != n)
    throw std::invalid_argument(std::string(what) + ": expected 1 or " +
                                std::to_string(n) + " entries");
  return v;
}

// Builds the base spec; range-valued flags are recorded in axes (placeholder
// value lo) in a fixed priority order so grid axes are deterministic.
ModelSpec build_spec(const ModelFlags& mf, std::vector<AxisRequest>& axes) {
  axes.clear();
  struct Slot {
    const std::string* text;
    const char* flag;
    const char* axis;
  };
  const Slot slots[] = {
      {&mf.gamma, "--gamma", "gamma"},
      {&mf.gamma1, "--gamma1", "gamma1"},
      {&mf.gamma2, "--gamma2", "gamma2"},
      {&mf.gamma_prime, "--gamma-prime", "gamma_prime"},
      {&mf.bias, "--bias", "bias"},
      {&mf.lambda, "--lambda", "lambda"},
      {&mf.eps_x, "--eps-x", "epsilon_x"},
      {&mf.eps_y, "--eps-y", "epsilon_y"},
      {&mf.eps_z, "--eps-z", "epsilon_z"},
      {&mf.beta_delta, "--beta-delta", "beta_Delta"},
  };
  FlagValue parsed[std::size(slots)];
  for (size_t k = 0; k < std::size(slots); ++k) {
    parsed[k] = parse_flag_value(*slots[k].text, slots[k].flag);
    if (parsed[k].is_range)
      axes.push_back({slots[k].axis, parsed[k].lo, parsed[k].hi, parsed[k].third});
  }
  auto scalar = [&](int k, double dflt) {
    const FlagValue& f = parsed[k];
    if (!f.present) return dflt;
    return f.is_range ? f.lo : f.value;
  };
  enum { kGamma, kGamma1, kGamma2, kGammaPrime, kBias, kLambda, kEpsX, kEpsY, kEpsZ, kBetaDelta };

  ModelSpec spec;
  if (model_is_file(mf.model)) {
    if (!mf.deltas.empty() || !mf.gammas.empty() || !mf.eps.empty() || mf.n_spins != 0)
      throw std::invalid_argument(
          "--model <file.json> does not combine with structural flags "
          "(--delta, --gammas, --eps, --n-spins)");
    spec = model_from_json(io::read_file(mf.model));
  } else {
    bool single = false;
    const Family family = family_from_alias(mf.model, single);
    const double bD = scalar(kBetaDelta, kInf);
    const int n = single ? 1
                  : mf.n_spins > 0
                      ? mf.n_spins
                      : (family == Family::TwoQubitXYZ
                             ? 2
                             : std::max<int>(1, static_cast<int>(mf.deltas.size())));
    const auto delta = broadcast(mf.deltas, n, "--delta");
    const double g = scalar(kGamma, 0.0);
    switch (family) {
      case Family::DQR: {
        spec = make_dqr(g, bD, n);
        spec.params.delta_i = delta;
        break;
      }
      case Family::AnisoInhomogeneous: {
        const std::vector<double> gs(n, g), ls(n, scalar(kLambda, 1.0));
        spec = make_aniso(gs, delta, ls, bD);
        break;
      }
      case Family::TavisCummings: {
        spec = make_tavis_cummings(std::vector<double>(n, g), delta, bD);
        break;
      }
      case Family::Biased: {
        const std::vector<double> es(n, scalar(kBias, 0.0));
        spec = make_biased(std::vector<double>(n, g), delta, es, bD);
        break;
      }
      case Family::TwoPhoton: {
        spec = make_two_photon(g, scalar(kGammaPrime, 0.0), bD);
        break;
      }
      case Family::TwoQubitXYZ: {
        if (n != 2) throw std::invalid_argument("--n-spins: the exchange family has two spins");
        std::array<double, 3> J{0.0, 0.0, 0.0};
        if (!mf.eps.empty()) {
          if (mf.eps.size() != 3)
            throw std::invalid_argument("--eps: expected three values x,y,z");
          J = {mf.eps[0], mf.eps[1], mf.eps[2]};
        }
        J[0] = scalar(kEpsX, J[0]);
        J[1] = scalar(kEpsY, J[1]);
        J[2] = scalar(kEpsZ, J[2]);
        const double g1 = parsed[kGamma1].present ? scalar(kGamma1, g) : g;
        const double g2 = parsed[kGamma2].present ? scalar(kGamma2, g) : g;
        spec = make_xyz(g1, g2, delta[0], delta[1], J, bD);
        break;
      }
      case Family::Multimode: {
        std::vector<double> gnu = mf.gammas.empty() ? std::vector<double>{g} : mf.gammas;
        spec = make_multimode(gnu, delta, bD);
        break;
      }
    }
  }
  for (size_t k = 0; k < std::size(slots); ++k)
    if (parsed[k].present && !parsed[k].is_range && model_is_file(mf.model))
      spec = critical::apply_axis(spec, slots[k].axis, parsed[k].value);

  if (mf.C != 0.0 && mf.delta_over_omega != 0.0)
    throw std::invalid_argument("--C and --delta-over-omega are exclusive");
  if (mf.C != 0.0) spec.params.C = mf.C;
  if (mf.delta_over_omega != 0.0) {
    const int n_eff = spec.family == Family::TwoQubitXYZ ? 1 : spec.params.n_spins();
    spec.params.C = mf.delta_over_omega * n_eff;
  }
  return spec;
}

// Coupling ray realizing a scan axis: t is the uniform coupling for "gamma"
// (the Euclidean norm for several modes) or one coupling of the two-qubit
// family with the other held fixed.
critical::CouplingRay scan_ray(const ModelSpec& base, const std::string& axis) {
  const int n = base.params.n_spins();
  const int m = base.params.n_modes();
  critical::CouplingRay ray;
  ray.origin.assign(n, std::vector<double>(m, 0.0));
  ray.direction.assign(n, std::vector<double>(m, 0.0));
  if (axis == "gamma") {
    std::vector<double> dir(m, 1.0);
    if (m > 1) {
      double norm = 0.0;
      for (int nu = 0; nu < m; ++nu) {
        dir[nu] = base.params.gamma_i_nu[0][nu];
        norm += dir[nu] * dir[nu];
      }
      norm = std::sqrt(norm);
      if (norm <= 0.0) {
        dir.assign(m, 1.0 / std::sqrt(static_cast<double>(m)));
      } else {
        for (double& d : dir) d /= norm;
      }
    }
    for (int i = 0; i < n; ++i)
      for (int nu = 0; nu < m; ++nu) ray.direction[i][nu] = dir[nu];
    return ray;
  }
  if (axis == "gamma1" || axis == "gamma2") {
    if (base.family != Family::TwoQubitXYZ)
      throw std::invalid_argument("scan: " + axis + " applies to the two-qubit family");
    const int moving = axis == "gamma1" ? 0 : 1;
    for (int i = 0; i < n; ++i) ray.origin[i][0] = base.params.gamma_i_nu[i][0];
    ray.origin[moving][0] = 0.0;
    ray.direction[moving][0] = 1.0;
    return ray;
  }
  throw std::invalid_argument("scan: axis must be a coupling (gamma, gamma1, gamma2), got " + axis);
}

// ---- output plumbing ----

void emit(const std::string& out, const std::string& data) {
  if (out.empty()) {
    std::fwrite(data.data(), 1, data.size(), stdout);
    return;
  }
  io::atomic_write(out, data);
}

std::string pick_format(const JobFlags& jf, const std::string& dflt,
                        std::initializer_list<const char*> allowed) {
  const std::string f = jf.format.empty() ? dflt : jf.format;
  for (const char* a : allowed)
    if (f == a) return f;
  throw std::invalid_argument("--format: '" + f + "' is not available for this command");
}

std::vector<std::string> base_comments(const char* command, const ModelSpec& spec,
                                       const JobFlags& jf) {
  std::vector<std::string> c;
  c.push_back(std::string("command: ") + command);
  c.push_back("model: " + to_json(spec));
  c.push_back("points_per_axis: " + std::to_string(jf.points_per_axis));
  c.push_back("jump_threshold: 0.0001");
  return c;
}

json metadata_json(const char* command, const ModelSpec& spec, const JobFlags& jf) {
  json m;
  m["command"] = command;
  m["model"] = json::parse(to_json(spec));
  m["points_per_axis"] = jf.points_per_axis;
  return m;
}

int check_spec(const ModelSpec& spec) {
  const auto violations = validate(spec);
  if (violations.empty()) return 0;
  for (const auto& v : violations)
    std::cerr << json{{"code", v.code}, {"message", v.message}}.dump() << "\n";
  return 2;
}

landau::ScanBudget budget_from(const JobFlags& jf) {
  landau::ScanBudget b;
  b.points_per_axis = jf.points_per_axis;
  return b;
}

PhysicalParams physical_from(const ModelSpec& spec, const ModelFlags& mf) {
  if (!spec.params.C)
    throw std::invalid_argument("this command reconstructs a lab-frame model; set --C or --delta-over-omega");
  if (!(mf.omega > 0.0)) throw std::invalid_argument("--omega must be positive");
  return unreduce(spec.params, spec.family, mf.omega);
}

double expected_photons(const ModelSpec& spec, const JobFlags& jf) {
  const auto mr = landau::minimize_reduced(spec, budget_from(jf));
  double top = 0.0;
  for (double v : mr.order_parameter) top = std::max(top, v);
  return *spec.params.C * top;
}

// ---- commands ----

int run_critical_line(const ModelSpec& spec, const std::vector<AxisRequest>& axes,
                      const JobFlags& jf) {
  if (!axes.empty())
    throw std::invalid_argument("critical-line: use --range lo:hi, not range-valued model flags");
  if (int rc = check_spec(spec)) return rc;

  std::optional<critical::CriticalPoint> cp;
  if (jf.closed_form) {
    critical::CriticalPoint p;
    p.method = "closed-form";
    switch (spec.family) {
      case Family::DQR: {
        p.t_c = critical::critical_line_dqr(spec);
        p.order = critical::Order::Second;
        cp = p;
        break;
      }
      case Family::TwoPhoton: {
        const auto tp = critical::critical_line_twophoton(spec);
        p.t_c = tp.gamma_c;
        p.order = critical::Order::First;
        p.jump = tp.jump;
        cp = p;
        break;
      }
      case Family::Multimode: {
        p.t_c = critical::critical_line_multimode(spec);
        p.order = critical::Order::Second;
        cp = p;
        break;
      }
      case Family::TwoQubitXYZ: {
        const auto& e = spec.params.epsilon_alpha;
        if (e[0] != e[1] || e[1] != e[2] ||
            spec.params.delta_i[0] != spec.params.delta_i[1])
          throw std::invalid_argument(
              "critical-line --closed-form: the exchange family needs isotropic "
              "epsilon and equal detunings");
        const auto xz = critical::xyz_isotropic_closed_form(e[0], spec.params.delta_i[0]);
        p.t_c = xz.gamma_c;
        p.order = xz.order;
        p.jump = xz.jump;
        cp = p;
        break;
      }
      case Family::AnisoInhomogeneous:
      case Family::TavisCummings: {
        double best = kInf;
        for (int branch = 0; branch < 2; ++branch) {
          const auto unit = critical::apply_axis(spec, "gamma", 1.0);
          const double k = 2.0 - critical::normal_curvature_aniso(unit, branch);
          if (k > 0.0) best = std::min(best, std::sqrt(2.0 / k));
        }
        if (std::isfinite(best)) {
          p.t_c = best;
          p.order = critical::Order::Second;
          cp = p;
        }
        break;
      }
      case Family::Biased:
        break;  // smooth crossover, no closed-form transition
    }
  } else {
    const auto parts = split(jf.range, ':');
    if (parts.size() != 2) throw std::invalid_argument("--range: expected lo:hi");
    const double lo = parse_number(parts[0], "--range");
    const double hi = parse_number(parts[1], "--range");
    if (!(hi > lo)) throw std::invalid_argument("--range: needs hi > lo");
    cp = critical::critical_scan(spec, scan_ray(spec, "gamma"), lo, hi, jf.points,
                                 budget_from(jf));
  }

  const std::string fmt = pick_format(jf, "csv", {"csv", "json"});
  if (fmt == "json") {
    json j;
    j["metadata"] = metadata_json("critical-line", spec, jf);
    if (cp) {
      j["t_c"] = cp->t_c;
      j["order"] = critical::order_name(cp->order);
      j["jump"] = cp->jump;
      j["method"] = cp->method;
      j["cross_validated"] = cp->cross_validated;
    } else {
      j["t_c"] = nullptr;
    }
    emit(jf.out, j.dump(2) + "\n");
    return 0;
  }
  io::Csv csv;
  csv.comments = base_comments("critical-line", spec, jf);
  if (!cp) csv.comments.push_back("no transition found");
  csv.header = {"t_c", "order", "jump", "method"};
  if (cp)
    csv.rows.push_back({io::format_double(cp->t_c), critical::order_name(cp->order),
                        io::format_double(cp->jump), cp->method});
  emit(jf.out, io::to_csv(csv));
  return 0;
}

int run_scan(const ModelSpec& spec, const std::vector<AxisRequest>& axes, const JobFlags& jf) {
  if (axes.size() != 1)
    throw std::invalid_argument("scan: exactly one flag must carry a lo:hi:step range");
  const AxisRequest& ax = axes.front();
  if (!(ax.third > 0.0)) throw std::invalid_argument("scan: step must be positive");
  const long long n = std::llround((ax.hi - ax.lo) / ax.third) + 1;
  if (n < 2 || n > 2'000'000)
    throw std::invalid_argument("scan: range/step give an unusable point count");
  if (int rc = check_spec(spec)) return rc;

  const auto ray = scan_ray(spec, ax.name);
  const auto res = critical::scan_transitions(spec, ray, ax.lo, ax.hi,
                                              static_cast<int>(n), budget_from(jf));

  pick_format(jf, "csv", {"csv"});
  io::Csv csv;
  csv.comments = base_comments("scan", spec, jf);
  csv.comments.push_back("axis: " + ax.name + " from " + io::format_double(ax.lo) + " to " +
                         io::format_double(ax.hi) + " step " + io::format_double(ax.third));
  csv.header = {"kind", "t", "order_parameter", "order", "jump", "degenerate"};
  for (size_t k = 0; k < res.t_grid.size(); ++k)
    csv.rows.push_back({"point", io::format_double(res.t_grid[k]),
                        io::format_double(res.op_grid[k]), "", "", ""});
  for (const auto& tr : res.transitions)
    csv.rows.push_back({"transition", io::format_double(tr.t), "",
                        critical::order_name(tr.order), io::format_double(tr.jump),
                        tr.degenerate_sr ? "1" : "0"});
  emit(jf.out, io::to_csv(csv));
  return 0;
}

int run_phase_diagram(const ModelSpec& spec, const std::vector<AxisRequest>& axes,
                      const JobFlags& jf) {
  if (axes.size() != 2)
    throw std::invalid_argument("phase-diagram: exactly two flags must carry lo:hi:count ranges");
  critical::AxisSpec ax[2];
  for (int k = 0; k < 2; ++k) {
    const double c = axes[k].third;
    if (!(c >= 2.0) || c != std::floor(c))
      throw std::invalid_argument("phase-diagram: count must be an integer >= 2");
    ax[k] = {axes[k].name, axes[k].lo, axes[k].hi, static_cast<int>(c)};
  }
  if (int rc = check_spec(spec)) return rc;

  const auto grid = critical::phase_diagram(spec, ax[0], ax[1], jf.workers, budget_from(jf));

  pick_format(jf, "csv", {"csv"});
  io::Csv csv;
  csv.comments = base_comments("phase-diagram", spec, jf);
  for (int k = 0; k < 2; ++k)
    csv.comments.push_back("axis" + std::to_string(k + 1) + ": " + ax[k].name + " from " +
                           io::format_double(ax[k].lo) + " to " + io::format_double(ax[k].hi) +
                           " count " + std::to_string(ax[k].count));
  csv.header = {"param1", "param2", "order_parameter", "phase", "phi_min"};
  for (const auto& cell : grid.cells)
    csv.rows.push_back({io::format_double(cell.p1), io::format_double(cell.p2),
                        io::format_double(cell.order_parameter), std::to_string(cell.phase),
                        io::format_double(cell.phi_min)});
  emit(jf.out, io::to_csv(csv));

  if (!jf.edges_out.empty()) {
    io::Csv ecsv;
    ecsv.comments = base_comments("phase-diagram (boundary edges)", spec, jf);
    ecsv.header = {"i1", "j1", "i2", "j2", "order", "jump"};
    for (const auto& e : grid.edges)
      ecsv.rows.push_back({std::to_string(e.i1), std::to_string(e.j1), std::to_string(e.i2),
                           std::to_string(e.j2), critical::order_name(e.order),
                           io::format_double(e.jump)});
    io::write_csv(jf.edges_out, ecsv);
  }
  return 0;
}

const char* degeneracy_name(landau::Degeneracy d) {
  switch (d) {
    case landau::Degeneracy::None: return "none";
    case landau::Degeneracy::SignPair: return "sign-pair";
    case landau::Degeneracy::Rotational: return "rotational";
  }
  return "none";
}

int run_order_parameter(const ModelSpec& spec, const std::vector<AxisRequest>& axes,
                        const JobFlags& jf) {
  if (!axes.empty())
    throw std::invalid_argument("order-parameter: evaluates a single spec; no ranges");
  if (int rc = check_spec(spec)) return rc;
  const auto mr = landau::minimize_reduced(spec, budget_from(jf));

  const std::string fmt = pick_format(jf, "csv", {"csv", "json"});
  if (fmt == "json") {
    json j;
    j["metadata"] = metadata_json("order-parameter", spec, jf);
    j["phi_min"] = mr.phi_min;
    j["order_parameter"] = mr.order_parameter;
    j["minima"] = mr.minima;
    j["degeneracy"] = degeneracy_name(mr.degenerate);
    j["converged"] = mr.converged;
    emit(jf.out, j.dump(2) + "\n");
    return 0;
  }
  io::Csv csv;
  csv.comments = base_comments("order-parameter", spec, jf);
  csv.header = {"quantity", "value"};
  csv.rows.push_back({"phi_min", io::format_double(mr.phi_min)});
  for (size_t nu = 0; nu < mr.order_parameter.size(); ++nu)
    csv.rows.push_back({"order_parameter_" + std::to_string(nu),
                        io::format_double(mr.order_parameter[nu])});
  csv.rows.push_back({"degeneracy", degeneracy_name(mr.degenerate)});
  csv.rows.push_back({"converged", mr.converged ? "1" : "0"});
  csv.rows.push_back({"n_minima", std::to_string(mr.minima.size())});
  emit(jf.out, io::to_csv(csv));
  return 0;
}

int run_ed(const ModelSpec& spec, const std::vector<AxisRequest>& axes, const ModelFlags& mf,
           const JobFlags& jf) {
  if (!axes.empty()) throw std::invalid_argument("ed: evaluates a single spec; no ranges");
  if (int rc = check_spec(spec)) return rc;
  const PhysicalParams p = physical_from(spec, mf);

  const int n_max = jf.n_max > 0 ? jf.n_max : ed::suggest_n_max(expected_photons(spec, jf));
  ed::HilbertSpec h;
  h.n_max.assign(p.n_modes(), n_max);
  const auto model = ed::build_dense(p, spec.family, h);
  const auto ground = ed::ground_state(model);

  if (!jf.dump_matrix.empty()) {
    io::MatrixMeta meta;
    meta.family_tag = static_cast<std::uint64_t>(spec.family);
    meta.n_max = static_cast<std::uint64_t>(n_max);
    meta.n_spins = static_cast<std::uint64_t>(p.n_spins());
    meta.n_modes = static_cast<std::uint64_t>(p.n_modes());
    io::write_matrix(jf.dump_matrix, model.H, meta);
  }

  pick_format(jf, "json", {"json"});
  json j;
  j["metadata"] = metadata_json("ed", spec, jf);
  j["metadata"]["omega"] = mf.omega;
  j["metadata"]["n_max"] = n_max;
  j["metadata"]["dim"] = static_cast<int>(model.dim());
  j["energy"] = ground.energy;
  j["photon_number"] = ground.photon_number;
  j["spin_z"] = ground.spin_z;
  j["parity"] = ground.parity;
  j["parity_commutes"] = model.parity_commutes;
  j["residual"] = ground.residual;
  if (jf.observables.find("dist") != std::string::npos) {
    const auto [pe, pg] = ed::spin_resolved_distribution(model, ground.state);
    j["distribution"]["p_excited"] = pe;
    j["distribution"]["p_ground"] = pg;
  }
  emit(jf.out, j.dump(2) + "\n");
  return 0;
}

int run_photon_dist(const ModelSpec& spec, const std::vector<AxisRequest>& axes,
                    const ModelFlags& mf, const JobFlags& jf) {
  if (!axes.empty())
    throw std::invalid_argument("photon-dist: evaluates a single spec; no ranges");
  if (int rc = check_spec(spec)) return rc;
  if (!spec.params.C)
    throw std::invalid_argument("photon-dist: set --C or --delta-over-omega");

  auto vs = spinblock::variational_state(spec);
  int n_cut = jf.n_max > 0 ? jf.n_max : -1;
  std::vector<double> ed_pe, ed_pg;
  double tv = -1.0, ed_energy = 0.0, ed_parity = 0.0;
  if (jf.compare_ed) {
    const PhysicalParams p = physical_from(spec, mf);
    const int n_max =
        jf.n_max > 0 ? jf.n_max : ed::suggest_n_max(*spec.params.C * vs.u_min * vs.u_min);
    ed::HilbertSpec h;
    h.n_max.assign(1, n_max);
    const auto model = ed::build_dense(p, spec.family, h);
    const auto ground = ed::ground_state(model);
    std::tie(ed_pe, ed_pg) = ed::spin_resolved_distribution(model, ground.state);
    ed_energy = ground.energy;
    ed_parity = ground.parity;
    vs.parity_sector = ground.parity < 0.0 ? -1 : +1;  // compare within the ED sector
    n_cut = n_max;
  }
  const auto dist = spinblock::photon_distribution_variational(vs, n_cut);
  if (jf.compare_ed) {
    tv = 0.0;
    for (size_t k = 0; k < dist.p_excited.size(); ++k) {
      tv += std::abs(dist.p_excited[k] / dist.total - (k < ed_pe.size() ? ed_pe[k] : 0.0));
      tv += std::abs(dist.p_ground[k] / dist.total - (k < ed_pg.size() ? ed_pg[k] : 0.0));
    }
    tv *= 0.5;
  }

  pick_format(jf, "csv", {"csv"});
  io::Csv csv;
  csv.comments = base_comments("photon-dist", spec, jf);
  csv.comments.push_back("u_min: " + io::format_double(vs.u_min));
  csv.comments.push_back("alpha: " + io::format_double(vs.alpha));
  csv.comments.push_back("spin_z: " + io::format_double(vs.spin_z));
  csv.comments.push_back("parity_sector: " + std::to_string(dist.parity_sector));
  csv.comments.push_back("total_mass: " + io::format_double(dist.total));
  if (tv >= 0.0) {
    csv.comments.push_back("tv_distance: " + io::format_double(tv));
    csv.comments.push_back("ed_energy: " + io::format_double(ed_energy));
    csv.comments.push_back("ed_parity: " + io::format_double(ed_parity));
  }
  csv.header = {"n", "p_excited", "p_ground"};
  if (tv >= 0.0) {
    csv.header.push_back("ed_p_excited");
    csv.header.push_back("ed_p_ground");
  }
  for (size_t k = 0; k < dist.p_excited.size(); ++k) {
    std::vector<std::string> row{std::to_string(k),
                                 io::format_double(dist.p_excited[k] / dist.total),
                                 io::format_double(dist.p_ground[k] / dist.total)};
    if (tv >= 0.0) {
      row.push_back(io::format_double(k < ed_pe.size() ? ed_pe[k] : 0.0));
      row.push_back(io::format_double(k < ed_pg.size() ? ed_pg[k] : 0.0));
    }
    csv.rows.push_back(std::move(row));
  }
  emit(jf.out, io::to_csv(csv));
  return 0;
}

int run_bounds_check(const ModelSpec& spec, const std::vector<AxisRequest>& axes,
                     const ModelFlags& mf, const JobFlags& jf) {
  if (!axes.empty())
    throw std::invalid_argument("bounds-check: evaluates a single spec; no ranges");
  if (int rc = check_spec(spec)) return rc;
  const PhysicalParams p = physical_from(spec, mf);
  if (!(jf.beta_omega > 0.0))
    throw std::invalid_argument("--beta-omega must be positive");
  const double beta = jf.beta_omega / mf.omega;

  int n_max = jf.n_max;
  if (n_max <= 0) {
    // Zero-temperature load plus the free-mode thermal occupation.
    const double load = expected_photons(spec, jf) + 1.0 / std::expm1(jf.beta_omega);
    n_max = ed::suggest_n_max(load);
  }
  ed::HilbertSpec h;
  h.n_max.assign(p.n_modes(), n_max);
  const auto rep = bounds::verify_bounds(p, spec.family, beta, h, jf.order);

  pick_format(jf, "json", {"json"});
  json j;
  j["metadata"] = metadata_json("bounds-check", spec, jf);
  j["metadata"]["omega"] = mf.omega;
  j["metadata"]["beta"] = beta;
  j["metadata"]["n_max"] = n_max;
  j["metadata"]["quadrature_order"] = rep.quadrature_order;
  j["log_Z_exact"] = rep.log_Z_exact;
  j["log_Z_mean_field"] = rep.log_Z_mean_field;
  j["log_upper_offset"] = rep.log_upper_offset;
  j["margin_lower"] = rep.margin_lower;
  j["margin_upper"] = rep.margin_upper;
  j["quad_error"] = rep.quad_error;
  j["trunc_error"] = rep.trunc_error;
  j["lower_ok"] = rep.lower_ok;
  j["upper_ok"] = rep.upper_ok;
  j["dim"] = rep.dim;
  emit(jf.out, j.dump(2) + "\n");
  if (!rep.lower_ok || !rep.upper_ok) {
    std::cerr << json{{"code", "bounds.violated"},
                      {"message", "a sandwich margin fell below tolerance"}}
                     .dump()
              << "\n";
    return 3;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"superradiant phase diagrams for spin-boson models"};
  app.require_subcommand(1);

  ModelFlags mf;
  JobFlags jf;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--model", mf.model,
                    "family (dqr|rabi|aniso|tc|biased|two-photon|xyz|multimode) or model JSON path");
    sub->add_option("--gamma", mf.gamma, "coupling; scalar or lo:hi:third range");
    sub->add_option("--gamma1", mf.gamma1, "first coupling (two-qubit family)");
    sub->add_option("--gamma2", mf.gamma2, "second coupling (two-qubit family)");
    sub->add_option("--gamma-prime", mf.gamma_prime, "two-photon coupling ratio g'/omega");
    sub->add_option("--bias", mf.bias, "static transverse bias (uniform)");
    sub->add_option("--lambda", mf.lambda, "counter-rotating weight (uniform)");
    sub->add_option("--eps", mf.eps, "exchange x,y,z shorthand")->delimiter(',');
    sub->add_option("--eps-x", mf.eps_x, "exchange x component");
    sub->add_option("--eps-y", mf.eps_y, "exchange y component");
    sub->add_option("--eps-z", mf.eps_z, "exchange z component");
    sub->add_option("--beta-delta", mf.beta_delta, "beta * Delta_ref; 'inf' = zero temperature");
    sub->add_option("--gammas", mf.gammas, "per-mode couplings (multimode)")->delimiter(',');
    sub->add_option("--delta", mf.deltas, "detunings, scalar or per spin")->delimiter(',');
    sub->add_option("--n-spins", mf.n_spins, "spin count for uniform families");
    sub->add_option("--C", mf.C, "macroscopicity N*Delta/omega (per pair for two-qubit)");
    sub->add_option("--delta-over-omega", mf.delta_over_omega, "Delta_ref/omega; alternative to --C");
    sub->add_option("--omega", mf.omega, "mode frequency in lab units");
    sub->add_option("--out", jf.out, "output path (atomic); stdout when omitted");
    sub->add_option("--format", jf.format, "csv or json (command default when omitted)");
    sub->add_option("--points-per-axis", jf.points_per_axis, "minimizer grid resolution");
    sub->add_option("--workers", jf.workers, "worker threads (0 = SRPT_WORKERS or hardware)");
  };

  CLI::App* c_crit = app.add_subcommand("critical-line", "first transition on the coupling ray");
  add_common(c_crit);
  c_crit->add_option("--range", jf.range, "ray bracket lo:hi");
  c_crit->add_option("--points", jf.points, "ray grid points");
  c_crit->add_flag("--closed-form", jf.closed_form, "use the family closed form instead of scanning");

  CLI::App* c_scan = app.add_subcommand("scan", "order-parameter sweep along one coupling axis");
  add_common(c_scan);

  CLI::App* c_phase = app.add_subcommand("phase-diagram", "raster over two parameter axes");
  add_common(c_phase);
  c_phase->add_option("--edges-out", jf.edges_out, "also write classified boundary edges here");

  CLI::App* c_op = app.add_subcommand("order-parameter", "minimize one spec");
  add_common(c_op);

  CLI::App* c_ed = app.add_subcommand("ed", "dense diagonalization of the lab-frame model");
  add_common(c_ed);
  c_ed->add_option("--nmax,--n-max", jf.n_max, "photon cutoff (0 = auto 12-sigma rule)");
  c_ed->add_option("--observables", jf.observables, "comma list: photon,dist");
  c_ed->add_option("--dump-matrix", jf.dump_matrix, "write the Hamiltonian as a binary matrix dump");

  CLI::App* c_dist = app.add_subcommand("photon-dist", "variational photon distribution");
  add_common(c_dist);
  c_dist->add_option("--nmax,--n-max", jf.n_max, "photon cutoff (0 = auto)");
  c_dist->add_flag("--compare-ed", jf.compare_ed, "diagonalize and report the TV distance");

  CLI::App* c_bounds = app.add_subcommand("bounds-check", "partition-function sandwich check");
  add_common(c_bounds);
  c_bounds->add_option("--nmax,--n-max", jf.n_max, "photon cutoff (0 = auto)");
  c_bounds->add_option("--order", jf.order, "quadrature order per axis");
  c_bounds->add_option("--beta-omega", jf.beta_omega, "dimensionless inverse temperature beta*omega");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << json{{"code", "cli.usage"}, {"message", e.what()}}.dump() << "\n";
    return 2;
  }

  try {
    std::vector<AxisRequest> axes;
    const ModelSpec spec = build_spec(mf, axes);
    if (c_crit->parsed()) return run_critical_line(spec, axes, jf);
    if (c_scan->parsed()) return run_scan(spec, axes, jf);
    if (c_phase->parsed()) return run_phase_diagram(spec, axes, jf);
    if (c_op->parsed()) return run_order_parameter(spec, axes, jf);
    if (c_ed->parsed()) return run_ed(spec, axes, mf, jf);
    if (c_dist->parsed()) return run_photon_dist(spec, axes, mf, jf);
    if (c_bounds->parsed()) return run_bounds_check(spec, axes, mf, jf);
    std::cerr << json{{"code", "cli.usage"}, {"message", "no command"}}.dump() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << json{{"code", "cli.invalid"}, {"message", e.what()}}.dump() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << json{{"code", "cli.runtime"}, {"message", e.what()}}.dump() << "\n";
    return 3;
  }
}
