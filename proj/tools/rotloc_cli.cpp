// rotloc: command-line front end for the rotating-field localization library.
//
// Exit codes: 0 success, 1 malformed invocation, 2 domain error, 3 convergence
// failure. Reports go to stdout (or --out).

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "rotloc/characteristic.hpp"
#include "rotloc/errors.hpp"
#include "rotloc/frame_transform.hpp"
#include "rotloc/localization.hpp"
#include "rotloc/params.hpp"
#include "rotloc/wavefunction.hpp"

using json = nlohmann::ordered_json;
using namespace rotloc;

namespace {

constexpr int kSchema = 1;
constexpr const char* kRelTolEnv = "ROTLOC_REL_TOL";

json quantity(double v, const char* unit) { return json{{"value", v}, {"unit", unit}}; }

json log_value(const LogValue& v) {
  return json{{"sign", v.sign}, {"log_mag", v.log_mag}, {"unit", "1"}};
}

struct Options {
  double e0 = 1.0;
  double h = 0.01;
  double omega = 0.01;  // normalized frequency
  double kappa = 1e4;
  int branch = +1;
  std::string y = "decaying";
  double rel_tol = kDefaultRelTol;
  std::string out;
  std::string config;
  std::string format = "json";
  std::uint64_t seed = 20240601;
  int points = 100;
  std::optional<double> compton_cm;  // hbar / (m c), set by a physical config
};

YConvention parse_y(const std::string& s) {
  if (s == "decaying") return YConvention::decaying;
  if (s == "growing") return YConvention::growing;
  throw CLI::ValidationError("--y", "must be 'decaying' or 'growing'");
}

json header(const std::string& command, const Options& o, bool with_branch = true) {
  json j;
  j["schema"] = kSchema;
  j["command"] = command;
  json conv;
  conv["representation"] = kRepresentation;
  conv["y"] = o.y;
  if (with_branch) conv["branch"] = o.branch;
  conv["wavefunction"] = to_string(kPinnedConvention);
  j["conventions"] = conv;
  j["tolerance"] = json{{"rel_tol", o.rel_tol}};
  return j;
}

// Applies a flat JSON config: either physical inputs (omega in rad/s, fields
// in gauss, mass in grams) or dimensionless parameters. Explicit flags win.
void apply_config(Options& o, const CLI::App& app) {
  if (o.config.empty()) return;
  std::ifstream in(o.config);
  if (!in) throw CLI::ValidationError("--config", "cannot open " + o.config);
  const json cfg = json::parse(in);
  auto unset = [&](const char* flag) {
    for (const CLI::App* a = &app; a; a = a->get_parent()) {
      if (const auto* opt = a->get_option_no_throw(flag); opt && opt->count() > 0) return false;
    }
    return true;
  };
  if (cfg.contains("h_z")) {
    PhysicalInput p;
    p.omega = cfg.at("omega").get<double>();
    p.h_z = cfg.at("h_z").get<double>();
    p.h_wave = cfg.value("h_wave", 0.0);
    p.mass = cfg.value("mass", cgs::electron_mass);
    p.charge_sign = cfg.value("charge_sign", -1);
    const ModelParams m = normalize(p);
    o.compton_cm = cgs::hbar / (p.mass * cgs::c);
    if (unset("--e0")) o.e0 = m.e0;
    if (unset("--h")) o.h = m.h;
    if (unset("--omega")) o.omega = m.omega_n;
    if (unset("--kappa")) o.kappa = m.kappa;
    return;
  }
  if (cfg.contains("e0") && unset("--e0")) o.e0 = cfg["e0"].get<double>();
  if (cfg.contains("h") && unset("--h")) o.h = cfg["h"].get<double>();
  if (cfg.contains("omega_n") && unset("--omega")) o.omega = cfg["omega_n"].get<double>();
  if (cfg.contains("kappa") && unset("--kappa")) o.kappa = cfg["kappa"].get<double>();
  if (cfg.contains("branch") && unset("--branch")) o.branch = cfg["branch"].get<int>();
}

std::vector<double> parse_point(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) v.push_back(std::stod(item));
  if (v.size() != 4) throw CLI::ValidationError("--at", "expected x,y,z,t");
  return v;
}

json cmd_roots(const Options& o, double b, std::optional<double> p) {
  double bb = b;
  if (p) bb = 2.0 * *p - o.omega;
  const CharRoots r = solve_characteristic({o.e0, o.h, bb});
  json j = header("roots", o, false);
  j["input"] = json{{"e0", o.e0}, {"h", o.h}, {"b", bb}};
  json roots = json::array();
  for (int k = 0; k < 3; ++k) {
    roots.push_back(json{{"re", r.roots[k].real()}, {"im", r.roots[k].imag()},
                         {"residual", r.residuals[k]}, {"unit", "mc^2"}});
  }
  j["roots"] = roots;
  j["classification"] = r.classification == RootClass::singular_pair ? "singular_pair" : "generic";
  if (r.classification == RootClass::singular_pair) j["pair_slope"] = r.pair_slope;
  j["ill_conditioned"] = r.ill_conditioned;
  return j;
}

json cmd_localize_lab(const Options& o, bool numeric) {
  json j = header("localize-lab", o);
  j["e0"] = o.e0;
  j["lab_rms_closed"] = quantity(lab_radius_closed(o.e0), "lambda");
  if (o.compton_cm) {
    const double lambda_cm = 2.0 * std::numbers::pi * *o.compton_cm / o.omega;
    j["lambda"] = quantity(lambda_cm, "cm");
    j["lab_rms_closed_physical"] = quantity(lab_radius_closed(o.e0) * lambda_cm, "cm");
  }
  if (numeric) {
    const SingularModel sm = singular_model(o.e0, o.h, o.omega, o.branch);
    const LabState st = make_lab_state(sm.params, sm.e_root);
    const LabQuadrature q = lab_radius_numeric(st, o.rel_tol);
    j["omega_n"] = o.omega;
    j["h"] = o.h;
    j["d"] = quantity(sm.params.d, "compton^-2");
    j["d2"] = quantity(sm.params.d2, "compton^-1");
    j["norm_integral"] = quantity(q.norm, "1");
    j["mean_r2_quadrature"] = quantity(q.mean_r2, "compton^2");
    j["mean_r2_moment"] = quantity(lab_moment_closed(sm.params.d, sm.params.d2), "compton^2");
    j["lab_rms_quadrature"] = quantity(q.rms_lambda, "lambda");
    j["panels_per_axis"] = q.panels_per_axis;
  }
  return j;
}

json report_json(const LocalizationReport& r, std::optional<double> compton_cm) {
  json j;
  j["kappa"] = r.kappa;
  j["e0"] = r.e0;
  j["branch"] = r.branch;
  j["lab_rms"] = quantity(r.lab_rms_lambda, "lambda");
  j["lab_rms_compton"] = quantity(r.lab_rms_compton, "compton");
  j["lab_rms_moment"] = quantity(r.lab_rms_moment_lambda, "lambda");
  j["rot_rms"] = quantity(r.rot_rms_lambda, "lambda");
  j["rot_rms_compton"] = quantity(r.rot_rms_compton, "compton");
  if (compton_cm) {
    j["lab_rms_physical"] = quantity(r.lab_rms_compton * *compton_cm, "cm");
    j["rot_rms_physical"] = quantity(r.rot_rms_compton * *compton_cm, "cm");
  }
  j["ratio_rot_over_bound"] = quantity(r.ratio_rot_over_bound, "lambda/2pi");
  j["one_minus_ratio"] = quantity(r.one_minus_ratio, "1");
  j["lab_over_rot"] = quantity(r.lab_rms_lambda / r.rot_rms_lambda, "1");
  j["eta"] = log_value(r.integrals.eta);
  j["sigma"] = log_value(r.integrals.sigma);
  j["xi"] = log_value(r.integrals.xi);
  j["convergence"] = json{{"panels", r.panels}, {"rel_tol", r.rel_tol}, {"achieved", r.achieved}};
  if (r.small_kappa_warning) j["warning"] = "kappa < 10: the large-kappa limit is not meaningful here";
  return j;
}

json cmd_localize_rot(const Options& o) {
  const auto rep = rot_radius(o.kappa, o.e0, o.branch, o.rel_tol, parse_y(o.y));
  json j = header("localize-rot", o);
  j["report"] = report_json(rep, o.compton_cm);
  return j;
}

std::string cmd_sweep(const Options& o, double from, double to, int points) {
  const auto rows = sweep(from, to, points, o.e0, o.branch, o.rel_tol);
  if (o.format == "csv") {
    std::ostringstream os;
    os.precision(17);
    os << "kappa,e0,branch,eta_log,sigma_log,xi_log,rot_rms_over_bound\n";
    for (const auto& r : rows) {
      os << r.kappa << ',' << r.e0 << ',' << r.branch << ',' << r.eta_log << ',' << r.sigma_log
         << ',' << r.xi_log << ',' << r.rot_rms_over_bound << '\n';
    }
    return os.str();
  }
  json j = header("sweep", o);
  json arr = json::array();
  for (const auto& r : rows) {
    arr.push_back(json{{"kappa", r.kappa},
                       {"eta_log", r.eta_log},
                       {"sigma_log", r.sigma_log},
                       {"xi_log", r.xi_log},
                       {"rot_rms_over_bound", quantity(r.rot_rms_over_bound, "lambda/2pi")},
                       {"one_minus_ratio", r.one_minus_ratio}});
  }
  j["rows"] = arr;
  return j.dump(2) + "\n";
}

json fit_json(const QuantityFit& q) {
  return json{{"rate", q.rate},
              {"log_power", q.log_power},
              {"intercept", q.intercept},
              {"rms_residual", q.rms_residual},
              {"nearest_mode", q.nearest_mode},
              {"nearest_rel_error", q.nearest_rel_error}};
}

json cmd_fit(const Options& o, double from, double to, int points, double fit_tol) {
  const auto grid = log_grid(from, to, points);
  const AsymptoticFit f = asymptotic_coefficients(grid, o.e0, o.branch, fit_tol, o.rel_tol);
  json j = header("fit", o);
  j["tolerance"]["fit_tol"] = fit_tol;
  j["e0"] = o.e0;
  j["model"] = "log|Q| = rate * kappa + log_power * log(kappa) + intercept";
  j["mode_rates"] = json{{"rho1", f.rates.rho1}, {"rho2", f.rates.rho2}, {"rho3", f.rates.rho3},
                         {"unit", "per kappa"}};
  j["eta"] = fit_json(f.eta);
  j["sigma"] = fit_json(f.sigma);
  j["xi"] = fit_json(f.xi);
  json c = json::array();
  for (std::size_t k = 0; k < f.kappa.size(); ++k) {
    c.push_back(json{{"kappa", f.kappa[k]},
                     {"log_c1", f.log_c[k][0]},
                     {"log_c2", f.log_c[k][1]},
                     {"log_c3", f.log_c[k][2]}});
  }
  j["coefficients"] = c;
  return j;
}

json cmd_verify_dirac(const Options& o) {
  json j = header("verify-dirac", o, false);
  j["input"] = json{{"e0", o.e0}, {"h", o.h}, {"omega_n", o.omega}, {"seed", o.seed},
                    {"points", o.points}};
  j["sample_box"] = "|x|,|y| <= 4/sqrt(d), |z|,|t| <= 10";
  json branches = json::array();
  for (int br : {+1, -1}) {
    const SingularModel sm = singular_model(o.e0, o.h, o.omega, br);
    const auto pts = sample_points(o.seed, o.points, sm.params.d);
    const ConventionScan scan = scan_conventions(sm.params, sm.e_root, pts);
    json conv = json::array();
    for (const auto& r : scan.results) {
      conv.push_back(json{{"convention", to_string(r.convention)}, {"max_residual", r.max_residual}});
    }
    branches.push_back(json{{"branch", br},
                            {"e_root", sm.e_root},
                            {"conventions", conv},
                            {"best", to_string(scan.best)},
                            {"best_residual", scan.best_residual},
                            {"passes_1e-10", scan.best_residual <= 1e-10}});
  }
  j["branches"] = branches;
  return j;
}

json cmd_verify_ode(const Options& o, double fd_step) {
  const auto y = parse_y(o.y);
  const auto r = ode_residual(o.kappa, o.e0, o.branch, fd_step, y, o.rel_tol);
  json j = header("verify-ode", o);
  j["kappa"] = o.kappa;
  j["e0"] = o.e0;
  j["fd_step"] = fd_step;
  const char* names[3] = {"sigma", "xi", "eta"};
  json eqs = json::array();
  for (int k = 0; k < 3; ++k) {
    eqs.push_back(json{{"equation", std::string("d") + names[k] + "/dkappa"},
                       {"lhs_over_eta", r.lhs[k]},
                       {"rhs_over_eta", r.rhs[k]},
                       {"relative_residual", r.residual[k]}});
  }
  j["equations"] = eqs;
  j["step_warning"] = r.step_warning;
  return j;
}

json cmd_verify_transform(const Options& o, int samples) {
  std::mt19937_64 gen(o.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0), coord(-10.0, 10.0);
  const double rmax = std::sqrt(1.0 - 1e-6) / o.omega;
  double worst_a = 0.0, worst_fd = 0.0;
  for (int k = 0; k < samples; ++k) {
    const CylindricalEvent e{rmax * std::sqrt(unit(gen)), coord(gen), coord(gen), coord(gen)};
    worst_a = std::max(worst_a, std::abs(jacobian_det(e, o.omega) - 1.0));
    worst_fd = std::max(worst_fd, std::abs(jacobian_det_fd(e, o.omega) - 1.0));
  }
  json j = header("verify-transform", o, false);
  j["omega_n"] = o.omega;
  j["samples"] = samples;
  j["max_abs_det_minus_one_analytic"] = worst_a;
  j["max_abs_det_minus_one_fd"] = worst_fd;
  return j;
}

json cmd_wavefunction(const Options& o, const std::string& at) {
  const auto v = parse_point(at);
  const SingularModel sm = singular_model(o.e0, o.h, o.omega, o.branch);
  const LabState st = make_lab_state(sm.params, sm.e_root);
  const SpacetimePoint pt{v[0], v[1], v[2], v[3]};
  const Spinor4 psi = psi_lab(st, pt);
  json j = header("wavefunction", o);
  j["at"] = json{{"x", v[0]}, {"y", v[1]}, {"z", v[2]}, {"t", v[3]}, {"unit", "compton"}};
  json comps = json::array();
  for (int k = 0; k < 4; ++k) comps.push_back(json{{"re", psi[k].real()}, {"im", psi[k].imag()}});
  j["psi"] = comps;
  j["density"] = quantity(psi.norm2(), "compton^-2");
  j["dirac_residual"] = dirac_residual(st, pt);
  j["energy"] = quantity(sm.params.energy, "mc^2");
  j["momentum"] = quantity(sm.params.p, "mc");
  j["d"] = quantity(sm.params.d, "compton^-2");
  j["d2"] = quantity(sm.params.d2, "compton^-1");
  j["log_norm"] = st.spinor.log_norm;
  return j;
}

json cmd_transform(const Options& o, const CylindricalEvent& e, bool inverse) {
  const CylindricalEvent m = inverse ? from_rotating(e, o.omega) : to_rotating(e, o.omega);
  json j = header("transform", o, false);
  j["direction"] = inverse ? "rotating-to-lab (derived inverse)" : "lab-to-rotating";
  j["omega_n"] = o.omega;
  j["input"] = json{{"r", e.r}, {"phi", e.phi}, {"z", e.z}, {"t", e.t}};
  j["output"] = json{{"r", m.r}, {"phi", m.phi}, {"z", m.z}, {"t", m.t}};
  j["units"] = json{{"r", "compton"}, {"phi", "rad"}, {"z", "compton"}, {"t", "compton/c"}};
  j["jacobian_det"] = jacobian_det(e, o.omega);
  j["r_max"] = quantity(max_radius(o.omega).compton, "compton");
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  if (const char* env = std::getenv(kRelTolEnv)) {
    try {
      o.rel_tol = std::stod(env);
    } catch (const std::exception&) {
      std::cerr << kRelTolEnv << " is not a number\n";
      return 1;
    }
  }

  CLI::App app{"Dirac solutions in a rotating field: roots, wavefunctions and localization radii"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);
  app.add_option("--rel-tol", o.rel_tol, "Quadrature relative tolerance")
      ->check(CLI::Range(1e-13, 1e-3));
  app.add_option("--out", o.out, "Write the report to this file instead of stdout");
  app.add_option("--config", o.config, "Flat JSON of physical or dimensionless inputs");

  auto add_model = [&](CLI::App* sc) {
    sc->add_option("--e0", o.e0, "Resonance parameter e0 (> 0)");
    sc->add_option("--h", o.h, "Wave parameter h = H/Omega");
    sc->add_option("--omega", o.omega, "Normalized frequency Omega (Compton units)");
    sc->add_option("--branch", o.branch, "Singular pair member (+1 or -1)")
        ->check(CLI::IsMember({-1, 1}));
  };

  double b = 0.0;
  std::optional<double> p;
  auto* roots = app.add_subcommand("roots", "Roots of the cubic characteristic equation");
  add_model(roots);
  roots->add_option("--b", b, "b = 2p - Omega");
  roots->add_option("--p", p, "Longitudinal momentum (overrides --b)");

  auto* localize = app.add_subcommand("localize", "Localization radius");
  localize->require_subcommand(1);
  bool lab_numeric = false;
  auto* lab = localize->add_subcommand("lab", "Lab frame radius");
  add_model(lab);
  lab->add_flag("--numeric", lab_numeric, "Also integrate |Psi|^2 r^2 over the plane");
  auto* rot = localize->add_subcommand("rot", "Rotating frame radius");
  add_model(rot);
  rot->add_option("--kappa", o.kappa, "kappa = lambda / lambda_C");
  rot->add_option("--y", o.y, "Gaussian sign convention: decaying | growing");

  double k_from = 1e2, k_to = 1e6;
  int k_points = 9;
  auto* sw = app.add_subcommand("sweep", "Log-spaced kappa sweep");
  add_model(sw);
  sw->add_option("--kappa-from", k_from)->required();
  sw->add_option("--kappa-to", k_to)->required();
  sw->add_option("--points", k_points)->check(CLI::PositiveNumber);
  sw->add_option("--format", o.format)->check(CLI::IsMember({"csv", "json"}));
  o.format = "csv";

  double fit_tol = kDefaultFitTolerance;
  double f_from = 1e2, f_to = 1e4;
  int f_points = 9;
  auto* fit = app.add_subcommand("fit", "Exponential growth rates of eta, sigma, xi");
  add_model(fit);
  fit->add_option("--kappa-from", f_from);
  fit->add_option("--kappa-to", f_to);
  fit->add_option("--points", f_points)->check(CLI::PositiveNumber);
  fit->add_option("--fit-tol", fit_tol, "Maximum RMS residual of each log fit");

  auto* verify = app.add_subcommand("verify", "Verification checks");
  verify->require_subcommand(1);
  auto* vd = verify->add_subcommand("dirac", "Dirac residual over seeded sample points");
  add_model(vd);
  vd->add_option("--seed", o.seed);
  vd->add_option("--points", o.points)->check(CLI::PositiveNumber);
  double fd_step = 1e-4;
  auto* vo = verify->add_subcommand("ode", "Kappa-evolution equations of eta, sigma, xi");
  add_model(vo);
  vo->add_option("--kappa", o.kappa);
  vo->add_option("--fd-step", fd_step);
  vo->add_option("--y", o.y);
  int samples = 10000;
  auto* vt = verify->add_subcommand("transform", "Unit Jacobian of the frame map");
  vt->add_option("--omega", o.omega);
  vt->add_option("--seed", o.seed);
  vt->add_option("--samples", samples)->check(CLI::PositiveNumber);

  std::string at = "0,0,0,0";
  auto* wf = app.add_subcommand("wavefunction", "Lab wavefunction at a point");
  add_model(wf);
  wf->add_option("--at", at, "x,y,z,t in Compton units")->required();

  CylindricalEvent ev;
  bool inverse = false;
  auto* tr = app.add_subcommand("transform", "Map a cylindrical event to the rotating frame");
  tr->add_option("--omega", o.omega);
  tr->add_option("--r", ev.r)->required();
  tr->add_option("--phi", ev.phi);
  tr->add_option("--z", ev.z);
  tr->add_option("--t", ev.t);
  tr->add_flag("--inverse", inverse, "Apply the derived inverse map");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  std::string text;
  try {
    const CLI::App* leaf = &app;
    while (!leaf->get_subcommands().empty()) leaf = leaf->get_subcommands().front();
    apply_config(o, *leaf);
    parse_y(o.y);

    if (roots->parsed()) {
      text = cmd_roots(o, b, p).dump(2) + "\n";
    } else if (lab->parsed()) {
      text = cmd_localize_lab(o, lab_numeric).dump(2) + "\n";
    } else if (rot->parsed()) {
      text = cmd_localize_rot(o).dump(2) + "\n";
    } else if (sw->parsed()) {
      text = cmd_sweep(o, k_from, k_to, k_points);
    } else if (fit->parsed()) {
      text = cmd_fit(o, f_from, f_to, f_points, fit_tol).dump(2) + "\n";
    } else if (vd->parsed()) {
      text = cmd_verify_dirac(o).dump(2) + "\n";
    } else if (vo->parsed()) {
      text = cmd_verify_ode(o, fd_step).dump(2) + "\n";
    } else if (vt->parsed()) {
      text = cmd_verify_transform(o, samples).dump(2) + "\n";
    } else if (wf->parsed()) {
      text = cmd_wavefunction(o, at).dump(2) + "\n";
    } else if (tr->parsed()) {
      text = cmd_transform(o, ev, inverse).dump(2) + "\n";
    }
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const ConvergenceError& e) {
    std::cerr << "convergence error: " << e.what() << "\n";
    return 3;
  } catch (const std::domain_error& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  if (o.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(o.out);
    if (!f) {
      std::cerr << "cannot write " << o.out << "\n";
      return 1;
    }
    f << text;
  }
  return 0;
}
