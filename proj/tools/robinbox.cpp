// robinbox command-line driver: spectrum | measure | evolve | ehrenfest | uncertainty.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "robinbox/robinbox.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace robinbox;

namespace {

struct Options {
  std::string m = "1";
  std::string L = "1";
  std::string bc = "dirichlet";
  std::string gamma = "0";
  std::string gamma_plus = "0";
  std::string gamma_minus = "0";
  std::string theta = "0";
  std::string lambda_plus;
  std::string lambda_minus;
  std::string out_dir = ".";
  long seed = 1;

  int levels = 8;
  int samples = 0;
  std::vector<std::string> states;
  int n_max = 512;
  std::string k_max;
  int dense_points = 2049;
  std::string times;
  int steps = 20;
  std::string t_end = "T";
  bool sweep = false;
  int count = 100;
};

std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) v = 0.0;  // no "-0"
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json json_number(double v) { return std::isfinite(v) ? json(v) : json(num(v)); }

void write_atomic(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string index_name(std::size_t i, const char* suffix = ".csv") {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%03zu%s", i, suffix);
  return buf;
}

// Pull defaults from a JSON document before flags are parsed; flags given on
// the command line overwrite them afterwards.
void load_config(const std::string& path, Options& o) {
  std::ifstream in(path);
  if (!in) throw ConfigurationError("cannot open config " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigurationError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigurationError("config must be a JSON object");
  auto str = [](const json& v) { return v.is_string() ? v.get<std::string>() : num(v.get<double>()); };
  for (const auto& [key, v] : j.items()) {
    try {
      if (key == "m") o.m = str(v);
      else if (key == "L") o.L = str(v);
      else if (key == "bc") o.bc = v.get<std::string>();
      else if (key == "gamma") o.gamma = str(v);
      else if (key == "gamma-plus") o.gamma_plus = str(v);
      else if (key == "gamma-minus") o.gamma_minus = str(v);
      else if (key == "theta") o.theta = str(v);
      else if (key == "lambda-plus") o.lambda_plus = str(v);
      else if (key == "lambda-minus") o.lambda_minus = str(v);
      else if (key == "out-dir") o.out_dir = v.get<std::string>();
      else if (key == "seed") o.seed = v.get<long>();
      else if (key == "levels") o.levels = v.get<int>();
      else if (key == "samples") o.samples = v.get<int>();
      else if (key == "state") o.states = v.is_array() ? v.get<std::vector<std::string>>() : std::vector<std::string>{v.get<std::string>()};
      else if (key == "n-max") o.n_max = v.get<int>();
      else if (key == "k-max") o.k_max = str(v);
      else if (key == "dense-points") o.dense_points = v.get<int>();
      else if (key == "times") o.times = v.is_array() ? [&] {
          std::string s;
          for (const auto& t : v) s += (s.empty() ? "" : ",") + str(t);
          return s;
        }() : str(v);
      else if (key == "steps") o.steps = v.get<int>();
      else if (key == "t-end") o.t_end = str(v);
      else if (key == "sweep") o.sweep = v.get<bool>();
      else if (key == "count") o.count = v.get<int>();
      else throw ConfigurationError("unknown config key '" + key + "'");
    } catch (const json::exception& e) {
      throw ConfigurationError("config key '" + key + "': " + e.what());
    }
  }
}

struct Context {
  BoxConfig box;
  BoundarySpec boundary;
  MomentumExtension ext;
  fs::path out;
  std::shared_ptr<const EnergyBasis> basis;  // first `levels` levels of the selected family
};

Context make_context(const Options& o) {
  Context c;
  const double m = parse_scalar(o.m);
  const double L = parse_scalar(o.L);
  if (!(m > 0.0) || !(L > 0.0) || !std::isfinite(m) || !std::isfinite(L)) throw ConfigurationError("m and L must be positive and finite");
  c.box = BoxConfig(m, L);
  c.boundary = make_boundary(o.bc, parse_scalar(o.gamma), parse_scalar(o.gamma_plus), parse_scalar(o.gamma_minus));
  if (!o.lambda_plus.empty() || !o.lambda_minus.empty()) {
    if (o.lambda_plus.empty() || o.lambda_minus.empty()) throw ConfigurationError("--lambda-plus and --lambda-minus go together");
    c.ext = MomentumExtension::from_lambdas(parse_scalar(o.lambda_plus), parse_scalar(o.lambda_minus));
  } else {
    c.ext = MomentumExtension::from_theta(parse_scalar(o.theta));
  }
  c.out = o.out_dir;
  if (o.levels < 1) throw ConfigurationError("--levels must be >= 1");
  c.basis = std::make_shared<const EnergyBasis>(spectrum_for(c.box, c.boundary.family, c.boundary.bc, o.levels - 1));
  return c;
}

std::vector<double> time_grid(const Options& o, const BoxConfig& box) {
  const double T = box.revival_time();
  if (!o.times.empty()) return parse_times(o.times, T);
  if (o.steps < 1) throw ConfigurationError("--steps must be >= 1");
  const double t_end = parse_time(o.t_end, T);
  std::vector<double> t;
  for (int i = 0; i <= o.steps; ++i) t.push_back(t_end * i / o.steps);
  return t;
}

std::string single_state(const Options& o) {
  if (o.states.size() != 1) throw ConfigurationError("exactly one --state is required");
  return o.states.front();
}

std::string sample_csv(const WaveFunction& f, int samples) {
  std::ostringstream s;
  s << "x,re,im\n";
  const BoxConfig& box = f.box();
  for (int i = 0; i < samples; ++i) {
    const double x = box.left() + box.L() * i / (samples - 1);
    const cplx v = f(x);
    s << num(x) << ',' << num(v.real()) << ',' << num(v.imag()) << '\n';
  }
  return s.str();
}

int cmd_spectrum(const Options& o) {
  const Context c = make_context(o);
  std::ostringstream s;
  s << "l,kind,energy,wavenumber\n";
  for (const auto& lv : c.basis->levels) s << lv.index << ',' << to_string(lv.kind) << ',' << num(lv.energy) << ',' << num(lv.wavenumber) << '\n';
  write_atomic(c.out / "spectrum.csv", s.str());
  if (o.samples > 1)
    for (std::size_t l = 0; l < c.basis->size(); ++l) write_atomic(c.out / "eigenfunctions" / index_name(l), sample_csv(c.basis->wavefunction(l), o.samples));
  std::cout << "spectrum: " << c.basis->size() << " levels (" << to_string(c.boundary.family) << ")\n";
  return 0;
}

int cmd_measure(const Options& o) {
  const Context c = make_context(o);
  const StateSpec spec = parse_state(single_state(o));
  const WaveFunction f = make_state(spec, c.box, c.boundary, c.basis);
  const Quadrature q(c.box);
  const double n2 = norm_squared(f, q);
  if (!(std::abs(n2 - 1.0) < 1e-8)) throw NumericError("state is not normalized (norm^2 = " + num(n2) + ")");
  if (o.n_max < 8) throw ConfigurationError("--n-max must be >= 8");
  const MomentumDistribution d = momentum_distribution(f, c.ext, -o.n_max, o.n_max);
  std::ostringstream h;
  h << "n,k_n,probability\n";
  for (int n = d.n_min; n <= d.n_max; ++n) h << n << ',' << num(d.k(n)) << ',' << num(d.probability(n)) << '\n';
  write_atomic(c.out / "histogram.csv", h.str());

  const double k_max = o.k_max.empty() ? 64.0 * pi / c.box.L() : parse_scalar(o.k_max);
  if (o.dense_points > 1) {
    std::ostringstream dk;
    dk << "k,density\n";
    for (int i = 0; i < o.dense_points; ++i) {
      const double k = -k_max + 2.0 * k_max * i / (o.dense_points - 1);
      dk << num(k) << ',' << num(momentum_density(f, k)) << '\n';
    }
    write_atomic(c.out / "density_k.csv", dk.str());
  }

  const PR2Result pr2 = expval_pR_squared(f, c.ext, q, o.n_max);
  json j;
  j["state"] = spec.text;
  j["theta"] = c.ext.theta();
  j["pR"] = expval_pR(f, q);
  j["pI"] = expval_pI(f);
  j["pR2"] = pr2.infinite ? json("inf") : json_number(pr2.value);
  j["pR2_series"] = json_number(pr2.series);
  j["tail_exponent"] = json_number(d.tail_exponent);
  j["listed_mass"] = d.listed_mass();
  j["total_mass"] = json_number(d.total_mass());
  j["n_min"] = d.n_min;
  j["n_max"] = d.n_max;
  write_atomic(c.out / "summary.json", j.dump(2) + "\n");
  std::cout << "measure: listed mass " << num(d.listed_mass()) << ", pR2 " << (pr2.infinite ? std::string("inf") : num(pr2.value)) << '\n';
  return 0;
}

int cmd_evolve(const Options& o) {
  const Context c = make_context(o);
  const Quadrature q(c.box);
  const StateSpec spec = parse_state(single_state(o));
  const EvolvingState s0 = make_evolving_state(spec, c.box, c.boundary, c.basis, q);
  const EhrenfestAnalyzer an(s0);
  const int samples = o.samples > 1 ? o.samples : 401;
  const double k_max = o.k_max.empty() ? 64.0 * pi / c.box.L() : parse_scalar(o.k_max);
  std::ostringstream series;
  series << "t,mean_x,pR,pI,overlap,density_distance\n";
  const auto times = time_grid(o, c.box);
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = times[i];
    const EvolvingState st = evolve(s0, t);
    const WaveFunction f = st.wavefunction();
    const RevivalFidelity fid = revival_fidelity(s0, t, q);
    series << num(t) << ',' << num(an.mean_x(t)) << ',' << num(an.pR(t)) << ',' << num(expval_pI(f)) << ',' << num(fid.overlap) << ','
           << num(fid.density_distance) << '\n';
    std::ostringstream snap;
    snap << "x,density,re,im\n";
    for (int j = 0; j < samples; ++j) {
      const double x = c.box.left() + c.box.L() * j / (samples - 1);
      const cplx v = f(x);
      snap << num(x) << ',' << num(std::norm(v)) << ',' << num(v.real()) << ',' << num(v.imag()) << '\n';
    }
    write_atomic(c.out / "snapshots" / index_name(i), snap.str());
    if (o.dense_points > 1) {
      std::ostringstream dk;
      dk << "k,density\n";
      for (int j = 0; j < o.dense_points; ++j) {
        const double k = -k_max + 2.0 * k_max * j / (o.dense_points - 1);
        dk << num(k) << ',' << num(momentum_density(f, k)) << '\n';
      }
      write_atomic(c.out / "snapshots" / index_name(i, "_k.csv"), dk.str());
    }
  }
  write_atomic(c.out / "series.csv", series.str());
  std::cout << "evolve: " << times.size() << " times, " << s0.expansion.coeffs.size() << " modes\n";
  return 0;
}

int cmd_ehrenfest(const Options& o) {
  const Context c = make_context(o);
  const Quadrature q(c.box);
  const StateSpec spec = parse_state(single_state(o));
  const EhrenfestAnalyzer an(make_evolving_state(spec, c.box, c.boundary, c.basis, q));
  std::ostringstream s;
  s << "t,dx_dt,pR,residual1,dpR_dt,dpR_dt_fd,force_boundary,minus_dV,residual2,pI,dpI_dt,dpI_bracket,dpI_continuity,continuity_residual\n";
  double r1 = 0.0, r2 = 0.0;
  for (double t : time_grid(o, c.box)) {
    const EhrenfestReport r = an.report(t);
    r1 = std::max(r1, r.residual1);
    r2 = std::max(r2, r.residual2);
    s << num(r.t) << ',' << num(r.dx_dt) << ',' << num(r.pR) << ',' << num(r.residual1) << ',' << num(r.dpR_dt) << ',' << num(r.dpR_dt_fd) << ','
      << num(r.force_boundary) << ',' << num(r.minus_dV) << ',' << num(r.residual2) << ',' << num(r.pI) << ',' << num(r.dpI_dt) << ','
      << num(r.dpI_bracket) << ',' << num(r.dpI_continuity) << ',' << num(r.continuity_residual) << '\n';
  }
  write_atomic(c.out / "ehrenfest.csv", s.str());
  std::cout << "ehrenfest: max residual1 " << num(r1) << ", max residual2 " << num(r2) << '\n';
  return 0;
}

json report_json(const std::string& name, const UncertaintyReport& r, const GeneralizedUncertainty& g, cplx comm) {
  json j;
  j["state"] = name;
  j["delta_x"] = r.delta_x;
  j["two_m_T"] = r.two_m_T;
  j["pR"] = r.pR;
  j["pR2_term"] = r.pR2_term;
  j["anticomm"] = r.anticomm;
  j["cross_term"] = r.cross_term;
  j["boundary_block"] = r.boundary_block;
  j["boundary_term"] = r.boundary_term;
  j["gamma_terms"] = r.gamma_terms;
  j["pI_sq_term"] = r.pI_sq_term;
  j["lhs"] = r.lhs;
  j["rhs"] = r.rhs;
  j["holds"] = r.holds;
  j["slack"] = r.slack;
  j["commutator_re"] = comm.real();
  j["commutator_im"] = comm.imag();
  j["generalized_lhs"] = g.lhs;
  j["generalized_rhs"] = g.rhs;
  return j;
}

int cmd_uncertainty(const Options& o) {
  const Context c = make_context(o);
  const Quadrature q(c.box);
  json reports = json::array();
  for (const auto& text : o.states) {
    const StateSpec spec = parse_state(text);
    const WaveFunction f = make_state(spec, c.box, c.boundary, c.basis);
    const auto r = kinetic_inequality_report(f, c.boundary.bc, q);
    reports.push_back(report_json(text, r, generalized_uncertainty(f, q), commutator_expectation_x_pR(f, q)));
  }
  if (!o.states.empty()) write_atomic(c.out / "uncertainty.json", reports.dump(2) + "\n");
  if (o.sweep) {
    if (o.count < 1) throw ConfigurationError("--count must be >= 1");
    const int modes = std::min<int>(8, static_cast<int>(c.basis->size()));
    std::ostringstream s;
    s << "index,seed,lhs,rhs,slack,holds\n";
    int violations = 0;
    for (int i = 0; i < o.count; ++i) {
      const auto seed = static_cast<std::uint64_t>(o.seed) + static_cast<std::uint64_t>(i);
      const auto r = kinetic_inequality_report(random_state(c.basis, modes, seed).to_wavefunction(), c.boundary.bc, q);
      if (!r.holds) ++violations;
      s << i << ',' << seed << ',' << num(r.lhs) << ',' << num(r.rhs) << ',' << num(r.slack) << ',' << (r.holds ? 1 : 0) << '\n';
    }
    write_atomic(c.out / "uncertainty_sweep.csv", s.str());
    std::cout << "uncertainty sweep: " << violations << " violations in " << o.count << " states\n";
  }
  if (o.states.empty() && !o.sweep) throw ConfigurationError("uncertainty needs --state or --sweep");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  // --config is read first so that flags can override it.
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--config") {
      try {
        load_config(argv[i + 1], o);
      } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
      }
    }
  }
  std::string config_path;
  CLI::App app{"Particle in a box with Robin walls: spectra, momentum measurements, packets, Ehrenfest and uncertainty checks"};
  app.require_subcommand(1);
  auto global = [&](CLI::App* a) {
    a->add_option("--m", o.m, "Mass");
    a->add_option("--L", o.L, "Box length");
    a->add_option("--bc", o.bc, "dirichlet | neumann | mixed | symmetric | antisymmetric | general");
    a->add_option("--gamma", o.gamma, "Robin parameter for symmetric/antisymmetric");
    a->add_option("--gamma-plus", o.gamma_plus, "gamma_+ for general (inf = Dirichlet)");
    a->add_option("--gamma-minus", o.gamma_minus, "gamma_- for general (inf = Dirichlet)");
    a->add_option("--theta", o.theta, "Momentum extension angle in [0, pi)");
    a->add_option("--lambda-plus", o.lambda_plus, "Imaginary part of lambda_+");
    a->add_option("--lambda-minus", o.lambda_minus, "Imaginary part of lambda_-");
    a->add_option("--out-dir", o.out_dir, "Output directory");
    a->add_option("--config", config_path, "JSON config; flags override it");
    a->add_option("--seed", o.seed, "Base seed for random sweeps");
  };
  auto* spectrum = app.add_subcommand("spectrum", "Energy levels and optional eigenfunction samples");
  global(spectrum);
  spectrum->add_option("--levels", o.levels, "Number of levels");
  spectrum->add_option("--samples", o.samples, "Eigenfunction sample points per level (0 = none)");

  auto* measure = app.add_subcommand("measure", "Momentum measurement distribution");
  global(measure);
  measure->add_option("--state", o.states, "State spec");
  measure->add_option("--levels", o.levels, "Basis size for random states");
  measure->add_option("--n-max", o.n_max, "Listed momentum indices -n..n");
  measure->add_option("--k-max", o.k_max, "Dense density range [-k, k]");
  measure->add_option("--dense-points", o.dense_points, "Dense density points (0 = none)");

  auto* ev = app.add_subcommand("evolve", "Time evolution series and snapshots");
  global(ev);
  ev->add_option("--state", o.states, "State spec");
  ev->add_option("--levels", o.levels, "Basis size for projected states");
  ev->add_option("--times", o.times, "Comma list of times; T denotes the revival time (T/4, 0.5T)");
  ev->add_option("--steps", o.steps, "Uniform steps on [0, t-end] when --times is absent");
  ev->add_option("--t-end", o.t_end, "End of the uniform grid");
  ev->add_option("--samples", o.samples, "Snapshot sample points");
  ev->add_option("--k-max", o.k_max, "Momentum snapshot range [-k, k]");
  ev->add_option("--dense-points", o.dense_points, "Momentum snapshot points (0 = none)");

  auto* eh = app.add_subcommand("ehrenfest", "Ehrenfest residuals over a time grid");
  global(eh);
  eh->add_option("--state", o.states, "State spec");
  eh->add_option("--levels", o.levels, "Basis size for projected states");
  eh->add_option("--times", o.times, "Comma list of times");
  eh->add_option("--steps", o.steps, "Uniform steps on [0, t-end]");
  eh->add_option("--t-end", o.t_end, "End of the uniform grid");

  auto* un = app.add_subcommand("uncertainty", "Kinetic-energy inequality reports");
  global(un);
  un->add_option("--state", o.states, "State spec (repeatable)");
  un->add_option("--levels", o.levels, "Basis size for random states");
  un->add_flag("--sweep", o.sweep, "Random 8-mode states in the selected basis");
  un->add_option("--count", o.count, "Sweep size");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    if (*spectrum) return cmd_spectrum(o);
    if (*measure) return cmd_measure(o);
    if (*ev) return cmd_evolve(o);
    if (*eh) return cmd_ehrenfest(o);
    if (*un) return cmd_uncertainty(o);
  } catch (const ConfigurationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const ParameterError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return 3;
  }
  return 2;
}
