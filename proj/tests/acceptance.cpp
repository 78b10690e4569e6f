// Runs every primary acceptance criterion at its stated tolerance and prints
// one PASS/FAIL line each. Exit status is the number of failures (capped).
//
// usage: acceptance <path-to-robinbox-cli> <scratch-dir>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "robinbox/robinbox.hpp"

using namespace robinbox;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

int failures = 0;

void run(const std::string& name, const std::function<Outcome()>& check) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = check();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.pass) ++failures;
  std::cout << (o.pass ? "PASS " : "FAIL ") << name << " | " << o.detail << " | " << fmt(secs) << " s" << std::endl;
}

double l2_distance(const WaveFunction& a, const WaveFunction& b, const Quadrature& q) {
  return std::sqrt(q.integrate([&](double x) { return std::norm(a(x) - b(x)); }));
}

std::string cli_path;
fs::path scratch;

Outcome dirichlet_spectrum_ratios() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto b = dirichlet_spectrum(BoxConfig(1.0, 1.0), 10);
  double worst = 0.0;
  for (std::size_t l = 0; l <= 10; ++l) {
    const double r = b.levels[l].energy / b.levels[0].energy;
    const double e = double((l + 1) * (l + 1));
    worst = std::max(worst, std::abs(r - e) / e);
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {worst <= 1e-12 && secs < 1.0, "max rel err " + fmt(worst) + " (tol 1e-12), " + fmt(secs) + " s (< 1 s)"};
}

Outcome symmetric_counting() {
  const BoxConfig box(1.0, 1.0);
  const double L = box.L();
  const std::vector<std::pair<double, int>> cases = {{-5.0, 2}, {-2.5, 2}, {-1.0, 1}, {0.0, 0}, {1.0, 0}};
  std::string counts;
  bool ok = true;
  for (auto [gl, expected] : cases) {
    const auto b = symmetric_robin_spectrum(box, gl / L, 6);
    int neg = 0;
    for (const auto& lv : b.levels) neg += lv.kind == LevelKind::negative;
    counts += (counts.empty() ? "" : ",") + std::to_string(neg);
    ok = ok && neg == expected;
  }
  const Quadrature q(box);
  double worst = 0.0;
  for (auto [g, closed] : {std::pair{0.0, constant_state(box)}, std::pair{-2.0 / L, linear_zero_state(box)}}) {
    const auto b = symmetric_robin_spectrum(box, g, 6);
    bool found = false;
    for (std::size_t l = 0; l < b.size(); ++l) {
      if (b.levels[l].kind != LevelKind::zero) continue;
      found = true;
      worst = std::max(worst, l2_distance(b.wavefunction(l), closed, q));
    }
    ok = ok && found;
  }
  ok = ok && worst <= 1e-9;
  return {ok, "negative counts {" + counts + "} (want {2,2,1,0,0}), zero-mode L2 err " + fmt(worst) + " (tol 1e-9)"};
}

Outcome antisymmetric_family() {
  const BoxConfig box(1.3, 1.0);
  const double m = box.m();
  std::vector<EnergyBasis> bases;
  for (double g : {0.5, 1.0, 2.0, -3.0}) bases.push_back(antisymmetric_robin_spectrum(box, g, 8));
  double spread = 0.0;
  double neg_err = 0.0;
  for (const auto& b : bases) {
    std::vector<double> pos;
    for (const auto& lv : b.levels)
      if (lv.kind == LevelKind::positive) pos.push_back(lv.energy);
    std::vector<double> ref;
    for (const auto& lv : bases[0].levels)
      if (lv.kind == LevelKind::positive) ref.push_back(lv.energy);
    for (std::size_t i = 0; i < std::min(pos.size(), ref.size()); ++i) spread = std::max(spread, std::abs(pos[i] - ref[i]) / ref[i]);
  }
  for (double g : {0.5, 1.0, 2.0, -3.0}) {
    const auto b = antisymmetric_robin_spectrum(box, g, 3);
    neg_err = std::max(neg_err, std::abs(b.levels[0].energy + g * g / (2.0 * m)) / (g * g / (2.0 * m)));
  }
  double norm_err = 0.0;
  const Quadrature q(box);
  for (double g : {0.5, 1.0, 2.0, -3.0}) norm_err = std::max(norm_err, std::abs(norm_squared(decaying_state(box, g), q) - 1.0));
  const bool ok = spread <= 1e-12 && neg_err <= 1e-12 && norm_err <= 1e-12;
  return {ok, "positive-level spread " + fmt(spread) + ", negative-level err " + fmt(neg_err) + ", eq13 norm err " + fmt(norm_err) + " (tol 1e-12)"};
}

Outcome momentum_measurement() {
  const BoxConfig box(1.0, 1.0);
  const MomentumExtension ext;
  const auto d4 = momentum_distribution(dirichlet_state(box, 4), ext, -10000, 10000);
  const double p4 = std::max(std::abs(d4.probability(4) - 0.25), std::abs(d4.probability(-4) - 0.25));
  const double mass = std::abs(d4.listed_mass() - 1.0);
  const auto d1 = momentum_distribution(linear_zero_state(box), ext, -64, 64);
  double lz = std::abs(d1.probability(0));
  for (int n : {-1, 1}) lz = std::max(lz, std::abs(d1.probability(n) - 24.0 / std::pow(pi, 4)));
  for (int n : {-2, 2}) lz = std::max(lz, std::abs(d1.probability(n) - 6.0 / (4.0 * pi * pi)));
  const bool ok = p4 <= 1e-12 && mass <= 1e-6 && lz <= 1e-10;
  return {ok, "P(+-4) err " + fmt(p4) + " (tol 1e-12), |n|<=1e4 mass err " + fmt(mass) + " (tol 1e-6), linear-zero err " + fmt(lz) + " (tol 1e-10)"};
}

Outcome pR_squared() {
  const BoxConfig box(1.0, 1.3);
  const double L = box.L();
  const Quadrature q(box);
  const MomentumExtension ext;
  double worst = 0.0;
  for (int l = 1; l <= 6; ++l) {
    const auto r = expval_pR_squared(dirichlet_state(box, l), ext, q);
    const double expected = pi * pi * l * l / (L * L);
    worst = r.infinite ? INFINITY : std::max(worst, std::abs(r.value - expected) / expected);
  }
  const bool inf_lz = expval_pR_squared(linear_zero_state(box), ext, q).infinite;
  const bool inf_c = expval_pR_squared(constant_state(box), ext, q).infinite;
  return {worst <= 1e-8 && inf_lz && inf_c, "dirichlet rel err " + fmt(worst) + " (tol 1e-8), linear-zero " + (inf_lz ? "inf" : "finite") +
                                                 ", constant " + (inf_c ? "inf" : "finite")};
}

Outcome momentum_identity() {
  const auto t0 = std::chrono::steady_clock::now();
  const BoxConfig box(1.0, 1.0);
  const double L = box.L();
  const Quadrature q(box);
  std::vector<std::shared_ptr<const EnergyBasis>> bases = {
      std::make_shared<const EnergyBasis>(dirichlet_spectrum(box, 12)), std::make_shared<const EnergyBasis>(neumann_spectrum(box, 12)),
      std::make_shared<const EnergyBasis>(symmetric_robin_spectrum(box, 1.0 / L, 12)),
      std::make_shared<const EnergyBasis>(antisymmetric_robin_spectrum(box, 1.0 / L, 12))};
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto f = random_state(bases[static_cast<std::size_t>(i % 4)], 10, 4000 + static_cast<std::uint64_t>(i)).to_wavefunction();
    worst = std::max(worst, momentum_identity_residual(f, q));
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {worst <= 1e-9 && secs < 30.0, "max residual " + fmt(worst) + " (tol 1e-9), " + fmt(secs) + " s (< 30 s)"};
}

struct SweepResult {
  double r1_packet = 0.0, r2_packet = 0.0, cont_packet = 0.0;
  double r1_random = 0.0, r2_random = 0.0, cont_random = 0.0;
  double k_c = 0.0;
};

const SweepResult& ehrenfest_sweep() {
  static const SweepResult result = [] {
    SweepResult s;
    const BoxConfig box(1.0, 1.0);
    const double L = box.L();
    const auto spec = GaussianPacketSpec::single(L / 20.0, 41.0 * pi / L);
    s.k_c = spec.k_c;
    const EhrenfestAnalyzer an(gaussian_coefficients(spec, box, WrapKind::dirichlet));
    const double T = box.revival_time();
    for (int i = 0; i < 20; ++i) {
      const auto r = an.report(T * i / 20.0);
      s.r1_packet = std::max(s.r1_packet, r.residual1);
      s.r2_packet = std::max(s.r2_packet, r.residual2);
      s.cont_packet = std::max(s.cont_packet, r.continuity_residual);
    }
    std::vector<std::shared_ptr<const EnergyBasis>> bases = {
        std::make_shared<const EnergyBasis>(symmetric_robin_spectrum(box, 1.0 / L, 12)),
        std::make_shared<const EnergyBasis>(symmetric_robin_spectrum(box, -3.0 / L, 12)),
        std::make_shared<const EnergyBasis>(antisymmetric_robin_spectrum(box, 1.0 / L, 12)),
        std::make_shared<const EnergyBasis>(general_robin_spectrum(box, 2.0 / L, -0.5 / L, 12))};
    for (int i = 0; i < 100; ++i) {
      EvolvingState st{random_state(bases[static_cast<std::size_t>(i % 4)], 10, 7000 + static_cast<std::uint64_t>(i)), 0.0};
      const auto r = ehrenfest_report(st, T * (i % 20) / 20.0);
      s.r1_random = std::max(s.r1_random, r.residual1);
      s.r2_random = std::max(s.r2_random, r.residual2);
      s.cont_random = std::max(s.cont_random, r.continuity_residual);
    }
    return s;
  }();
  return result;
}

Outcome ehrenfest_first() {
  const auto& s = ehrenfest_sweep();
  const bool ok = s.r1_packet <= 1e-8 * s.k_c && s.r1_random <= 1e-7;
  return {ok, "packet max |m dx/dt - pR| " + fmt(s.r1_packet) + " (tol " + fmt(1e-8 * s.k_c) + "), random Robin max " + fmt(s.r1_random) +
                  " (tol 1e-7)"};
}

Outcome ehrenfest_second() {
  const auto& s = ehrenfest_sweep();
  const double r2 = std::max(s.r2_packet, s.r2_random);
  const double c = std::max(s.cont_packet, s.cont_random);
  return {r2 <= 1e-5 && c <= 1e-6, "max |dpR/dt - bracket| " + fmt(r2) + " (tol 1e-5), dpI triple spread " + fmt(c) + " (tol 1e-6)"};
}

Outcome revivals() {
  const BoxConfig box(1.0, 1.0);
  const double L = box.L();
  const double T = box.revival_time();
  const Quadrature q(box);
  const auto spec = GaussianPacketSpec::single(L / 20.0, 41.0 * pi / L);
  double full = 1.0, mirror = 0.0, pr = 0.0;
  for (WrapKind kind : {WrapKind::dirichlet, WrapKind::neumann}) {
    const auto s = gaussian_coefficients(spec, box, kind);
    full = std::min(full, revival_fidelity(s, T, q).overlap);
    mirror = std::max(mirror, revival_fidelity(s, 0.5 * T, q).density_distance);
    const EhrenfestAnalyzer an(s);
    pr = std::max(pr, std::abs(an.pR(0.5 * T) + an.pR(0.0)));
  }
  const double mixed = revival_fidelity(gaussian_coefficients(spec, box, WrapKind::mixed), 0.5 * T, q).overlap;
  GaussianPacketSpec pair = spec;
  pair.components = {{cplx{1.0, -1.0}, spec.k_c}, {cplx{-1.0, -1.0}, -spec.k_c}};
  const auto evolved = evolve(gaussian_coefficients(spec, box, WrapKind::dirichlet), 0.25 * T).wavefunction();
  const double quarter = l2_distance(evolved, wrap(pair, box, WrapKind::dirichlet, 0.0).state, q);
  const bool ok = full >= 1.0 - 1e-10 && mirror <= 1e-8 && pr <= 1e-8 * spec.k_c && mixed >= 1.0 - 1e-10 && quarter <= 1e-6;
  return {ok, "1-overlap(T) " + fmt(1.0 - full) + " (tol 1e-10), mirror density dist " + fmt(mirror) + " (tol 1e-8), |pR(T/2)+pR(0)| " +
                  fmt(pr) + " (tol " + fmt(1e-8 * spec.k_c) + "), mixed 1-overlap(T/2) " + fmt(1.0 - mixed) + " (tol 1e-10), T/4 L2 " +
                  fmt(quarter) + " (tol 1e-6)"};
}

Outcome uncertainty() {
  const BoxConfig box(1.0, 1.0);
  const double L = box.L();
  const Quadrature q(box);
  const cplx I{0.0, 1.0};
  double comm = 0.0;
  for (const auto& f : {dirichlet_state(box, 1), linear_zero_state(box), decaying_state(box, 1.0 / L)})
    comm = std::max(comm, std::abs(commutator_expectation_x_pR(f, q) - I));
  std::vector<std::shared_ptr<const EnergyBasis>> bases;
  for (double gl : {-3.0, -1.0, 0.0, 1.0, 3.0}) bases.push_back(std::make_shared<const EnergyBasis>(symmetric_robin_spectrum(box, gl / L, 12)));
  double min_slack = INFINITY;
  for (int i = 0; i < 50; ++i) {
    const auto& b = bases[static_cast<std::size_t>(i % 5)];
    const auto f = random_state(b, 8, 9000 + static_cast<std::uint64_t>(i)).to_wavefunction();
    comm = std::max(comm, std::abs(commutator_expectation_x_pR(f, q) - I));
    min_slack = std::min(min_slack, kinetic_inequality_report(f, b->bc, q).slack);
  }
  // Every level of several families, negative- and zero-energy ones included.
  for (const auto& b : {symmetric_robin_spectrum(box, -5.0 / L, 5), symmetric_robin_spectrum(box, -2.0 / L, 5), symmetric_robin_spectrum(box, 0.0, 5),
                        antisymmetric_robin_spectrum(box, 2.0 / L, 5), general_robin_spectrum(box, -4.0 / L, 1.0 / L, 5)})
    for (std::size_t l = 0; l < b.size(); ++l) min_slack = std::min(min_slack, kinetic_inequality_report(b.wavefunction(l), b.bc, q).slack);
  const auto e13 = kinetic_inequality_report(decaying_state(box, 1.0 / L), RobinBC::antisymmetric(1.0 / L), q);
  const auto p1 = kinetic_inequality_report(linear_zero_state(box), RobinBC::symmetric(-2.0 / L), q);
  min_slack = std::min({min_slack, e13.slack, p1.slack});
  const double e13_err = std::max(std::abs(e13.pR), std::abs(e13.anticomm));
  const double dx2_err = std::abs(p1.delta_x * p1.delta_x - 3.0 * L * L / 20.0);
  const bool ok = comm <= 1e-8 && min_slack >= -1e-10 && e13_err <= 1e-9 && std::abs(p1.anticomm) <= 1e-9 && dx2_err <= 1e-12;
  return {ok, "max |<[x,pR]> - i| " + fmt(comm) + " (tol 1e-8), min slack " + fmt(min_slack) + " (>= -1e-10), eq13 pR/anticomm " + fmt(e13_err) +
                  " (tol 1e-9), psi1 anticomm " + fmt(std::abs(p1.anticomm)) + " (tol 1e-9), psi1 dx^2 err " + fmt(dx2_err) + " (tol 1e-12)"};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism() {
  const fs::path cfg = scratch / "det_config.json";
  {
    std::ofstream out(cfg);
    out << R"({"m": 1, "L": 1, "bc": "dirichlet", "state": "gaussian:0.05,41pi", "times": "0,T/8,T/4,T/2,T", "n-max": 256})" << '\n';
  }
  const std::vector<std::string> commands = {"spectrum --levels 12 --samples 33", "measure", "evolve", "ehrenfest",
                                             "uncertainty --bc symmetric --gamma 1 --state random:8,3 --sweep --count 20"};
  std::size_t compared = 0;
  for (int run_id = 0; run_id < 2; ++run_id) {
    for (std::size_t c = 0; c < commands.size(); ++c) {
      const fs::path dir = scratch / ("run" + std::to_string(run_id)) / std::to_string(c);
      fs::remove_all(dir);
      const std::string cmd = "\"" + cli_path + "\" " + commands[c].substr(0, commands[c].find(' ')) + " --config \"" + cfg.string() + "\"" +
                              (commands[c].find(' ') == std::string::npos ? "" : commands[c].substr(commands[c].find(' '))) + " --out-dir \"" +
                              dir.string() + "\" > /dev/null";
      if (std::system(cmd.c_str()) != 0) return {false, "command failed: " + cmd};
    }
  }
  for (const auto& e : fs::recursive_directory_iterator(scratch / "run0")) {
    if (!e.is_regular_file()) continue;
    const fs::path rel = fs::relative(e.path(), scratch / "run0");
    const fs::path other = scratch / "run1" / rel;
    if (!fs::exists(other) || slurp(e.path()) != slurp(other)) return {false, "differs: " + rel.string()};
    ++compared;
  }
  return {compared > 10, std::to_string(compared) + " output files byte-identical across two runs"};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::cerr << "usage: acceptance <robinbox-cli> <scratch-dir>\n";
    return 2;
  }
  cli_path = argv[1];
  scratch = argv[2];
  fs::create_directories(scratch);

  run("Dirichlet spectrum ratios", dirichlet_spectrum_ratios);
  run("Symmetric negative-level counting and zero modes", symmetric_counting);
  run("Antisymmetric family", antisymmetric_family);
  run("Momentum measurement", momentum_measurement);
  run("<p_R^2>", pR_squared);
  run("Momentum identity", momentum_identity);
  run("Ehrenfest I", ehrenfest_first);
  run("Ehrenfest II", ehrenfest_second);
  run("Revivals", revivals);
  run("Uncertainty", uncertainty);
  run("Determinism", determinism);
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return std::min(failures, 100);
}
