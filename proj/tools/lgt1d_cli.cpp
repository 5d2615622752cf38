#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lgt1d/anneal.hpp"
#include "lgt1d/circuit.hpp"
#include "lgt1d/evolution.hpp"
#include "lgt1d/model.hpp"
#include "lgt1d/sector.hpp"

#ifndef LGT1D_VERSION
#define LGT1D_VERSION "dev"
#endif

namespace fs = std::filesystem;
using nlohmann::json;
using namespace lgt1d;

namespace {

enum Exit { kOk = 0, kConfig = 2, kSolver = 3, kIo = 4 };

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.7g", v);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Model flags shared by every physics command. Flags override the config file.
struct ModelFlags {
  std::string config;
  std::optional<int> nc, nf, l;
  std::optional<double> m, g, g2, mu_b, mu_i, h;
  std::vector<double> masses;

  void attach(CLI::App* app, double default_h, int default_nf = 1) {
    h_default = default_h;
    nf_default = default_nf;
    app->set_help_flag("--help", "Print this help message and exit");
    app->add_option("--config", config, "JSON model config");
    app->add_option("--nc", nc, "number of colors");
    app->add_option("--nf", nf, "number of flavors");
    app->add_option("--l", l, "number of spatial sites");
    app->add_option("--m", m, "uniform quark mass");
    app->add_option("--masses", masses, "per-flavor masses")->delimiter(',');
    app->add_option("--g", g, "gauge coupling");
    app->add_option("--g2", g2, "squared gauge coupling; must agree with --g if both are given");
    app->add_option("--mu-b", mu_b, "baryon chemical potential");
    app->add_option("--mu-i", mu_i, "isospin chemical potential");
    app->add_option("--h", h, "color-singlet penalty strength");
  }

  ModelParams resolve() const {
    ModelParams p;
    try {
      if (!config.empty()) p = parse_config(read_file(config));
      else p.h = h_default, p.nf = nf_default;
      if (nc) p.nc = *nc;
      if (nf) p.nf = *nf;
      if (l) p.L = *l;
      if (!masses.empty()) {
        if (m) throw ConfigError("--m and --masses are exclusive");
        p.masses = masses;
      } else if (m || nf || config.empty()) {
        p.masses.assign(p.nf, m.value_or(p.masses.empty() ? 1.0 : p.masses.front()));
      }
      if (g2) {
        if (*g2 < 0) throw ConfigError("--g2 must be nonnegative");
        if (g && std::abs(*g * *g - *g2) > 1e-12 * std::max(1.0, *g2))
          throw ConfigError("--g and --g2 disagree");
        p.g = std::sqrt(*g2);
      } else if (g) {
        p.g = *g;
      }
      if (mu_b) p.mu_b = *mu_b;
      if (mu_i) p.mu_i = *mu_i;
      if (h) p.h = *h;
      p.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("config: ") + e.what());
    }
    return p;
  }

  double h_default = 0;
  int nf_default = 1;
};

struct Run {
  std::string command;
  std::vector<std::string> argv;
  fs::path out_dir = ".";
  json manifest;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  fs::path write(const std::string& name, const std::string& content) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    const fs::path path = out_dir / name;
    std::ofstream out(path);
    if (!out || !(out << content)) throw IoError("cannot write " + path.string());
    manifest["outputs"].push_back(path.string());
    return path;
  }

  void finish() {
    manifest["command"] = command;
    manifest["argv"] = argv;
    manifest["version"] = LGT1D_VERSION;
    manifest["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const fs::path path = out_dir / (command + "_manifest.json");
    std::ofstream out(path);
    if (!out || !(out << manifest.dump(2) << '\n')) throw IoError("cannot write " + path.string());
  }
};

// "vacuum", "bbbar", "pair:F:C", or a bit string with qubit 0 rightmost.
Bits parse_state(const ModelParams& p, const std::string& s) {
  const Bits vac = trivial_vacuum(p);
  if (s == "vacuum") return vac;
  if (s == "bbbar") {
    if (p.L < 1) throw ConfigError("bbbar needs a spatial site");
    Bits b = vac;
    for (int n = 0; n < 2; ++n)
      for (int f = 0; f < p.nf; ++f)
        for (int c = 0; c < p.nc; ++c) b ^= Bits{1} << p.qubit(n, f, c);
    return b;
  }
  if (s.rfind("pair:", 0) == 0) {
    int f = 0, c = 0;
    if (std::sscanf(s.c_str(), "pair:%d:%d", &f, &c) != 2 || f < 0 || f >= p.nf || c < 0 || c >= p.nc)
      throw ConfigError("bad pair state " + s);
    return vac ^ (Bits{1} << p.qubit(0, f, c)) ^ (Bits{1} << p.qubit(1, f, c));
  }
  if (static_cast<int>(s.size()) != p.nqubits() || s.find_first_not_of("01") != std::string::npos)
    throw ConfigError("state must be a keyword or a bit string of length " + std::to_string(p.nqubits()));
  Bits b = 0;
  for (char ch : s) b = (b << 1) | Bits(ch - '0');
  return b;
}

std::string bits_string(Bits b, int n) {
  std::string s(n, '0');
  for (int q = 0; q < n; ++q)
    if ((b >> q) & 1) s[n - 1 - q] = '1';
  return s;
}

TrotterOptions parse_order(const std::string& order) {
  TrotterOptions o;
  if (order.empty()) return o;
  o.order.clear();
  std::stringstream ss(order);
  std::string item;
  try {
    while (std::getline(ss, item, ',')) o.order.push_back(parse_term(item));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return o;
}

std::vector<double> time_grid(double t_max, double dt) {
  if (!(dt > 0) || !(t_max >= 0) || !std::isfinite(t_max)) throw ConfigError("invalid time grid");
  std::vector<double> t;
  const long n = std::lround(std::floor(t_max / dt + 1e-9));
  if (n > 1000000) throw ConfigError("time grid too large");
  for (long i = 0; i <= n; ++i) t.push_back(i * dt);
  return t;
}

// ---------------------------------------------------------------- commands

void cmd_spectrum(Run& run, const ModelParams& p, int k, bool baryons) {
  HadronOptions opt;
  opt.baryons = baryons;
  opt.spectrum.k = k;
  const HadronTable t = hadron_spectrum(p, opt);
  run.write("spectrum.json", hadron_table_json(p, t) + "\n");
  std::ostringstream csv;
  csv << "state,energy,mass,isospin2,color_casimir,linear_entropy,occupation,e_mass,e_kin,e_el\n";
  auto row = [&](const char* name, const SectorState& s) {
    csv << name << ',' << num(s.energy) << ',' << num(s.energy - t.E_vac) << ',' << num(s.isospin2) << ','
        << num(s.color_casimir) << ',' << num(s.entropy) << ',' << num(s.occupation) << ',' << num(s.parts.mass)
        << ',' << num(s.parts.kin) << ',' << num(s.parts.el) << '\n';
  };
  row("vacuum", t.vacuum);
  row("sigma", t.sigma);
  if (t.has_isospin) row("pi", t.pi);
  if (baryons) row("delta", t.delta);
  if (t.has_deltadelta) row("deltadelta", t.deltadelta);
  run.write("spectrum_states.csv", csv.str());
  std::cout << "E_vac " << num(t.E_vac) << "\nM_sigma " << num(t.M_sigma) << '\n';
  if (t.has_isospin) std::cout << "M_pi " << num(t.M_pi) << '\n';
  if (baryons) std::cout << "M_Delta " << num(t.M_Delta) << '\n';
  if (t.has_deltadelta) std::cout << "B_DeltaDelta " << num(t.B_DeltaDelta) << '\n';
}

void cmd_evolve(Run& run, const ModelParams& p, const std::string& source, const std::vector<std::string>& targets,
                double t_max, double dt, const std::vector<int>& steps, bool exact, bool parts,
                const std::string& order) {
  for (int n : steps)
    if (n < 1) throw ConfigError("step counts must be positive");
  const Bits src = parse_state(p, source);
  const TrotterOptions opt = parse_order(order);
  const std::vector<double> grid = time_grid(t_max, dt);
  const SectorPropagator prop(p, enumerate_sector(p, sector_of(p, src)), opt);
  const Hamiltonian H = build_hamiltonian(p);
  for (const auto& name : targets) {
    const Bits tgt = parse_state(p, name);
    if (prop.basis().index_of(tgt) < 0) throw ConfigError("target " + name + " lies outside the source sector");
    const TransitionCurve curve(prop, src, tgt);
    std::ostringstream csv;
    csv << "t";
    if (exact) csv << ",exact";
    for (int n : steps) csv << ",trotter_" << n;
    csv << '\n';
    for (double t : grid) {
      csv << num(t);
      if (exact) csv << ',' << num(curve.exact(t));
      for (int n : steps) csv << ',' << num(curve.trotter(t, n));
      csv << '\n';
    }
    run.write("evolve_" + bits_string(tgt, p.nqubits()) + ".csv", csv.str());
    run.manifest["targets"].push_back({{"name", name}, {"bits", bits_string(tgt, p.nqubits())}});
  }
  if (parts) {
    std::ostringstream csv;
    csv << "t,mass,kinetic,electric,total\n";
    const Eigen::VectorXcd v0 = prop.unit(src);
    for (double t : grid) {
      const EnergyParts e = energy_parts(H, prop.basis(), prop.exact(v0, t));
      csv << num(t) << ',' << num(e.mass) << ',' << num(e.kin) << ',' << num(e.el) << ',' << num(e.total()) << '\n';
    }
    run.write("evolve_energy_parts.csv", csv.str());
  }
}

void cmd_resources(Run& run, int nc, int nf, int L, const std::string& circuit_out) {
  if (nc < 2 || nf < 1 || L < 1) throw ConfigError("need nc >= 2, nf >= 1, l >= 1");
  const ResourceReport closed = resource_count_closed_form(nc, nf, L);
  const ResourceReport built = resource_count_constructed(nc, nf, L);
  run.write("resources.json", resource_report_json(nc, nf, L, closed, built) + "\n");
  std::cout << "cnot " << closed.total().cnot << "\nagree " << (closed == built ? "true" : "false") << '\n';
  if (!circuit_out.empty()) {
    const ModelParams p = make_params(nc, nf, L, 1.0, 1.0);
    run.write(circuit_out, circuit_to_text(trotter_step_circuit(p, 1.0)));
  }
  if (!(closed == built)) throw std::runtime_error("closed-form and constructed counts disagree");
}

std::vector<std::pair<double, double>> read_pairs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path);
  std::vector<std::pair<double, double>> pts;
  std::string line;
  while (std::getline(in, line)) {
    for (char& ch : line)
      if (ch == ',') ch = ' ';
    std::istringstream ls(line);
    double a, b;
    if (ls >> a >> b) pts.emplace_back(a, b);
  }
  return pts;
}

std::string fit_json(const QuadraticFit& f) {
  json j{{"a", f.a}, {"b", f.b}, {"c", f.c}, {"a_half_width", f.a_half}, {"b_half_width", f.b_half},
         {"c_half_width", f.c_half}, {"points", f.points}, {"confidence", 0.95}};
  return j.dump(2) + "\n";
}

void cmd_trotter_scaling(Run& run, const ModelParams& p, const std::string& source, const std::string& target,
                         double t_max, const TrotterCriterion& crit, const std::string& order,
                         const std::string& fit_input, double fit_tmin) {
  std::vector<std::pair<double, double>> pts;
  if (!fit_input.empty()) {
    pts = read_pairs(fit_input);
  } else {
    const Bits src = parse_state(p, source), tgt = parse_state(p, target);
    const SectorPropagator prop(p, enumerate_sector(p, sector_of(p, src)), parse_order(order));
    if (prop.basis().index_of(tgt) < 0) throw ConfigError("target lies outside the source sector");
    const TransitionCurve curve(prop, src, tgt);
    const TrotterReport rep = trotter_scaling(curve, time_grid(t_max, crit.grid), crit);
    std::ostringstream csv;
    csv << "t,steps\n";
    for (std::size_t i = 0; i < rep.t.size(); ++i) {
      csv << num(rep.t[i]) << ',' << rep.steps[i] << '\n';
      pts.emplace_back(rep.t[i], rep.steps[i]);
    }
    run.write("trotter_scaling.csv", csv.str());
  }
  const QuadraticFit f = fit_quadratic(pts, fit_tmin);
  run.write("trotter_fit.json", fit_json(f));
  std::cout << "a " << num(f.a) << " +- " << num(f.a_half) << "\nb " << num(f.b) << " +- " << num(f.b_half)
            << "\nc " << num(f.c) << " +- " << num(f.c_half) << '\n';
}

void cmd_mitigate(Run& run, const std::string& input, double floor) {
  std::ifstream in(input);
  if (!in) throw IoError("cannot read " + input);
  std::ostringstream csv;
  csv << "t,p_phys,p_mit,p_pred\n";
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) {
    for (char& ch : line)
      if (ch == ',') ch = ' ';
    std::istringstream ls(line);
    double t, phys, mit;
    if (!(ls >> t >> phys >> mit)) continue;
    double pred = 0;
    try {
      pred = mitigate_depolarizing(phys, mit, floor);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    csv << num(t) << ',' << num(phys) << ',' << num(mit) << ',' << num(pred) << '\n';
    ++rows;
  }
  if (rows == 0) throw ConfigError("no data rows in " + input);
  run.write("mitigated.csv", csv.str());
}

struct AnnealFlags {
  ZoomConfig zoom;
  std::string sampler = "exhaustive";
  std::string eta_schedule = "iteration";
  int states = 1;
  std::vector<double> eta_excited{5.0};
  bool export_qubo = false;
};

void cmd_anneal(Run& run, const ModelParams& p, AnnealFlags a) {
  if (a.sampler == "exhaustive") a.zoom.sampler.kind = SamplerKind::Exhaustive;
  else if (a.sampler == "annealing") a.zoom.sampler.kind = SamplerKind::Annealing;
  else throw ConfigError("sampler must be exhaustive or annealing");
  if (a.eta_schedule == "iteration") a.zoom.eta_schedule = EtaSchedule::PerIteration;
  else if (a.eta_schedule == "step") a.zoom.eta_schedule = EtaSchedule::PerStep;
  else throw ConfigError("eta schedule must be iteration or step");
  if (a.states < 1) throw ConfigError("--states must be positive");

  const SectorBasis basis = enumerate_sector(p, SectorKey::baryon(p.nc, 0, p.nf >= 2 ? std::optional<int>(0) : std::nullopt));
  const ProjectedHamiltonian hp = project_hamiltonian(p, basis);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hp.h);
  if (a.export_qubo) {
    ZoomState z0{Eigen::VectorXd::Zero(hp.dim()), 0, a.zoom.eta0, a.zoom.K};
    run.write("qubo_z0.txt", qubo_triplets(build_qubo(hp, z0)));
  }
  json summary{{"dimension", hp.dim()}, {"states", json::array()}};
  Eigen::MatrixXd found(hp.dim(), 0);
  for (int s = 0; s < a.states; ++s) {
    ZoomConfig cfg = a.zoom;
    if (s > 0) cfg.eta0 = a.eta_excited[std::min<std::size_t>(s - 1, a.eta_excited.size() - 1)];
    const ProjectedHamiltonian target = s == 0 ? hp : deflate(hp, found);
    const ZoomResult r = zoom_iterate(target, cfg);
    run.write("anneal_state" + std::to_string(s) + ".csv", trajectory_csv(r));
    Eigen::VectorXd v = r.coefficients;
    if (found.cols() > 0) v -= found * (found.transpose() * v);
    v.normalize();
    double best_overlap = 0;
    int nearest = 0;
    for (int k = 0; k < std::min<int>(hp.dim(), a.states + 2); ++k) {
      const double o = std::pow(es.eigenvectors().col(k).dot(v), 2);
      if (o > best_overlap) best_overlap = o, nearest = k;
    }
    summary["states"].push_back({{"energy", r.energy},
                                 {"iteration_energy", r.iteration_energy},
                                 {"nearest_exact_level", nearest},
                                 {"exact_energy", es.eigenvalues()(nearest)},
                                 {"infidelity", 1.0 - best_overlap},
                                 {"diverged", r.diverged}});
    std::cout << "state " << s << " energy " << num(r.energy) << " exact " << num(es.eigenvalues()(nearest))
              << " infidelity " << num(1.0 - best_overlap) << '\n';
    found.conservativeResize(Eigen::NoChange, found.cols() + 1);
    found.col(found.cols() - 1) = v;
  }
  run.manifest["seeds"] = {{"sampler", a.zoom.sampler.seed}};
  run.write("anneal_summary.json", summary.dump(2) + "\n");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lattice gauge theory toolkit: spectra, dynamics, circuits and annealing in 1+1D"};
  app.require_subcommand(1);
  app.set_version_flag("--version", LGT1D_VERSION);
  std::string out_dir = ".";
  app.add_option("--out", out_dir, "output directory")->capture_default_str();

  ModelFlags spec_model, evo_model, ts_model, an_model;

  auto* spectrum = app.add_subcommand("spectrum", "hadron spectrum and state properties");
  spec_model.attach(spectrum, 2.0);
  int k = 8;
  bool no_baryons = false;
  spectrum->add_option("--k", k, "eigenpairs per sector search")->capture_default_str();
  spectrum->add_flag("--no-baryons", no_baryons, "skip the B = 1, 2 sectors");

  auto* evolve = app.add_subcommand("evolve", "transition probability curves");
  evo_model.attach(evolve, 0.0);
  std::string source = "vacuum", order;
  std::vector<std::string> targets{"vacuum"};
  double t_max = 5.0, dt = 0.1;
  std::vector<int> steps{1};
  bool no_exact = false, parts = false;
  evolve->add_option("--source", source, "initial computational state")->capture_default_str();
  evolve->add_option("--target", targets, "final states: vacuum, bbbar, pair:F:C or bits")->delimiter(',');
  evolve->add_option("--t-max", t_max)->capture_default_str();
  evolve->add_option("--dt", dt)->capture_default_str();
  evolve->add_option("--steps", steps, "Trotter step counts")->delimiter(',');
  evolve->add_option("--order", order, "term order, e.g. mass,kin,el");
  evolve->add_flag("--no-exact", no_exact, "omit the exact curve");
  evolve->add_flag("--energy-parts", parts, "also write the energy decomposition of the exact state");

  auto* resources = app.add_subcommand("resources", "gate counts of one Trotter step");
  int rnc = 3, rnf = 1, rl = 1;
  std::string circuit_out;
  resources->add_option("--nc", rnc)->capture_default_str();
  resources->add_option("--nf", rnf)->capture_default_str();
  resources->add_option("--l", rl)->capture_default_str();
  resources->add_option("--circuit", circuit_out, "also write the step circuit (m = g = t = 1) to this file");

  auto* tscale = app.add_subcommand("trotter-scaling", "required Trotter steps and quadratic fit");
  ts_model.attach(tscale, 0.0);
  std::string ts_source = "vacuum", ts_target = "vacuum", ts_order, fit_input;
  double ts_tmax = 25.0, fit_tmin = 1.0;
  TrotterCriterion crit;
  tscale->add_option("--source", ts_source)->capture_default_str();
  tscale->add_option("--target", ts_target)->capture_default_str();
  tscale->add_option("--t-max", ts_tmax)->capture_default_str();
  tscale->add_option("--epsilon", crit.epsilon)->capture_default_str();
  tscale->add_option("--grid", crit.grid)->capture_default_str();
  tscale->add_option("--order", ts_order);
  tscale->add_option("--fit-input", fit_input, "fit (t, N) pairs from a file instead of computing them");
  tscale->add_option("--fit-tmin", fit_tmin)->capture_default_str();

  auto* mitigate = app.add_subcommand("mitigate", "linear depolarizing correction of measured probabilities");
  std::string mit_input;
  double floor = 1.0 / 8.0;
  mitigate->add_option("--input", mit_input, "rows t, p_phys, p_mit")->required();
  mitigate->add_option("--floor", floor, "fully decohered probability")->capture_default_str();

  auto* anneal = app.add_subcommand("anneal", "QUBO zooming eigensolver on the B = 0 sector");
  an_model.attach(anneal, 2.0, 2);
  AnnealFlags af;
  anneal->add_option("--K", af.zoom.K)->capture_default_str();
  anneal->add_option("--eta0", af.zoom.eta0)->capture_default_str();
  anneal->add_option("--eta-excited", af.eta_excited, "initial eta for each deflated state")->delimiter(',');
  anneal->add_option("--eta-schedule", af.eta_schedule, "iteration or step")->capture_default_str();
  anneal->add_option("--zoom-steps", af.zoom.zoom_steps)->capture_default_str();
  anneal->add_option("--start-z", af.zoom.start_z, "first zoom level of each restart")->delimiter(',');
  anneal->add_option("--sampler", af.sampler, "exhaustive or annealing")->capture_default_str();
  anneal->add_option("--reads", af.zoom.sampler.reads)->capture_default_str();
  anneal->add_option("--sweeps", af.zoom.sampler.sweeps)->capture_default_str();
  anneal->add_option("--seed", af.zoom.sampler.seed)->capture_default_str();
  anneal->add_option("--workers", af.zoom.sampler.workers)->capture_default_str();
  anneal->add_option("--states", af.states, "number of states found by successive deflation")->capture_default_str();
  anneal->add_flag("--export-qubo", af.export_qubo, "write the first QUBO as triplets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  Run run;
  run.out_dir = out_dir;
  run.argv.assign(argv, argv + argc);
  try {
    auto record = [&](const ModelParams& p) { run.manifest["params"] = json::parse(config_to_json(p)); };
    if (spectrum->parsed()) {
      run.command = "spectrum";
      const ModelParams p = spec_model.resolve();
      record(p);
      cmd_spectrum(run, p, k, !no_baryons);
    } else if (evolve->parsed()) {
      run.command = "evolve";
      const ModelParams p = evo_model.resolve();
      record(p);
      run.manifest["order"] = order;
      cmd_evolve(run, p, source, targets, t_max, dt, steps, !no_exact, parts, order);
    } else if (resources->parsed()) {
      run.command = "resources";
      run.manifest["params"] = {{"nc", rnc}, {"nf", rnf}, {"l", rl}};
      cmd_resources(run, rnc, rnf, rl, circuit_out);
    } else if (tscale->parsed()) {
      run.command = "trotter-scaling";
      const ModelParams p = ts_model.resolve();
      record(p);
      run.manifest["criterion"] = {{"epsilon", crit.epsilon}, {"grid", crit.grid}, {"abs_floor", crit.abs_floor}};
      cmd_trotter_scaling(run, p, ts_source, ts_target, ts_tmax, crit, ts_order, fit_input, fit_tmin);
    } else if (mitigate->parsed()) {
      run.command = "mitigate";
      run.manifest["floor"] = floor;
      cmd_mitigate(run, mit_input, floor);
    } else if (anneal->parsed()) {
      run.command = "anneal";
      const ModelParams p = an_model.resolve();
      record(p);
      cmd_anneal(run, p, af);
    }
    run.finish();
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return kIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return kSolver;
  }
  return kOk;
}
