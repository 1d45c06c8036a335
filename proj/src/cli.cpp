#include "edh/cli.hpp"

#include <omp.h>

#include <CLI11.hpp>
#include <functional>
#include <iostream>
#include <random>

#include "edh/config.hpp"
#include "edh/experiments.hpp"
#include "edh/freefermion.hpp"
#include "edh/output.hpp"

namespace edh::cli {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

// Each given flag copies its value onto the config loaded from --config.
struct Overrides {
  RunConfig flags;
  std::vector<std::pair<CLI::Option*, std::function<void(RunConfig&)>>> items;

  template <class T>
  CLI::Option* add(CLI::App* app, const std::string& name, T RunConfig::*member, const std::string& help) {
    CLI::Option* opt = app->add_option(name, flags.*member, help);
    items.emplace_back(opt, [this, member](RunConfig& c) { c.*member = flags.*member; });
    return opt;
  }

  void flag(CLI::App* app, const std::string& name, bool RunConfig::*member, const std::string& help) {
    CLI::Option* opt = app->add_flag(name, flags.*member, help);
    items.emplace_back(opt, [this, member](RunConfig& c) { c.*member = flags.*member; });
  }

  void apply(RunConfig& c) const {
    for (const auto& [opt, fn] : items)
      if (opt->count() > 0) fn(c);
  }
};

std::string tag_or(const RunConfig& c, const std::string& fallback) { return c.tag.empty() ? fallback : c.tag; }

json spectrum_summary(const SpectrumJobResult& r) {
  json s = to_json(r);
  s["all_zero_coherence"] = r.summary.l_max <= 1e-8;
  return s;
}

// Seeded spot check of the matrix-free product against the assembled matrix.
double matvec_spot_check(const FockBasis& basis, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  Eigen::VectorXd v(static_cast<Eigen::Index>(basis.dimension()));
  for (auto& x : v) x = gauss(rng);
  v.normalize();
  const SparseHamiltonian h = assemble_hamiltonian(basis);
  return (apply_hamiltonian(basis, v) - reference::multiply(h, v)).norm();
}

int cmd_spectrum(const RunConfig& cfg, bool correlations_only, std::ostream& out, std::ostream& err) {
  const ModelParams params = cfg.model();
  SpectrumJobOptions opt;
  opt.spectral.dimension_cap = cfg.cap;
  opt.policy.kappa = cfg.kappa;
  opt.ref_site = cfg.ref_site;
  opt.checkpoint = cfg.checkpoint;
  opt.correlation_states = cfg.states;

  const FockBasis basis(params);
  if (basis.dimension() > cfg.cap)
    throw ValidationError("dimension " + std::to_string(basis.dimension()) + " exceeds the solver cap " +
                          std::to_string(cfg.cap));
  const double spot = matvec_spot_check(basis, cfg.seed);
  err << "diagonalizing " << describe(params) << " (dimension " << basis.dimension() << ")\n";
  const auto res = run_spectrum_job(params, opt);

  const std::string tag = tag_or(cfg, parameter_tag(params));
  fs::create_directories(cfg.out);
  std::vector<fs::path> files;
  const fs::path corr = cfg.out / ("correlations_" + tag + ".csv");
  write_correlations_csv(corr, res.correlations);
  files.push_back(corr);
  json summary = spectrum_summary(res);
  summary["matvec_spot_check"] = spot;
  if (!correlations_only) {
    const fs::path spec = cfg.out / ("spectrum_" + tag + ".csv");
    const fs::path sum = cfg.out / ("summary_" + tag + ".json");
    write_spectrum_csv(spec, res.records);
    write_json(sum, summary);
    files.insert(files.begin(), {spec, sum});
  }
  write_manifest(cfg.out, correlations_only ? "correlations" : "spectrum", to_json(cfg), files, summary);
  out << summary.dump(2) << '\n';
  return kSuccess;
}

int cmd_scaling(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  SweepSpec spec = half_filling_sweep(cfg.model(), cfg.sweep_Lmin, cfg.sweep_Lmax, cfg.sweep_eps);
  spec.job.spectral.dimension_cap = cfg.cap;
  spec.job.policy.kappa = cfg.kappa;
  spec.job.ref_site = 1;
  spec.seed = cfg.seed;
  if (cfg.checkpoint) spec.checkpoint_dir = *cfg.checkpoint;
  for (const auto& p : spec.points) {
    const std::size_t dim = FockBasis(p).dimension();
    if (dim > cfg.cap)
      throw ValidationError("sweep point " + describe(p) + " exceeds the solver cap (" + std::to_string(dim) + ")");
  }

  fs::create_directories(cfg.out);
  std::vector<fs::path> files;
  const auto result = run_scaling_sweep(spec, [&](const SpectrumJobResult& r) {
    err << describe(r.params) << ": l_av=" << r.summary.l_av << " l_max=" << r.summary.l_max << '\n';
    const fs::path f = cfg.out / ("spectrum_" + parameter_tag(r.params) + ".csv");
    write_spectrum_csv(f, r.records);
    files.push_back(f);
  });

  char base[128];
  std::snprintf(base, sizeof base, "sweep_J%g_Jp%g_U%g", cfg.J, cfg.Jp, cfg.U);
  const std::string tag = tag_or(cfg, base);
  const fs::path csv = cfg.out / ("scaling_" + tag + ".csv");
  const fs::path fits = cfg.out / ("fits_" + tag + ".json");
  write_scaling_csv(csv, result);
  const json fj = scaling_fits_json(result);
  write_json(fits, fj);
  files.insert(files.begin(), {csv, fits});
  write_manifest(cfg.out, "scaling", to_json(cfg), files, fj);
  out << fj.dump(2) << '\n';
  return kSuccess;
}

int cmd_integrable(RunConfig cfg, std::ostream& out, std::ostream&) {
  cfg.Jp = 0.0;
  const ModelParams params = cfg.model();
  const FockBasis basis(params);
  const SparseHamiltonian h = assemble_hamiltonian(basis);
  const double hnorm = h.norm_bound();

  json report = {{"params", to_json(params)}, {"norm_bound", hnorm}};
  std::vector<std::shared_ptr<const OrbitalSet>> sets;
  json sites = json::array();
  for (int j = 1; j <= params.L; ++j) {
    auto set = std::make_shared<const OrbitalSet>(
        single_particle_diagonalize(SingleParticleHamiltonian::for_site(params, j)));
    sets.push_back(set);
    const auto s = SlaterState::ground_state(set, params.N);
    const auto psi = integrable_eigenstate(basis, j, s);
    sites.push_back({{"site", j},
                     {"ground_energy", s.energy()},
                     {"residual", eigen_residual(psi, s.energy())},
                     {"coherence_length", coherence_length(reduced_density_matrix(psi))},
                     {"fermi_level_tie", s.fermi_level_tie()}});
  }
  report["product_states"] = sites;
  double mirror = 0.0;
  for (int j = 1; j <= params.L; ++j)
    mirror = std::max(mirror, (sets[j - 1]->energies - sets[params.L - j]->energies).cwiseAbs().maxCoeff());
  report["mirror_spectrum_mismatch"] = mirror;

  if (cfg.build_superposition) {
    const auto a = SlaterState::ground_state(sets.front(), params.N);
    const auto b = SlaterState::ground_state(sets.back(), params.N);
    const auto psi = degenerate_superposition(basis, a, b);
    const double s = slater_overlap(a, b);
    const double g = s * s;
    report["superposition"] = {{"energy", a.energy()},
                               {"overlap", s},
                               {"overlap_squared", g},
                               {"residual", eigen_residual(psi, a.energy())},
                               {"measured_length", coherence_length(reduced_density_matrix(psi))},
                               {"direct_length", direct_superposition_coherence(g, params.L)},
                               {"eq10_length", printed_superposition_coherence(g, params.L)}};
  }
  if (cfg.node_sites) {
    const auto [p, q] = *cfg.node_sites;
    const auto node = node_state_construction(basis, p, q);
    if (node)
      report["node_state"] = {{"sites", {p, q}},
                              {"modes", node->modes},
                              {"energy", node->energy},
                              {"residual", node->residual},
                              {"coherence_length", node->coherence_length}};
    else
      report["node_state"] = {{"sites", {p, q}}, {"absent", true}};
  }

  const fs::path file = cfg.out / ("integrable_" + tag_or(cfg, parameter_tag(params)) + ".json");
  write_json(file, report);
  write_manifest(cfg.out, "integrable", to_json(cfg), {file}, report);
  out << report.dump(2) << '\n';
  return kSuccess;
}

int cmd_overlap(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  OverlapSweepSpec spec;
  spec.J = cfg.overlap_J;
  spec.U = cfg.overlap_U;
  spec.density = cfg.overlap_density;
  for (int L = cfg.overlap_Lmin; L <= cfg.overlap_Lmax; L *= 2) spec.sizes.push_back(L);
  const auto res = orthogonality_scaling(spec);

  char base[64];
  std::snprintf(base, sizeof base, "overlap_J%g_U%g", spec.J, spec.U);
  const std::string tag = tag_or(cfg, base);
  const fs::path csv = cfg.out / ("overlap_" + tag + ".csv");
  const fs::path fits = cfg.out / ("fits_" + tag + ".json");
  write_overlap_csv(csv, res);
  const json fj = overlap_fits_json(res);
  write_json(fits, fj);
  write_manifest(cfg.out, "overlap-scaling", to_json(cfg), {csv, fits}, fj);
  out << fj.dump(2) << '\n';
  return kSuccess;
}

void add_model_flags(CLI::App* sub, Overrides& o, bool with_jp = true) {
  o.add(sub, "--L", &RunConfig::L, "lattice sites");
  o.add(sub, "--J", &RunConfig::J, "fermion hopping");
  if (with_jp) o.add(sub, "--Jp", &RunConfig::Jp, "particle hopping");
  o.add(sub, "--U", &RunConfig::U, "contact coupling");
  o.add(sub, "--eps", &RunConfig::eps, "bias amplitude");
  o.flag(sub, "--half-fill", &RunConfig::half_fill, "N = floor(L/2)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Coherence lengths of a heavy particle in a lattice Fermi gas"};
  app.fallthrough();
  app.require_subcommand(1);
  Overrides o;
  std::string config_path;
  std::string checkpoint;
  std::string out_dir;
  app.add_option("--config", config_path, "JSON run configuration");
  CLI::Option* out_opt = app.add_option("--out", out_dir, "output directory");
  CLI::Option* ck_opt = app.add_option("--checkpoint", checkpoint, "eigendecomposition checkpoint (directory for scaling)");
  o.add(&app, "--threads", &RunConfig::threads, "worker threads (0 = all cores)");
  o.add(&app, "--seed", &RunConfig::seed, "seed for randomized checks");
  o.add(&app, "--tag", &RunConfig::tag, "output file tag");

  int n_flag = 0;
  std::vector<int> node;
  std::vector<double> eps_list;

  auto* spectrum = app.add_subcommand("spectrum", "coherence length of every eigenstate");
  auto* correlations = app.add_subcommand("correlations", "correlation rows |rho(ref, j)| for chosen eigenstates");
  std::vector<CLI::Option*> n_opts;
  for (auto* sub : {spectrum, correlations}) {
    add_model_flags(sub, o);
    n_opts.push_back(sub->add_option("--N", n_flag, "fermion count"));
    o.add(sub, "--kappa", &RunConfig::kappa, "outlier threshold in units of l_av");
    o.add(sub, "--ref-site", &RunConfig::ref_site, "reference site of correlation rows");
    o.add(sub, "--cap", &RunConfig::cap, "largest dimension handed to the dense solver");
    o.add(sub, "--states", &RunConfig::states, "extra eigenstate indices for correlation rows");
  }

  auto* scaling = app.add_subcommand("scaling", "l_max and l_av versus L at half filling");
  o.add(scaling, "--Lmin", &RunConfig::sweep_Lmin, "smallest L");
  o.add(scaling, "--Lmax", &RunConfig::sweep_Lmax, "largest L");
  o.add(scaling, "--J", &RunConfig::J, "fermion hopping");
  o.add(scaling, "--Jp", &RunConfig::Jp, "particle hopping");
  o.add(scaling, "--U", &RunConfig::U, "contact coupling");
  o.add(scaling, "--kappa", &RunConfig::kappa, "outlier threshold in units of l_av");
  o.add(scaling, "--cap", &RunConfig::cap, "largest dimension handed to the dense solver");
  CLI::Option* eps_opt = scaling->add_option("--eps", eps_list, "bias amplitudes, one branch each (repeatable)");
  scaling->add_flag("--half-fill", "half filling (always on for sweeps)");

  auto* integrable = app.add_subcommand("integrable", "infinitely heavy particle: product states, superposition, node states");
  add_model_flags(integrable, o, false);
  n_opts.push_back(integrable->add_option("--N", n_flag, "fermion count"));
  o.flag(integrable, "--build-superposition", &RunConfig::build_superposition, "build the degenerate ground-state pair");
  CLI::Option* node_opt = integrable->add_option("--node", node, "two sites p q for the node-state construction")->expected(2);

  auto* overlap = app.add_subcommand("overlap-scaling", "ground-state overlap of H_1 and H_L versus L");
  o.add(overlap, "--Lmin", &RunConfig::overlap_Lmin, "smallest L (sizes double up to Lmax)");
  o.add(overlap, "--Lmax", &RunConfig::overlap_Lmax, "largest L");
  o.add(overlap, "--J", &RunConfig::overlap_J, "fermion hopping");
  o.add(overlap, "--U", &RunConfig::overlap_U, "impurity coupling");
  o.add(overlap, "--density", &RunConfig::overlap_density, "fermion density N/L");

  try {
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kValidationFailure;
  }

  try {
    RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
    o.apply(cfg);
    for (auto* opt : n_opts)
      if (opt->count()) cfg.N = n_flag;
    if (out_opt->count()) cfg.out = out_dir;
    if (ck_opt->count()) cfg.checkpoint = checkpoint;
    if (eps_opt->count()) cfg.sweep_eps = eps_list;
    if (node_opt->count()) cfg.node_sites = std::pair{node[0], node[1]};
    cfg.validate();
    if (cfg.threads > 0) omp_set_num_threads(cfg.threads);

    if (spectrum->parsed()) return cmd_spectrum(cfg, false, out, err);
    if (correlations->parsed()) return cmd_spectrum(cfg, true, out, err);
    if (scaling->parsed()) return cmd_scaling(cfg, out, err);
    if (integrable->parsed()) return cmd_integrable(cfg, out, err);
    if (overlap->parsed()) return cmd_overlap(cfg, out, err);
    return kValidationFailure;
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << '\n';
    return kValidationFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeFailure;
  }
}

int run(int argc, const char* const* argv) {
  return run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}

}  // namespace edh::cli
