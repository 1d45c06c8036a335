#include "edh/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <map>
#include <tuple>

namespace edh {

std::string parameter_tag(const ModelParams& p) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "L%d_N%d_J%g_Jp%g_U%g_eps%g", p.L, p.N, p.J, p.Jp, p.U, p.eps);
  std::string tag = buf;
  if (p.Jnn != 0.0) {
    std::snprintf(buf, sizeof buf, "_Jnn%g", p.Jnn);
    tag += buf;
  }
  return tag;
}

double mean_coherence(const std::vector<CoherenceRecord>& records) {
  if (records.empty()) return 0.0;
  double s = 0.0;
  for (const auto& r : records) s += r.coherence_length;
  return s / static_cast<double>(records.size());
}

double max_coherence(const std::vector<CoherenceRecord>& records) {
  double m = 0.0;
  for (const auto& r : records) m = std::max(m, r.coherence_length);
  return m;
}

void flag_outliers(std::vector<CoherenceRecord>& records, const OutlierPolicy& policy) {
  if (records.empty()) throw ValidationError("cannot flag outliers in an empty profile");
  if (!(policy.kappa > 0.0)) throw ValidationError("outlier kappa must be positive");
  const double threshold = policy.kappa * mean_coherence(records);
  const double top = max_coherence(records);
  for (auto& r : records) r.outlier = r.coherence_length > threshold || r.coherence_length == top;
}

namespace {

struct Thirds {
  double low;
  double high;
};

Thirds energy_thirds(const std::vector<CoherenceRecord>& records) {
  double emin = records.front().energy, emax = records.front().energy;
  for (const auto& r : records) {
    emin = std::min(emin, r.energy);
    emax = std::max(emax, r.energy);
  }
  const double range = emax - emin;
  return {emin + range / 3.0, emin + 2.0 * range / 3.0};
}

}  // namespace

std::optional<std::size_t> mid_spectrum_max(const std::vector<CoherenceRecord>& records) {
  if (records.empty()) return std::nullopt;
  const auto t = energy_thirds(records);
  std::optional<std::size_t> best;
  for (std::size_t k = 0; k < records.size(); ++k) {
    if (records[k].energy < t.low || records[k].energy > t.high) continue;
    if (!best || records[k].coherence_length > records[*best].coherence_length) best = k;
  }
  return best;
}

SpectrumJobResult analyze_spectrum(const FockBasis& basis, const EigenDecomposition& decomp,
                                   const SpectrumJobOptions& options) {
  SpectrumJobResult res;
  res.params = basis.params();
  res.residual_bound = decomp.residual_bound;
  res.near_degenerate = decomp.near_degenerate;
  res.records = spectrum_coherence_profile(basis, decomp);
  flag_outliers(res.records, options.policy);

  auto& s = res.summary;
  s.states = res.records.size();
  s.l_av = mean_coherence(res.records);
  s.l_max = max_coherence(res.records);
  s.ground_index = 0;
  for (std::size_t k = 0; k < res.records.size(); ++k)
    if (res.records[k].coherence_length > res.records[s.max_index].coherence_length) s.max_index = k;
  s.mid_index = mid_spectrum_max(res.records);
  const auto t = energy_thirds(res.records);
  for (const auto& r : res.records) {
    if (!r.outlier) continue;
    ++s.outliers;
    if (r.energy >= t.low && r.energy <= t.high)
      ++s.mid_outliers;
    else
      ++s.edge_outliers;
  }

  std::vector<std::size_t> marked = {s.ground_index, s.max_index};
  if (s.mid_index) marked.push_back(*s.mid_index);
  for (std::size_t k : options.correlation_states) {
    if (k >= decomp.size()) throw ValidationError("correlation state index " + std::to_string(k) + " out of range");
    marked.push_back(k);
  }
  for (std::size_t k : marked) {
    auto row = correlation_row(basis, decomp.state(k), options.ref_site);
    row.state_index = static_cast<long>(k);
    res.correlations.push_back(std::move(row));
  }
  res.correlations.push_back(average_correlation_row(basis, decomp, options.ref_site));
  return res;
}

SpectrumJobResult run_spectrum_job(const ModelParams& params, const SpectrumJobOptions& options) {
  params.validate();
  const FockBasis basis(params);
  if (options.ref_site < 1 || options.ref_site > params.L) throw ValidationError("reference site outside 1..L");
  if (basis.dimension() > options.spectral.dimension_cap)
    throw ValidationError("dimension " + std::to_string(basis.dimension()) + " exceeds the solver cap " +
                          std::to_string(options.spectral.dimension_cap));

  if (options.checkpoint && std::filesystem::exists(*options.checkpoint)) {
    Checkpoint ck = load_checkpoint(*options.checkpoint);
    if (!(ck.params == params))
      throw ValidationError("checkpoint " + options.checkpoint->string() + " holds " + describe(ck.params) +
                            ", requested " + describe(params));
    auto res = analyze_spectrum(basis, ck.decomp, options);
    res.from_checkpoint = true;
    return res;
  }

  const auto start = std::chrono::steady_clock::now();
  EigenDecomposition decomp;
  {
    const SparseHamiltonian h = assemble_hamiltonian(basis);
    decomp = full_diagonalize(h, options.spectral);
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (options.checkpoint) save_checkpoint(*options.checkpoint, params, decomp);
  auto res = analyze_spectrum(basis, decomp, options);
  res.diagonalize_seconds = seconds;
  return res;
}

SweepSpec half_filling_sweep(const ModelParams& base, int Lmin, int Lmax, const std::vector<double>& eps_values) {
  if (Lmin < 1 || Lmax < Lmin) throw ValidationError("sweep needs 1 <= Lmin <= Lmax");
  if (eps_values.empty()) throw ValidationError("sweep needs at least one eps value");
  SweepSpec spec;
  for (double eps : eps_values)
    for (int L = Lmin; L <= Lmax; ++L) {
      ModelParams p = base;
      p.L = L;
      p.N = half_filling(L);
      p.eps = eps;
      p.validate();
      spec.points.push_back(p);
    }
  return spec;
}

ScalingBranch summarize_branch(const ModelParams& couplings, std::vector<ScalingRow> rows) {
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return std::tie(a.L, a.N) < std::tie(b.L, b.N); });
  ScalingBranch b;
  b.couplings = couplings;
  b.rows = std::move(rows);
  std::vector<double> x, lmax, lav;
  for (const auto& r : b.rows) {
    x.push_back(r.L);
    lmax.push_back(r.l_max);
    lav.push_back(r.l_av);
  }
  b.l_max_fit = fit_linear(x, lmax);
  b.l_av_fit = fit_linear(x, lav);
  b.l_av_non_increasing = true;
  for (std::size_t i = 1; i < lav.size(); ++i)
    if (lav[i] > lav[i - 1]) b.l_av_non_increasing = false;
  return b;
}

ScalingResult run_scaling_sweep(const SweepSpec& spec, const JobObserver& observer) {
  if (spec.points.empty()) throw ValidationError("sweep has no parameter points");
  using Key = std::tuple<double, double, double, double, double>;
  std::map<Key, std::vector<ScalingRow>> grouped;
  std::map<Key, ModelParams> representative;
  std::vector<Key> order;
  for (const auto& p : spec.points) {
    p.validate();
    const Key key{p.J, p.Jp, p.U, p.eps, p.Jnn};
    if (!representative.count(key)) {
      representative[key] = p;
      order.push_back(key);
    }
    grouped[key];
  }
  for (const auto& key : order) {
    std::vector<int> sizes;
    for (const auto& p : spec.points)
      if (Key{p.J, p.Jp, p.U, p.eps, p.Jnn} == key) sizes.push_back(p.L);
    std::sort(sizes.begin(), sizes.end());
    sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
    if (sizes.size() < 3) throw ValidationError("each scaling branch needs at least 3 system sizes");
  }

  // Jobs run one at a time: each large job already saturates memory, and the
  // per-state analysis inside is parallel.
  for (const auto& p : spec.points) {
    SpectrumJobOptions job = spec.job;
    job.checkpoint.reset();
    if (spec.checkpoint_dir) {
      std::filesystem::create_directories(*spec.checkpoint_dir);
      job.checkpoint = *spec.checkpoint_dir / (parameter_tag(p) + ".ckpt");
    }
    const auto res = run_spectrum_job(p, job);
    grouped[Key{p.J, p.Jp, p.U, p.eps, p.Jnn}].push_back(
        {p.L, p.N, res.summary.l_max, res.summary.l_av, res.summary.outliers});
    if (observer) observer(res);
  }

  ScalingResult out;
  for (const auto& key : order) {
    ModelParams c = representative[key];
    out.branches.push_back(summarize_branch(c, grouped[key]));
  }
  return out;
}

}  // namespace edh
