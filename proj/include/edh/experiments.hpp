#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "edh/fit.hpp"
#include "edh/reduced_state.hpp"
#include "edh/spectral.hpp"

namespace edh {

/// Compact file-name tag such as "L12_N6_J1_Jp0.2_U1_eps0".
std::string parameter_tag(const ModelParams& params);

/// Flags l > kappa * l_av, plus every record tied with the global maximum.
struct OutlierPolicy {
  double kappa = 3.0;
};

void flag_outliers(std::vector<CoherenceRecord>& records, const OutlierPolicy& policy);

double mean_coherence(const std::vector<CoherenceRecord>& records);
double max_coherence(const std::vector<CoherenceRecord>& records);

/// Index of the largest coherence length among states whose energy lies in the
/// middle third of the spectral range, if any.
std::optional<std::size_t> mid_spectrum_max(const std::vector<CoherenceRecord>& records);

struct SpectrumSummary {
  std::size_t states = 0;
  double l_av = 0.0;
  double l_max = 0.0;
  std::size_t ground_index = 0;
  std::size_t max_index = 0;
  std::optional<std::size_t> mid_index;
  std::size_t outliers = 0;
  std::size_t mid_outliers = 0;
  /// Outliers in the lowest and highest thirds of the spectral range.
  std::size_t edge_outliers = 0;
};

struct SpectrumJobOptions {
  SpectralOptions spectral;
  OutlierPolicy policy;
  int ref_site = 1;
  /// Loaded when the file exists (parameters must match), written otherwise.
  std::optional<std::filesystem::path> checkpoint;
  /// Extra eigenstates whose correlation rows are emitted besides the marked ones.
  std::vector<std::size_t> correlation_states;
};

struct SpectrumJobResult {
  ModelParams params;
  std::vector<CoherenceRecord> records;
  SpectrumSummary summary;
  /// Ground, max-l, mid-spectrum max-l (when present), any requested states, then the eigenstate average.
  std::vector<CorrelationRow> correlations;
  double residual_bound = -1.0;
  std::vector<std::pair<std::size_t, std::size_t>> near_degenerate;
  bool from_checkpoint = false;
  double diagonalize_seconds = 0.0;
};

SpectrumJobResult analyze_spectrum(const FockBasis& basis, const EigenDecomposition& decomp,
                                   const SpectrumJobOptions& options = {});

SpectrumJobResult run_spectrum_job(const ModelParams& params, const SpectrumJobOptions& options = {});

struct SweepSpec {
  std::vector<ModelParams> points;
  SpectrumJobOptions job;
  /// When set, each point reuses or writes <dir>/<tag>.ckpt.
  std::optional<std::filesystem::path> checkpoint_dir;
  std::uint64_t seed = 0;
};

/// L = Lmin..Lmax at half filling for each eps value, other couplings from `base`.
SweepSpec half_filling_sweep(const ModelParams& base, int Lmin, int Lmax, const std::vector<double>& eps_values);

struct ScalingRow {
  int L = 0;
  int N = 0;
  double l_max = 0.0;
  double l_av = 0.0;
  std::size_t outliers = 0;
};

/// All sweep points sharing the couplings (J, Jp, U, eps, Jnn).
struct ScalingBranch {
  ModelParams couplings;
  std::vector<ScalingRow> rows;
  LinearFit l_max_fit;
  LinearFit l_av_fit;
  bool l_av_non_increasing = false;
};

struct ScalingResult {
  std::vector<ScalingBranch> branches;
};

using JobObserver = std::function<void(const SpectrumJobResult&)>;

/// One spectrum job per point, run in the given order; each branch needs >= 3 sizes.
ScalingResult run_scaling_sweep(const SweepSpec& spec, const JobObserver& observer = {});

/// Fits and trend flags from already computed rows.
ScalingBranch summarize_branch(const ModelParams& couplings, std::vector<ScalingRow> rows);

}  // namespace edh
