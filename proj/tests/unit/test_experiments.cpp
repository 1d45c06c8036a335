#include <doctest.h>

#include <omp.h>

#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "edh/experiments.hpp"
#include "edh/output.hpp"

using namespace edh;

namespace {

std::vector<CoherenceRecord> records_from(const std::vector<std::pair<double, double>>& el) {
  std::vector<CoherenceRecord> out;
  for (std::size_t k = 0; k < el.size(); ++k) out.push_back({k, el[k].first, el[k].second, false});
  return out;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("outlier flagging") {
  SUBCASE("equal lengths: only the tied maximum is flagged, which is all of them") {
    auto r = records_from({{0, 1.0}, {1, 1.0}, {2, 1.0}});
    flag_outliers(r, {3.0});
    for (const auto& x : r) CHECK(x.outlier);
  }
  SUBCASE("threshold at kappa times the mean") {
    auto r = records_from({{0, 1.0}, {1, 1.0}, {2, 1.0}, {3, 1.0}, {4, 1.0}, {5, 1.0}, {6, 1.0}, {7, 1.0}, {8, 1.0},
                           {9, 5.0}, {10, 4.0}});
    flag_outliers(r, {3.0});  // mean = 18 / 11 ~ 1.64, threshold ~ 4.9
    CHECK(r[9].outlier);
    CHECK_FALSE(r[10].outlier);
    flag_outliers(r, {2.0});
    CHECK(r[10].outlier);
  }
  SUBCASE("infinite kappa keeps only the global maximum") {
    auto r = records_from({{0, 0.5}, {1, 9.0}, {2, 3.0}});
    flag_outliers(r, {std::numeric_limits<double>::max()});
    CHECK_FALSE(r[0].outlier);
    CHECK(r[1].outlier);
    CHECK_FALSE(r[2].outlier);
  }
  SUBCASE("empty input and bad kappa") {
    std::vector<CoherenceRecord> none;
    CHECK_THROWS_AS(flag_outliers(none, {}), ValidationError);
    auto r = records_from({{0, 1.0}});
    CHECK_THROWS_AS(flag_outliers(r, {0.0}), ValidationError);
  }
}

TEST_CASE("mid-spectrum selection uses the middle third of the energy range") {
  const auto r = records_from({{0.0, 9.0}, {3.5, 2.0}, {5.0, 3.0}, {6.5, 1.0}, {9.0, 8.0}});
  CHECK(mid_spectrum_max(r) == std::optional<std::size_t>(2));
  CHECK_FALSE(mid_spectrum_max(records_from({{0.0, 1.0}, {9.0, 1.0}})).has_value());
}

TEST_CASE("spectrum jobs") {
  SUBCASE("L=2, N=1 has four records") {
    const auto r = run_spectrum_job({2, 1, 1.0, 0.3, 0.7, 0.0});
    CHECK(r.records.size() == 4);
    CHECK(r.correlations.back().state_index == kAverageRow);
  }
  SUBCASE("infinitely heavy particle with bias: all lengths vanish") {
    const auto r = run_spectrum_job({8, 4, 1.0, 0.0, 1.0, 0.1});
    for (const auto& x : r.records) CHECK(x.coherence_length <= 1e-8);
    CHECK(r.summary.l_max <= 1e-8);
  }
  SUBCASE("marked states and summary bookkeeping") {
    const auto r = run_spectrum_job({8, 4, 1.0, 0.2, 1.0, 0.0});
    CHECK(r.summary.states == 560);
    CHECK(r.records[r.summary.max_index].coherence_length == r.summary.l_max);
    CHECK(r.summary.l_max > r.summary.l_av);
    CHECK(r.summary.outliers == r.summary.mid_outliers + r.summary.edge_outliers);
    CHECK(r.correlations[0].state_index == 0);
    CHECK(r.correlations[1].state_index == static_cast<long>(r.summary.max_index));
    CHECK(r.residual_bound <= 1e-9 * 20.0);
    for (const auto& x : r.records) {
      CHECK(x.coherence_length >= 0.0);
      CHECK(x.coherence_length <= 7.0);
    }
  }
  SUBCASE("reference site and cap are validated") {
    SpectrumJobOptions opt;
    opt.ref_site = 9;
    CHECK_THROWS_AS(run_spectrum_job({8, 4}, opt), ValidationError);
    opt.ref_site = 1;
    opt.spectral.dimension_cap = 100;
    CHECK_THROWS_AS(run_spectrum_job({8, 4}, opt), ValidationError);
  }
}

TEST_CASE("checkpoints let a job be re-analyzed without rediagonalizing") {
  const auto path = std::filesystem::temp_directory_path() / "edh_test_job.ckpt";
  std::filesystem::remove(path);
  SpectrumJobOptions opt;
  opt.checkpoint = path;
  const ModelParams p{7, 3, 1.0, 0.2, 1.0, 0.1};
  const auto first = run_spectrum_job(p, opt);
  CHECK_FALSE(first.from_checkpoint);
  const auto second = run_spectrum_job(p, opt);
  CHECK(second.from_checkpoint);
  REQUIRE(first.records.size() == second.records.size());
  for (std::size_t k = 0; k < first.records.size(); ++k)
    CHECK(first.records[k].coherence_length == second.records[k].coherence_length);
  CHECK_THROWS_AS(run_spectrum_job({7, 3, 1.0, 0.2, 1.0, 0.0}, opt), ValidationError);
  std::filesystem::remove(path);
}

TEST_CASE("CSV output is bit-identical across runs and worker counts") {
  const auto dir = std::filesystem::temp_directory_path() / "edh_test_repro";
  std::filesystem::create_directories(dir);
  const ModelParams p{7, 3, 1.0, 0.2, 1.0, 0.0};
  const int saved = omp_get_max_threads();
  std::vector<std::string> outputs;
  for (int threads : {1, 3, 1}) {
    omp_set_num_threads(threads);
    const auto r = run_spectrum_job(p);
    write_spectrum_csv(dir / "s.csv", r.records);
    write_correlations_csv(dir / "c.csv", r.correlations);
    outputs.push_back(slurp(dir / "s.csv") + slurp(dir / "c.csv"));
  }
  omp_set_num_threads(saved);
  CHECK(outputs[0] == outputs[1]);
  CHECK(outputs[0] == outputs[2]);
  std::filesystem::remove_all(dir);
}

TEST_CASE("scaling sweeps") {
  SUBCASE("integrable sweep has zero l_max and l_av everywhere") {
    const auto spec = half_filling_sweep({1, 0, 1.0, 0.0, 1.0, 0.1}, 4, 7, {0.1});
    const auto r = run_scaling_sweep(spec);
    REQUIRE(r.branches.size() == 1);
    REQUIRE(r.branches[0].rows.size() == 4);
    for (const auto& row : r.branches[0].rows) {
      CHECK(row.l_max <= 1e-8);
      CHECK(row.l_av <= 1e-8);
      CHECK(row.N == half_filling(row.L));
    }
  }
  SUBCASE("two bias branches, rows sorted by L, observer sees every job") {
    const auto spec = half_filling_sweep({1, 0, 1.0, 0.2, 1.0, 0.0}, 4, 7, {0.0, 0.1});
    int seen = 0;
    const auto r = run_scaling_sweep(spec, [&](const SpectrumJobResult&) { ++seen; });
    CHECK(seen == 8);
    REQUIRE(r.branches.size() == 2);
    CHECK(r.branches[0].couplings.eps == 0.0);
    CHECK(r.branches[1].couplings.eps == 0.1);
    for (const auto& b : r.branches) {
      for (std::size_t i = 1; i < b.rows.size(); ++i) CHECK(b.rows[i].L > b.rows[i - 1].L);
      CHECK(b.l_max_fit.points == 4);
    }
  }
  SUBCASE("fewer than three sizes per branch is refused") {
    CHECK_THROWS_AS(run_scaling_sweep(half_filling_sweep({1, 0, 1.0, 0.2, 1.0}, 4, 5, {0.0})), ValidationError);
    CHECK_THROWS_AS(run_scaling_sweep(SweepSpec{}), ValidationError);
  }
}

TEST_CASE("branch summary fits and trend flag") {
  const auto up = summarize_branch({}, {{9, 4, 7.0, 3.0, 1}, {8, 4, 6.0, 3.2, 1}, {10, 5, 8.0, 2.9, 1}});
  CHECK(up.rows.front().L == 8);
  CHECK(up.l_max_fit.slope == doctest::Approx(1.0));
  CHECK(up.l_av_non_increasing);
  const auto bump = summarize_branch({}, {{8, 4, 6.0, 3.2, 1}, {9, 4, 7.0, 3.3, 1}, {10, 5, 8.0, 2.9, 1}});
  CHECK_FALSE(bump.l_av_non_increasing);
}

TEST_CASE("parameter tags") {
  CHECK(parameter_tag({12, 6, 1.0, 0.2, 1.0, 0.0}) == "L12_N6_J1_Jp0.2_U1_eps0");
  CHECK(parameter_tag({4, 2, 1.0, 0.0, 1.0, 0.1, 0.5}) == "L4_N2_J1_Jp0_U1_eps0.1_Jnn0.5");
}
