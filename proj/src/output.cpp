#include "edh/output.hpp"

#include <openssl/evp.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>

namespace edh {
namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw SolverError("cannot open output file: " + path.string());
  return os;
}

// JSON has no NaN; undefined standard errors become null.
nlohmann::json number(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

}  // namespace

std::string format_double(double v) {
  std::array<char, 40> buf{};
  std::snprintf(buf.data(), buf.size(), "%.17g", v);
  return buf.data();
}

void write_spectrum_csv(const std::filesystem::path& path, const std::vector<CoherenceRecord>& records) {
  auto os = open_out(path);
  os << "index,energy,coherence_length,outlier\n";
  for (const auto& r : records)
    os << r.index << ',' << format_double(r.energy) << ',' << format_double(r.coherence_length) << ','
       << (r.outlier ? 1 : 0) << '\n';
}

void write_correlations_csv(const std::filesystem::path& path, const std::vector<CorrelationRow>& rows) {
  auto os = open_out(path);
  os << "state_index,j,abs_correlation\n";
  for (const auto& row : rows)
    for (std::size_t j = 0; j < row.values.size(); ++j)
      os << row.state_index << ',' << j + 1 << ',' << format_double(row.values[j]) << '\n';
}

void write_scaling_csv(const std::filesystem::path& path, const ScalingResult& result) {
  auto os = open_out(path);
  os << "eps,L,N,l_max,l_av,outliers\n";
  for (const auto& b : result.branches)
    for (const auto& r : b.rows)
      os << format_double(b.couplings.eps) << ',' << r.L << ',' << r.N << ',' << format_double(r.l_max) << ','
         << format_double(r.l_av) << ',' << r.outliers << '\n';
}

void write_overlap_csv(const std::filesystem::path& path, const OverlapScalingResult& result) {
  auto os = open_out(path);
  os << "L,overlap_squared,eq10_length,direct_length\n";
  for (const auto& p : result.points)
    os << p.L << ',' << format_double(p.overlap_squared) << ',' << format_double(p.printed_length) << ','
       << format_double(p.direct_length) << '\n';
}

nlohmann::json to_json(const ModelParams& p) {
  return {{"L", p.L}, {"N", p.N}, {"J", p.J}, {"Jp", p.Jp}, {"U", p.U}, {"eps", p.eps}, {"Jnn", p.Jnn}};
}

nlohmann::json to_json(const LinearFit& f) {
  return {{"slope", number(f.slope)},
          {"intercept", number(f.intercept)},
          {"slope_stderr", number(f.slope_stderr)},
          {"intercept_stderr", number(f.intercept_stderr)},
          {"residual_sumsq", number(f.residual)},
          {"points", f.points}};
}

nlohmann::json to_json(const SpectrumJobResult& r) {
  const auto& s = r.summary;
  nlohmann::json j = {{"params", to_json(r.params)},
                      {"states", s.states},
                      {"l_av", s.l_av},
                      {"l_max", s.l_max},
                      {"ground_index", s.ground_index},
                      {"max_index", s.max_index},
                      {"mid_index", s.mid_index ? nlohmann::json(*s.mid_index) : nlohmann::json(nullptr)},
                      {"outliers", s.outliers},
                      {"mid_outliers", s.mid_outliers},
                      {"edge_outliers", s.edge_outliers},
                      {"residual_bound", number(r.residual_bound)},
                      {"from_checkpoint", r.from_checkpoint}};
  auto pairs = nlohmann::json::array();
  for (const auto& [a, b] : r.near_degenerate) pairs.push_back({a, b});
  j["near_degenerate_pairs"] = pairs;
  return j;
}

nlohmann::json scaling_fits_json(const ScalingResult& result) {
  auto branches = nlohmann::json::array();
  for (const auto& b : result.branches)
    branches.push_back({{"couplings", to_json(b.couplings)},
                        {"l_max_vs_L", to_json(b.l_max_fit)},
                        {"l_av_vs_L", to_json(b.l_av_fit)},
                        {"l_max_slope_positive", b.l_max_fit.slope > 0.0},
                        {"l_av_non_increasing", b.l_av_non_increasing}});
  return {{"branches", branches}};
}

nlohmann::json overlap_fits_json(const OverlapScalingResult& r) {
  nlohmann::json j = {{"exponent", r.alpha},
                      {"stderr", number(r.alpha_stderr)},
                      {"points_used", r.overlap_fit.points},
                      {"overlap_fit", to_json(r.overlap_fit)},
                      {"strictly_decreasing", r.strictly_decreasing},
                      {"implied_growth_printed", 1.0 - r.alpha},
                      {"implied_growth_direct", 1.0 - r.alpha / 2.0},
                      {"printed_length_fit", to_json(r.printed_length_fit)},
                      {"direct_length_fit", to_json(r.direct_length_fit)}};
  auto constructed = nlohmann::json::array();
  for (const auto& c : r.constructed)
    constructed.push_back({{"L", c.L},
                           {"N", c.N},
                           {"overlap_squared", c.overlap_squared},
                           {"measured_length", c.measured_length},
                           {"residual", c.residual}});
  j["constructed"] = constructed;
  j["constructed_length_fit"] = r.constructed_length_fit ? to_json(*r.constructed_length_fit) : nlohmann::json(nullptr);
  bool tie = false;
  for (const auto& p : r.points) tie = tie || p.fermi_level_tie;
  j["fermi_level_tie"] = tie;
  return j;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& doc) {
  auto os = open_out(path);
  os << doc.dump(2) << '\n';
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw SolverError("cannot read " + path.string());
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr);
  std::array<char, 1 << 16> buf{};
  while (is) {
    is.read(buf.data(), buf.size());
    EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(is.gcount()));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md.data(), &len);
  std::string hex;
  char byte[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(byte, sizeof byte, "%02x", md[i]);
    hex += byte;
  }
  return hex;
}

void write_manifest(const std::filesystem::path& dir, const std::string& command, const nlohmann::json& config,
                    const std::vector<std::filesystem::path>& outputs, const nlohmann::json& summary) {
  nlohmann::json files = nlohmann::json::object();
  for (const auto& f : outputs) files[f.filename().string()] = sha256_file(f);
  write_json(dir / "manifest.json", {{"command", command},
                                     {"version", EDH_VERSION},
                                     {"config", config},
                                     {"summary", summary},
                                     {"sha256", files}});
}

}  // namespace edh
