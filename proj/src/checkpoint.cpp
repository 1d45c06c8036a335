#include <array>
#include <cstring>
#include <fstream>

#include "edh/spectral.hpp"

namespace edh {
namespace {

constexpr std::array<char, 8> kMagic = {'E', 'D', 'H', 'C', 'K', 'P', 'T', '\0'};

template <class T>
void put(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw SolverError("checkpoint truncated");
  return v;
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const ModelParams& params, const EigenDecomposition& decomp) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw SolverError("cannot open checkpoint for writing: " + path.string());
  os.write(kMagic.data(), kMagic.size());
  put(os, kCheckpointVersion);
  put(os, std::uint32_t{0});
  put(os, static_cast<std::int64_t>(params.L));
  put(os, static_cast<std::int64_t>(params.N));
  for (double v : {params.J, params.Jp, params.U, params.eps, params.Jnn}) put(os, v);
  put(os, static_cast<std::uint64_t>(decomp.size()));
  put(os, decomp.residual_bound);
  os.write(reinterpret_cast<const char*>(decomp.energies.data()),
           static_cast<std::streamsize>(sizeof(double) * decomp.size()));
  os.write(reinterpret_cast<const char*>(decomp.vectors.data()),
           static_cast<std::streamsize>(sizeof(double) * decomp.vectors.size()));
  if (!os) throw SolverError("failed writing checkpoint: " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ValidationError("cannot open checkpoint: " + path.string());
  std::array<char, 8> magic{};
  is.read(magic.data(), magic.size());
  if (!is || magic != kMagic) throw ValidationError("not a checkpoint file: " + path.string());
  const auto version = get<std::uint32_t>(is);
  if (version != kCheckpointVersion)
    throw ValidationError("unsupported checkpoint version " + std::to_string(version));
  get<std::uint32_t>(is);

  Checkpoint ck;
  ck.params.L = static_cast<int>(get<std::int64_t>(is));
  ck.params.N = static_cast<int>(get<std::int64_t>(is));
  ck.params.J = get<double>(is);
  ck.params.Jp = get<double>(is);
  ck.params.U = get<double>(is);
  ck.params.eps = get<double>(is);
  ck.params.Jnn = get<double>(is);
  ck.params.validate();
  const auto n = static_cast<Eigen::Index>(get<std::uint64_t>(is));
  if (static_cast<std::size_t>(n) != FockBasis(ck.params).dimension())
    throw ValidationError("checkpoint dimension does not match its parameters");
  ck.decomp.residual_bound = get<double>(is);
  ck.decomp.energies.resize(n);
  ck.decomp.vectors.resize(n, n);
  is.read(reinterpret_cast<char*>(ck.decomp.energies.data()), static_cast<std::streamsize>(sizeof(double) * n));
  is.read(reinterpret_cast<char*>(ck.decomp.vectors.data()),
          static_cast<std::streamsize>(sizeof(double) * ck.decomp.vectors.size()));
  if (!is) throw SolverError("checkpoint truncated: " + path.string());
  ck.decomp.near_degenerate = find_near_degenerate(ck.decomp.energies);
  return ck;
}

}  // namespace edh
