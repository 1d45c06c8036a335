#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "edh/model.hpp"

namespace edh {

/// Fermion occupation word; bit (i-1) is site i.
using Mask = std::uint32_t;

inline bool occupied(Mask m, int site) { return (m >> (site - 1)) & 1u; }

/// Number of occupied sites strictly between sites a and b.
int occupied_between(Mask m, int a, int b);

/// Binomial coefficient for the sizes used here (exact in 64 bits up to n = 62).
std::uint64_t binomial(int n, int k);

/// All L-bit words with exactly N set bits, in increasing integer order.
std::vector<Mask> fermion_sector(int L, int N);

/// Composite basis |site> (x) |mask>, particle site major, masks ascending inside
/// each site block. Index k = (site - 1) * sector_size + rank(mask).
class FockBasis {
 public:
  explicit FockBasis(const ModelParams& params);

  const ModelParams& params() const { return params_; }
  int L() const { return params_.L; }
  int N() const { return params_.N; }
  std::size_t dimension() const { return static_cast<std::size_t>(params_.L) * masks_.size(); }
  std::size_t sector_size() const { return masks_.size(); }
  const std::vector<Mask>& masks() const { return masks_; }

  int site_of(std::size_t k) const { return static_cast<int>(k / masks_.size()) + 1; }
  Mask mask_of(std::size_t k) const { return masks_[k % masks_.size()]; }

  /// Position of `m` inside the fermion sector; throws if m is not in the sector.
  std::size_t rank_of(Mask m) const;
  std::size_t index_of(int site, Mask m) const;

 private:
  ModelParams params_;
  std::vector<Mask> masks_;
};

/// Equivalent to constructing FockBasis directly; kept for call sites that read better as a verb.
inline FockBasis enumerate_basis(const ModelParams& params) { return FockBasis(params); }

/// Site reflection i -> L + 1 - i applied to a mask.
Mask reflect_mask(Mask m, int L);

/// Index permutation of the composite basis under reflection of both factors.
std::vector<std::size_t> reflection_permutation(const FockBasis& basis);

}  // namespace edh
