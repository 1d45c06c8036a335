#include "edh/fock_basis.hpp"

#include <algorithm>
#include <bit>

namespace edh {

int occupied_between(Mask m, int a, int b) {
  if (a > b) std::swap(a, b);
  if (b - a < 2) return 0;
  // bits for sites a+1 .. b-1
  const Mask window = ((Mask{1} << (b - a - 1)) - 1u) << a;
  return std::popcount(m & window);
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return r;
}

std::vector<Mask> fermion_sector(int L, int N) {
  std::vector<Mask> out;
  out.reserve(binomial(L, N));
  if (N == 0) {
    out.push_back(0);
    return out;
  }
  // Gosper's hack walks N-bit words in increasing order.
  std::uint64_t m = (std::uint64_t{1} << N) - 1;
  const std::uint64_t limit = std::uint64_t{1} << L;
  while (m < limit) {
    out.push_back(static_cast<Mask>(m));
    const std::uint64_t c = m & (~m + 1);
    const std::uint64_t r = m + c;
    m = (((r ^ m) >> 2) / c) | r;
  }
  return out;
}

FockBasis::FockBasis(const ModelParams& params) : params_(params) {
  params_.validate();
  masks_ = fermion_sector(params_.L, params_.N);
}

std::size_t FockBasis::rank_of(Mask m) const {
  auto it = std::lower_bound(masks_.begin(), masks_.end(), m);
  if (it == masks_.end() || *it != m) throw ValidationError("mask is not in the fermion sector");
  return static_cast<std::size_t>(it - masks_.begin());
}

std::size_t FockBasis::index_of(int site, Mask m) const {
  if (site < 1 || site > params_.L) throw ValidationError("particle site out of range");
  return static_cast<std::size_t>(site - 1) * masks_.size() + rank_of(m);
}

Mask reflect_mask(Mask m, int L) {
  Mask out = 0;
  for (int i = 1; i <= L; ++i)
    if (occupied(m, i)) out |= Mask{1} << (L - i);
  return out;
}

std::vector<std::size_t> reflection_permutation(const FockBasis& basis) {
  const int L = basis.L();
  std::vector<std::size_t> perm(basis.dimension());
  for (std::size_t k = 0; k < perm.size(); ++k)
    perm[k] = basis.index_of(L + 1 - basis.site_of(k), reflect_mask(basis.mask_of(k), L));
  return perm;
}

}  // namespace edh
