#include "kirchhoff/spectral_grid.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>

#include "kirchhoff/errors.hpp"

namespace kirchhoff {

SpectralGrid::SpectralGrid(int dim, int cutoff) : dim_(dim), cutoff_(cutoff) {
  if (dim < 1 || dim > 3)
    throw ParameterError("SpectralGrid: dimension must be 1, 2 or 3, got " +
                         std::to_string(dim));
  if (cutoff < 1)
    throw ParameterError("SpectralGrid: cutoff must be >= 1, got " +
                         std::to_string(cutoff));

  const int n2max = cutoff * cutoff;
  std::vector<std::array<int, 4>> pts;  // {norm2, j1, j2, j3}
  std::array<int, 3> j{0, 0, 0};
  const int lo = -cutoff;
  const int hi3 = dim >= 3 ? cutoff : 0;
  const int hi2 = dim >= 2 ? cutoff : 0;
  for (j[0] = lo; j[0] <= cutoff; ++j[0])
    for (j[1] = dim >= 2 ? lo : 0; j[1] <= hi2; ++j[1])
      for (j[2] = dim >= 3 ? lo : 0; j[2] <= hi3; ++j[2]) {
        const int n2 = j[0] * j[0] + j[1] * j[1] + j[2] * j[2];
        if (n2 >= 1 && n2 <= n2max) pts.push_back({n2, j[0], j[1], j[2]});
      }
  std::sort(pts.begin(), pts.end());

  const std::size_t n = pts.size();
  modes_.reserve(n * static_cast<std::size_t>(dim));
  norm2_.reserve(n);
  abs_.reserve(n);
  for (const auto& p : pts) {
    for (int c = 0; c < dim; ++c) modes_.push_back(p[1 + c]);
    norm2_.push_back(p[0]);
    abs_.push_back(std::sqrt(static_cast<double>(p[0])));
  }

  negated_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::array<int, 3> neg{0, 0, 0};
    for (int c = 0; c < dim; ++c) neg[c] = -mode(i)[c];
    const auto found = find(std::span<const int>(neg.data(), dim));
    if (!found) throw StructuralError("SpectralGrid: lattice not closed under negation");
    negated_[i] = *found;
  }

  class_of_.resize(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t e = i;
    while (e < n && norm2_[e] == norm2_[i]) ++e;
    for (std::size_t k = i; k < e; ++k) class_of_[k] = classes_.size();
    classes_.push_back({norm2_[i], i, e});
    i = e;
  }
}

std::shared_ptr<const SpectralGrid> SpectralGrid::make(int dim, int cutoff) {
  return std::make_shared<const SpectralGrid>(dim, cutoff);
}

std::optional<std::size_t> SpectralGrid::find(std::span<const int> j) const {
  if (j.size() != static_cast<std::size_t>(dim_)) return std::nullopt;
  int n2 = 0;
  for (int c : j) n2 += c * c;
  if (n2 < 1 || n2 > cutoff_ * cutoff_) return std::nullopt;
  // Binary search on the (norm2, j...) ordering.
  std::size_t lo = 0, hi = size();
  auto less = [&](std::size_t i) {
    if (norm2_[i] != n2) return norm2_[i] < n2;
    const auto m = mode(i);
    return std::lexicographical_compare(m.begin(), m.end(), j.begin(), j.end());
  };
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (less(mid))
      lo = mid + 1;
    else
      hi = mid;
  }
  if (lo < size() && norm2_[lo] == n2 && std::equal(j.begin(), j.end(), mode(lo).begin()))
    return lo;
  return std::nullopt;
}

}  // namespace kirchhoff
