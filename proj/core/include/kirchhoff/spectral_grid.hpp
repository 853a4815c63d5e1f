#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace kirchhoff {

/// Modes sharing the same squared norm |j|^2. Since modes are ordered by
/// |j|^2 first, every class is a contiguous index range [begin, end).
struct ResonanceClass {
  int norm2;
  std::size_t begin;
  std::size_t end;

  std::size_t size() const { return end - begin; }
};

/// Zero-mean lattice modes j in Z^d with 1 <= |j|^2 <= N^2 (ball truncation),
/// ordered lexicographically on (|j|^2, j_1, ..., j_d).
///
/// Ball truncation keeps every sphere |j| = const complete, which the
/// resonant cubic terms rely on. Grids are immutable and shared through
/// std::shared_ptr<const SpectralGrid>.
class SpectralGrid {
 public:
  SpectralGrid(int dim, int cutoff);

  static std::shared_ptr<const SpectralGrid> make(int dim, int cutoff);

  int dim() const { return dim_; }
  int cutoff() const { return cutoff_; }
  std::size_t size() const { return norm2_.size(); }

  std::span<const int> mode(std::size_t i) const {
    return {modes_.data() + i * static_cast<std::size_t>(dim_),
            static_cast<std::size_t>(dim_)};
  }
  int norm2(std::size_t i) const { return norm2_[i]; }
  /// |j| as a double; equality of norms must be decided on norm2().
  double abs(std::size_t i) const { return abs_[i]; }
  /// Index of -j.
  std::size_t negated(std::size_t i) const { return negated_[i]; }
  std::optional<std::size_t> find(std::span<const int> j) const;

  const std::vector<ResonanceClass>& classes() const { return classes_; }
  std::size_t class_of(std::size_t i) const { return class_of_[i]; }

  /// Sobolev regularity threshold: 1 for d = 1, 3/2 for d >= 2.
  double m0() const { return dim_ == 1 ? 1.0 : 1.5; }

  bool same_as(const SpectralGrid& other) const {
    return dim_ == other.dim_ && cutoff_ == other.cutoff_;
  }

 private:
  int dim_;
  int cutoff_;
  std::vector<int> modes_;
  std::vector<int> norm2_;
  std::vector<double> abs_;
  std::vector<std::size_t> negated_;
  std::vector<ResonanceClass> classes_;
  std::vector<std::size_t> class_of_;
};

using GridPtr = std::shared_ptr<const SpectralGrid>;

inline double sobolev_threshold(int dim) { return dim == 1 ? 1.0 : 1.5; }

}  // namespace kirchhoff
