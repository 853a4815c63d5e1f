#pragma once

#include <algorithm>
#include <cstdint>

#include "kirchhoff/complex_field.hpp"
#include "kirchhoff/normal_form_ops.hpp"

namespace kt {

using namespace kirchhoff;

inline ConjugatePair random_pair(const GridPtr& g, std::uint64_t seed, double norm) {
  return {random_field(g, seed, norm, g->m0(), Symmetry::free)};
}

inline FieldPair random_free_pair(const GridPtr& g, std::uint64_t seed, double norm, double s) {
  return {random_field(g, seed, norm, s, Symmetry::free),
          random_field(g, seed + 7919, norm, s, Symmetry::free)};
}

inline RealPair random_real(const GridPtr& g, std::uint64_t seed, double norm_u, double norm_v) {
  return {random_field(g, seed, norm_u, g->m0() + 0.5, Symmetry::hermitian),
          random_field(g, seed + 104729, norm_v, g->m0() - 0.5, Symmetry::hermitian)};
}

inline double diff(const ComplexField& a, const ComplexField& b) { return max_abs(a - b); }
inline double diff(const FieldPair& a, const FieldPair& b) { return max_abs(a - b); }
inline double diff(const RealPair& a, const RealPair& b) {
  return std::max(max_abs(a.u - b.u), max_abs(a.v - b.v));
}

}  // namespace kt
