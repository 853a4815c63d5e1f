#include "kirchhoff/dense.hpp"

#include <Eigen/Dense>

#include "kirchhoff/errors.hpp"

namespace kirchhoff {

FieldPair dense_solve(const PairOperator& op, const FieldPair& rhs) {
  require_same_grid(rhs.first, rhs.second, "dense_solve");
  const auto& grid = rhs.first.grid_ptr();
  const Eigen::Index n = static_cast<Eigen::Index>(rhs.first.size());

  Eigen::MatrixXcd a(2 * n, 2 * n);
  FieldPair unit = zero_pair(grid);
  for (Eigen::Index col = 0; col < 2 * n; ++col) {
    auto& slot = col < n ? unit.first[static_cast<std::size_t>(col)]
                         : unit.second[static_cast<std::size_t>(col - n)];
    slot = 1.0;
    const FieldPair image = op(unit);
    for (Eigen::Index r = 0; r < n; ++r) {
      a(r, col) = image.first[static_cast<std::size_t>(r)];
      a(n + r, col) = image.second[static_cast<std::size_t>(r)];
    }
    slot = 0.0;
  }

  Eigen::VectorXcd b(2 * n);
  for (Eigen::Index r = 0; r < n; ++r) {
    b(r) = rhs.first[static_cast<std::size_t>(r)];
    b(n + r) = rhs.second[static_cast<std::size_t>(r)];
  }

  const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
  if (!(lu.rcond() > 1e-14)) throw NumericalError("dense_solve: matrix is numerically singular");
  const Eigen::VectorXcd x = lu.solve(b);

  FieldPair out = zero_pair(grid);
  for (Eigen::Index r = 0; r < n; ++r) {
    out.first[static_cast<std::size_t>(r)] = x(r);
    out.second[static_cast<std::size_t>(r)] = x(n + r);
  }
  return out;
}

}  // namespace kirchhoff
