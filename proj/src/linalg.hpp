#pragma once

// Internal helpers shared by the basis constructions: flattening polynomials
// into real coordinate vectors and SVD nullspaces.

#include <map>
#include <vector>

#include <Eigen/Dense>

#include "higherspin/poly.hpp"

namespace higherspin::detail {

/// Assigns a dense row index to every (monomial, blade) pair seen so far.
class CoordinateIndex {
 public:
  explicit CoordinateIndex(int m) : blades_(1u << m) {}

  Eigen::Index row(const Monomial& mono, std::uint32_t blade) {
    auto [it, inserted] = slots_.try_emplace(mono, static_cast<Eigen::Index>(slots_.size()));
    return it->second * blades_ + blade;
  }
  Eigen::Index rows() const { return static_cast<Eigen::Index>(slots_.size()) * blades_; }

 private:
  std::uint32_t blades_;
  std::map<Monomial, Eigen::Index> slots_;
};

/// Stacks images of basis elements as columns of a real matrix.
inline Eigen::MatrixXd assemble_columns(int m, const std::vector<CliffordPoly>& images) {
  CoordinateIndex index(m);
  std::vector<std::vector<std::pair<Eigen::Index, double>>> cols(images.size());
  for (std::size_t c = 0; c < images.size(); ++c)
    for (const auto& [mono, coef] : images[c].terms())
      for (std::uint32_t b = 0; b < coef.size(); ++b)
        if (coef[b] != 0.0) cols[c].emplace_back(index.row(mono, b), coef[b]);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(std::max<Eigen::Index>(index.rows(), 1),
                                            static_cast<Eigen::Index>(images.size()));
  for (std::size_t c = 0; c < cols.size(); ++c)
    for (auto [r, v] : cols[c]) a(r, static_cast<Eigen::Index>(c)) = v;
  return a;
}

struct NullspaceResult {
  Eigen::MatrixXd basis;          // columns span the nullspace
  Eigen::VectorXd singular_values;
  int rank = 0;
};

/// Nullspace by SVD; singular values below rel_cutoff * sigma_max count as zero.
inline NullspaceResult nullspace(const Eigen::MatrixXd& a, double rel_cutoff = 1e-9) {
  const Eigen::Index n = a.cols();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  NullspaceResult out;
  out.singular_values = svd.singularValues();
  const double smax = out.singular_values.size() ? out.singular_values(0) : 0.0;
  int rank = 0;
  for (Eigen::Index i = 0; i < out.singular_values.size(); ++i)
    if (out.singular_values(i) > rel_cutoff * smax && smax > 0.0) ++rank;
  out.rank = rank;
  out.basis = svd.matrixV().rightCols(n - rank);
  return out;
}

}  // namespace higherspin::detail
