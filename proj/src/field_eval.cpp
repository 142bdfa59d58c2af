#include "higherspin/field_eval.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include <Eigen/Dense>
#include <boost/container/small_vector.hpp>

namespace higherspin {
namespace {

using IndexMap = std::map<std::vector<int>, std::size_t>;

IndexMap index_map(int m, int d) {
  IndexMap idx;
  const auto exps = homogeneous_exponents(m, d);
  for (std::size_t i = 0; i < exps.size(); ++i) idx.emplace(exps[i], i);
  return idx;
}

std::vector<int> exponents(const Monomial& mono, Group g, int m) {
  std::vector<int> e(m);
  for (int i = 0; i < m; ++i) e[i] = mono.exp(g, i);
  return e;
}

int common_v_degree(const std::vector<const CliffordPoly*>& polys) {
  int kv = -1;
  for (const auto* p : polys)
    for (const auto& [mono, c] : p->terms()) {
      const int d = mono.degree(Group::V);
      require(kv < 0 || kv == d, ErrorCode::InvalidArgument,
              "field is not homogeneous in v");
      kv = d;
    }
  return std::max(kv, 0);
}

}  // namespace

CompiledField::CompiledField(const CliffordPoly& p, int k) : m_(p.dim()), k_(k) {
  require(m_ >= 1, ErrorCode::InvalidArgument, "cannot compile an empty polynomial");
  kv_ = common_v_degree({&p});
  n_u_ = homogeneous_exponents(m_, k_).size();
  n_v_ = homogeneous_exponents(m_, kv_).size();
  shift_.assign(m_, 0.0);
  compile(p, 0);
}

CompiledField::CompiledField(const RationalKernel& kernel, int k) : m_(kernel.dim()), k_(k) {
  require(m_ >= 1, ErrorCode::InvalidArgument, "cannot compile an empty kernel");
  std::vector<const CliffordPoly*> polys;
  for (const auto& [s, n] : kernel.terms()) polys.push_back(&n);
  kv_ = common_v_degree(polys);
  n_u_ = homogeneous_exponents(m_, k_).size();
  n_v_ = homogeneous_exponents(m_, kv_).size();
  shift_ = kernel.center();
  rational_ = true;
  for (const auto& [s, n] : kernel.terms()) compile(n, s);
}

void CompiledField::compile(const CliffordPoly& p, int pole) {
  const IndexMap u_idx = index_map(m_, k_);
  const IndexMap v_idx = index_map(m_, kv_);
  const std::size_t nb = blades(), w = width();
  std::map<std::vector<int>, std::size_t> where;
  for (std::size_t g = 0; g < groups_.size(); ++g)
    if (groups_[g].pole == pole) where.emplace(groups_[g].x_exp, g);

  for (const auto& [mono, c] : p.terms()) {
    auto ui = u_idx.find(exponents(mono, Group::U, m_));
    require(ui != u_idx.end(), ErrorCode::InvalidArgument,
            "field is not homogeneous of degree " + std::to_string(k_) + " in u");
    const std::size_t vi = v_idx.at(exponents(mono, Group::V, m_));
    auto xe = exponents(mono, Group::X, m_);
    max_x_degree_ = std::max(max_x_degree_, mono.degree(Group::X));
    auto [it, fresh] = where.emplace(xe, groups_.size());
    if (fresh) {
      groups_.push_back({xe, pole});
      coeffs_.resize(coeffs_.size() + w, 0.0);
    }
    double* row = coeffs_.data() + it->second * w + (vi * n_u_ + ui->second) * nb;
    for (std::size_t bl = 0; bl < nb; ++bl) row[bl] += c[static_cast<std::uint32_t>(bl)];
  }
}

void CompiledField::evaluate(std::span<const double> x, std::span<double> out) const {
  require(static_cast<int>(x.size()) == m_ && out.size() >= width(),
          ErrorCode::DimensionMismatch, "field evaluation buffer mismatch");
  const int stride = max_x_degree_ + 1;
  boost::container::small_vector<double, 128> pw(static_cast<std::size_t>(m_) * stride);
  double r2 = 0.0;
  for (int i = 0; i < m_; ++i) {
    const double xi = x[i] - shift_[i];
    r2 += xi * xi;
    double acc = 1.0;
    for (int e = 0; e < stride; ++e) {
      pw[i * stride + e] = acc;
      acc *= xi;
    }
  }
  double rinv = 1.0;
  if (rational_) {
    const double r = std::sqrt(r2);
    if (r < kSingularityGuard) {
      std::ostringstream os;
      os << "kernel evaluated within " << kSingularityGuard << " of its singularity";
      throw Error(ErrorCode::DomainViolation, os.str());
    }
    rinv = 1.0 / r;
  }
  boost::container::small_vector<double, 64> vals(groups_.size());
  for (std::size_t g = 0; g < groups_.size(); ++g) {
    double val = groups_[g].pole ? std::pow(rinv, groups_[g].pole) : 1.0;
    for (int i = 0; i < m_; ++i) val *= pw[i * stride + groups_[g].x_exp[i]];
    vals[g] = val;
  }
  using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const auto n = static_cast<Eigen::Index>(groups_.size());
  const auto w = static_cast<Eigen::Index>(width());
  Eigen::Map<Eigen::VectorXd> o(out.data(), w);
  if (n == 0) {
    o.setZero();
    return;
  }
  o.noalias() = Eigen::Map<const RowMat>(coeffs_.data(), n, w).transpose() *
                Eigen::Map<const Eigen::VectorXd>(vals.data(), n);
}

UPairing::UPairing(int m, int k) : m_(m) {
  const auto exps = homogeneous_exponents(m, k);
  n_u_ = exps.size();
  moments_.resize(n_u_ * n_u_);
  std::vector<int> sum(m);
  for (std::size_t a = 0; a < n_u_; ++a)
    for (std::size_t b = 0; b < n_u_; ++b) {
      for (int i = 0; i < m; ++i) sum[i] = exps[a][i] + exps[b][i];
      moments_[a * n_u_ + b] = sphere_moment(m, sum);
    }
  scratch_.resize(n_u_ << m);
}

void UPairing::accumulate(std::span<const double> left, std::size_t v_slots,
                          std::span<const double> right, double scale,
                          std::span<double> out) const {
  const std::size_t nb = std::size_t{1} << m_;
  require(left.size() >= v_slots * n_u_ * nb && right.size() >= n_u_ * nb &&
              out.size() >= v_slots * nb,
          ErrorCode::DimensionMismatch, "pairing buffer mismatch");
  std::fill(scratch_.begin(), scratch_.end(), 0.0);
  for (std::size_t a = 0; a < n_u_; ++a)
    for (std::size_t b = 0; b < n_u_; ++b) {
      const double w = scale * moments_[a * n_u_ + b];
      if (w == 0.0) continue;
      for (std::size_t c = 0; c < nb; ++c) scratch_[a * nb + c] += w * right[b * nb + c];
    }
  for (std::size_t v = 0; v < v_slots; ++v)
    for (std::size_t a = 0; a < n_u_; ++a)
      geometric_product_accumulate(left.data() + (v * n_u_ + a) * nb, scratch_.data() + a * nb,
                                   out.data() + v * nb, m_);
}

void UPairing::accumulate_outer(std::span<const double> left, std::size_t v_slots,
                                std::span<const double> right, double scale,
                                std::span<double> outer) const {
  using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const Eigen::Index nb = Eigen::Index{1} << m_, nu = static_cast<Eigen::Index>(n_u_);
  require(left.size() >= v_slots * n_u_ * nb && right.size() >= n_u_ * nb &&
              outer.size() >= v_slots * nb * nb,
          ErrorCode::DimensionMismatch, "pairing buffer mismatch");
  Eigen::Map<RowMat> moved(scratch_.data(), nu, nb);
  moved.noalias() = scale * Eigen::Map<const RowMat>(moments_.data(), nu, nu) *
                    Eigen::Map<const RowMat>(right.data(), nu, nb);
  for (std::size_t v = 0; v < v_slots; ++v) {
    Eigen::Map<const RowMat> l(left.data() + v * n_u_ * nb, nu, nb);
    Eigen::Map<RowMat> o(outer.data() + v * nb * nb, nb, nb);
    o.noalias() += l.transpose() * moved;
  }
}

void UPairing::contract(std::span<const double> outer, std::size_t v_slots,
                        std::span<double> out) const {
  const std::uint32_t nb = 1u << m_;
  require(outer.size() >= v_slots * nb * nb && out.size() >= v_slots * nb,
          ErrorCode::DimensionMismatch, "pairing buffer mismatch");
  for (std::size_t v = 0; v < v_slots; ++v) {
    const double* g = outer.data() + v * nb * nb;
    double* o = out.data() + v * nb;
    for (std::uint32_t i = 0; i < nb; ++i)
      for (std::uint32_t j = 0; j < nb; ++j) o[i ^ j] += blade_sign(i, j) * g[i * nb + j];
  }
}

void left_multiply_vector(std::span<const double> n, int m, std::span<double> block) {
  const std::uint32_t nb = 1u << m;
  double tmp[1u << kMaxDim];
  for (std::size_t off = 0; off + nb <= block.size(); off += nb) {
    double* c = block.data() + off;
    std::fill(tmp, tmp + nb, 0.0);
    for (int i = 0; i < m; ++i) {
      const std::uint32_t e = 1u << i;
      for (std::uint32_t j = 0; j < nb; ++j) tmp[e ^ j] += blade_sign(e, j) * n[i] * c[j];
    }
    std::copy(tmp, tmp + nb, c);
  }
}

namespace {

void check_pairing(const CompiledField& left, const CompiledField& right,
                   const UPairing& pairing) {
  require(right.v_slots() == 1, ErrorCode::InvalidArgument,
          "right factor of a pairing must not depend on v");
  require(left.u_slots() == pairing.u_slots() && right.u_slots() == pairing.u_slots(),
          ErrorCode::DimensionMismatch, "pairing degree mismatch");
}

std::vector<double> contracted(const UPairing& pairing, const std::vector<double>& outer,
                               std::size_t v_slots) {
  std::vector<double> out(v_slots << pairing.dim(), 0.0);
  pairing.contract(outer, v_slots, out);
  return out;
}

}  // namespace

std::vector<double> boundary_pairing(const SphereRule& rule, const CompiledField& left,
                                     const CompiledField& right, const UPairing& pairing) {
  check_pairing(left, right, pairing);
  std::vector<double> lbuf(left.width()), rbuf(right.width());
  const int m = rule.m;
  const std::size_t nb = left.blades();
  const auto outer = integrate_surface_block(
      rule, left.v_slots() * nb * nb,
      [&](std::span<const double> x, std::span<const double> n, double w,
          std::span<double> acc) {
        left.evaluate(x, lbuf);
        right.evaluate(x, rbuf);
        left_multiply_vector(n, m, rbuf);
        pairing.accumulate_outer(lbuf, left.v_slots(), rbuf, w, acc);
      });
  return contracted(pairing, outer, left.v_slots());
}

std::vector<double> volume_pairing(const BallRule& rule, const CompiledField& left,
                                   const CompiledField& right, const UPairing& pairing) {
  check_pairing(left, right, pairing);
  std::vector<double> lbuf(left.width()), rbuf(right.width());
  const std::size_t nb = left.blades();
  const auto outer = integrate_volume_block(
      rule, left.v_slots() * nb * nb,
      [&](std::span<const double> x, double w, std::span<double> acc) {
        left.evaluate(x, lbuf);
        right.evaluate(x, rbuf);
        pairing.accumulate_outer(lbuf, left.v_slots(), rbuf, w, acc);
      });
  return contracted(pairing, outer, left.v_slots());
}

std::vector<double> v_block(const CliffordPoly& p, int kv) {
  const int m = p.dim();
  const IndexMap idx = index_map(m, kv);
  const std::size_t nb = std::size_t{1} << m;
  std::vector<double> out(idx.size() * nb, 0.0);
  for (const auto& [mono, c] : p.terms()) {
    require(mono.degree(Group::U) == 0 && mono.degree(Group::X) == 0,
            ErrorCode::InvalidArgument, "v_block expects a polynomial in v only");
    auto it = idx.find(exponents(mono, Group::V, m));
    require(it != idx.end(), ErrorCode::InvalidArgument,
            "polynomial is not homogeneous of degree " + std::to_string(kv) + " in v");
    std::copy(c.coeffs().begin(), c.coeffs().end(),
              out.begin() + static_cast<std::ptrdiff_t>(it->second * nb));
  }
  return out;
}

CliffordPoly from_v_block(int m, int kv, std::span<const double> block) {
  const auto exps = homogeneous_exponents(m, kv);
  const std::size_t nb = std::size_t{1} << m;
  require(block.size() == exps.size() * nb, ErrorCode::DimensionMismatch,
          "v block has the wrong size");
  CliffordPoly p(m);
  for (std::size_t i = 0; i < exps.size(); ++i) {
    Monomial mono;
    for (int c = 0; c < m; ++c) mono.set(Group::V, c, exps[i][c]);
    p.add_term(mono, Multivector(m, block.subspan(i * nb, nb)));
  }
  return p.prune(0.0);
}

}  // namespace higherspin
