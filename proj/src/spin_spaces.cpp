#include "higherspin/spin_spaces.hpp"

#include <cmath>

#include "higherspin/operators.hpp"
#include "linalg.hpp"

namespace higherspin {
namespace {

void check_mk(int m, int k) {
  require(m >= 3 && m <= kMaxDim, ErrorCode::InvalidArgument,
          "spin spaces need 3 <= m <= 8, got m=" + std::to_string(m));
  require(k >= 0, ErrorCode::InvalidArgument, "degree k must be non-negative");
}

double projection_denominator(int m, int k) {
  const int d = m + 2 * k - 2;
  require(d != 0, ErrorCode::InvalidArgument, "m + 2k - 2 = 0: projection undefined");
  return static_cast<double>(d);
}

Monomial u_monomial(const std::vector<int>& alpha) {
  Monomial mono;
  for (std::size_t i = 0; i < alpha.size(); ++i) mono.set(Group::U, static_cast<int>(i), alpha[i]);
  return mono;
}

/// All u^alpha e_A with |alpha| = k.
std::vector<CliffordPoly> monomial_blade_basis(int m, int k) {
  std::vector<CliffordPoly> out;
  const std::uint32_t blades = 1u << m;
  for (const auto& alpha : homogeneous_exponents(m, k)) {
    const Monomial mono = u_monomial(alpha);
    for (std::uint32_t b = 0; b < blades; ++b)
      out.push_back(CliffordPoly::monomial(mono, Multivector::blade(m, b)));
  }
  return out;
}

CliffordPoly combine(const std::vector<CliffordPoly>& basis, const Eigen::VectorXd& coeffs,
                     int m) {
  CliffordPoly p(m);
  for (Eigen::Index i = 0; i < coeffs.size(); ++i)
    if (coeffs(i) != 0.0) p.add_scaled(basis[static_cast<std::size_t>(i)], coeffs(i));
  return p.prune();
}

double min_gram_sv(const std::vector<CliffordPoly>& elems, int m) {
  if (elems.empty()) return 0.0;
  const Eigen::MatrixXd a = detail::assemble_columns(m, elems);
  const Eigen::MatrixXd gram = a.transpose() * a;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

PolySpaceBasis nullspace_basis(int m, int k, SpaceKind kind,
                               const std::vector<CliffordPoly>& domain,
                               const std::vector<CliffordPoly>& images) {
  const Eigen::MatrixXd a = detail::assemble_columns(m, images);
  const auto ns = detail::nullspace(a);
  PolySpaceBasis out;
  out.m = m;
  out.k = k;
  out.kind = kind;
  out.operator_singular_values.assign(ns.singular_values.data(),
                                      ns.singular_values.data() + ns.singular_values.size());
  for (Eigen::Index c = 0; c < ns.basis.cols(); ++c)
    out.elements.push_back(combine(domain, ns.basis.col(c), m));
  out.min_gram_singular_value = min_gram_sv(out.elements, m);
  return out;
}

/// Indices of elements whose right Cl_m-multiples are independent, chosen
/// greedily until they span the same real space as all of `elems`.
std::vector<std::size_t> module_basis(const std::vector<CliffordPoly>& elems, int m) {
  const std::uint32_t blades = 1u << m;
  std::vector<CliffordPoly> cols;
  for (const auto& p : elems)
    for (std::uint32_t b = 0; b < blades; ++b) cols.push_back(p * Multivector::blade(m, b));
  const Eigen::MatrixXd all = detail::assemble_columns(m, cols);
  Eigen::MatrixXd q(all.rows(), 0);
  std::vector<std::size_t> chosen;
  for (std::size_t i = 0; i < elems.size(); ++i) {
    Eigen::MatrixXd block = all.middleCols(static_cast<Eigen::Index>(i * blades), blades);
    const double size = block.norm() / std::sqrt(double(blades));
    if (q.cols() > 0) block -= q * (q.transpose() * block);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(block, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    if (sv.size() < blades || sv(blades - 1) <= 0.05 * size) continue;
    Eigen::MatrixXd grown(q.rows(), q.cols() + blades);
    grown << q, svd.matrixU().leftCols(blades);
    q = std::move(grown);
    chosen.push_back(i);
    if (static_cast<std::size_t>(q.cols()) == elems.size()) break;
  }
  return chosen;
}

}  // namespace

PolySpaceBasis build_harmonic_basis(int m, int k) {
  check_mk(m, k);
  const auto domain = monomial_blade_basis(m, k);
  std::vector<CliffordPoly> images;
  images.reserve(domain.size());
  for (const auto& p : domain) images.push_back(laplacian(p, Group::U));
  return nullspace_basis(m, k, SpaceKind::Harmonic, domain, images);
}

PolySpaceBasis build_monogenic_basis(int m, int k) {
  check_mk(m, k);
  const auto domain = monomial_blade_basis(m, k);
  std::vector<CliffordPoly> images;
  images.reserve(domain.size());
  for (const auto& p : domain) images.push_back(dirac_left(p, Group::U));
  return nullspace_basis(m, k, SpaceKind::Monogenic, domain, images);
}

CliffordPoly proj_plus(const CliffordPoly& h, int k) {
  if (h.is_zero()) return h;
  const int m = h.dim();
  const double d = projection_denominator(m, k);
  CliffordPoly r = h;
  r.add_scaled(CliffordPoly::vector_variable(m, Group::U) * dirac_left(h, Group::U), 1.0 / d);
  return r;
}

CliffordPoly proj_minus(const CliffordPoly& h, int k) {
  if (h.is_zero()) return h;
  const int m = h.dim();
  const double d = projection_denominator(m, k);
  return (CliffordPoly::vector_variable(m, Group::U) * dirac_left(h, Group::U)) * (-1.0 / d);
}

CliffordPoly proj_plus_right(const CliffordPoly& g, int k) {
  if (g.is_zero()) return g;
  const int m = g.dim();
  const double d = projection_denominator(m, k);
  CliffordPoly r = g;
  r.add_scaled(dirac_right(g, Group::U) * CliffordPoly::vector_variable(m, Group::U), 1.0 / d);
  return r;
}

CliffordPoly proj_minus_right(const CliffordPoly& g, int k) {
  if (g.is_zero()) return g;
  const int m = g.dim();
  const double d = projection_denominator(m, k);
  return (dirac_right(g, Group::U) * CliffordPoly::vector_variable(m, Group::U)) * (-1.0 / d);
}

std::pair<CliffordPoly, CliffordPoly> almansi_fischer_split(const CliffordPoly& h, int k) {
  const double scale = std::max(1.0, h.max_abs());
  require(h.is_homogeneous(Group::U, k), ErrorCode::DomainViolation,
          "almansi_fischer_split: argument is not homogeneous of degree k in u");
  const double harm = laplacian(h, Group::U).max_abs() / scale;
  require(harm <= kDomainTolerance, ErrorCode::DomainViolation,
          "almansi_fischer_split: argument is not harmonic in u (residual " +
              std::to_string(harm) + ")");
  return {proj_plus(h, k), proj_minus(h, k)};
}

// ------------------------------------------------------------ zonal kernel

ZonalKernel build_zonal_kernel(int m, int k) {
  return build_zonal_kernel(build_monogenic_basis(m, k));
}

ZonalKernel build_zonal_kernel(const PolySpaceBasis& monogenic) {
  require(monogenic.kind == SpaceKind::Monogenic, ErrorCode::InvalidArgument,
          "build_zonal_kernel needs a monogenic basis");
  const int m = monogenic.m;
  const int k = monogenic.k;
  const auto& all = monogenic.elements;
  // Right linearity of the reproducing identity lets a module basis stand in
  // for the full real basis; fall back to the full basis if none is found.
  std::vector<CliffordPoly> f;
  const auto chosen = module_basis(all, m);
  if (chosen.size() << m == all.size())
    for (std::size_t i : chosen) f.push_back(all[i]);
  else
    f = all;
  const auto n = static_cast<Eigen::Index>(f.size());
  const Eigen::Index blades = Eigen::Index{1} << m;

  // Ansatz Z(u,v) = sum_i f_i(u) c_i(v). Writing X_i = conj(c_i), the
  // reproducing identity for f_l reads sum_i X_i(v) G_il = f_l(v) with the
  // Clifford Gram matrix G_il = int_S conj(f_i) f_l dS.
  std::vector<CliffordPoly> conj_f;
  conj_f.reserve(f.size());
  for (const auto& p : f) conj_f.push_back(conjugation(p));
  std::vector<Multivector> gram(static_cast<std::size_t>(n * n), Multivector(m));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index l = 0; l < n; ++l)
      gram[static_cast<std::size_t>(i * n + l)] = pairing_u(conj_f[i], f[l]);

  // Real matrix of X -> X G. Column (i, A): X_i = e_A. Row (l, B).
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n * blades, n * blades);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index ablade = 0; ablade < blades; ++ablade)
      for (Eigen::Index l = 0; l < n; ++l) {
        const Multivector& g = gram[static_cast<std::size_t>(i * n + l)];
        for (Eigen::Index b = 0; b < blades; ++b) {
          if (g[static_cast<std::uint32_t>(b)] == 0.0) continue;
          const auto ua = static_cast<std::uint32_t>(ablade);
          const auto ub = static_cast<std::uint32_t>(b);
          a(l * blades + (ua ^ ub), i * blades + ablade) +=
              blade_sign(ua, ub) * g[ub];
        }
      }

  // One right-hand side per v-monomial of degree k.
  const auto v_exps = homogeneous_exponents(m, k);
  const auto nv = static_cast<Eigen::Index>(v_exps.size());
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(n * blades, nv);
  for (Eigen::Index l = 0; l < n; ++l)
    for (const auto& [mono, c] : f[l].terms()) {
      std::vector<int> alpha(m);
      for (int i = 0; i < m; ++i) alpha[i] = mono.exp(Group::U, i);
      const auto col = std::find(v_exps.begin(), v_exps.end(), alpha) - v_exps.begin();
      for (Eigen::Index b = 0; b < blades; ++b)
        rhs(l * blades + b, col) = c[static_cast<std::uint32_t>(b)];
    }

  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod;
  cod.setThreshold(1e-10);
  cod.compute(a);
  const Eigen::MatrixXd sol = cod.solve(rhs);

  ZonalKernel z;
  z.m = m;
  z.k = k;
  z.system_rank = static_cast<int>(cod.rank());
  z.system_size = static_cast<int>(a.cols());
  {
    const auto& r = cod.matrixQTZ();
    const Eigen::Index rank = cod.rank();
    double pmax = 0.0, pmin = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < rank; ++i) {
      pmax = std::max(pmax, std::abs(r(i, i)));
      pmin = std::min(pmin, std::abs(r(i, i)));
    }
    z.condition_estimate = rank ? pmax / pmin : std::numeric_limits<double>::infinity();
  }

  CliffordPoly zp(m);
  for (Eigen::Index i = 0; i < n; ++i) {
    CliffordPoly c(m);
    for (Eigen::Index col = 0; col < nv; ++col) {
      Multivector xi(m);
      for (Eigen::Index b = 0; b < blades; ++b)
        xi[static_cast<std::uint32_t>(b)] = sol(i * blades + b, col);
      if (xi.max_abs() == 0.0) continue;
      Monomial mono;
      for (int t = 0; t < m; ++t) mono.set(Group::V, t, v_exps[static_cast<std::size_t>(col)][t]);
      c.add_term(mono, xi.conjugation());
    }
    zp += f[i] * c.prune();
  }
  z.poly = zp.prune();

  double worst = 0.0;
  for (const auto& fl : all) worst = std::max(worst, reproducing_residual(z, fl));
  z.residual = worst;
  require(z.residual <= kReproducingTolerance, ErrorCode::Singular,
          "zonal kernel solve failed for m=" + std::to_string(m) + ", k=" + std::to_string(k) +
              ": residual " + std::to_string(z.residual) + ", rank " +
              std::to_string(z.system_rank) + "/" + std::to_string(z.system_size) +
              ", condition estimate " + std::to_string(z.condition_estimate));
  return z;
}

double reproducing_residual(const ZonalKernel& z, const CliffordPoly& f) {
  const CliffordPoly reproduced = pair_u_conjugated(z.poly, f);
  const CliffordPoly target = rename_group(f, Group::U, Group::V);
  return (reproduced - target).max_abs();
}

// --------------------------------------------------------- R_k null space

PolySpaceBasis build_rk_null_basis(int m, int k, int d) {
  return build_rk_null_basis(build_monogenic_basis(m, k), d);
}

PolySpaceBasis build_rk_null_basis(const PolySpaceBasis& monogenic, int d) {
  require(monogenic.kind == SpaceKind::Monogenic, ErrorCode::InvalidArgument,
          "build_rk_null_basis needs a monogenic basis");
  require(d >= 0, ErrorCode::InvalidArgument, "x-degree must be non-negative");
  const int m = monogenic.m;
  const int k = monogenic.k;
  std::vector<CliffordPoly> domain;
  for (const auto& alpha : homogeneous_exponents(m, d)) {
    Monomial mono;
    for (int i = 0; i < m; ++i) mono.set(Group::X, i, alpha[i]);
    const CliffordPoly xa = CliffordPoly::monomial(mono, Multivector::scalar(m, 1.0));
    for (const auto& phi : monogenic.elements) domain.push_back(xa * phi);
  }
  std::vector<CliffordPoly> images;
  images.reserve(domain.size());
  for (const auto& p : domain) images.push_back(apply_Rk(p, k, false));
  PolySpaceBasis out = nullspace_basis(m, k, SpaceKind::RkNull, domain, images);
  out.x_degree = d;
  return out;
}

}  // namespace higherspin
