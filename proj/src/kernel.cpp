#include "higherspin/kernel.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include <json.hpp>

namespace higherspin {

RationalKernel::RationalKernel(int m, std::vector<double> center)
    : m_(m), center_(std::move(center)) {
  require(m >= 1 && m <= kMaxDim, ErrorCode::InvalidArgument, "kernel dimension out of range");
  require(static_cast<int>(center_.size()) == m, ErrorCode::DimensionMismatch,
          "kernel center has wrong length");
}

void RationalKernel::check_compatible(const RationalKernel& o) const {
  require(m_ == o.m_ && center_ == o.center_, ErrorCode::DimensionMismatch,
          "kernels with different dimension or center");
}

void RationalKernel::add_term(int pole, const CliffordPoly& numerator, double scale) {
  require(pole >= 0, ErrorCode::InvalidArgument, "negative pole power");
  if (numerator.is_zero() || scale == 0.0) return;
  require(numerator.dim() == m_, ErrorCode::DimensionMismatch, "numerator dimension mismatch");
  auto it = terms_.find(pole);
  if (it == terms_.end()) {
    CliffordPoly n = numerator;
    if (scale != 1.0) n *= scale;
    n.prune();
    if (!n.is_zero()) terms_.emplace(pole, std::move(n));
    return;
  }
  it->second.add_scaled(numerator, scale);
  if (it->second.is_zero()) terms_.erase(it);
}

RationalKernel& RationalKernel::operator+=(const RationalKernel& o) {
  if (o.m_ == 0) return *this;
  if (m_ == 0) return *this = o;
  check_compatible(o);
  for (const auto& [s, n] : o.terms_) add_term(s, n);
  return *this;
}

RationalKernel& RationalKernel::operator-=(const RationalKernel& o) {
  if (o.m_ == 0) return *this;
  if (m_ == 0) {
    *this = o;
    return *this *= -1.0;
  }
  check_compatible(o);
  for (const auto& [s, n] : o.terms_) add_term(s, n, -1.0);
  return *this;
}

RationalKernel& RationalKernel::operator*=(double s) {
  if (s == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& [p, n] : terms_) n *= s;
  return *this;
}

std::optional<int> RationalKernel::homogeneity() const {
  std::optional<int> h;
  for (const auto& [s, n] : terms_) {
    const int d = n.max_degree(Group::X);
    if (!n.is_homogeneous(Group::X, d)) return std::nullopt;
    if (h && *h != d - s) return std::nullopt;
    h = d - s;
  }
  return h;
}

double RationalKernel::max_abs() const noexcept {
  double r = 0.0;
  for (const auto& [s, n] : terms_) r = std::max(r, n.max_abs());
  return r;
}

RationalKernel operator+(RationalKernel a, const RationalKernel& b) { return a += b; }
RationalKernel operator-(RationalKernel a, const RationalKernel& b) { return a -= b; }
RationalKernel operator*(RationalKernel a, double s) { return a *= s; }

RationalKernel differentiate_x(const RationalKernel& k, int i) {
  RationalKernel r(k.dim(), k.center());
  for (const auto& [s, n] : k.terms()) {
    r.add_term(s, derivative(n, Group::X, i));
    if (s != 0) r.add_term(s + 2, times_variable(n, Group::X, i), -static_cast<double>(s));
  }
  return r;
}

RationalKernel dirac_x_left(const RationalKernel& k) {
  const CliffordPoly xvec = CliffordPoly::vector_variable(k.dim(), Group::X);
  RationalKernel r(k.dim(), k.center());
  for (const auto& [s, n] : k.terms()) {
    r.add_term(s, dirac_left(n, Group::X));
    if (s != 0) r.add_term(s + 2, xvec * n, -static_cast<double>(s));
  }
  return r;
}

RationalKernel dirac_x_right(const RationalKernel& k) {
  const CliffordPoly xvec = CliffordPoly::vector_variable(k.dim(), Group::X);
  RationalKernel r(k.dim(), k.center());
  for (const auto& [s, n] : k.terms()) {
    r.add_term(s, dirac_right(n, Group::X));
    if (s != 0) r.add_term(s + 2, n * xvec, -static_cast<double>(s));
  }
  return r;
}

RationalKernel conjugation(const RationalKernel& k) {
  return k.map_numerators([](const CliffordPoly& n) { return conjugation(n); });
}

RationalKernel proj_plus(const RationalKernel& k, int deg) {
  return k.map_numerators([deg](const CliffordPoly& n) { return proj_plus(n, deg); });
}
RationalKernel proj_minus(const RationalKernel& k, int deg) {
  return k.map_numerators([deg](const CliffordPoly& n) { return proj_minus(n, deg); });
}
RationalKernel proj_plus_right(const RationalKernel& k, int deg) {
  return k.map_numerators([deg](const CliffordPoly& n) { return proj_plus_right(n, deg); });
}
RationalKernel proj_minus_right(const RationalKernel& k, int deg) {
  return k.map_numerators([deg](const CliffordPoly& n) { return proj_minus_right(n, deg); });
}

CliffordPoly evaluate_kernel(const RationalKernel& k, std::span<const double> x) {
  const int m = k.dim();
  require(static_cast<int>(x.size()) == m, ErrorCode::DimensionMismatch,
          "evaluation point has wrong length");
  std::vector<double> shifted(m);
  double r2 = 0.0;
  for (int i = 0; i < m; ++i) {
    shifted[i] = x[i] - k.center()[i];
    r2 += shifted[i] * shifted[i];
  }
  const double r = std::sqrt(r2);
  if (r < kSingularityGuard && !k.is_zero()) {
    std::ostringstream os;
    os << "kernel evaluated at its singularity (|x-y| = " << r << ")";
    throw Error(ErrorCode::DomainViolation, os.str());
  }
  Assignment a;
  a.set(Group::X, shifted);
  CliffordPoly out(m);
  for (const auto& [s, n] : k.terms()) out.add_scaled(evaluate(n, a), std::pow(r, -s));
  return out;
}

double domain_residual(const RationalKernel& k, int deg, ValueSpace s) {
  if (k.is_zero()) return 0.0;
  const int m = k.dim();
  double worst = 0.0;
  for (int p = 0; p < 3; ++p) {
    std::vector<double> x(m);
    for (int i = 0; i < m; ++i)
      x[i] = k.center()[i] + 0.9 * std::cos(1.3 * (i + 1) + 2.1 * p) + 0.05 * (p + 1);
    worst = std::max(worst, domain_residual(evaluate_kernel(k, x), deg, s));
  }
  return worst;
}

RationalKernel build_Ek(int m, int k, int j, std::span<const double> y, const ZonalKernel& z,
                        double lambda) {
  require(m >= 3 && m <= kMaxDim, ErrorCode::InvalidArgument, "m must lie in [3, 8]");
  require(z.m == m && z.k == k, ErrorCode::DimensionMismatch,
          "zonal kernel does not match (m, k)");
  require(j >= 1, ErrorCode::InvalidArgument, "j must be >= 1");
  require(lambda != 0.0 && std::isfinite(lambda), ErrorCode::NotCalibrated,
          "normalisation constant lambda is not calibrated (zero or non-finite)");
  require(static_cast<int>(y.size()) == m, ErrorCode::DimensionMismatch,
          "kernel center has wrong length");

  // Components of X u X = |X|^2 u - 2 <X, u> X as scalar polynomials in X and u.
  CliffordPoly norm2(m), inner(m);
  for (int i = 0; i < m; ++i) {
    Monomial xx;
    xx.set(Group::X, i, 2);
    norm2.add_term(xx, Multivector::scalar(m, 1.0));
    Monomial xu;
    xu.set(Group::X, i, 1);
    xu.set(Group::U, i, 1);
    inner.add_term(xu, Multivector::scalar(m, 1.0));
  }
  std::vector<CliffordPoly> w;
  w.reserve(m);
  for (int l = 0; l < m; ++l) {
    CliffordPoly wl = norm2 * CliffordPoly::variable(m, Group::U, l);
    wl.add_scaled(inner * CliffordPoly::variable(m, Group::X, l), -2.0);
    w.push_back(std::move(wl));
  }
  CliffordPoly numer = CliffordPoly::vector_variable(m, Group::X) * substitute(z.poly, Group::U, w);
  numer *= lambda;

  RationalKernel e(m, std::vector<double>(y.begin(), y.end()));
  e.add_term(m - 2 * j + 2 + 2 * k, numer);
  return e;
}

RationalKernel pairing_kernel(const RationalKernel& ek) { return conjugation(ek); }

std::vector<std::vector<double>> ladder_sample_points(int m, std::span<const double> y,
                                                      int count, unsigned long long seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> radius(0.5, 2.0);
  std::vector<std::vector<double>> pts;
  pts.reserve(count);
  for (int p = 0; p < count; ++p) {
    std::vector<double> d(m);
    double n2 = 0.0;
    do {
      n2 = 0.0;
      for (auto& c : d) {
        c = normal(rng);
        n2 += c * c;
      }
    } while (n2 < 1e-12);
    const double r = radius(rng) / std::sqrt(n2);
    std::vector<double> x(m);
    for (int i = 0; i < m; ++i) x[i] = y[i] + r * d[i];
    pts.push_back(std::move(x));
  }
  return pts;
}

namespace {

// Coefficient vectors of a and b over the union of their terms.
void collect_pairs(const CliffordPoly& a, const CliffordPoly& b, std::vector<double>& av,
                   std::vector<double>& bv) {
  for (const auto& [mono, c] : a.terms()) {
    auto it = b.terms().find(mono);
    for (std::size_t i = 0; i < c.size(); ++i) {
      av.push_back(c.coeffs()[i]);
      bv.push_back(it == b.terms().end() ? 0.0 : it->second.coeffs()[i]);
    }
  }
  for (const auto& [mono, c] : b.terms()) {
    if (a.terms().count(mono)) continue;
    for (std::size_t i = 0; i < c.size(); ++i) {
      av.push_back(0.0);
      bv.push_back(c.coeffs()[i]);
    }
  }
}

}  // namespace

LadderResult ladder_check(const FermionicOperatorSpec& spec, const RationalKernel& e_hi,
                          const RationalKernel& e_lo, int points, unsigned long long seed) {
  require(spec.j >= 2, ErrorCode::InvalidArgument, "ladder check needs j >= 2");
  require(e_hi.dim() == spec.m && e_lo.dim() == spec.m, ErrorCode::DimensionMismatch,
          "ladder kernels do not match the operator dimension");
  const RationalKernel lhs = apply_ladder_factor(spec, spec.j - 1, e_hi, false);
  std::vector<double> fv, ev;
  for (const auto& x : ladder_sample_points(spec.m, e_hi.center(), points, seed))
    collect_pairs(evaluate_kernel(lhs, x), evaluate_kernel(e_lo, x), fv, ev);

  LadderResult r;
  double fe = 0.0, ee = 0.0;
  for (std::size_t i = 0; i < fv.size(); ++i) {
    r.residual = std::max(r.residual, std::abs(fv[i] - ev[i]));
    r.scale = std::max(r.scale, std::abs(ev[i]));
    fe += fv[i] * ev[i];
    ee += ev[i] * ev[i];
  }
  r.ratio = ee > 0.0 ? fe / ee : 0.0;
  for (std::size_t i = 0; i < fv.size(); ++i)
    r.ratio_residual = std::max(r.ratio_residual, std::abs(fv[i] - r.ratio * ev[i]));
  if (r.scale > 0.0) r.ratio_residual /= std::abs(r.ratio) * r.scale;
  return r;
}

const LambdaEntry& LambdaTable::at(int m, int k, int j) const {
  auto it = entries_.find({m, k, j});
  if (it == entries_.end())
    throw Error(ErrorCode::NotCalibrated, "no calibrated lambda for (m=" + std::to_string(m) +
                                              ", k=" + std::to_string(k) +
                                              ", j=" + std::to_string(j) + ")");
  return it->second;
}

std::string LambdaTable::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [key, e] : entries_)
    arr.push_back({{"m", key[0]},
                   {"k", key[1]},
                   {"j", key[2]},
                   {"lambda", e.value},
                   {"residual", e.residual},
                   {"seed", e.seed}});
  return nlohmann::json{{"lambda_table", arr}}.dump(2);
}

LambdaTable LambdaTable::from_json(const std::string& text) {
  LambdaTable t;
  try {
    const auto doc = nlohmann::json::parse(text);
    for (const auto& e : doc.at("lambda_table"))
      t.set(e.at("m").get<int>(), e.at("k").get<int>(), e.at("j").get<int>(),
            {e.at("lambda").get<double>(), e.value("residual", 0.0),
             e.value("seed", 0ULL)});
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::InvalidArgument, std::string("malformed lambda table: ") + ex.what());
  }
  return t;
}

void LambdaTable::save(const std::string& path) const {
  std::ofstream out(path);
  require(static_cast<bool>(out), ErrorCode::Io, "cannot write " + path);
  out << to_json() << '\n';
}

LambdaTable LambdaTable::load(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCode::Io, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

}  // namespace higherspin
