#include "higherspin/poly.hpp"

#include <cmath>
#include <sstream>

namespace higherspin {

const char* group_name(Group g) noexcept {
  switch (g) {
    case Group::U: return "u";
    case Group::X: return "x";
    case Group::V: return "v";
  }
  return "?";
}

// ---------------------------------------------------------------- Monomial

void Monomial::set(Group g, int i, int power) {
  require(power >= 0 && power <= 255, ErrorCode::InvalidArgument, "exponent out of range");
  auto& slot_ref = e_[slot(g, i)];
  deg_ = static_cast<std::uint16_t>(deg_ - slot_ref + power);
  slot_ref = static_cast<std::uint8_t>(power);
}

void Monomial::bump(Group g, int i, int delta) { set(g, i, exp(g, i) + delta); }

int Monomial::degree(Group g) const noexcept {
  int d = 0;
  const int base = static_cast<int>(g) * kMaxDim;
  for (int i = 0; i < kMaxDim; ++i) d += e_[base + i];
  return d;
}

Monomial Monomial::operator*(const Monomial& o) const {
  Monomial r;
  for (int i = 0; i < kSlots; ++i) {
    const int s = e_[i] + o.e_[i];
    require(s <= 255, ErrorCode::InvalidArgument, "exponent overflow");
    r.e_[i] = static_cast<std::uint8_t>(s);
  }
  r.deg_ = static_cast<std::uint16_t>(deg_ + o.deg_);
  return r;
}

// -------------------------------------------------------------- Assignment

const std::optional<std::vector<double>>& Assignment::get(Group g) const {
  switch (g) {
    case Group::U: return u;
    case Group::X: return x;
    case Group::V: return v;
  }
  return u;
}

Assignment& Assignment::set(Group g, std::vector<double> point) {
  switch (g) {
    case Group::U: u = std::move(point); break;
    case Group::X: x = std::move(point); break;
    case Group::V: v = std::move(point); break;
  }
  return *this;
}

// ------------------------------------------------------------ CliffordPoly

CliffordPoly::CliffordPoly(int m) : m_(m) {
  require(m >= 1 && m <= kMaxDim, ErrorCode::InvalidArgument, "polynomial dimension out of range");
}

CliffordPoly CliffordPoly::constant(const Multivector& c) {
  CliffordPoly p(c.dim());
  p.add_term(Monomial{}, c);
  return p;
}

CliffordPoly CliffordPoly::scalar(int m, double s) {
  return constant(Multivector::scalar(m, s));
}

CliffordPoly CliffordPoly::variable(int m, Group g, int i) {
  Monomial mono;
  mono.set(g, i, 1);
  return monomial(mono, Multivector::scalar(m, 1.0));
}

CliffordPoly CliffordPoly::vector_variable(int m, Group g) {
  CliffordPoly p(m);
  for (int i = 0; i < m; ++i) {
    Monomial mono;
    mono.set(g, i, 1);
    p.add_term(mono, Multivector::basis_vector(m, i));
  }
  return p;
}

CliffordPoly CliffordPoly::monomial(const Monomial& mono, const Multivector& c) {
  CliffordPoly p(c.dim());
  p.add_term(mono, c);
  return p;
}

void CliffordPoly::add_term(const Monomial& mono, const Multivector& c, double scale) {
  require(c.dim() == m_, ErrorCode::DimensionMismatch, "coefficient dimension mismatch");
  auto it = terms_.find(mono);
  if (it == terms_.end()) {
    Multivector v = c;
    if (scale != 1.0) v *= scale;
    if (v.max_abs() > 0.0) terms_.emplace(mono, std::move(v));
    return;
  }
  it->second.add_scaled(c, scale);
}

CliffordPoly& CliffordPoly::prune(double threshold) {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (it->second.max_abs() <= threshold) it = terms_.erase(it);
    else ++it;
  }
  return *this;
}

CliffordPoly& CliffordPoly::operator+=(const CliffordPoly& o) { return add_scaled(o, 1.0); }
CliffordPoly& CliffordPoly::operator-=(const CliffordPoly& o) { return add_scaled(o, -1.0); }

CliffordPoly& CliffordPoly::operator*=(double s) {
  for (auto& [mono, c] : terms_) c *= s;
  if (s == 0.0) terms_.clear();
  return *this;
}

CliffordPoly& CliffordPoly::add_scaled(const CliffordPoly& o, double s) {
  if (o.is_zero()) return *this;
  if (m_ == 0) m_ = o.m_;
  require(o.m_ == m_, ErrorCode::DimensionMismatch, "polynomial dimension mismatch");
  for (const auto& [mono, c] : o.terms_) add_term(mono, c, s);
  return prune();
}

int CliffordPoly::max_degree(Group g) const noexcept {
  int d = 0;
  for (const auto& [mono, c] : terms_) d = std::max(d, mono.degree(g));
  return d;
}

int CliffordPoly::min_degree(Group g) const noexcept {
  int d = terms_.empty() ? 0 : 1 << 20;
  for (const auto& [mono, c] : terms_) d = std::min(d, mono.degree(g));
  return d;
}

bool CliffordPoly::depends_on(Group g) const noexcept { return max_degree(g) > 0; }

bool CliffordPoly::is_homogeneous(Group g, int k) const noexcept {
  for (const auto& [mono, c] : terms_)
    if (mono.degree(g) != k) return false;
  return true;
}

double CliffordPoly::max_abs() const noexcept {
  double best = 0.0;
  for (const auto& [mono, c] : terms_) best = std::max(best, c.max_abs());
  return best;
}

std::string CliffordPoly::to_string(int precision) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [mono, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.to_string(precision) << ")";
    for (Group g : kAllGroups)
      for (int i = 0; i < m_; ++i) {
        const int p = mono.exp(g, i);
        if (p == 0) continue;
        os << " " << group_name(g) << (i + 1);
        if (p > 1) os << "^" << p;
      }
  }
  return os.str();
}

CliffordPoly operator+(CliffordPoly a, const CliffordPoly& b) { return a += b; }
CliffordPoly operator-(CliffordPoly a, const CliffordPoly& b) { return a -= b; }
CliffordPoly operator-(CliffordPoly a) { return a *= -1.0; }
CliffordPoly operator*(CliffordPoly a, double s) { return a *= s; }
CliffordPoly operator*(double s, CliffordPoly a) { return a *= s; }

CliffordPoly operator*(const CliffordPoly& a, const CliffordPoly& b) {
  if (a.is_zero() || b.is_zero()) {
    const int m = std::max(a.dim(), b.dim());
    return m ? CliffordPoly(m) : CliffordPoly();
  }
  require(a.dim() == b.dim(), ErrorCode::DimensionMismatch, "polynomial dimension mismatch");
  const int m = a.dim();
  CliffordPoly r(m);
  Multivector tmp(m);
  for (const auto& [ma, ca] : a.terms())
    for (const auto& [mb, cb] : b.terms()) {
      std::fill(tmp.data(), tmp.data() + tmp.size(), 0.0);
      geometric_product_accumulate(ca.data(), cb.data(), tmp.data(), m);
      r.add_term(ma * mb, tmp);
    }
  return r.prune();
}

CliffordPoly operator*(const Multivector& c, const CliffordPoly& p) {
  CliffordPoly r(c.dim());
  for (const auto& [mono, coef] : p.terms()) r.add_term(mono, c * coef);
  return r.prune();
}

CliffordPoly operator*(const CliffordPoly& p, const Multivector& c) {
  CliffordPoly r(c.dim());
  for (const auto& [mono, coef] : p.terms()) r.add_term(mono, coef * c);
  return r.prune();
}

CliffordPoly conjugation(const CliffordPoly& p) {
  CliffordPoly r(p.dim());
  for (const auto& [mono, c] : p.terms()) r.add_term(mono, c.conjugation());
  return r;
}

CliffordPoly reversion(const CliffordPoly& p) {
  CliffordPoly r(p.dim());
  for (const auto& [mono, c] : p.terms()) r.add_term(mono, c.reversion());
  return r;
}

CliffordPoly derivative(const CliffordPoly& p, Group g, int i) {
  CliffordPoly r(p.dim());
  for (const auto& [mono, c] : p.terms()) {
    const int e = mono.exp(g, i);
    if (e == 0) continue;
    Monomial d = mono;
    d.bump(g, i, -1);
    r.add_term(d, c, static_cast<double>(e));
  }
  return r.prune();
}

CliffordPoly times_variable(const CliffordPoly& p, Group g, int i) {
  CliffordPoly r(p.dim());
  for (const auto& [mono, c] : p.terms()) {
    Monomial d = mono;
    d.bump(g, i, 1);
    r.add_term(d, c);
  }
  return r;
}

namespace {

template <bool Left>
CliffordPoly dirac_impl(const CliffordPoly& p, Group g) {
  const int m = p.dim();
  CliffordPoly r(m);
  if (p.is_zero()) return r;
  Multivector tmp(m);
  for (const auto& [mono, c] : p.terms()) {
    for (int i = 0; i < m; ++i) {
      const int e = mono.exp(g, i);
      if (e == 0) continue;
      Monomial d = mono;
      d.bump(g, i, -1);
      // e_i c or c e_i, computed by blade sign lookup.
      std::fill(tmp.data(), tmp.data() + tmp.size(), 0.0);
      const std::uint32_t ei = 1u << i;
      for (std::uint32_t a = 0; a < c.size(); ++a) {
        if (c[a] == 0.0) continue;
        const int s = Left ? blade_sign(ei, a) : blade_sign(a, ei);
        tmp[a ^ ei] += s * c[a];
      }
      r.add_term(d, tmp, static_cast<double>(e));
    }
  }
  return r.prune();
}

}  // namespace

CliffordPoly dirac_left(const CliffordPoly& p, Group g) { return dirac_impl<true>(p, g); }
CliffordPoly dirac_right(const CliffordPoly& p, Group g) { return dirac_impl<false>(p, g); }

CliffordPoly laplacian(const CliffordPoly& p, Group g) {
  CliffordPoly r(p.dim());
  for (const auto& [mono, c] : p.terms())
    for (int i = 0; i < p.dim(); ++i) {
      const int e = mono.exp(g, i);
      if (e < 2) continue;
      Monomial d = mono;
      d.bump(g, i, -2);
      r.add_term(d, c, static_cast<double>(e * (e - 1)));
    }
  return r.prune();
}

CliffordPoly euler_degree(const CliffordPoly& p, Group g) {
  CliffordPoly r(p.dim());
  for (const auto& [mono, c] : p.terms()) {
    const int d = mono.degree(g);
    if (d) r.add_term(mono, c, static_cast<double>(d));
  }
  return r;
}

CliffordPoly evaluate(const CliffordPoly& p, const Assignment& a) {
  const int m = p.dim();
  for (Group g : kAllGroups)
    if (a.get(g))
      require(static_cast<int>(a.get(g)->size()) == m, ErrorCode::DimensionMismatch,
              std::string("assignment for group ") + group_name(g) + " needs m values");
  CliffordPoly r(m);
  for (const auto& [mono, c] : p.terms()) {
    double factor = 1.0;
    Monomial rest = mono;
    for (Group g : kAllGroups) {
      const auto& pt = a.get(g);
      if (!pt) continue;
      for (int i = 0; i < m; ++i) {
        const int e = mono.exp(g, i);
        if (e == 0) continue;
        factor *= std::pow((*pt)[i], e);
        rest.set(g, i, 0);
      }
    }
    if (factor != 0.0) r.add_term(rest, c, factor);
  }
  return r.prune();
}

CliffordPoly substitute(const CliffordPoly& p, Group g,
                        std::span<const CliffordPoly> replacement) {
  const int m = p.dim();
  require(static_cast<int>(replacement.size()) == m, ErrorCode::DimensionMismatch,
          "substitute needs one replacement per variable");
  for (const auto& q : replacement)
    for (const auto& [mono, c] : q.terms())
      require(c.max_abs() == std::abs(c.scalar_part()), ErrorCode::InvalidArgument,
              "substitute: replacement polynomials must be scalar valued");

  // Cache powers of each replacement polynomial.
  std::vector<std::vector<CliffordPoly>> powers(m);
  auto power = [&](int i, int e) -> const CliffordPoly& {
    auto& cache = powers[i];
    if (cache.empty()) cache.push_back(CliffordPoly::scalar(m, 1.0));
    while (static_cast<int>(cache.size()) <= e) cache.push_back(cache.back() * replacement[i]);
    return cache[e];
  };

  // Group terms by their g-exponent so each product of powers is formed once.
  std::map<std::vector<int>, CliffordPoly> by_g;
  for (const auto& [mono, c] : p.terms()) {
    std::vector<int> key(m);
    Monomial rest = mono;
    for (int i = 0; i < m; ++i) {
      key[i] = mono.exp(g, i);
      rest.set(g, i, 0);
    }
    auto [it, inserted] = by_g.try_emplace(key, m);
    it->second.add_term(rest, c);
  }

  CliffordPoly r(m);
  for (const auto& [key, rest_poly] : by_g) {
    CliffordPoly prod = CliffordPoly::scalar(m, 1.0);
    for (int i = 0; i < m; ++i)
      if (key[i]) prod = prod * power(i, key[i]);
    // Replacements are scalar, so multiplication order is irrelevant.
    r += prod * rest_poly;
  }
  return r.prune();
}

CliffordPoly translate(const CliffordPoly& p, Group g, std::span<const double> offset) {
  const int m = p.dim();
  require(static_cast<int>(offset.size()) == m, ErrorCode::DimensionMismatch,
          "translate needs m offsets");
  std::vector<CliffordPoly> repl;
  repl.reserve(m);
  for (int i = 0; i < m; ++i)
    repl.push_back(CliffordPoly::variable(m, g, i) + CliffordPoly::scalar(m, offset[i]));
  return substitute(p, g, repl);
}

CliffordPoly rename_group(const CliffordPoly& p, Group from, Group to) {
  require(from == to || !p.depends_on(to), ErrorCode::InvalidArgument,
          "rename_group: target group already in use");
  CliffordPoly r(p.dim());
  for (const auto& [mono, c] : p.terms()) {
    Monomial n = mono;
    for (int i = 0; i < p.dim(); ++i) {
      const int e = mono.exp(from, i);
      n.set(from, i, 0);
      n.set(to, i, e);
    }
    r.add_term(n, c);
  }
  return r;
}

double sphere_moment(int m, std::span<const int> alpha) {
  // int_{S^{m-1}} u^alpha dS = 2 prod Gamma((a_i+1)/2) / Gamma((|a|+m)/2), odd -> 0.
  double log_num = std::log(2.0);
  int total = 0;
  for (int i = 0; i < m; ++i) {
    const int a = i < static_cast<int>(alpha.size()) ? alpha[i] : 0;
    if (a & 1) return 0.0;
    log_num += std::lgamma((a + 1) / 2.0);
    total += a;
  }
  return std::exp(log_num - std::lgamma((total + m) / 2.0));
}

CliffordPoly integrate_sphere_u(const CliffordPoly& p) {
  const int m = p.dim();
  CliffordPoly r(m);
  std::vector<int> alpha(m);
  for (const auto& [mono, c] : p.terms()) {
    Monomial rest = mono;
    for (int i = 0; i < m; ++i) {
      alpha[i] = mono.exp(Group::U, i);
      rest.set(Group::U, i, 0);
    }
    const double w = sphere_moment(m, alpha);
    if (w != 0.0) r.add_term(rest, c, w);
  }
  return r.prune();
}

Multivector sphere_moment_integral(const CliffordPoly& p) {
  require(!p.depends_on(Group::X) && !p.depends_on(Group::V), ErrorCode::InvalidArgument,
          "sphere_moment_integral: polynomial must depend on u only");
  const CliffordPoly r = integrate_sphere_u(p);
  Multivector out(p.dim());
  if (!r.is_zero()) out = r.terms().begin()->second;
  return out;
}

Multivector pairing_u(const CliffordPoly& p, const CliffordPoly& q) {
  return sphere_moment_integral(p * q);
}

CliffordPoly pair_u(const CliffordPoly& p, const CliffordPoly& q) {
  return integrate_sphere_u(p * q);
}

CliffordPoly pair_u_conjugated(const CliffordPoly& p, const CliffordPoly& q) {
  return integrate_sphere_u(conjugation(p) * q);
}

std::vector<std::vector<int>> homogeneous_exponents(int m, int d) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(m, 0);
  // Enumerate in lexicographically increasing exponent vectors.
  auto rec = [&](auto&& self, int i, int left) -> void {
    if (i == m - 1) {
      cur[i] = left;
      out.push_back(cur);
      return;
    }
    for (int e = 0; e <= left; ++e) {
      cur[i] = e;
      self(self, i + 1, left - e);
    }
  };
  if (m > 0) rec(rec, 0, d);
  return out;
}

}  // namespace higherspin
