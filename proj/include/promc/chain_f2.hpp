#pragma once

// Bounded chain complexes of finite-dimensional vector spaces over the
// two-element field. Weak equivalences are quasi-isomorphisms, fibrations are
// degreewise surjections and cofibrations are degreewise injections.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "promc/error.hpp"
#include "promc/gf2.hpp"
#include "promc/model.hpp"

namespace promc {

using gf2::Matrix;

class Complex {
 public:
  Complex() = default;

  /// boundaries[k] is the differential leaving degree lo + k, so it has shape
  /// dim(lo + k - 1) x dim(lo + k). Missing trailing entries are zero maps.
  Complex(int lo, std::vector<std::size_t> dims, std::vector<Matrix> boundaries = {})
      : lo_(lo), dims_(std::move(dims)), d_(std::move(boundaries)) {
    if (d_.size() > dims_.size()) fail(ErrorKind::malformed, "more boundary matrices than degrees");
    for (std::size_t k = d_.size(); k < dims_.size(); ++k) d_.emplace_back(dim(lo_ + int(k) - 1), dims_[k]);
    for (std::size_t k = 0; k < dims_.size(); ++k)
      if (d_[k].rows() != dim(lo_ + int(k) - 1) || d_[k].cols() != dims_[k])
        fail(ErrorKind::malformed, "boundary shape does not match adjacent dimensions",
             "degree " + std::to_string(lo_ + int(k)));
    normalize();
  }

  /// Builds from a degree -> dimension table and degree -> boundary table.
  static Complex from_degrees(const std::map<int, std::size_t>& dims, const std::map<int, Matrix>& boundary) {
    if (dims.empty()) return {};
    const int lo = dims.begin()->first, hi = dims.rbegin()->first;
    std::vector<std::size_t> ds(std::size_t(hi - lo + 1), 0);
    for (auto [n, k] : dims) ds[std::size_t(n - lo)] = k;
    std::vector<Matrix> bs;
    for (int n = lo; n <= hi; ++n) {
      auto it = boundary.find(n);
      const std::size_t rows = n - 1 >= lo ? ds[std::size_t(n - 1 - lo)] : 0;
      bs.push_back(it != boundary.end() ? it->second : Matrix(rows, ds[std::size_t(n - lo)]));
    }
    return Complex(lo, std::move(ds), std::move(bs));
  }

  static Complex zero() { return {}; }

  int lo() const { return lo_; }
  int hi() const { return lo_ + int(dims_.size()) - 1; }
  bool is_zero() const { return dims_.empty(); }

  std::size_t dim(int n) const {
    if (n < lo_ || n > hi()) return 0;
    return dims_[std::size_t(n - lo_)];
  }

  Matrix boundary(int n) const {
    if (n < lo_ || n > hi()) return Matrix(dim(n - 1), dim(n));
    return d_[std::size_t(n - lo_)];
  }

  const std::vector<std::size_t>& dims() const { return dims_; }

  friend bool operator==(const Complex& a, const Complex& b) {
    if (a.lo_ != b.lo_ || a.dims_ != b.dims_) return false;
    for (int n = a.lo_; n <= a.hi(); ++n)
      if (!(a.boundary(n) == b.boundary(n))) return false;
    return true;
  }

 private:
  void normalize() {
    while (!dims_.empty() && dims_.back() == 0) {
      dims_.pop_back();
      d_.pop_back();
    }
    std::size_t lead = 0;
    while (lead < dims_.size() && dims_[lead] == 0) ++lead;
    if (lead > 0) {
      dims_.erase(dims_.begin(), dims_.begin() + std::ptrdiff_t(lead));
      d_.erase(d_.begin(), d_.begin() + std::ptrdiff_t(lead));
      lo_ += int(lead);
    }
    if (dims_.empty()) lo_ = 0;
    if (!d_.empty()) d_[0] = Matrix(0, dims_[0]);
  }

  int lo_ = 0;
  std::vector<std::size_t> dims_;
  std::vector<Matrix> d_;
};

class ChainMap {
 public:
  ChainMap() = default;
  /// components[n] : source degree n -> target degree n; absent degrees are zero.
  ChainMap(Complex source, Complex target, const std::map<int, Matrix>& components = {})
      : source_(std::move(source)), target_(std::move(target)) {
    for (int n = source_.lo(); n <= source_.hi(); ++n) {
      auto it = components.find(n);
      comps_.push_back(it != components.end() ? it->second : Matrix(target_.dim(n), source_.dim(n)));
    }
    for (const auto& [n, m] : components)
      if ((n < source_.lo() || n > source_.hi() || source_.is_zero()) && !(m.rows() == target_.dim(n) && m.cols() == 0))
        fail(ErrorKind::malformed, "map component in a degree where the source vanishes", std::to_string(n));
  }

  const Complex& source() const { return source_; }
  const Complex& target() const { return target_; }

  Matrix component(int n) const {
    if (source_.is_zero() || n < source_.lo() || n > source_.hi()) return Matrix(target_.dim(n), source_.dim(n));
    return comps_[std::size_t(n - source_.lo())];
  }

  std::map<int, Matrix> components() const {
    std::map<int, Matrix> out;
    for (int n = source_.lo(); n <= source_.hi() && !source_.is_zero(); ++n) out.emplace(n, component(n));
    return out;
  }

 private:
  Complex source_;
  Complex target_;
  std::vector<Matrix> comps_;
};

namespace chain_detail {

inline std::pair<int, int> degree_span(const Complex& a, const Complex& b) {
  if (a.is_zero() && b.is_zero()) return {0, -1};
  if (a.is_zero()) return {b.lo(), b.hi()};
  if (b.is_zero()) return {a.lo(), a.hi()};
  return {std::min(a.lo(), b.lo()), std::max(a.hi(), b.hi())};
}

/// Rows of the inverse of [sub | unit columns] that pick out complement coordinates.
struct Quotient {
  std::vector<std::size_t> complement;  // coordinates spanning a complement of sub
  Matrix projection;                    // ambient -> complement coordinates, vanishing on sub
};

inline Quotient quotient_by(const Matrix& sub_basis, std::size_t ambient) {
  Quotient q;
  q.complement = gf2::complement_coordinates(sub_basis);
  const Matrix basis = gf2::hstack(sub_basis, gf2::unit_columns(ambient, q.complement));
  const Matrix inv = gf2::inverse(basis).value();
  q.projection = inv.block(sub_basis.cols(), 0, q.complement.size(), ambient);
  return q;
}

/// s with d s + s d = identity on an acyclic complex, keyed by source degree.
inline std::map<int, Matrix> contraction(const Complex& k) {
  std::map<int, Matrix> s;
  if (k.is_zero()) return s;
  for (int n = k.lo() - 1; n <= k.hi(); ++n) {
    // s_n : K_n -> K_{n+1}
    const std::size_t dn = k.dim(n), dn1 = k.dim(n + 1);
    if (dn == 0 || dn1 == 0) {
      s.emplace(n, Matrix(dn1, dn));
      continue;
    }
    const Matrix ker_n = gf2::kernel(k.boundary(n));
    const auto w_n = gf2::complement_coordinates(ker_n);
    const Matrix ker_n1 = gf2::kernel(k.boundary(n + 1));
    const auto w_n1 = gf2::complement_coordinates(ker_n1);
    const Matrix w1 = gf2::unit_columns(dn1, w_n1);
    const Matrix dw = k.boundary(n + 1) * w1;
    auto pre = gf2::solve(dw, ker_n);
    require(pre.has_value(), ErrorKind::precondition, "contracting a complex that is not acyclic",
            "degree " + std::to_string(n));
    const Matrix on_ker = w1 * *pre;
    const Matrix basis = gf2::hstack(ker_n, gf2::unit_columns(dn, w_n));
    Matrix images(dn1, dn);
    images.put(0, 0, on_ker);
    s.emplace(n, images * gf2::inverse(basis).value());
  }
  return s;
}

inline Matrix at(const std::map<int, Matrix>& m, int n, std::size_t rows, std::size_t cols) {
  auto it = m.find(n);
  return it != m.end() ? it->second : Matrix(rows, cols);
}

}  // namespace chain_detail

struct ChainF2 {
  using Object = Complex;
  using Map = ChainMap;

  static constexpr std::string_view tag = "chain-f2";

  static void validate(const Object& c) {
    for (int n = c.lo(); n <= c.hi() && !c.is_zero(); ++n) {
      const Matrix d = c.boundary(n);
      require(d.rows() == c.dim(n - 1) && d.cols() == c.dim(n), ErrorKind::malformed,
              "boundary shape does not match adjacent dimensions", "degree " + std::to_string(n));
      require((c.boundary(n - 1) * d).is_zero(), ErrorKind::malformed, "boundary squared is not zero",
              "degree " + std::to_string(n));
    }
  }

  static void validate(const Map& f) {
    validate(f.source());
    validate(f.target());
    const auto [lo, hi] = chain_detail::degree_span(f.source(), f.target());
    for (int n = lo; n <= hi + 1; ++n) {
      const Matrix c = f.component(n);
      require(c.rows() == f.target().dim(n) && c.cols() == f.source().dim(n), ErrorKind::malformed,
              "map component shape mismatch", "degree " + std::to_string(n));
      require(f.component(n - 1) * f.source().boundary(n) == f.target().boundary(n) * c, ErrorKind::malformed,
              "map does not commute with boundaries", "degree " + std::to_string(n));
    }
  }

  static const Object& source(const Map& f) { return f.source(); }
  static const Object& target(const Map& f) { return f.target(); }

  static Map identity(const Object& c) {
    std::map<int, Matrix> comps;
    for (int n = c.lo(); n <= c.hi() && !c.is_zero(); ++n) comps.emplace(n, Matrix::identity(c.dim(n)));
    return Map(c, c, comps);
  }

  static Map compose(const Map& g, const Map& f) {
    require(f.target() == g.source(), ErrorKind::precondition, "composing maps whose ends do not match");
    std::map<int, Matrix> comps;
    for (const auto& [n, m] : f.components()) comps.emplace(n, g.component(n) * m);
    return Map(f.source(), g.target(), comps);
  }

  static bool equal(const Map& a, const Map& b) {
    if (!(a.source() == b.source()) || !(a.target() == b.target())) return false;
    for (const auto& [n, m] : a.components())
      if (!(m == b.component(n))) return false;
    return true;
  }
  static bool same_object(const Object& a, const Object& b) { return a == b; }

  static std::size_t homology_dim(const Object& c, int n) {
    return c.dim(n) - gf2::rank(c.boundary(n)) - gf2::rank(c.boundary(n + 1));
  }

  /// Rank of the induced map on degree-n homology, from explicit cycle and boundary bases.
  static std::size_t homology_rank(const Map& f, int n) {
    const Matrix cycles = gf2::kernel(f.source().boundary(n));
    const Matrix bounds = gf2::image(f.target().boundary(n + 1));
    return gf2::rank(gf2::hstack(f.component(n) * cycles, bounds)) - bounds.cols();
  }

  static MapClass classify(const Map& f) {
    validate(f);
    MapClass c{true, true, true};
    const auto [lo, hi] = chain_detail::degree_span(f.source(), f.target());
    for (int n = lo; n <= hi; ++n) {
      const Matrix m = f.component(n);
      const auto r = gf2::rank(m);
      if (r != m.cols()) c.cof = false;
      if (r != m.rows()) c.fib = false;
      const auto hx = homology_dim(f.source(), n), hy = homology_dim(f.target(), n);
      if (hx != hy || homology_rank(f, n) != hx) c.we = false;
    }
    return c;
  }

  static bool is_iso(const Map& f) {
    const auto [lo, hi] = chain_detail::degree_span(f.source(), f.target());
    for (int n = lo; n <= hi; ++n) {
      const Matrix m = f.component(n);
      if (m.rows() != m.cols() || gf2::rank(m) != m.rows()) return false;
    }
    return true;
  }

  static Map inverse(const Map& f) {
    require(is_iso(f), ErrorKind::precondition, "inverting a map that is not an isomorphism");
    std::map<int, Matrix> comps;
    for (const auto& [n, m] : f.components()) comps.emplace(n, gf2::inverse(m).value());
    return Map(f.target(), f.source(), comps);
  }

  static Factorization<ChainF2> factor(const Map& f, FactorMode mode) {
    validate(f);
    return mode == FactorMode::cof_then_acyclic_fib ? cylinder(f) : path_object(f);
  }

  /// Cyl_n = X_n + X_{n-1} + Y_n with d(x, x', y) = (dx + x', dx', dy + f x').
  static Factorization<ChainF2> cylinder(const Map& f) {
    const Complex& x = f.source();
    const Complex& y = f.target();
    if (x.is_zero()) return {Map(x, y), identity(y), FactorMode::cof_then_acyclic_fib};
    const int lo = std::min(x.lo(), y.is_zero() ? x.lo() : y.lo());
    const int hi = std::max(x.hi() + 1, y.is_zero() ? x.hi() + 1 : y.hi());
    std::map<int, std::size_t> dims;
    std::map<int, Matrix> bd, left, right;
    for (int n = lo; n <= hi; ++n) dims[n] = x.dim(n) + x.dim(n - 1) + y.dim(n);
    for (int n = lo; n <= hi; ++n) {
      Matrix d(dims.count(n - 1) ? dims[n - 1] : 0, dims[n]);
      const std::size_t a0 = x.dim(n), a1 = x.dim(n - 1);
      const std::size_t r0 = x.dim(n - 1), r1 = x.dim(n - 2);
      d.put(0, 0, x.boundary(n));
      d.put(0, a0, Matrix::identity(a1));
      d.put(r0, a0, x.boundary(n - 1));
      d.put(r0 + r1, a0, f.component(n - 1));
      d.put(r0 + r1, a0 + a1, y.boundary(n));
      bd.emplace(n, d);
    }
    const Complex cyl = Complex::from_degrees(dims, bd);
    for (int n = x.lo(); n <= x.hi(); ++n) {
      Matrix m(cyl.dim(n), x.dim(n));
      m.put(0, 0, Matrix::identity(x.dim(n)));
      left.emplace(n, m);
    }
    for (int n = lo; n <= hi; ++n) {
      if (cyl.dim(n) == 0) continue;
      Matrix m(y.dim(n), cyl.dim(n));
      m.put(0, 0, f.component(n));
      m.put(0, x.dim(n) + x.dim(n - 1), Matrix::identity(y.dim(n)));
      right.emplace(n, m);
    }
    return {Map(x, cyl, left), Map(cyl, y, right), FactorMode::cof_then_acyclic_fib};
  }

  /// P_n = X_n + Y_{n+1} + Y_n with d(x, b, a) = (dx, a + db, da).
  static Factorization<ChainF2> path_object(const Map& f) {
    const Complex& x = f.source();
    const Complex& y = f.target();
    if (y.is_zero()) return {identity(x), f, FactorMode::acyclic_cof_then_fib};
    const int lo = std::min(x.is_zero() ? y.lo() - 1 : x.lo(), y.lo() - 1);
    const int hi = std::max(x.is_zero() ? y.hi() : x.hi(), y.hi());
    std::map<int, std::size_t> dims;
    std::map<int, Matrix> bd, left, right;
    for (int n = lo; n <= hi; ++n) dims[n] = x.dim(n) + y.dim(n + 1) + y.dim(n);
    for (int n = lo; n <= hi; ++n) {
      Matrix d(dims.count(n - 1) ? dims[n - 1] : 0, dims[n]);
      const std::size_t a0 = x.dim(n), a1 = y.dim(n + 1);
      const std::size_t r0 = x.dim(n - 1), r1 = y.dim(n);
      d.put(0, 0, x.boundary(n));
      d.put(r0, a0, y.boundary(n + 1));
      d.put(r0, a0 + a1, Matrix::identity(y.dim(n)));
      d.put(r0 + r1, a0 + a1, y.boundary(n));
      bd.emplace(n, d);
    }
    const Complex path = Complex::from_degrees(dims, bd);
    for (int n = x.lo(); n <= x.hi() && !x.is_zero(); ++n) {
      Matrix m(path.dim(n), x.dim(n));
      m.put(0, 0, Matrix::identity(x.dim(n)));
      left.emplace(n, m);
    }
    for (int n = lo; n <= hi; ++n) {
      if (path.dim(n) == 0) continue;
      Matrix m(y.dim(n), path.dim(n));
      m.put(0, 0, f.component(n));
      m.put(0, x.dim(n) + y.dim(n + 1), Matrix::identity(y.dim(n)));
      right.emplace(n, m);
    }
    return {Map(x, path, left), Map(path, y, right), FactorMode::acyclic_cof_then_fib};
  }

  static std::optional<Map> lift(const LiftSquare<ChainF2>& sq) {
    validate(sq.i);
    validate(sq.p);
    validate(sq.top);
    validate(sq.bottom);
    require(sq.top.source() == sq.i.source() && sq.top.target() == sq.p.source() &&
                sq.bottom.source() == sq.i.target() && sq.bottom.target() == sq.p.target(),
            ErrorKind::precondition, "lifting square ends do not match");
    require(equal(compose(sq.p, sq.top), compose(sq.bottom, sq.i)), ErrorKind::precondition,
            "lifting square does not commute");
    const MapClass ci = classify(sq.i), cp = classify(sq.p);
    const bool kernel_route = ci.cof && cp.acyclic_fib();
    const bool cokernel_route = ci.acyclic_cof() && cp.fib;
    if (!kernel_route && !cokernel_route) return std::nullopt;

    const Complex& b = sq.i.target();
    const Complex& x = sq.p.source();
    const auto [lo, hi] = chain_detail::degree_span(b, x);

    // A degreewise lift that ignores the differentials.
    std::map<int, Matrix> g;
    std::map<int, Matrix> comp_proj;  // B_n -> complement-of-image coordinates
    std::map<int, Matrix> comp_incl;  // complement coordinates -> B_n
    for (int n = lo - 1; n <= hi + 1; ++n) {
      const Matrix in = sq.i.component(n);
      const auto q = chain_detail::quotient_by(in, b.dim(n));
      const Matrix units = gf2::unit_columns(b.dim(n), q.complement);
      const auto sect = gf2::solve(sq.p.component(n), sq.bottom.component(n) * units);
      require(sect.has_value(), ErrorKind::precondition, "fibration is not degreewise surjective");
      const Matrix basis = gf2::hstack(in, units);
      const Matrix values = gf2::hstack(sq.top.component(n), *sect);
      g.emplace(n, values * gf2::inverse(basis).value());
      comp_proj.emplace(n, q.projection);
      comp_incl.emplace(n, units);
    }
    // Obstruction e_n = d g_n + g_{n-1} d, which vanishes on the image of i and lands in ker p.
    auto obstruction = [&](int n) {
      return x.boundary(n) * g.at(n) + g.at(n - 1) * b.boundary(n);
    };

    std::map<int, Matrix> h;
    if (kernel_route) {
      std::map<int, Matrix> kb;
      std::map<int, std::size_t> kdims;
      for (int n = lo - 1; n <= hi + 1; ++n) {
        kb.emplace(n, gf2::kernel(sq.p.component(n)));
        kdims[n] = kb.at(n).cols();
      }
      std::map<int, Matrix> kd;
      for (int n = lo; n <= hi + 1; ++n) kd.emplace(n, gf2::solve(kb.at(n - 1), x.boundary(n) * kb.at(n)).value());
      const Complex k = Complex::from_degrees(kdims, kd);
      const auto s = chain_detail::contraction(k);
      for (int n = lo; n <= hi; ++n) {
        const Matrix eps = gf2::solve(kb.at(n - 1), obstruction(n)).value();
        const Matrix sn = chain_detail::at(s, n - 1, k.dim(n), k.dim(n - 1));
        h.emplace(n, g.at(n) + kb.at(n) * (sn * eps));
      }
    } else {
      std::map<int, std::size_t> cdims;
      std::map<int, Matrix> cd;
      for (int n = lo - 1; n <= hi + 1; ++n) cdims[n] = comp_incl.at(n).cols();
      for (int n = lo; n <= hi + 1; ++n) cd.emplace(n, comp_proj.at(n - 1) * b.boundary(n) * comp_incl.at(n));
      const Complex c = Complex::from_degrees(cdims, cd);
      const auto s = chain_detail::contraction(c);
      for (int n = lo; n <= hi; ++n) {
        const Matrix ebar = obstruction(n + 1) * comp_incl.at(n + 1);
        const Matrix sn = chain_detail::at(s, n, c.dim(n + 1), c.dim(n));
        h.emplace(n, g.at(n) + ebar * sn * comp_proj.at(n));
      }
    }
    std::map<int, Matrix> comps;
    for (int n = b.lo(); n <= b.hi() && !b.is_zero(); ++n) comps.emplace(n, h.at(n));
    Map lifted(b, x, comps);
    validate(lifted);
    return lifted;
  }

  static Cone<ChainF2> limit(const Diagram<ChainF2>& d) {
    check_arrows(d);
    auto [lo, hi] = span_of(d);
    std::map<int, Matrix> basis;
    std::map<int, std::size_t> dims;
    for (int n = lo - 1; n <= hi + 1; ++n) {
      const auto off = offsets(d, n);
      Matrix rel(0, off.back());
      for (const auto& a : d.arrows) {
        Matrix block(d.objects[a.to].dim(n), off.back());
        block.put(0, off[a.from], a.map.component(n));
        block.put(0, off[a.to], Matrix::identity(d.objects[a.to].dim(n)));
        if (a.from == a.to) block.put(0, off[a.to], a.map.component(n) + Matrix::identity(d.objects[a.to].dim(n)));
        rel = gf2::vstack(rel, block);
      }
      basis.emplace(n, gf2::kernel(rel));
      dims[n] = basis.at(n).cols();
    }
    std::map<int, Matrix> bd;
    for (int n = lo; n <= hi + 1; ++n) {
      const auto off_n = offsets(d, n), off_m = offsets(d, n - 1);
      Matrix big(off_m.back(), off_n.back());
      for (std::size_t j = 0; j < d.objects.size(); ++j) big.put(off_m[j], off_n[j], d.objects[j].boundary(n));
      bd.emplace(n, gf2::solve(basis.at(n - 1), big * basis.at(n)).value());
    }
    Cone<ChainF2> cone{Complex::from_degrees(dims, bd), {}};
    for (std::size_t j = 0; j < d.objects.size(); ++j) {
      std::map<int, Matrix> comps;
      for (int n = lo; n <= hi; ++n) {
        const auto off = offsets(d, n);
        comps.emplace(n, basis.at(n).block(off[j], 0, d.objects[j].dim(n), basis.at(n).cols()));
      }
      cone.legs.emplace_back(cone.apex, d.objects[j], restrict_to(cone.apex, comps));
    }
    return cone;
  }

  static Map limit_induced(const Diagram<ChainF2>& d, const Cone<ChainF2>& cone, const Object& w,
                           const std::vector<Map>& legs) {
    require(legs.size() == d.objects.size(), ErrorKind::precondition, "cone has the wrong number of legs");
    std::map<int, Matrix> comps;
    for (int n = w.lo(); n <= w.hi() && !w.is_zero(); ++n) {
      Matrix stacked(0, w.dim(n));
      Matrix apex_basis(0, cone.apex.dim(n));
      for (std::size_t j = 0; j < legs.size(); ++j) {
        require(legs[j].source() == w && legs[j].target() == d.objects[j], ErrorKind::precondition,
                "cone leg has the wrong ends");
        stacked = gf2::vstack(stacked, legs[j].component(n));
        apex_basis = gf2::vstack(apex_basis, cone.legs[j].component(n));
      }
      auto u = gf2::solve(apex_basis, stacked);
      require(u.has_value(), ErrorKind::precondition, "legs do not form a cone", "degree " + std::to_string(n));
      comps.emplace(n, *u);
    }
    Map out(w, cone.apex, comps);
    for (std::size_t j = 0; j < legs.size(); ++j)
      require(equal(compose(cone.legs[j], out), legs[j]), ErrorKind::precondition, "legs do not form a cone");
    return out;
  }

  static Cone<ChainF2> colimit(const Diagram<ChainF2>& d) {
    check_arrows(d);
    auto [lo, hi] = span_of(d);
    std::map<int, chain_detail::Quotient> quot;
    std::map<int, std::size_t> dims;
    for (int n = lo - 1; n <= hi + 1; ++n) {
      const auto off = offsets(d, n);
      Matrix rel(off.back(), 0);
      for (const auto& a : d.arrows) {
        Matrix block(off.back(), d.objects[a.from].dim(n));
        block.put(off[a.from], 0, Matrix::identity(d.objects[a.from].dim(n)));
        Matrix tgt = block.block(off[a.to], 0, d.objects[a.to].dim(n), block.cols()) + a.map.component(n);
        block.put(off[a.to], 0, tgt);
        rel = gf2::hstack(rel, block);
      }
      quot.emplace(n, chain_detail::quotient_by(gf2::image(rel), off.back()));
      dims[n] = quot.at(n).complement.size();
    }
    std::map<int, Matrix> bd;
    for (int n = lo; n <= hi + 1; ++n) {
      const auto off_n = offsets(d, n), off_m = offsets(d, n - 1);
      Matrix big(off_m.back(), off_n.back());
      for (std::size_t j = 0; j < d.objects.size(); ++j) big.put(off_m[j], off_n[j], d.objects[j].boundary(n));
      bd.emplace(n, quot.at(n - 1).projection * big * gf2::unit_columns(off_n.back(), quot.at(n).complement));
    }
    Cone<ChainF2> cone{Complex::from_degrees(dims, bd), {}};
    for (std::size_t j = 0; j < d.objects.size(); ++j) {
      std::map<int, Matrix> comps;
      for (int n = d.objects[j].lo(); n <= d.objects[j].hi() && !d.objects[j].is_zero(); ++n) {
        const auto off = offsets(d, n);
        comps.emplace(n, quot.at(n).projection.block(0, off[j], quot.at(n).projection.rows(), d.objects[j].dim(n)));
      }
      cone.legs.emplace_back(d.objects[j], cone.apex, comps);
    }
    return cone;
  }

  static Map colimit_induced(const Diagram<ChainF2>& d, const Cone<ChainF2>& cocone, const Object& w,
                             const std::vector<Map>& legs) {
    require(legs.size() == d.objects.size(), ErrorKind::precondition, "cocone has the wrong number of legs");
    const Complex& apex = cocone.apex;
    std::map<int, Matrix> comps;
    for (int n = apex.lo(); n <= apex.hi() && !apex.is_zero(); ++n) {
      Matrix proj(apex.dim(n), 0);
      Matrix vals(w.dim(n), 0);
      for (std::size_t j = 0; j < legs.size(); ++j) {
        require(legs[j].source() == d.objects[j] && legs[j].target() == w, ErrorKind::precondition,
                "cocone leg has the wrong ends");
        proj = gf2::hstack(proj, cocone.legs[j].component(n));
        vals = gf2::hstack(vals, legs[j].component(n));
      }
      auto u = gf2::solve_left(proj, vals);
      require(u.has_value(), ErrorKind::precondition, "legs do not form a cocone", "degree " + std::to_string(n));
      comps.emplace(n, *u);
    }
    Map out(apex, w, comps);
    for (std::size_t j = 0; j < legs.size(); ++j)
      require(equal(compose(out, cocone.legs[j]), legs[j]), ErrorKind::precondition, "legs do not form a cocone");
    return out;
  }

  static ImageFactorization<ChainF2> image(const Map& f) {
    const Complex& y = f.target();
    std::map<int, Matrix> basis;
    std::map<int, std::size_t> dims;
    for (int n = y.lo() - 1; n <= y.hi() + 1; ++n) {
      basis.emplace(n, gf2::image(f.component(n)));
      dims[n] = basis.at(n).cols();
    }
    std::map<int, Matrix> bd;
    for (int n = y.lo(); n <= y.hi() + 1; ++n)
      bd.emplace(n, gf2::solve(basis.at(n - 1), y.boundary(n) * basis.at(n)).value());
    const Complex img = Complex::from_degrees(dims, bd);
    std::map<int, Matrix> mono, epi;
    for (int n = y.lo(); n <= y.hi() && !y.is_zero(); ++n)
      if (img.dim(n) > 0) mono.emplace(n, basis.at(n));
    for (const auto& [n, m] : f.components()) epi.emplace(n, gf2::solve(basis.at(n), m).value());
    return {img, Map(f.source(), img, epi), Map(img, y, mono)};
  }

  static std::optional<Map> factor_through_mono(const Map& m, const Map& g) {
    if (!(m.target() == g.target())) return std::nullopt;
    std::map<int, Matrix> comps;
    for (const auto& [n, gm] : g.components()) {
      auto u = gf2::solve(m.component(n), gm);
      if (!u || !(m.component(n) * *u == gm)) return std::nullopt;
      comps.emplace(n, *u);
    }
    Map u(g.source(), m.source(), comps);
    return equal(compose(m, u), g) ? std::optional<Map>(u) : std::nullopt;
  }

  static std::optional<Map> factor_through_epi(const Map& e, const Map& g) {
    if (!(e.source() == g.source())) return std::nullopt;
    std::map<int, Matrix> comps;
    const Complex& y = e.target();
    for (int n = y.lo(); n <= y.hi() && !y.is_zero(); ++n) {
      auto h = gf2::solve_left(e.component(n), g.component(n));
      if (!h) return std::nullopt;
      comps.emplace(n, *h);
    }
    Map h(y, g.target(), comps);
    try {
      validate(h);
    } catch (const Error&) {
      return std::nullopt;
    }
    return equal(compose(h, e), g) ? std::optional<Map>(h) : std::nullopt;
  }

  /// Basis of the vector space of chain maps a -> b.
  static std::vector<Map> hom_basis(const Object& a, const Object& b) {
    const auto [lo, hi] = chain_detail::degree_span(a, b);
    std::map<int, std::size_t> start;
    std::size_t unknowns = 0;
    for (int n = lo; n <= hi; ++n) {
      start[n] = unknowns;
      unknowns += a.dim(n) * b.dim(n);
    }
    auto var = [&](int n, std::size_t r, std::size_t c) { return start.at(n) + r * a.dim(n) + c; };
    std::vector<std::vector<std::size_t>> rows;
    for (int n = lo; n <= hi + 1; ++n) {
      // f_{n-1} d^a_n + d^b_n f_n = 0, entrywise.
      const Matrix da = a.boundary(n), db = b.boundary(n);
      for (std::size_t r = 0; r < b.dim(n - 1); ++r)
        for (std::size_t c = 0; c < a.dim(n); ++c) {
          std::vector<std::size_t> row;
          for (std::size_t k = 0; k < a.dim(n - 1); ++k)
            if (da.get(k, c)) row.push_back(var(n - 1, r, k));
          for (std::size_t k = 0; k < b.dim(n); ++k)
            if (db.get(r, k)) row.push_back(var(n, k, c));
          rows.push_back(std::move(row));
        }
    }
    Matrix sys(rows.size(), unknowns);
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (auto v : rows[i]) sys.flip(i, v);
    const Matrix ker = gf2::kernel(sys);
    std::vector<Map> out;
    for (std::size_t k = 0; k < ker.cols(); ++k) {
      std::map<int, Matrix> comps;
      for (int n = a.lo(); n <= a.hi() && !a.is_zero(); ++n) {
        Matrix m(b.dim(n), a.dim(n));
        for (std::size_t r = 0; r < b.dim(n); ++r)
          for (std::size_t c = 0; c < a.dim(n); ++c) m.set(r, c, ker.get(var(n, r, c), k));
        comps.emplace(n, m);
      }
      out.emplace_back(a, b, comps);
    }
    return out;
  }

  static std::string describe(const Object& c) {
    if (c.is_zero()) return "0";
    std::string s = "C[" + std::to_string(c.lo()) + ".." + std::to_string(c.hi()) + "] dims(";
    for (std::size_t k = 0; k < c.dims().size(); ++k) s += (k ? "," : "") + std::to_string(c.dims()[k]);
    return s + ")";
  }

  static std::string describe(const Map& f) {
    std::string s = "{";
    bool first = true;
    for (const auto& [n, m] : f.components()) {
      s += (first ? "" : " ") + std::to_string(n) + ":" + m.str();
      first = false;
    }
    return s + "}";
  }

 private:
  static void check_arrows(const Diagram<ChainF2>& d) {
    for (const auto& o : d.objects) validate(o);
    for (const auto& a : d.arrows) {
      require(a.from < d.objects.size() && a.to < d.objects.size(), ErrorKind::malformed,
              "diagram arrow refers to a missing object");
      require(a.map.source() == d.objects[a.from] && a.map.target() == d.objects[a.to], ErrorKind::malformed,
              "diagram arrow does not match its endpoints");
    }
  }

  static std::pair<int, int> span_of(const Diagram<ChainF2>& d) {
    int lo = 0, hi = -1;
    bool any = false;
    for (const auto& o : d.objects) {
      if (o.is_zero()) continue;
      lo = any ? std::min(lo, o.lo()) : o.lo();
      hi = any ? std::max(hi, o.hi()) : o.hi();
      any = true;
    }
    return {lo, hi};
  }

  static std::vector<std::size_t> offsets(const Diagram<ChainF2>& d, int n) {
    std::vector<std::size_t> off(d.objects.size() + 1, 0);
    for (std::size_t j = 0; j < d.objects.size(); ++j) off[j + 1] = off[j] + d.objects[j].dim(n);
    return off;
  }

  static std::map<int, Matrix> restrict_to(const Complex& src, std::map<int, Matrix> comps) {
    for (auto it = comps.begin(); it != comps.end();)
      if (src.dim(it->first) == 0 && (src.is_zero() || it->first < src.lo() || it->first > src.hi()))
        it = comps.erase(it);
      else
        ++it;
    return comps;
  }
};

static_assert(ModelCategory<ChainF2>);

}  // namespace promc
