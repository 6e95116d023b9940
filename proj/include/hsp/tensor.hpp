/*
 * Dense tensors over an involutive commutative semiring.
 *
 * A Tensor<R> is a linear map between finite tensor products of labelled
 * index sets: domain [A1, ..., Am] -> codomain [B1, ..., Bn].  Entries are
 * stored densely, indexed by (codomain, domain):
 *
 *     entry(c, d) = entries[c * dom_size + d]
 *
 * Multi-indices flatten row-major with the LEFTMOST IndexSet slowest:
 * for wires [A, B] the flat index of (a, b) is a * |B| + b.  This ordering
 * is a documented contract: states written as nested loops over wire
 * values, outermost first, enumerate entries in storage order.
 *
 * Composition is written in diagram order: compose(f, g) means "f then g",
 * so compose(f, g).entry(c, a) = sum_b g(c, b) * f(b, a).
 *
 * Tensors over different semirings are different C++ types; attempting to
 * mix them fails to compile.  Shape mismatches are runtime ShapeErrors and
 * name both boundary signatures.
 *
 * All operations are pure (inputs untouched) and single-threaded;
 * const Tensors are safe to share across threads.
 */
#pragma once

#include <cstddef>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "hsp/errors.hpp"
#include "hsp/semiring.hpp"

namespace hsp {

// A named finite index set (a "wire type").  Two IndexSets are
// interchangeable iff both name and size agree.
struct IndexSet {
  std::string name;
  std::size_t size = 0;

  friend bool operator==(const IndexSet& a, const IndexSet& b) {
    return a.name == b.name && a.size == b.size;
  }
  friend bool operator!=(const IndexSet& a, const IndexSet& b) {
    return !(a == b);
  }
};

using Wires = std::vector<IndexSet>;

inline std::size_t boundary_size(const Wires& wires) {
  std::size_t n = 1;
  for (const auto& w : wires) n *= w.size;
  return n;
}

inline std::string boundary_string(const Wires& wires) {
  std::ostringstream out;
  out << "[";
  for (std::size_t i = 0; i < wires.size(); ++i) {
    if (i) out << ", ";
    out << wires[i].name << ":" << wires[i].size;
  }
  out << "]";
  return out.str();
}

inline std::string signature_string(const Wires& domain, const Wires& codomain) {
  return boundary_string(domain) + " -> " + boundary_string(codomain);
}

template <typename R>
class Tensor {
 public:
  using semiring = R;
  using value_type = typename R::value_type;

  Tensor(Wires domain, Wires codomain)
      : domain_(std::move(domain)),
        codomain_(std::move(codomain)),
        dom_size_(boundary_size(domain_)),
        cod_size_(boundary_size(codomain_)),
        entries_(dom_size_ * cod_size_, R::zero()) {}

  const Wires& domain() const { return domain_; }
  const Wires& codomain() const { return codomain_; }
  std::size_t dom_size() const { return dom_size_; }
  std::size_t cod_size() const { return cod_size_; }
  std::string signature() const { return signature_string(domain_, codomain_); }

  value_type& at(std::size_t cod, std::size_t dom) {
    return entries_[cod * dom_size_ + dom];
  }
  const value_type& at(std::size_t cod, std::size_t dom) const {
    return entries_[cod * dom_size_ + dom];
  }

  const std::vector<value_type>& entries() const { return entries_; }
  std::vector<value_type>& entries() { return entries_; }

  // The value of a tensor with empty domain and codomain.
  value_type scalar_value() const {
    if (dom_size_ != 1 || cod_size_ != 1 || !domain_.empty() ||
        !codomain_.empty())
      throw ShapeError("scalar_value on non-scalar tensor " + signature());
    return entries_[0];
  }

  // --- builders -----------------------------------------------------------

  static Tensor identity(const Wires& wires) {
    Tensor t(wires, wires);
    std::size_t n = t.dom_size_;
    for (std::size_t i = 0; i < n; ++i) t.at(i, i) = R::one();
    return t;
  }
  static Tensor identity(const IndexSet& a) { return identity(Wires{a}); }

  static Tensor zero(Wires domain, Wires codomain) {
    return Tensor(std::move(domain), std::move(codomain));
  }

  static Tensor scalar(value_type v) {
    Tensor t(Wires{}, Wires{});
    t.entries_[0] = v;
    return t;
  }

  // swap(a, b): a (x) b -> b (x) a.
  static Tensor swap(const IndexSet& a, const IndexSet& b) {
    Tensor t(Wires{a, b}, Wires{b, a});
    for (std::size_t i = 0; i < a.size; ++i)
      for (std::size_t j = 0; j < b.size; ++j)
        t.at(j * a.size + i, i * b.size + j) = R::one();
    return t;
  }

  static Tensor basis_state(const IndexSet& a, std::size_t k) {
    if (k >= a.size)
      throw ShapeError("basis_state index out of range for " + a.name);
    Tensor t(Wires{}, Wires{a});
    t.at(k, 0) = R::one();
    return t;
  }

  static Tensor basis_effect(const IndexSet& a, std::size_t k) {
    if (k >= a.size)
      throw ShapeError("basis_effect index out of range for " + a.name);
    Tensor t(Wires{a}, Wires{});
    t.at(0, k) = R::one();
    return t;
  }

 private:
  Wires domain_;
  Wires codomain_;
  std::size_t dom_size_;
  std::size_t cod_size_;
  std::vector<value_type> entries_;
};

// The linear extension of a basis function: |k> -> |fn(k)>.
template <typename R, typename Fn>
Tensor<R> function_tensor(const IndexSet& a, const IndexSet& b, Fn&& fn) {
  Tensor<R> t(Wires{a}, Wires{b});
  for (std::size_t k = 0; k < a.size; ++k) {
    const std::size_t image = fn(k);
    if (image >= b.size)
      throw ShapeError("function_tensor image out of range for " + b.name);
    t.at(image, k) = R::one();
  }
  return t;
}

// f then g.  Requires f.codomain == g.domain (names and sizes).
template <typename R>
Tensor<R> compose(const Tensor<R>& f, const Tensor<R>& g) {
  if (f.codomain() != g.domain())
    throw ShapeError("compose boundary mismatch: " + f.signature() +
                     " then " + g.signature());
  Tensor<R> out(f.domain(), g.codomain());
  const std::size_t a_n = f.dom_size();
  const std::size_t b_n = f.cod_size();
  const std::size_t c_n = g.cod_size();
  const auto& fe = f.entries();
  const auto& ge = g.entries();
  auto& oe = out.entries();
  const auto zero = R::zero();
  for (std::size_t c = 0; c < c_n; ++c) {
    for (std::size_t b = 0; b < b_n; ++b) {
      const auto vg = ge[c * b_n + b];
      if (vg == zero) continue;  // skip structural zeros; most maps here are sparse
      const std::size_t f_base = b * a_n;
      const std::size_t o_base = c * a_n;
      for (std::size_t a = 0; a < a_n; ++a)
        oe[o_base + a] = R::add(oe[o_base + a], R::mul(vg, fe[f_base + a]));
    }
  }
  return out;
}

template <typename R, typename... Ts>
Tensor<R> compose(const Tensor<R>& f, const Tensor<R>& g, const Ts&... rest) {
  return compose(compose(f, g), rest...);
}

// Kronecker product; wire lists concatenate as (f wires, g wires).
template <typename R>
Tensor<R> tensor_product(const Tensor<R>& f, const Tensor<R>& g) {
  Wires dom = f.domain();
  dom.insert(dom.end(), g.domain().begin(), g.domain().end());
  Wires cod = f.codomain();
  cod.insert(cod.end(), g.codomain().begin(), g.codomain().end());
  Tensor<R> out(std::move(dom), std::move(cod));
  const std::size_t fa = f.dom_size(), fc = f.cod_size();
  const std::size_t ga = g.dom_size(), gc = g.cod_size();
  auto& oe = out.entries();
  const auto zero = R::zero();
  for (std::size_t cf = 0; cf < fc; ++cf) {
    for (std::size_t cg = 0; cg < gc; ++cg) {
      const std::size_t o_row = (cf * gc + cg) * (fa * ga);
      for (std::size_t af = 0; af < fa; ++af) {
        const auto vf = f.at(cf, af);
        if (vf == zero) continue;
        for (std::size_t ag = 0; ag < ga; ++ag)
          oe[o_row + af * ga + ag] = R::mul(vf, g.at(cg, ag));
      }
    }
  }
  return out;
}

template <typename R, typename... Ts>
Tensor<R> tensor_product(const Tensor<R>& f, const Tensor<R>& g,
                         const Ts&... rest) {
  return tensor_product(tensor_product(f, g), rest...);
}

// Adjoint: swap domain and codomain, involve each entry.
template <typename R>
Tensor<R> dagger(const Tensor<R>& f) {
  Tensor<R> out(f.codomain(), f.domain());
  for (std::size_t c = 0; c < f.cod_size(); ++c)
    for (std::size_t a = 0; a < f.dom_size(); ++a)
      out.at(a, c) = R::involve(f.at(c, a));
  return out;
}

// Largest entrywise deviation (for the Boolean rig: 0 when equal, else 1).
template <typename R>
double max_abs_diff(const Tensor<R>& f, const Tensor<R>& g) {
  if (f.domain() != g.domain() || f.codomain() != g.codomain())
    throw ShapeError("max_abs_diff boundary mismatch: " + f.signature() +
                     " vs " + g.signature());
  double worst = 0.0;
  for (std::size_t i = 0; i < f.entries().size(); ++i) {
    double d = R::abs_diff(f.entries()[i], g.entries()[i]);
    if (d > worst) worst = d;
  }
  return worst;
}

// Entrywise comparison.  Float semirings use absolute tolerance `tol`
// (default 1e-9); the Boolean rig compares exactly and ignores tol.
template <typename R>
bool approx_equal(const Tensor<R>& f, const Tensor<R>& g, double tol = 1e-9) {
  if (f.domain() != g.domain() || f.codomain() != g.codomain()) return false;
  return max_abs_diff(f, g) <= (R::exact ? 0.0 : tol);
}

namespace detail {

inline std::vector<std::size_t> wire_strides(const Wires& wires) {
  std::vector<std::size_t> strides(wires.size(), 1);
  for (std::size_t i = wires.size(); i-- > 1;)
    strides[i - 1] = strides[i] * wires[i].size;
  return strides;
}

// Maps each flat index of `wires` to the flat index obtained by reordering
// the wires so that new position i holds old wire perm[i].
inline std::vector<std::size_t> permutation_map(
    const Wires& wires, const std::vector<std::size_t>& perm) {
  if (perm.size() != wires.size())
    throw ShapeError("wire permutation has wrong length");
  Wires new_wires(wires.size(), IndexSet{});
  for (std::size_t i = 0; i < perm.size(); ++i) {
    if (perm[i] >= wires.size())
      throw ShapeError("wire permutation index out of range");
    new_wires[i] = wires[perm[i]];
  }
  const auto old_strides = wire_strides(wires);
  const auto new_strides = wire_strides(new_wires);
  const std::size_t total = boundary_size(wires);
  std::vector<std::size_t> map(total);
  std::vector<std::size_t> digits(wires.size(), 0);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rem = flat;
    for (std::size_t i = 0; i < wires.size(); ++i) {
      digits[i] = rem / old_strides[i];
      rem %= old_strides[i];
    }
    std::size_t dest = 0;
    for (std::size_t i = 0; i < perm.size(); ++i)
      dest += digits[perm[i]] * new_strides[i];
    map[flat] = dest;
  }
  return map;
}

}  // namespace detail

// Reorder codomain wires: new codomain wire i is old wire perm[i].
// Equivalent to post-composing with the corresponding swap network, but
// runs in O(entries) and never materialises the permutation tensor.
template <typename R>
Tensor<R> permute_codomain(const Tensor<R>& t,
                           const std::vector<std::size_t>& perm) {
  const auto map = detail::permutation_map(t.codomain(), perm);
  Wires cod(perm.size(), IndexSet{});
  for (std::size_t i = 0; i < perm.size(); ++i) cod[i] = t.codomain()[perm[i]];
  Tensor<R> out(t.domain(), cod);
  for (std::size_t c = 0; c < t.cod_size(); ++c)
    for (std::size_t a = 0; a < t.dom_size(); ++a)
      out.at(map[c], a) = t.at(c, a);
  return out;
}

// Reorder domain wires: new domain wire i is old wire perm[i].
template <typename R>
Tensor<R> permute_domain(const Tensor<R>& t,
                         const std::vector<std::size_t>& perm) {
  const auto map = detail::permutation_map(t.domain(), perm);
  Wires dom(perm.size(), IndexSet{});
  for (std::size_t i = 0; i < perm.size(); ++i) dom[i] = t.domain()[perm[i]];
  Tensor<R> out(dom, t.codomain());
  for (std::size_t c = 0; c < t.cod_size(); ++c)
    for (std::size_t a = 0; a < t.dom_size(); ++a)
      out.at(c, map[a]) = t.at(c, a);
  return out;
}

}  // namespace hsp
