/*
 * Finite groups at desk scale.
 *
 * Elements of every group are flat indices 0..n-1.  Two concrete carriers
 * are provided:
 *
 *   AbelianGroup : direct sum of cyclic groups Z_{n_1} x ... x Z_{n_k},
 *                  elements encoded mixed-radix (leftmost factor slowest,
 *                  matching the tensor flattening order).  Index 0 is the
 *                  unit.
 *   CayleyGroup  : an explicit multiplication table, validated on
 *                  construction (closure, unique two-sided unit, inverses,
 *                  associativity).
 *
 * AnyGroup wraps either behind one value type so instances can carry
 * whichever they were built from.
 *
 * On top of the carriers: subgroup closure, cosets and quotients with
 * canonical (lexicographically smallest) representatives, invariant-factor
 * decomposition of abelian groups, multiplicative characters with exact
 * rational phase arithmetic, annihilators and double annihilators of the
 * character pairing, and validation of unitary irreducible representation
 * tables.
 */
#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hsp/errors.hpp"

namespace hsp {

class AbelianGroup {
 public:
  // orders: cyclic factor sizes, each >= 2; empty list = trivial group.
  explicit AbelianGroup(std::vector<std::int64_t> orders);

  const std::vector<std::int64_t>& orders() const { return orders_; }
  std::size_t rank() const { return orders_.size(); }
  std::size_t size() const { return size_; }
  std::size_t unit() const { return 0; }
  std::size_t op(std::size_t a, std::size_t b) const;
  std::size_t inverse(std::size_t a) const;

  std::vector<std::int64_t> residues(std::size_t index) const;
  // Accepts arbitrary integers; reduces each component mod its order.
  std::size_t index_of(const std::vector<std::int64_t>& residues) const;

 private:
  std::vector<std::int64_t> orders_;
  std::vector<std::size_t> strides_;
  std::size_t size_;
};

class CayleyGroup {
 public:
  // table is row-major n x n: table[a*n + b] = a*b.  Throws
  // ConstructionError unless the table is a group.
  CayleyGroup(std::size_t n, std::vector<std::size_t> table);

  std::size_t size() const { return n_; }
  std::size_t unit() const { return unit_; }
  std::size_t op(std::size_t a, std::size_t b) const {
    return table_[a * n_ + b];
  }
  std::size_t inverse(std::size_t a) const { return inverse_[a]; }
  const std::vector<std::size_t>& table() const { return table_; }

 private:
  std::size_t n_;
  std::vector<std::size_t> table_;
  std::size_t unit_;
  std::vector<std::size_t> inverse_;
};

template <typename G>
concept FiniteGroupLike = requires(const G& g, std::size_t a, std::size_t b) {
  { g.size() } -> std::convertible_to<std::size_t>;
  { g.op(a, b) } -> std::convertible_to<std::size_t>;
  { g.inverse(a) } -> std::convertible_to<std::size_t>;
  { g.unit() } -> std::convertible_to<std::size_t>;
};

// Value wrapper over either carrier; itself FiniteGroupLike.
struct AnyGroup {
  std::variant<AbelianGroup, CayleyGroup> carrier;

  AnyGroup(AbelianGroup g) : carrier(std::move(g)) {}
  AnyGroup(CayleyGroup g) : carrier(std::move(g)) {}

  std::size_t size() const {
    return std::visit([](const auto& g) { return g.size(); }, carrier);
  }
  std::size_t unit() const {
    return std::visit([](const auto& g) { return g.unit(); }, carrier);
  }
  std::size_t op(std::size_t a, std::size_t b) const {
    return std::visit([&](const auto& g) { return g.op(a, b); }, carrier);
  }
  std::size_t inverse(std::size_t a) const {
    return std::visit([&](const auto& g) { return g.inverse(a); }, carrier);
  }
  bool is_abelian_carrier() const {
    return std::holds_alternative<AbelianGroup>(carrier);
  }
  const AbelianGroup& abelian() const {
    if (!is_abelian_carrier())
      throw ConstructionError("group does not have an abelian carrier");
    return std::get<AbelianGroup>(carrier);
  }
  const CayleyGroup& cayley() const { return std::get<CayleyGroup>(carrier); }
};

struct Subgroup {
  std::vector<std::size_t> elements;    // sorted ascending, contains the unit
  std::vector<std::size_t> generators;  // the generating set it was built from

  std::size_t size() const { return elements.size(); }
  bool contains(std::size_t e) const;
};

template <FiniteGroupLike G>
Subgroup subgroup_closure(const G& g, std::vector<std::size_t> generators);

template <FiniteGroupLike G>
bool commutes(const G& g) {
  for (std::size_t a = 0; a < g.size(); ++a)
    for (std::size_t b = a + 1; b < g.size(); ++b)
      if (g.op(a, b) != g.op(b, a)) return false;
  return true;
}

template <FiniteGroupLike G>
bool is_normal(const G& g, const Subgroup& h);

template <FiniteGroupLike G>
std::size_t element_order(const G& g, std::size_t a);

template <FiniteGroupLike G>
std::size_t element_power(const G& g, std::size_t a, std::size_t e);

// A subgroup repackaged as a standalone group; to_parent maps its element
// indices back into the parent.
struct EmbeddedGroup {
  CayleyGroup group;
  std::vector<std::size_t> to_parent;
};

template <FiniteGroupLike G>
EmbeddedGroup subgroup_group(const G& g, const Subgroup& h);

// Cosets of a (normal) subgroup with canonical representatives and the
// induced group structure on cosets.
//
// Cosets are indexed in increasing order of their lexicographically
// smallest element, and representative[] returns exactly that element, so
// the section r: cosets -> G always picks the canonical representative.
struct QuotientData {
  Subgroup subgroup;
  std::vector<std::size_t> coset_of;        // q : parent index -> coset index
  std::vector<std::size_t> representative;  // r : coset index -> parent index
  CayleyGroup coset_group;                  // cosets under representative product
  // Present when the parent is abelian: the quotient rewritten in invariant
  // factors, with to_canonical mapping coset index -> AbelianGroup index.
  std::optional<AbelianGroup> abelian_form;
  std::vector<std::size_t> to_canonical;
};

template <FiniteGroupLike G>
QuotientData quotient(const G& g, const Subgroup& h);

// Invariant-factor decomposition of an abelian group given by any carrier:
// returns (generator element, order) pairs, largest order first, each order
// dividing the previous one, such that the group is the direct sum of the
// cyclic subgroups they generate.
template <FiniteGroupLike G>
std::vector<std::pair<std::size_t, std::int64_t>> abelian_basis(const G& g);

template <FiniteGroupLike G>
std::vector<std::int64_t> invariant_factors(const G& g);

// ---------------------------------------------------------------------------
// Multiplicative characters of abelian groups.
//
// The character with exponents (p_1, ..., p_k) sends the element with
// residues (m_1, ..., m_k) to exp(2*pi*i * sum_j p_j m_j / n_j).  Phases are
// reduced as exact rationals; values landing on the four axis points come
// out exactly as 1, i, -1, -i.
// ---------------------------------------------------------------------------

struct Character {
  std::vector<std::int64_t> exponents;  // p_j in [0, n_j)

  friend bool operator==(const Character& a, const Character& b) {
    return a.exponents == b.exponents;
  }
  friend bool operator<(const Character& a, const Character& b) {
    return a.exponents < b.exponents;
  }
};

// Reduced phase fraction of chi(g) as (num, den), 0 <= num < den.
std::pair<std::int64_t, std::int64_t> character_phase(const AbelianGroup& g,
                                                      const Character& chi,
                                                      std::size_t element);

// exp(2*pi*i*num/den); exact (no trigonometry) when den divides 4.
std::complex<double> root_of_unity(std::int64_t num, std::int64_t den);

std::complex<double> char_value(const AbelianGroup& g, const Character& chi,
                                std::size_t element);

// True iff chi takes only the values +-1 (all p_j are 0 or n_j/2).
bool char_is_real(const AbelianGroup& g, const Character& chi);

// +-1.0; throws SemiringError if the character is not real-valued.
double real_char_value(const AbelianGroup& g, const Character& chi,
                       std::size_t element);

// The dual group is abelian with the same orders; this enumerates its
// element `index` as a Character.
Character character_at(const AbelianGroup& g, std::size_t index);
std::size_t character_index(const AbelianGroup& g, const Character& chi);

// All characters with chi(h) = 1 for every h in H, in lexicographic
// (= dual index) order.  Always a subgroup of the dual of size |G|/|H|.
std::vector<Character> annihilator(const AbelianGroup& g, const Subgroup& h);

// Elements annihilated by every given character.  Desk-scale brute force;
// throws SizeLimitError for |G| > 2^20.
Subgroup double_annihilator(const AbelianGroup& g,
                            const std::vector<Character>& chars);

// ---------------------------------------------------------------------------
// Unitary irreducible representations, supplied as literal tables.
// ---------------------------------------------------------------------------

struct Irrep {
  std::string name;
  std::size_t dim = 0;
  // mats[g] is row-major dim x dim.
  std::vector<std::vector<std::complex<double>>> mats;

  const std::complex<double>& at(std::size_t g, std::size_t r,
                                 std::size_t c) const {
    return mats[g][r * dim + c];
  }
};

std::complex<double> irrep_character(const Irrep& rho, std::size_t g);

struct IrrepCheck {
  std::string check;
  double residual = 0.0;
  bool pass = false;
};

struct IrrepReport {
  std::vector<IrrepCheck> checks;
  bool all_pass() const;
  double max_residual() const;
};

// Verifies rho: unit to identity, multiplicativity on all pairs, unitarity,
// and irreducibility via the character norm (1/|G|) sum |tr rho(g)|^2 = 1.
IrrepReport validate_irrep(const CayleyGroup& g, const Irrep& rho, double tol);

// ---------------------------------------------------------------------------
// Template implementations.
// ---------------------------------------------------------------------------

template <FiniteGroupLike G>
Subgroup subgroup_closure(const G& g, std::vector<std::size_t> generators) {
  const std::size_t n = g.size();
  for (std::size_t e : generators)
    if (e >= n) throw ConstructionError("subgroup generator index out of range");
  std::vector<char> in(n, 0);
  std::vector<std::size_t> frontier{g.unit()};
  in[g.unit()] = 1;
  while (!frontier.empty()) {
    std::size_t x = frontier.back();
    frontier.pop_back();
    for (std::size_t e : generators) {
      for (std::size_t y : {g.op(x, e), g.op(x, g.inverse(e))}) {
        if (!in[y]) {
          in[y] = 1;
          frontier.push_back(y);
        }
      }
    }
  }
  Subgroup h;
  h.generators = std::move(generators);
  for (std::size_t i = 0; i < n; ++i)
    if (in[i]) h.elements.push_back(i);
  return h;
}

template <FiniteGroupLike G>
bool is_normal(const G& g, const Subgroup& h) {
  for (std::size_t a = 0; a < g.size(); ++a)
    for (std::size_t x : h.elements)
      if (!h.contains(g.op(g.op(a, x), g.inverse(a)))) return false;
  return true;
}

template <FiniteGroupLike G>
std::size_t element_order(const G& g, std::size_t a) {
  std::size_t x = a, k = 1;
  while (x != g.unit()) {
    x = g.op(x, a);
    ++k;
  }
  return k;
}

template <FiniteGroupLike G>
std::size_t element_power(const G& g, std::size_t a, std::size_t e) {
  std::size_t acc = g.unit();
  for (std::size_t i = 0; i < e; ++i) acc = g.op(acc, a);
  return acc;
}

template <FiniteGroupLike G>
EmbeddedGroup subgroup_group(const G& g, const Subgroup& h) {
  const std::size_t m = h.size();
  std::vector<std::size_t> local(g.size(), 0);
  for (std::size_t i = 0; i < m; ++i) local[h.elements[i]] = i;
  std::vector<std::size_t> table(m * m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      std::size_t prod = g.op(h.elements[i], h.elements[j]);
      if (!h.contains(prod))
        throw ConstructionError("element set is not closed under the product");
      table[i * m + j] = local[prod];
    }
  return EmbeddedGroup{CayleyGroup(m, std::move(table)), h.elements};
}

template <FiniteGroupLike G>
QuotientData quotient(const G& g, const Subgroup& h) {
  if (!is_normal(g, h))
    throw ConstructionError("subgroup is not normal; quotient undefined");
  if (g.size() / h.size() > 4096)
    throw SizeLimitError(
        "quotient has more than 4096 cosets; the dense coset table would "
        "not fit the desk-scale budget");
  const std::size_t n = g.size();
  constexpr std::size_t kNoCoset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> coset_of(n, kNoCoset);
  std::vector<std::size_t> representative;
  // Scanning elements in increasing order makes each coset's first-seen
  // element its lexicographically smallest one.
  for (std::size_t a = 0; a < n; ++a) {
    if (coset_of[a] != kNoCoset) continue;
    const std::size_t c = representative.size();
    representative.push_back(a);
    for (std::size_t x : h.elements) coset_of[g.op(a, x)] = c;
  }
  const std::size_t m = representative.size();
  std::vector<std::size_t> table(m * m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      table[i * m + j] = coset_of[g.op(representative[i], representative[j])];
  QuotientData out{h, std::move(coset_of), std::move(representative),
                   CayleyGroup(m, std::move(table)), std::nullopt, {}};
  if (commutes(out.coset_group)) {
    auto basis = abelian_basis(out.coset_group);
    std::vector<std::int64_t> orders;
    orders.reserve(basis.size());
    for (const auto& [gen, ord] : basis) orders.push_back(ord);
    AbelianGroup canon(orders);
    // Enumerate products of basis powers; mixed-radix exponent tuples line
    // up with AbelianGroup indices by construction.
    std::vector<std::size_t> to_canonical(m, kNoCoset);
    std::vector<char> seen(m, 0);
    for (std::size_t idx = 0; idx < canon.size(); ++idx) {
      auto exps = canon.residues(idx);
      std::size_t e = out.coset_group.unit();
      for (std::size_t j = 0; j < basis.size(); ++j)
        e = out.coset_group.op(
            e, element_power(out.coset_group, basis[j].first,
                             static_cast<std::size_t>(exps[j])));
      if (seen[e])
        throw ConstructionError("abelian decomposition failed to enumerate");
      seen[e] = 1;
      to_canonical[e] = idx;
    }
    out.abelian_form = std::move(canon);
    out.to_canonical = std::move(to_canonical);
  }
  return out;
}

template <FiniteGroupLike G>
std::vector<std::pair<std::size_t, std::int64_t>> abelian_basis(const G& g) {
  if (!commutes(g))
    throw ConstructionError("abelian_basis requires a commutative group");
  if (g.size() == 1) return {};
  std::size_t best = g.unit();
  std::size_t best_ord = 1;
  for (std::size_t a = 0; a < g.size(); ++a) {
    std::size_t o = element_order(g, a);
    if (o > best_ord) {
      best_ord = o;
      best = a;
    }
  }
  const auto d = static_cast<std::int64_t>(best_ord);
  std::vector<std::pair<std::size_t, std::int64_t>> basis{{best, d}};
  Subgroup hx = subgroup_closure(g, {best});
  if (hx.size() == g.size()) return basis;

  // Decompose the quotient by <x>, then correct each lifted generator y of
  // order k so that y^k is the unit rather than merely landing in <x>.
  // Because x has maximal order, y^k = x^t forces k | t, and y * x^(-t/k)
  // is the corrected generator.
  const std::size_t n = g.size();
  constexpr std::size_t kNoCoset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> coset_of(n, kNoCoset);
  std::vector<std::size_t> representative;
  for (std::size_t a = 0; a < n; ++a) {
    if (coset_of[a] != kNoCoset) continue;
    const std::size_t c = representative.size();
    representative.push_back(a);
    for (std::size_t e : hx.elements) coset_of[g.op(a, e)] = c;
  }
  const std::size_t m = representative.size();
  std::vector<std::size_t> table(m * m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      table[i * m + j] = coset_of[g.op(representative[i], representative[j])];
  CayleyGroup quot(m, std::move(table));

  // Position of each power of x inside <x>, for discrete logs below.
  std::vector<std::size_t> x_dlog(n, kNoCoset);
  {
    std::size_t p = g.unit();
    for (std::int64_t t = 0; t < d; ++t) {
      x_dlog[p] = static_cast<std::size_t>(t);
      p = g.op(p, best);
    }
  }
  for (const auto& [gen_bar, k] : abelian_basis(quot)) {
    std::size_t y = representative[gen_bar];
    std::size_t yk = element_power(g, y, static_cast<std::size_t>(k));
    std::size_t t = x_dlog[yk];
    if (t == kNoCoset || t % static_cast<std::size_t>(k) != 0)
      throw ConstructionError("abelian basis correction failed");
    std::size_t shift = (static_cast<std::size_t>(d) -
                         t / static_cast<std::size_t>(k)) %
                        static_cast<std::size_t>(d);
    std::size_t corrected = g.op(y, element_power(g, best, shift));
    basis.emplace_back(corrected, k);
  }
  return basis;
}

template <FiniteGroupLike G>
std::vector<std::int64_t> invariant_factors(const G& g) {
  std::vector<std::int64_t> out;
  for (const auto& [gen, ord] : abelian_basis(g)) out.push_back(ord);
  return out;
}

}  // namespace hsp
