#include "hsp/group.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace hsp {

namespace {

constexpr std::size_t kMaxGroupSize = std::size_t{1} << 30;
constexpr std::size_t kBruteForceCap = std::size_t{1} << 20;
constexpr double kPi = 3.14159265358979323846;

}  // namespace

// --- AbelianGroup ------------------------------------------------------------

AbelianGroup::AbelianGroup(std::vector<std::int64_t> orders)
    : orders_(std::move(orders)) {
  std::size_t n = 1;
  for (std::int64_t o : orders_) {
    if (o < 2) throw ConstructionError("cyclic factor orders must be >= 2");
    if (n > kMaxGroupSize / static_cast<std::size_t>(o))
      throw ConstructionError("group size exceeds the supported range");
    n *= static_cast<std::size_t>(o);
  }
  size_ = n;
  strides_.assign(orders_.size(), 1);
  for (std::size_t i = orders_.size(); i-- > 1;)
    strides_[i - 1] = strides_[i] * static_cast<std::size_t>(orders_[i]);
}

std::size_t AbelianGroup::op(std::size_t a, std::size_t b) const {
  std::size_t out = 0;
  for (std::size_t j = 0; j < orders_.size(); ++j) {
    const auto n = static_cast<std::size_t>(orders_[j]);
    const std::size_t aj = (a / strides_[j]) % n;
    const std::size_t bj = (b / strides_[j]) % n;
    out += ((aj + bj) % n) * strides_[j];
  }
  return out;
}

std::size_t AbelianGroup::inverse(std::size_t a) const {
  std::size_t out = 0;
  for (std::size_t j = 0; j < orders_.size(); ++j) {
    const auto n = static_cast<std::size_t>(orders_[j]);
    const std::size_t aj = (a / strides_[j]) % n;
    out += ((n - aj) % n) * strides_[j];
  }
  return out;
}

std::vector<std::int64_t> AbelianGroup::residues(std::size_t index) const {
  std::vector<std::int64_t> out(orders_.size());
  for (std::size_t j = 0; j < orders_.size(); ++j)
    out[j] = static_cast<std::int64_t>((index / strides_[j]) %
                                       static_cast<std::size_t>(orders_[j]));
  return out;
}

std::size_t AbelianGroup::index_of(
    const std::vector<std::int64_t>& residues) const {
  if (residues.size() != orders_.size())
    throw ConstructionError("residue vector has wrong rank for this group");
  std::size_t out = 0;
  for (std::size_t j = 0; j < orders_.size(); ++j) {
    std::int64_t r = residues[j] % orders_[j];
    if (r < 0) r += orders_[j];
    out += static_cast<std::size_t>(r) * strides_[j];
  }
  return out;
}

// --- CayleyGroup -------------------------------------------------------------

CayleyGroup::CayleyGroup(std::size_t n, std::vector<std::size_t> table)
    : n_(n), table_(std::move(table)) {
  if (n_ == 0) throw ConstructionError("Cayley table must be non-empty");
  if (table_.size() != n_ * n_)
    throw ConstructionError("Cayley table has wrong shape");
  for (std::size_t v : table_)
    if (v >= n_) throw ConstructionError("Cayley table entry out of range");

  // Rows and columns must be permutations (cancellation).
  std::vector<char> seen(n_);
  for (std::size_t a = 0; a < n_; ++a) {
    std::fill(seen.begin(), seen.end(), 0);
    for (std::size_t b = 0; b < n_; ++b) {
      if (seen[table_[a * n_ + b]])
        throw ConstructionError("Cayley table row is not a permutation");
      seen[table_[a * n_ + b]] = 1;
    }
    std::fill(seen.begin(), seen.end(), 0);
    for (std::size_t b = 0; b < n_; ++b) {
      if (seen[table_[b * n_ + a]])
        throw ConstructionError("Cayley table column is not a permutation");
      seen[table_[b * n_ + a]] = 1;
    }
  }

  // Unique two-sided unit.
  std::size_t unit_count = 0;
  for (std::size_t e = 0; e < n_; ++e) {
    bool ok = true;
    for (std::size_t a = 0; a < n_ && ok; ++a)
      ok = table_[e * n_ + a] == a && table_[a * n_ + e] == a;
    if (ok) {
      unit_ = e;
      ++unit_count;
    }
  }
  if (unit_count != 1)
    throw ConstructionError("Cayley table lacks a unique two-sided unit");

  // Associativity via Light's test: with T a generating set, checking
  // (x*t)*y == x*(t*y) for all t in T and all x, y suffices.
  std::vector<std::size_t> gens;
  {
    std::vector<char> reached(n_, 0);
    std::vector<std::size_t> frontier{unit_};
    reached[unit_] = 1;
    std::size_t count = 1;
    for (std::size_t e = 0; e < n_; ++e) {
      if (reached[e]) continue;
      gens.push_back(e);
      frontier.push_back(e);
      reached[e] = 1;
      ++count;
      while (!frontier.empty()) {
        std::size_t x = frontier.back();
        frontier.pop_back();
        for (std::size_t y = 0; y < n_; ++y) {
          if (!reached[y]) continue;
          for (std::size_t z : {table_[x * n_ + y], table_[y * n_ + x]}) {
            if (!reached[z]) {
              reached[z] = 1;
              ++count;
              frontier.push_back(z);
            }
          }
        }
      }
    }
    (void)count;
  }
  for (std::size_t t : gens)
    for (std::size_t x = 0; x < n_; ++x) {
      const std::size_t xt = table_[x * n_ + t];
      for (std::size_t y = 0; y < n_; ++y)
        if (table_[xt * n_ + y] != table_[x * n_ + table_[t * n_ + y]])
          throw ConstructionError("Cayley table is not associative");
    }

  inverse_.assign(n_, 0);
  for (std::size_t a = 0; a < n_; ++a) {
    bool found = false;
    for (std::size_t b = 0; b < n_; ++b)
      if (table_[a * n_ + b] == unit_ && table_[b * n_ + a] == unit_) {
        inverse_[a] = b;
        found = true;
        break;
      }
    if (!found)
      throw ConstructionError("Cayley table element lacks a two-sided inverse");
  }
}

// --- Subgroup ----------------------------------------------------------------

bool Subgroup::contains(std::size_t e) const {
  return std::binary_search(elements.begin(), elements.end(), e);
}

// --- characters --------------------------------------------------------------

std::pair<std::int64_t, std::int64_t> character_phase(const AbelianGroup& g,
                                                      const Character& chi,
                                                      std::size_t element) {
  if (chi.exponents.size() != g.rank())
    throw ConstructionError("character has wrong rank for this group");
  const auto res = g.residues(element);
  std::int64_t num = 0, den = 1;
  for (std::size_t j = 0; j < g.rank(); ++j) {
    const std::int64_t n = g.orders()[j];
    std::int64_t p = chi.exponents[j] % n;
    if (p < 0) p += n;
    // Add p*m/n to num/den, keeping the fraction reduced.
    const std::int64_t term_num = (p * res[j]) % n;
    const std::int64_t gcd_t = std::gcd(term_num == 0 ? n : term_num, n);
    const std::int64_t tn = term_num / gcd_t, td = n / gcd_t;
    const std::int64_t l = std::lcm(den, td);
    num = (num * (l / den) + tn * (l / td)) % l;
    den = l;
    const std::int64_t gg = std::gcd(num == 0 ? den : num, den);
    num /= gg;
    den /= gg;
  }
  return {num, den};
}

std::complex<double> root_of_unity(std::int64_t num, std::int64_t den) {
  if (den == 1) return {1.0, 0.0};
  if (den == 2) return {-1.0, 0.0};
  if (den == 4) return num == 1 ? std::complex<double>{0.0, 1.0}
                                : std::complex<double>{0.0, -1.0};
  const double theta = 2.0 * kPi * static_cast<double>(num) /
                       static_cast<double>(den);
  return {std::cos(theta), std::sin(theta)};
}

std::complex<double> char_value(const AbelianGroup& g, const Character& chi,
                                std::size_t element) {
  const auto [num, den] = character_phase(g, chi, element);
  return root_of_unity(num, den);
}

bool char_is_real(const AbelianGroup& g, const Character& chi) {
  for (std::size_t j = 0; j < g.rank(); ++j) {
    const std::int64_t n = g.orders()[j];
    std::int64_t p = chi.exponents[j] % n;
    if (p < 0) p += n;
    if (p == 0) continue;
    if (n % 2 != 0 || p != n / 2) return false;
  }
  return true;
}

double real_char_value(const AbelianGroup& g, const Character& chi,
                       std::size_t element) {
  if (!char_is_real(g, chi))
    throw SemiringError(
        "character is not real-valued; unavailable over the real scalars");
  const auto [num, den] = character_phase(g, chi, element);
  (void)num;
  return den == 1 ? 1.0 : -1.0;
}

Character character_at(const AbelianGroup& g, std::size_t index) {
  if (index >= g.size()) throw ConstructionError("character index out of range");
  return Character{g.residues(index)};
}

std::size_t character_index(const AbelianGroup& g, const Character& chi) {
  return g.index_of(chi.exponents);
}

std::vector<Character> annihilator(const AbelianGroup& g, const Subgroup& h) {
  if (g.size() > kBruteForceCap)
    throw SizeLimitError("annihilator enumeration capped at 2^20 elements");
  std::vector<Character> out;
  for (std::size_t c = 0; c < g.size(); ++c) {
    Character chi = character_at(g, c);
    bool ann = true;
    for (std::size_t e : h.elements) {
      if (character_phase(g, chi, e).first != 0) {
        ann = false;
        break;
      }
    }
    if (ann) out.push_back(std::move(chi));
  }
  return out;
}

Subgroup double_annihilator(const AbelianGroup& g,
                            const std::vector<Character>& chars) {
  if (g.size() > kBruteForceCap)
    throw SizeLimitError("double_annihilator enumeration capped at 2^20 elements");
  Subgroup out;
  for (std::size_t e = 0; e < g.size(); ++e) {
    bool killed = true;
    for (const auto& chi : chars) {
      if (character_phase(g, chi, e).first != 0) {
        killed = false;
        break;
      }
    }
    if (killed) out.elements.push_back(e);
  }
  // Record a small generating set for reporting.  Abelian incremental
  // closure: <C u {e}> = union of C*e^j, so each extension costs O(|new|).
  std::vector<char> in_closure(g.size(), 0);
  std::vector<std::size_t> closure_elems{g.unit()};
  in_closure[g.unit()] = 1;
  for (std::size_t e : out.elements) {
    if (in_closure[e]) continue;
    out.generators.push_back(e);
    const std::vector<std::size_t> base = closure_elems;
    std::size_t p = e;
    while (!in_closure[p]) {
      for (std::size_t x : base) {
        std::size_t z = g.op(x, p);
        in_closure[z] = 1;
        closure_elems.push_back(z);
      }
      p = g.op(p, e);
    }
    if (closure_elems.size() == out.elements.size()) break;
  }
  return out;
}

// --- irreducible representations ----------------------------------------------

std::complex<double> irrep_character(const Irrep& rho, std::size_t g) {
  std::complex<double> tr = 0.0;
  for (std::size_t i = 0; i < rho.dim; ++i) tr += rho.at(g, i, i);
  return tr;
}

bool IrrepReport::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

double IrrepReport::max_residual() const {
  double worst = 0.0;
  for (const auto& c : checks) worst = std::max(worst, c.residual);
  return worst;
}

namespace {

// max |A*B - C| entrywise, all row-major dim x dim.
double product_residual(const Irrep& rho, std::size_t a, std::size_t b,
                        std::size_t c) {
  const std::size_t d = rho.dim;
  double worst = 0.0;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      std::complex<double> acc = 0.0;
      for (std::size_t k = 0; k < d; ++k) acc += rho.at(a, i, k) * rho.at(b, k, j);
      worst = std::max(worst, std::abs(acc - rho.at(c, i, j)));
    }
  return worst;
}

}  // namespace

IrrepReport validate_irrep(const CayleyGroup& g, const Irrep& rho, double tol) {
  IrrepReport report;
  auto add = [&](const std::string& name, double residual) {
    report.checks.push_back({name, residual, residual <= tol});
  };

  if (rho.mats.size() != g.size() || rho.dim == 0)
    throw ConstructionError("irrep table shape does not match the group");
  for (const auto& m : rho.mats)
    if (m.size() != rho.dim * rho.dim)
      throw ConstructionError("irrep matrix has wrong shape");

  {
    double worst = 0.0;
    for (std::size_t i = 0; i < rho.dim; ++i)
      for (std::size_t j = 0; j < rho.dim; ++j)
        worst = std::max(worst, std::abs(rho.at(g.unit(), i, j) -
                                         (i == j ? 1.0 : 0.0)));
    add("unit maps to identity", worst);
  }
  {
    double worst = 0.0;
    for (std::size_t a = 0; a < g.size(); ++a)
      for (std::size_t b = 0; b < g.size(); ++b)
        worst = std::max(worst, product_residual(rho, a, b, g.op(a, b)));
    add("multiplicative on all pairs", worst);
  }
  {
    double worst = 0.0;
    for (std::size_t a = 0; a < g.size(); ++a) {
      for (std::size_t i = 0; i < rho.dim; ++i)
        for (std::size_t j = 0; j < rho.dim; ++j) {
          std::complex<double> acc = 0.0;
          for (std::size_t k = 0; k < rho.dim; ++k)
            acc += rho.at(a, i, k) * std::conj(rho.at(a, j, k));
          worst = std::max(worst, std::abs(acc - (i == j ? 1.0 : 0.0)));
        }
    }
    add("unitary", worst);
  }
  {
    double acc = 0.0;
    for (std::size_t a = 0; a < g.size(); ++a)
      acc += std::norm(irrep_character(rho, a));
    add("irreducible (character norm 1)",
        std::abs(acc / static_cast<double>(g.size()) - 1.0));
  }
  return report;
}

}  // namespace hsp
