/*
 * Frobenius structures on group carriers, and the law suite.
 *
 * Two canonical structures are built on the free module over a finite
 * group K:
 *
 *   point_structure : comultiplication copies basis elements, counit
 *                     deletes them; mult/unit are the adjoints (match and
 *                     uniform superposition).  Special and commutative.
 *   group_structure : multiplication is the linear extension of the group
 *                     product, unit is the basis state at the group unit;
 *                     comult/counit are the adjoints.  Quasi-special with
 *                     normalisation scalar Xi = |K|, commutative iff K is.
 *
 * The stored `xi` field realises Xi = involve(xi) * xi: over the float
 * semirings xi = sqrt(|K|), over the Boolean rig xi is the semiring sum of
 * |K| ones (i.e. 1), which equals Xi directly since the involution is
 * trivial and 1*1 = 1.
 *
 * check_frobenius and check_strong_complementarity evaluate every defining
 * law as an explicit tensor contraction and report per-law residuals.
 * Residuals over the Boolean rig are 0/1 (exact comparison).
 *
 * A strongly complementary pair additionally carries its antipode, the
 * cup/cap-bent map that restricts to the group inverse on basis states.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <type_traits>
#include <vector>

#include "hsp/errors.hpp"
#include "hsp/group.hpp"
#include "hsp/semiring.hpp"
#include "hsp/tensor.hpp"

namespace hsp {

template <typename R>
struct FrobeniusStructure {
  IndexSet object;
  Tensor<R> mult;    // object (x) object -> object
  Tensor<R> unit;    // I -> object
  Tensor<R> comult;  // dagger of mult
  Tensor<R> counit;  // dagger of unit
  typename R::value_type xi;  // normalisation; see header comment
  bool special;               // expect mult . comult = id (else Xi * id)
  bool commutative;           // expect mult . swap = mult
};

struct LawCheck {
  std::string law;
  double residual = 0.0;
  bool pass = false;
};

struct LawReport {
  std::string subject;
  std::vector<LawCheck> checks;

  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
  double max_residual() const {
    double worst = 0.0;
    for (const auto& c : checks)
      if (c.residual > worst) worst = c.residual;
    return worst;
  }
  const LawCheck* find(const std::string& law) const {
    for (const auto& c : checks)
      if (c.law == law) return &c;
    return nullptr;
  }
};

template <typename R, FiniteGroupLike K>
FrobeniusStructure<R> point_structure(const K& k, const IndexSet& object) {
  if (object.size != k.size())
    throw ShapeError("object size does not match the group");
  const std::size_t n = k.size();
  Tensor<R> mult(Wires{object, object}, Wires{object});
  for (std::size_t i = 0; i < n; ++i) mult.at(i, i * n + i) = R::one();
  Tensor<R> unit(Wires{}, Wires{object});
  for (std::size_t i = 0; i < n; ++i) unit.at(i, 0) = R::one();
  return FrobeniusStructure<R>{object,         mult,
                               unit,           dagger(mult),
                               dagger(unit),   R::one(),
                               /*special=*/true,
                               /*commutative=*/true};
}

template <typename R, FiniteGroupLike K>
FrobeniusStructure<R> group_structure(const K& k, const IndexSet& object) {
  if (object.size != k.size())
    throw ShapeError("object size does not match the group");
  const std::size_t n = k.size();
  Tensor<R> mult(Wires{object, object}, Wires{object});
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) mult.at(k.op(a, b), a * n + b) = R::one();
  Tensor<R> unit = Tensor<R>::basis_state(object, k.unit());
  typename R::value_type xi;
  if constexpr (R::exact) {
    xi = R::from_int(static_cast<std::int64_t>(n));
  } else {
    xi = typename R::value_type(std::sqrt(static_cast<double>(n)));
  }
  return FrobeniusStructure<R>{object,       mult,
                               unit,         dagger(mult),
                               dagger(unit), xi,
                               /*special=*/n == 1,
                               /*commutative=*/commutes(k)};
}

// cap = counit . mult : H (x) H -> I;  cup = comult . unit : I -> H (x) H.
template <typename R>
Tensor<R> cap_of(const FrobeniusStructure<R>& f) {
  return compose(f.mult, f.counit);
}

template <typename R>
Tensor<R> cup_of(const FrobeniusStructure<R>& f) {
  return compose(f.unit, f.comult);
}

// The quasi-speciality scalar Xi = involve(xi) * xi.
template <typename R>
typename R::value_type xi_squared(const FrobeniusStructure<R>& f) {
  return R::mul(R::involve(f.xi), f.xi);
}

namespace detail {

template <typename R>
void add_check(LawReport& report, const std::string& law, const Tensor<R>& lhs,
               const Tensor<R>& rhs, double tol) {
  double residual = max_abs_diff(lhs, rhs);
  report.checks.push_back({law, residual, residual <= (R::exact ? 0.0 : tol)});
}

}  // namespace detail

// The composite law checks materialise intermediates with up to six open
// wires (k^6 dense entries), so the suite is capped at small objects.
inline constexpr std::size_t kLawObjectCap = 16;

namespace detail {

inline void check_law_cap(const IndexSet& object) {
  if (object.size > kLawObjectCap)
    throw SizeLimitError(
        "law suite materialises six-wire intermediates; object \"" +
        object.name + "\" (size " + std::to_string(object.size) +
        ") exceeds the cap of " + std::to_string(kLawObjectCap));
}

}  // namespace detail

template <typename R>
LawReport check_frobenius(const FrobeniusStructure<R>& f, double tol = 1e-9) {
  detail::check_law_cap(f.object);
  LawReport report;
  report.subject = f.object.name;
  const IndexSet& h = f.object;
  const auto id1 = Tensor<R>::identity(h);
  const auto sw = Tensor<R>::swap(h, h);

  detail::add_check(report, "comult is the adjoint of mult", f.comult,
                    dagger(f.mult), tol);
  detail::add_check(report, "counit is the adjoint of unit", f.counit,
                    dagger(f.unit), tol);
  detail::add_check(report, "associativity",
                    compose(tensor_product(f.mult, id1), f.mult),
                    compose(tensor_product(id1, f.mult), f.mult), tol);
  detail::add_check(report, "coassociativity",
                    compose(f.comult, tensor_product(f.comult, id1)),
                    compose(f.comult, tensor_product(id1, f.comult)), tol);
  detail::add_check(report, "left unit",
                    compose(tensor_product(f.unit, id1), f.mult), id1, tol);
  detail::add_check(report, "right unit",
                    compose(tensor_product(id1, f.unit), f.mult), id1, tol);
  detail::add_check(report, "left counit",
                    compose(f.comult, tensor_product(f.counit, id1)), id1, tol);
  detail::add_check(report, "right counit",
                    compose(f.comult, tensor_product(id1, f.counit)), id1, tol);

  const auto middle = compose(f.mult, f.comult);
  detail::add_check(report, "frobenius law (left)",
                    compose(tensor_product(id1, f.comult),
                            tensor_product(f.mult, id1)),
                    middle, tol);
  detail::add_check(report, "frobenius law (right)",
                    compose(tensor_product(f.comult, id1),
                            tensor_product(id1, f.mult)),
                    middle, tol);

  if (f.special) {
    detail::add_check(report, "speciality", compose(f.comult, f.mult), id1,
                      tol);
  } else {
    auto scaled_id = tensor_product(Tensor<R>::scalar(xi_squared(f)), id1);
    detail::add_check(report, "quasi-speciality", compose(f.comult, f.mult),
                      scaled_id, tol);
  }
  if (f.commutative)
    detail::add_check(report, "commutativity", compose(sw, f.mult), f.mult,
                      tol);
  detail::add_check(report, "balanced symmetry", compose(sw, cap_of(f)),
                    cap_of(f), tol);
  return report;
}

// Transpose of f: A -> B with respect to a cup on A and a cap on B:
//
//   f^T(a, b) = sum_{a', b'} cup(a, a') * f(b', a') * cap(b', b)
//
// cup must be a state on A (x) A and cap an effect on B (x) B.  Computed by
// two pairwise contractions; nothing larger than |A||B| is materialised.
template <typename R>
Tensor<R> transpose_of(const Tensor<R>& f, const Tensor<R>& cup_dom,
                       const Tensor<R>& cap_cod) {
  Wires aa = f.domain();
  aa.insert(aa.end(), f.domain().begin(), f.domain().end());
  Wires bb = f.codomain();
  bb.insert(bb.end(), f.codomain().begin(), f.codomain().end());
  if (cup_dom.codomain() != aa || !cup_dom.domain().empty())
    throw ShapeError("transpose_of: cup does not match the domain: " +
                     cup_dom.signature());
  if (cap_cod.domain() != bb || !cap_cod.codomain().empty())
    throw ShapeError("transpose_of: cap does not match the codomain: " +
                     cap_cod.signature());
  const std::size_t an = f.dom_size();
  const std::size_t bn = f.cod_size();
  const auto zero = R::zero();
  // m2(a, b') = sum_{a'} cup(a, a') f(b', a')
  std::vector<typename R::value_type> m2(an * bn, zero);
  for (std::size_t a = 0; a < an; ++a)
    for (std::size_t a2 = 0; a2 < an; ++a2) {
      const auto vc = cup_dom.at(a * an + a2, 0);
      if (vc == zero) continue;
      for (std::size_t b2 = 0; b2 < bn; ++b2)
        m2[a * bn + b2] =
            R::add(m2[a * bn + b2], R::mul(vc, f.at(b2, a2)));
    }
  Tensor<R> out(f.codomain(), f.domain());
  for (std::size_t a = 0; a < an; ++a)
    for (std::size_t b2 = 0; b2 < bn; ++b2) {
      const auto vm = m2[a * bn + b2];
      if (vm == zero) continue;
      for (std::size_t b = 0; b < bn; ++b)
        out.at(a, b) =
            R::add(out.at(a, b), R::mul(vm, cap_cod.at(0, b2 * bn + b)));
    }
  return out;
}

// Antipode from bending: (id (x) cap_group) . (cup_point (x) id).
template <typename R>
Tensor<R> antipode_of(const FrobeniusStructure<R>& point,
                      const FrobeniusStructure<R>& group) {
  if (point.object != group.object)
    throw ShapeError("antipode_of: structures live on different objects");
  const auto id1 = Tensor<R>::identity(point.object);
  return compose(tensor_product(cup_of(point), id1),
                 tensor_product(id1, cap_of(group)));
}

template <typename R>
struct StrongPair {
  FrobeniusStructure<R> point;
  FrobeniusStructure<R> group;
  Tensor<R> antipode;
};

template <typename R, FiniteGroupLike K>
StrongPair<R> strong_pair(const K& k, const IndexSet& object) {
  auto z = point_structure<R>(k, object);
  auto x = group_structure<R>(k, object);
  auto s = antipode_of(z, x);
  return StrongPair<R>{std::move(z), std::move(x), std::move(s)};
}

// The cup of the point structure doubled onto A (x) A, wire order
// (a1, a2, a1', a2'), used to transpose maps out of two wires.
template <typename R>
Tensor<R> doubled_cup(const FrobeniusStructure<R>& f) {
  return permute_codomain(tensor_product(cup_of(f), cup_of(f)),
                          {0, 2, 1, 3});
}

// The full strong-complementarity law set, with no precondition gate.
// Exposed separately so negative controls can ask which law breaks even
// when the inputs are not honest Frobenius structures.
template <typename R>
LawReport strong_complementarity_laws(const StrongPair<R>& p,
                                      double tol = 1e-9) {
  if (p.point.object != p.group.object)
    throw ShapeError("pair structures live on different objects");
  detail::check_law_cap(p.point.object);
  LawReport report;
  report.subject = p.point.object.name;
  const IndexSet& h = p.point.object;
  const auto id1 = Tensor<R>::identity(h);
  const auto& z = p.point;
  const auto& x = p.group;
  const auto& s = p.antipode;

  // Bialgebra equations.  The copy-both-then-multiply-pairwise composite
  // opens six wires; keep the big intermediates in separate statements so
  // at most two are alive at once.
  {
    const auto interleaved =
        permute_codomain(tensor_product(z.comult, z.comult), {0, 2, 1, 3});
    const auto rhs = compose(interleaved, tensor_product(x.mult, x.mult));
    detail::add_check(report, "bialgebra: comult of a product",
                      compose(x.mult, z.comult), rhs, tol);
  }
  detail::add_check(report, "bialgebra: counit of a product",
                    compose(x.mult, z.counit),
                    tensor_product(z.counit, z.counit), tol);
  detail::add_check(report, "bialgebra: comult of the unit",
                    compose(x.unit, z.comult),
                    tensor_product(x.unit, x.unit), tol);
  detail::add_check(report, "bialgebra: counit of the unit",
                    compose(x.unit, z.counit), Tensor<R>::scalar(R::one()),
                    tol);

  // Hopf law, both handednesses.
  {
    auto rhs = compose(z.counit, x.unit);
    detail::add_check(report, "hopf law (antipode right)",
                      compose(z.comult, tensor_product(id1, s), x.mult), rhs,
                      tol);
    detail::add_check(report, "hopf law (antipode left)",
                      compose(z.comult, tensor_product(s, id1), x.mult), rhs,
                      tol);
  }

  // The antipode equals all four of its cup/cap presentations.
  {
    const auto cup_z = cup_of(z);
    const auto cap_x = cap_of(x);
    const auto cup_x = cup_of(x);
    const auto cap_z = cap_of(z);
    detail::add_check(report, "antipode definition",
                      compose(tensor_product(cup_z, id1),
                              tensor_product(id1, cap_x)),
                      s, tol);
    detail::add_check(report, "antipode bent the other way",
                      compose(tensor_product(id1, cup_z),
                              tensor_product(cap_x, id1)),
                      s, tol);
    detail::add_check(report, "antipode with colours exchanged",
                      compose(tensor_product(cup_x, id1),
                              tensor_product(id1, cap_z)),
                      s, tol);
    detail::add_check(report, "antipode colours exchanged, bent the other way",
                      compose(tensor_product(id1, cup_x),
                              tensor_product(cap_z, id1)),
                      s, tol);
  }

  detail::add_check(report, "antipode unitary", compose(s, dagger(s)), id1,
                    tol);
  detail::add_check(report, "antipode self-adjoint", dagger(s), s, tol);
  detail::add_check(report, "antipode self-inverse", compose(s, s), id1, tol);

  // Transpose conditions making the group unit and product classical maps
  // for the point structure.
  {
    const auto cap_z = cap_of(z);
    const auto trivial_cup = Tensor<R>::scalar(R::one());
    detail::add_check(report, "group unit transposes through the point cup",
                      transpose_of(x.unit, trivial_cup, cap_z),
                      dagger(x.unit), tol);
    detail::add_check(report, "group product transposes through the point cup",
                      transpose_of(x.mult, doubled_cup(z), cap_z),
                      dagger(x.mult), tol);
  }
  return report;
}

template <typename R>
LawReport check_strong_complementarity(const StrongPair<R>& p,
                                       double tol = 1e-9) {
  auto zr = check_frobenius(p.point, tol);
  auto xr = check_frobenius(p.group, tol);
  if (!zr.all_pass() || !xr.all_pass()) {
    LawReport report;
    report.subject = p.point.object.name;
    report.checks.push_back(
        {"precondition: both structures satisfy their Frobenius laws",
         std::max(zr.max_residual(), xr.max_residual()), false});
    return report;
  }
  return strong_complementarity_laws(p, tol);
}

// --- classical states and maps ------------------------------------------------

template <typename R>
bool is_classical_state(const FrobeniusStructure<R>& f, const Tensor<R>& psi,
                        double tol = 1e-9) {
  if (!psi.domain().empty() || psi.codomain() != Wires{f.object})
    throw ShapeError("classical-state candidate has wrong shape: " +
                     psi.signature());
  const double limit = R::exact ? 0.0 : tol;
  if (max_abs_diff(compose(psi, f.comult), tensor_product(psi, psi)) > limit)
    return false;
  if (max_abs_diff(compose(psi, f.counit), Tensor<R>::scalar(R::one())) >
      limit)
    return false;
  return max_abs_diff(transpose_of(psi, Tensor<R>::scalar(R::one()), cap_of(f)),
                      dagger(psi)) <= limit;
}

template <typename R>
bool is_classical_map(const FrobeniusStructure<R>& fa,
                      const FrobeniusStructure<R>& fb, const Tensor<R>& f,
                      double tol = 1e-9) {
  if (f.domain() != Wires{fa.object} || f.codomain() != Wires{fb.object})
    throw ShapeError("classical-map candidate has wrong shape: " +
                     f.signature());
  const double limit = R::exact ? 0.0 : tol;
  if (max_abs_diff(compose(f, fb.comult),
                   compose(fa.comult, tensor_product(f, f))) > limit)
    return false;
  if (max_abs_diff(compose(f, fb.counit), fa.counit) > limit) return false;
  return max_abs_diff(transpose_of(f, cup_of(fa), cap_of(fb)), dagger(f)) <=
         limit;
}

// A homomorphism of complementary pairs: classical for the point
// structures, and intertwining product, unit and antipode.
template <typename R>
bool is_pair_homomorphism(const StrongPair<R>& a, const StrongPair<R>& b,
                          const Tensor<R>& f, double tol = 1e-9) {
  if (!is_classical_map(a.point, b.point, f, tol)) return false;
  const double limit = R::exact ? 0.0 : tol;
  if (max_abs_diff(compose(a.group.mult, f),
                   compose(tensor_product(f, f), b.group.mult)) > limit)
    return false;
  if (max_abs_diff(compose(a.group.unit, f), b.group.unit) > limit)
    return false;
  return max_abs_diff(compose(a.antipode, f), compose(f, b.antipode)) <=
         limit;
}

// --- character states ----------------------------------------------------------

// exp(2*pi*i*num/den) as a scalar of R, for a reduced fraction num/den.
// Throws SemiringError when R cannot express that phase.
template <typename R>
typename R::value_type root_as(std::int64_t num, std::int64_t den) {
  if constexpr (std::is_same_v<R, ComplexF>) {
    return root_of_unity(num, den);
  } else if constexpr (std::is_same_v<R, RealF>) {
    if (den == 1) return 1.0;
    if (den == 2) return -1.0;
    throw SemiringError("phase " + std::to_string(num) + "/" +
                        std::to_string(den) +
                        " of a full turn is not a real scalar");
  } else {
    if (den == 1) return BooleanRig::one();
    throw SemiringError("nontrivial phases do not exist over the Boolean rig");
  }
}

// chi(g) as a scalar of R; throws SemiringError when R cannot express it.
template <typename R>
typename R::value_type char_value_as(const AbelianGroup& g,
                                     const Character& chi,
                                     std::size_t element) {
  if constexpr (std::is_same_v<R, ComplexF>) {
    return char_value(g, chi, element);
  } else if constexpr (std::is_same_v<R, RealF>) {
    return real_char_value(g, chi, element);
  } else {
    for (std::size_t j = 0; j < g.rank(); ++j)
      if (chi.exponents[j] % g.orders()[j] != 0)
        throw SemiringError(
            "only the trivial character exists over the Boolean rig");
    return R::one();
  }
}

// The characters expressible over R, in dual-index order: all of them for
// the complex scalars, the real-valued ones over the reals, the trivial
// character alone over the Boolean rig.
template <typename R>
std::vector<Character> available_characters(const AbelianGroup& g) {
  std::vector<Character> out;
  if constexpr (std::is_same_v<R, ComplexF>) {
    for (std::size_t c = 0; c < g.size(); ++c) out.push_back(character_at(g, c));
  } else if constexpr (std::is_same_v<R, RealF>) {
    for (std::size_t c = 0; c < g.size(); ++c) {
      Character chi = character_at(g, c);
      if (char_is_real(g, chi)) out.push_back(std::move(chi));
    }
  } else {
    out.push_back(Character{std::vector<std::int64_t>(g.rank(), 0)});
  }
  return out;
}

// The (unnormalised) character state sum_g chi(g) |g>.
template <typename R>
Tensor<R> character_state(const AbelianGroup& g, const Character& chi,
                          const IndexSet& object) {
  if (object.size != g.size())
    throw ShapeError("object size does not match the group");
  Tensor<R> psi(Wires{}, Wires{object});
  for (std::size_t e = 0; e < g.size(); ++e)
    psi.at(e, 0) = char_value_as<R>(g, chi, e);
  return psi;
}

// Do the given states span the whole object?  Over the float semirings this
// is a rank computation (Gaussian elimination with partial pivoting).  The
// Boolean rig has no subtraction, so rank is not available; we use a
// separation proxy instead -- some state must distinguish every pair of
// basis indices.  This is deliberately the weaker, documented stand-in.
template <typename R>
bool has_enough_classical_states(const std::vector<Tensor<R>>& states,
                                 const IndexSet& object) {
  const std::size_t dim = object.size;
  if constexpr (R::exact) {
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = i + 1; j < dim; ++j) {
        bool separated = false;
        for (const auto& s : states)
          if (s.at(i, 0) != s.at(j, 0)) {
            separated = true;
            break;
          }
        if (!separated) return false;
      }
    return true;
  } else {
    if (states.size() < dim) return false;
    std::vector<std::vector<typename R::value_type>> rows;
    for (const auto& s : states) {
      if (s.codomain() != Wires{object} || !s.domain().empty())
        throw ShapeError("state has wrong shape: " + s.signature());
      std::vector<typename R::value_type> row(dim);
      for (std::size_t i = 0; i < dim; ++i) row[i] = s.at(i, 0);
      rows.push_back(std::move(row));
    }
    std::size_t rank = 0;
    for (std::size_t col = 0; col < dim && rank < rows.size(); ++col) {
      std::size_t pivot = rank;
      double best = std::abs(rows[rank][col]);
      for (std::size_t r = rank + 1; r < rows.size(); ++r)
        if (std::abs(rows[r][col]) > best) {
          best = std::abs(rows[r][col]);
          pivot = r;
        }
      if (best < 1e-12) continue;
      std::swap(rows[rank], rows[pivot]);
      for (std::size_t r = 0; r < rows.size(); ++r) {
        if (r == rank) continue;
        auto factor = rows[r][col] / rows[rank][col];
        for (std::size_t c2 = col; c2 < dim; ++c2)
          rows[r][c2] -= factor * rows[rank][c2];
      }
      ++rank;
    }
    return rank == dim;
  }
}

// Enumerates every Boolean vector over the group object and counts those
// that are classical states of the group structure (the Boolean
// characters).  Desk scale: |K| <= 16.
struct BooleanCensus {
  std::size_t candidates = 0;
  std::vector<std::vector<std::uint8_t>> characters;
};

template <FiniteGroupLike K>
BooleanCensus boolean_character_census(const K& k) {
  if (k.size() > 16)
    throw SizeLimitError("boolean character census capped at |K| <= 16");
  const IndexSet object{"K", k.size()};
  const auto x = group_structure<BooleanRig>(k, object);
  BooleanCensus census;
  const std::size_t total = std::size_t{1} << k.size();
  census.candidates = total;
  for (std::size_t mask = 0; mask < total; ++mask) {
    Tensor<BooleanRig> psi(Wires{}, Wires{object});
    for (std::size_t i = 0; i < k.size(); ++i)
      psi.at(i, 0) = (mask >> i) & 1 ? 1 : 0;
    if (is_classical_state(x, psi, 0.0)) {
      std::vector<std::uint8_t> bits(k.size());
      for (std::size_t i = 0; i < k.size(); ++i) bits[i] = (mask >> i) & 1;
      census.characters.push_back(std::move(bits));
    }
  }
  return census;
}

}  // namespace hsp
