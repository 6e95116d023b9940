/*
 * Hidden-subgroup instances, coherent oracles, and exact outcome
 * distributions.
 *
 * An instance fixes a finite group G, a normal subgroup H (the hidden
 * subgroup), and a hiding function f from G to N-bit labels that is
 * constant on each coset of H and distinct across cosets.  f always
 * factorises as f = s . q with q the canonical quotient map and s an
 * injective labelling of cosets; build_instance verifies this promise and
 * reports a witness pair when an explicit labelling violates it.
 *
 * The quantum subroutine is evaluated exactly, by two independent routes:
 *
 *   exact_distribution        contracts the subroutine as a tensor diagram:
 *                             prepare the normalised uniform superposition
 *                             with a zero label register, apply the oracle
 *                             tensor, then contract with a character effect
 *                             on the group wire and a basis effect on the
 *                             label wire.  Capped at |G| * 2^N <= 2^13.
 *   statevector_distribution  simulates the same subroutine on a flat state
 *                             vector, grouping the post-oracle state by
 *                             label and taking inner products with
 *                             character vectors.  Capped at |G| <= 2^20.
 *   theoretical_distribution  the closed form |H|^2/|G|^2 on the support
 *                             im(s) x Ann(H), built from the annihilator
 *                             and touching no tensors at all.
 *
 * Both computed routes keep only outcomes with probability above a fixed
 * support threshold and record the largest amplitude seen off the support,
 * so "zero elsewhere" is itself a checked claim.
 *
 * Sampling is counter-based (SplitMix64) by inverse CDF over the support in
 * (label, character) order; transcripts are reproducible from the seed
 * alone.
 *
 * The non-abelian extension measures the group register against isotypic
 * projectors built from a complete set of unitary irreducible
 * representations, reporting the exact probability next to the closed-form
 * prediction |H|^2 d^2 / |G|^2 and both candidate support conditions.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hsp/errors.hpp"
#include "hsp/frobenius.hpp"
#include "hsp/group.hpp"
#include "hsp/rng.hpp"
#include "hsp/semiring.hpp"
#include "hsp/tensor.hpp"

namespace hsp {

inline constexpr std::uint64_t kDiagramCap = 1ull << 13;      // |G| * 2^N
inline constexpr std::uint64_t kStateVectorCap = 1ull << 20;  // |G|
inline constexpr std::size_t kIsotypicCap = 128;              // |G|
// The copy-then-multiply cross-check of the oracle routes every column through
// a three-wire stage whose dense matrix holds (|G| * 2^N)^3 entries, so it is
// only affordable on small joint spaces.  256^3 complex entries is ~270 MB of
// transient memory; beyond that the oracle is still built and unitarity-checked,
// but the decomposition comparison is skipped and reported on the Oracle.
inline constexpr std::uint64_t kOracleCheckCap = 256;  // |G| * 2^N
inline constexpr double kSupportProbEps = 1e-12;

struct HspInstance {
  std::string name;
  AnyGroup group;
  Subgroup hidden;
  QuotientData quot;
  std::size_t label_bits = 0;
  std::vector<std::uint64_t> coset_label;  // s : coset index -> label
  std::vector<std::uint64_t> labels;       // f : element -> label (= s . q)

  std::uint64_t label_of(std::size_t element) const { return labels[element]; }
  std::uint64_t label_space() const { return std::uint64_t{1} << label_bits; }
  std::size_t coset_count() const { return quot.representative.size(); }
};

// Builds and verifies an instance.  With no explicit labelling, coset b
// gets label b (cosets are indexed by increasing canonical representative).
// An explicit labelling is a per-element table of |G| labels; it must be
// constant on cosets and injective across them, otherwise a PromiseError
// naming a witness pair is thrown.
HspInstance build_instance(
    AnyGroup group, const std::vector<std::size_t>& subgroup_generators,
    std::size_t label_bits,
    const std::optional<std::vector<std::uint64_t>>& explicit_labels =
        std::nullopt,
    std::string name = "");

// Wire objects, named consistently so tensors from different builders
// compose.
inline IndexSet group_object(const HspInstance& inst) {
  return IndexSet{"G", inst.group.size()};
}
inline IndexSet coset_object(const HspInstance& inst) {
  return IndexSet{"Q", inst.coset_count()};
}
inline IndexSet subgroup_object(const HspInstance& inst) {
  return IndexSet{"H", inst.hidden.size()};
}
inline IndexSet label_object(const HspInstance& inst) {
  if (inst.label_bits > 20)
    throw SizeLimitError("label register too wide to materialise as a wire");
  return IndexSet{"B", std::size_t{1} << inst.label_bits};
}

// The structural maps of the factorisation, as basis-function tensors.
template <typename R>
Tensor<R> quotient_map_tensor(const HspInstance& inst) {
  return function_tensor<R>(group_object(inst), coset_object(inst),
                            [&](std::size_t g) { return inst.quot.coset_of[g]; });
}

template <typename R>
Tensor<R> representative_tensor(const HspInstance& inst) {
  return function_tensor<R>(
      coset_object(inst), group_object(inst),
      [&](std::size_t b) { return inst.quot.representative[b]; });
}

template <typename R>
Tensor<R> inclusion_tensor(const HspInstance& inst) {
  return function_tensor<R>(
      subgroup_object(inst), group_object(inst),
      [&](std::size_t k) { return inst.hidden.elements[k]; });
}

template <typename R>
Tensor<R> label_map_tensor(const HspInstance& inst) {
  return function_tensor<R>(
      group_object(inst), label_object(inst),
      [&](std::size_t g) { return static_cast<std::size_t>(inst.labels[g]); });
}

// --- oracle ---------------------------------------------------------------------

template <typename R>
struct Oracle {
  IndexSet group_wire;
  IndexSet label_wire;
  Tensor<R> map;  // [G, B] -> [G, B]
  bool composite_checked = false;  // decomposition cross-check ran
};

// The coherent oracle |g, t> -> |g, f(g) xor t>, built twice: directly from
// that action, and as the composite copy-then-multiply diagram (copy the
// group register, push one branch through f, multiply into the label
// register with the bitwise-xor group structure).  The two constructions
// are asserted equal whenever the composite's intermediates fit in memory
// (see kOracleCheckCap); the result records whether the check ran.
template <typename R>
Oracle<R> build_oracle(const HspInstance& inst) {
  const IndexSet gobj = group_object(inst);
  const IndexSet bobj = label_object(inst);
  const std::size_t n = gobj.size;
  const std::size_t bn = bobj.size;
  const std::uint64_t joint = static_cast<std::uint64_t>(n) * bn;
  if (joint > kDiagramCap)
    throw SizeLimitError("oracle tensor exceeds the diagram-path cap");

  Tensor<R> direct(Wires{gobj, bobj}, Wires{gobj, bobj});
  for (std::size_t g = 0; g < n; ++g)
    for (std::size_t t = 0; t < bn; ++t) {
      const std::size_t image = static_cast<std::size_t>(inst.labels[g]) ^ t;
      direct.at(g * bn + image, g * bn + t) = R::one();
    }

  if (joint > kOracleCheckCap)
    return Oracle<R>{gobj, bobj, std::move(direct), false};

  const AbelianGroup xor_group(
      std::vector<std::int64_t>(inst.label_bits, 2));
  const auto copy_g = point_structure<R>(inst.group, gobj).comult;
  const auto mult_b = group_structure<R>(xor_group, bobj).mult;
  const auto idg = Tensor<R>::identity(gobj);
  const auto idb = Tensor<R>::identity(bobj);
  auto composite =
      compose(tensor_product(copy_g, idb),
              tensor_product(idg, tensor_product(label_map_tensor<R>(inst), idb)),
              tensor_product(idg, mult_b));
  if (!approx_equal(direct, composite, 1e-9))
    throw ConstructionError("oracle decomposition mismatch");
  return Oracle<R>{gobj, bobj, std::move(direct), true};
}

// --- distributions ---------------------------------------------------------------

struct OutcomeEntry {
  std::uint64_t label = 0;   // b
  std::size_t chi_index = 0; // dual-group index, or position in the irrep list
  Character chi;             // abelian rows; empty for irrep rows
  std::string chi_name;      // irrep rows
  std::complex<double> amplitude{0.0, 0.0};  // c_{b,chi} (abelian rows)
  double prob = 0.0;
  // Irrep rows only:
  std::size_t irrep_dim = 0;  // 0 marks an abelian row
  double closed_form = 0.0;   // |H|^2 d^2 / |G|^2 on the predicted support
  bool kernel_contains_subgroup = false;   // H inside ker(rho)
  bool character_sum_nonzero = false;      // sum over H of tr rho(h) != 0
};

struct OutcomeDistribution {
  std::string method;
  std::uint64_t label_space = 0;
  std::size_t character_count = 0;
  // Outcomes with prob > kSupportProbEps, sorted by (label, chi_index).
  // The isotypic (non-abelian) table keeps zero rows as well.
  std::vector<OutcomeEntry> entries;
  double total_mass = 0.0;
  double max_zero_residual = 0.0;  // largest |amplitude| seen off the support
  bool partial = false;  // semiring could not express every character
};

// Thrown when a semiring's character set cannot cover the dual group; the
// distribution over the expressible characters is attached.
class PartialDistributionError : public SemiringError {
 public:
  PartialDistributionError(const std::string& what, OutcomeDistribution d)
      : SemiringError(what), distribution(std::move(d)) {}
  OutcomeDistribution distribution;
};

// Closed form from the annihilator: |H|^2/|G|^2 exactly on im(s) x Ann(H).
OutcomeDistribution theoretical_distribution(const HspInstance& inst);

// Entrywise comparison over the union of two supports (an outcome missing
// from one side counts as probability zero there).
struct DistributionComparison {
  double max_prob_diff = 0.0;
  double max_amp_diff = 0.0;
  bool support_equal = true;
  double off_support_residual = 0.0;  // max residual either side recorded
};

DistributionComparison compare_distributions(const OutcomeDistribution& a,
                                             const OutcomeDistribution& b);

namespace detail {

// The expressible characters paired with their dual-group indices; throws
// PartialDistributionError later if not all of them exist.
template <typename R>
std::vector<std::pair<std::size_t, Character>> indexed_characters(
    const AbelianGroup& g) {
  std::vector<std::pair<std::size_t, Character>> out;
  for (Character& chi : available_characters<R>(g)) {
    const std::size_t index = character_index(g, chi);
    out.emplace_back(index, std::move(chi));
  }
  return out;
}

inline void finalize(OutcomeDistribution& dist) {
  std::sort(dist.entries.begin(), dist.entries.end(),
            [](const OutcomeEntry& a, const OutcomeEntry& b) {
              return a.label != b.label ? a.label < b.label
                                        : a.chi_index < b.chi_index;
            });
  dist.total_mass = 0.0;
  for (const auto& e : dist.entries) dist.total_mass += e.prob;
}

template <typename R>
[[noreturn]] void throw_partial(const AbelianGroup& g,
                                OutcomeDistribution dist) {
  dist.partial = true;
  throw PartialDistributionError(
      "the " + R::name() + " semiring expresses only " +
          std::to_string(dist.character_count) + " of the " +
          std::to_string(g.size()) +
          " characters of this group; the computed partial support is "
          "attached",
      std::move(dist));
}

}  // namespace detail

// Exact outcome distribution by full tensor contraction of the subroutine
// diagram.  Requires an abelian carrier and |G| * 2^N <= 2^13.
template <typename R>
OutcomeDistribution exact_distribution(const HspInstance& inst) {
  if constexpr (std::is_same_v<R, BooleanRig>) {
    throw SemiringError(
        "outcome probabilities are not defined over the Boolean rig");
  } else {
    const AbelianGroup& g = inst.group.abelian();
    const std::size_t n = g.size();
    if (inst.label_bits > 13 ||
        static_cast<std::uint64_t>(n) * (std::uint64_t{1} << inst.label_bits) >
            kDiagramCap)
      throw SizeLimitError("instance exceeds the diagram-path cap");
    const IndexSet gobj = group_object(inst);
    const IndexSet bobj = label_object(inst);
    const std::size_t bn = bobj.size;

    const auto oracle = build_oracle<R>(inst);
    const auto norm =
        typename R::value_type(1.0 / std::sqrt(static_cast<double>(n)));
    // (1/sqrt|G|) sum_g |g> (x) |0...0>
    Tensor<R> prep(Wires{}, Wires{gobj, bobj});
    for (std::size_t e = 0; e < n; ++e) prep.at(e * bn, 0) = norm;
    const auto post = compose(prep, oracle.map);

    const auto chars = detail::indexed_characters<R>(g);
    OutcomeDistribution dist;
    dist.method = "diagram";
    dist.label_space = inst.label_space();
    dist.character_count = chars.size();
    for (std::uint64_t b = 0; b < bn; ++b) {
      const auto label_effect =
          Tensor<R>::basis_effect(bobj, static_cast<std::size_t>(b));
      for (const auto& [index, chi] : chars) {
        const auto effect = tensor_product(
            tensor_product(Tensor<R>::scalar(norm),
                           dagger(character_state<R>(g, chi, gobj))),
            label_effect);
        const auto c = compose(post, effect).scalar_value();
        const auto amp = to_complex<R>(c);
        const double prob = std::norm(amp);
        if (prob > kSupportProbEps) {
          dist.entries.push_back(OutcomeEntry{b, index, chi, "", amp, prob});
        } else {
          dist.max_zero_residual =
              std::max(dist.max_zero_residual, std::abs(amp));
        }
      }
    }
    detail::finalize(dist);
    if (chars.size() < n) detail::throw_partial<R>(g, std::move(dist));
    return dist;
  }
}

// Exact outcome distribution by direct state-vector simulation: the
// post-oracle state sum_g |g>|f(g)> / sqrt|G| is grouped by label and each
// branch is paired with each character effect.  Independent of the tensor
// core.  Requires an abelian carrier and |G| <= 2^20.
template <typename R>
OutcomeDistribution statevector_distribution(const HspInstance& inst) {
  if constexpr (std::is_same_v<R, BooleanRig>) {
    throw SemiringError(
        "outcome probabilities are not defined over the Boolean rig");
  } else {
    const AbelianGroup& g = inst.group.abelian();
    const std::size_t n = g.size();
    if (n > kStateVectorCap)
      throw SizeLimitError("instance exceeds the state-vector cap");

    std::map<std::uint64_t, std::vector<std::size_t>> branches;
    for (std::size_t e = 0; e < n; ++e) branches[inst.labels[e]].push_back(e);

    // chi(g) = prod_j root(p_j m_j / n_j); tabulate each factor's roots so
    // the inner loop is pure lookups and multiplies.
    const auto chars = detail::indexed_characters<R>(g);
    const std::size_t rank = g.rank();
    std::vector<std::vector<std::int64_t>> residue_of(n);
    for (std::size_t e = 0; e < n; ++e) residue_of[e] = g.residues(e);
    // factor_roots[c][j][m] = chi_c's value on residue m of factor j.
    std::vector<std::vector<std::vector<typename R::value_type>>> factor_roots(
        chars.size());
    for (std::size_t c = 0; c < chars.size(); ++c) {
      factor_roots[c].resize(rank);
      for (std::size_t j = 0; j < rank; ++j) {
        const std::int64_t nj = g.orders()[j];
        const std::int64_t pj = chars[c].second.exponents[j];
        factor_roots[c][j].resize(static_cast<std::size_t>(nj));
        for (std::int64_t m = 0; m < nj; ++m) {
          std::int64_t num = (pj * m) % nj;
          std::int64_t den = nj;
          const std::int64_t d = std::gcd(num == 0 ? nj : num, nj);
          num /= d;
          den /= d;
          factor_roots[c][j][static_cast<std::size_t>(m)] =
              root_as<R>(num, den);
        }
      }
    }

    OutcomeDistribution dist;
    dist.method = "state-vector";
    dist.label_space = inst.label_space();
    dist.character_count = chars.size();
    const double inv_n = 1.0 / static_cast<double>(n);
    for (const auto& [label, members] : branches) {
      for (std::size_t c = 0; c < chars.size(); ++c) {
        auto acc = R::zero();
        for (std::size_t e : members) {
          auto v = R::one();
          for (std::size_t j = 0; j < rank; ++j)
            v = R::mul(v, factor_roots[c][j][static_cast<std::size_t>(
                              residue_of[e][j])]);
          acc = R::add(acc, R::involve(v));
        }
        const auto amp = to_complex<R>(acc) * inv_n;
        const double prob = std::norm(amp);
        if (prob > kSupportProbEps) {
          dist.entries.push_back(OutcomeEntry{label, chars[c].first,
                                              chars[c].second, "", amp, prob});
        } else {
          dist.max_zero_residual =
              std::max(dist.max_zero_residual, std::abs(amp));
        }
      }
    }
    detail::finalize(dist);
    if (chars.size() < n) detail::throw_partial<R>(g, std::move(dist));
    return dist;
  }
}

// The widest exact route that fits: the diagram contraction when the joint
// register is small enough, the state-vector simulation otherwise.
template <typename R>
OutcomeDistribution computed_distribution(const HspInstance& inst) {
  const std::uint64_t joint =
      inst.label_bits > 13
          ? kDiagramCap + 1
          : inst.group.size() * (std::uint64_t{1} << inst.label_bits);
  if (joint <= kDiagramCap) return exact_distribution<R>(inst);
  return statevector_distribution<R>(inst);
}

// The subroutine scalar with unnormalised conventions (bare superposition
// in, bare character effect out): sum of chi(g)-dagger over the fibre of
// the label.  On the support its magnitude is exactly |H|.
template <typename R>
typename R::value_type unnormalized_outcome_scalar(const HspInstance& inst,
                                                   std::uint64_t label,
                                                   const Character& chi) {
  const AbelianGroup& g = inst.group.abelian();
  auto acc = R::zero();
  for (std::size_t e = 0; e < g.size(); ++e)
    if (inst.labels[e] == label)
      acc = R::add(acc, R::involve(char_value_as<R>(g, chi, e)));
  return acc;
}

// --- sampling --------------------------------------------------------------------

struct SampleRecord {
  std::uint64_t label = 0;
  std::size_t chi_index = 0;
  Character chi;
};

// Inverse-CDF sampler over the support, in entry order.  Prefix sums are
// built once; each draw is a binary search.  Draw k of a transcript uses
// the counter value first_index + k, so transcripts can be extended
// incrementally without replaying.  The distribution must outlive the
// sampler.
class DistributionSampler {
 public:
  explicit DistributionSampler(const OutcomeDistribution& dist);
  SampleRecord draw(std::uint64_t seed, std::size_t index) const;

 private:
  const OutcomeDistribution* dist_;
  std::vector<double> cumulative_;
};

std::vector<SampleRecord> draw_samples(const OutcomeDistribution& dist,
                                       std::uint64_t seed, std::size_t count,
                                       std::size_t first_index = 0);

template <typename R>
std::vector<SampleRecord> sample(const HspInstance& inst, std::uint64_t seed,
                                 std::size_t count) {
  return draw_samples(computed_distribution<R>(inst), seed, count);
}

// --- non-abelian extension ---------------------------------------------------------

// Measures the group register of the post-oracle state against the isotypic
// projectors P_rho = (d/|G|) sum_g conj(tr rho(g)) L_g, one outcome row per
// (coset label, irrep) including zero rows.  `irreps` must be a complete
// set (sum of squared dimensions = |G|); validate tables beforehand with
// validate_irrep.  The closed-form column carries |H|^2 d^2/|G|^2 on the
// rows whose irrep restricts to H with a trivial component, and both
// candidate support conditions are reported per row.
OutcomeDistribution isotypic_distribution(const HspInstance& inst,
                                          const std::vector<Irrep>& irreps,
                                          double tol = 1e-9);

// The characters of an abelian carrier packaged as 1x1 irreps, for feeding
// abelian instances through the isotypic path.
std::vector<Irrep> character_irreps(const AbelianGroup& g);

}  // namespace hsp
