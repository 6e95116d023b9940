/*
 * Simulation engine: instance construction and promise checking, the
 * coherent oracle, both evaluation routes for the outcome distribution
 * against the closed form, the sampler, and the isotypic route for
 * non-abelian carriers.
 */
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "catalog.hpp"
#include "hsp/engine.hpp"
#include "hsp/errors.hpp"
#include "hsp/group.hpp"
#include "hsp/json_io.hpp"
#include "hsp/postprocess.hpp"
#include "hsp/semiring.hpp"

using namespace hsp;

namespace {

using Cx = std::complex<double>;

std::string data_path(const std::string& file) {
  return std::string(TEST_DATA_DIR) + "/" + file;
}

// Entry lookup by (label, chi_index); missing means probability zero.
double prob_at(const OutcomeDistribution& d, std::uint64_t label,
               std::size_t chi_index) {
  for (const auto& e : d.entries)
    if (e.label == label && e.chi_index == chi_index) return e.prob;
  return 0.0;
}

}  // namespace

TEST_CASE("instance construction wires labels through the quotient") {
  HspInstance inst = simon_instance(2, 0b11);
  CHECK(inst.group.size() == 4);
  // z = 11 is the element with residues (1,1), index 3.
  CHECK(inst.hidden.elements == std::vector<std::size_t>{0, 3});
  CHECK(inst.coset_count() == 2);
  CHECK(inst.label_bits == 2);  // Simon keeps the full n-bit label space
  // f is constant exactly on cosets.
  CHECK(inst.label_of(0) == inst.label_of(3));
  CHECK(inst.label_of(1) == inst.label_of(2));
  CHECK(inst.label_of(0) != inst.label_of(1));

  HspInstance z6 = build_instance(AbelianGroup({6}), {2}, 1);
  CHECK(z6.hidden.elements == std::vector<std::size_t>{0, 2, 4});
  CHECK(z6.coset_count() == 2);
  CHECK(z6.labels == std::vector<std::uint64_t>{0, 1, 0, 1, 0, 1});
  // Default name reflects the shape.
  CHECK(z6.name == "g6-h3");
}

TEST_CASE("instance construction rejects broken labellings") {
  AbelianGroup g({2, 2});
  std::vector<std::size_t> gens{g.index_of({1, 1})};
  // Not constant on the coset {(0,0),(1,1)}.
  CHECK_THROWS_AS(
      build_instance(g, gens, 2,
                     std::vector<std::uint64_t>{0, 1, 2, 1}),
      PromiseError);
  // Constant on cosets but not injective across them.
  CHECK_THROWS_AS(
      build_instance(g, gens, 2,
                     std::vector<std::uint64_t>{0, 0, 0, 0}),
      PromiseError);
  // A valid explicit labelling is accepted verbatim.
  HspInstance ok = build_instance(g, gens, 2,
                                  std::vector<std::uint64_t>{3, 1, 1, 3});
  CHECK(ok.labels == std::vector<std::uint64_t>{3, 1, 1, 3});
  // Label space must cover the cosets.
  CHECK_THROWS_AS(build_instance(AbelianGroup({6}), {}, 2),
                  ConstructionError);
  CHECK_THROWS_AS(build_instance(g, gens, 64), ConstructionError);
}

TEST_CASE("the oracle is the permutation (g, t) -> (g, f(g) xor t)") {
  HspInstance inst = simon_instance(2, 0b11);
  Oracle<ComplexF> oracle = build_oracle<ComplexF>(inst);
  const std::size_t n = inst.group.size();
  const std::uint64_t bn = inst.label_space();
  // Independent reference: walk every (g, t) pair.
  for (std::size_t g = 0; g < n; ++g)
    for (std::uint64_t t = 0; t < bn; ++t) {
      const std::size_t dom = g * bn + t;
      const std::size_t cod = g * bn + (inst.label_of(g) ^ t);
      for (std::size_t c = 0; c < n * bn; ++c)
        CHECK(oracle.map.at(c, dom) ==
              (c == cod ? ComplexF::one() : ComplexF::zero()));
    }
}

TEST_CASE("the oracle is unitary on every catalog instance") {
  for (const auto& entry : catalog::distribution_catalog()) {
    INFO("instance: " << entry.title);
    Oracle<ComplexF> oracle = build_oracle<ComplexF>(entry.inst);
    auto udag_u = compose(oracle.map, dagger(oracle.map));
    CHECK(max_abs_diff(udag_u, Tensor<ComplexF>::identity(
                                   Wires{oracle.group_wire, oracle.label_wire})) ==
          0.0);
  }
}

TEST_CASE("oracle construction respects the diagram cap") {
  CHECK_THROWS_AS(build_oracle<ComplexF>(simon_instance(7, 0b1010101)),
                  SizeLimitError);
}

TEST_CASE("the decomposition cross-check runs exactly when the joint space is small") {
  for (const auto& entry : catalog::distribution_catalog()) {
    INFO("instance: " << entry.title);
    CHECK(build_oracle<ComplexF>(entry.inst).composite_checked);
  }
  // A 32x32 joint space is past the cross-check cap but well inside the
  // diagram cap: the oracle must still build (this used to exhaust memory).
  Oracle<ComplexF> big = build_oracle<ComplexF>(simon_instance(5, 0b10110));
  CHECK_FALSE(big.composite_checked);
  auto udag_u = compose(big.map, dagger(big.map));
  CHECK(max_abs_diff(udag_u, Tensor<ComplexF>::identity(
                                 Wires{big.group_wire, big.label_wire})) == 0.0);
}

TEST_CASE("frozen outcome distribution for the smallest Simon instance") {
  HspInstance inst = simon_instance(2, 0b11);
  OutcomeDistribution dist = exact_distribution<ComplexF>(inst);
  CHECK(dist.method == "diagram");
  CHECK(dist.total_mass == doctest::Approx(1.0).epsilon(1e-12));
  REQUIRE(dist.entries.size() == 4);
  // The annihilator of {00, 11} is {chi_00, chi_11}, dual indices 0 and 3.
  // Entries are sorted by (label, chi_index).
  const std::vector<std::pair<std::uint64_t, std::size_t>> expect_keys = {
      {0, 0}, {0, 3}, {1, 0}, {1, 3}};
  const std::vector<Cx> expect_amp = {
      {0.5, 0.0}, {0.5, 0.0}, {0.5, 0.0}, {-0.5, 0.0}};
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(dist.entries[i].label == expect_keys[i].first);
    CHECK(dist.entries[i].chi_index == expect_keys[i].second);
    CHECK(std::abs(dist.entries[i].amplitude - expect_amp[i]) < 1e-12);
    CHECK(dist.entries[i].prob == doctest::Approx(0.25).epsilon(1e-12));
  }
  CHECK(dist.max_zero_residual <= 1e-12);
}

TEST_CASE("hiding the whole group or nothing gives the edge distributions") {
  // H = G: a single coset; the only outcome is (label 0, trivial chi).
  HspInstance all = build_instance(AbelianGroup({6}), {1}, 0);
  OutcomeDistribution d_all = exact_distribution<ComplexF>(all);
  REQUIRE(d_all.entries.size() == 1);
  CHECK(d_all.entries[0].prob == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(d_all.entries[0].chi_index == 0);

  // H = {0}: uniform over all |G| * |G| / |G|^2... every (label, chi) pair
  // at 1/|G|^2.
  HspInstance none = build_instance(AbelianGroup({6}), {}, 3);
  OutcomeDistribution d_none = exact_distribution<ComplexF>(none);
  CHECK(d_none.entries.size() == 36);
  for (const auto& e : d_none.entries)
    CHECK(e.prob == doctest::Approx(1.0 / 36.0).epsilon(1e-9));
  CHECK(d_none.total_mass == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("both routes match the closed form on every catalog instance") {
  for (const auto& entry : catalog::distribution_catalog()) {
    INFO("instance: " << entry.title);
    const OutcomeDistribution theory = theoretical_distribution(entry.inst);
    const OutcomeDistribution diagram = exact_distribution<ComplexF>(entry.inst);
    const OutcomeDistribution sv = statevector_distribution<ComplexF>(entry.inst);
    CHECK(theory.method == "closed-form");
    CHECK(sv.method == "state-vector");

    DistributionComparison dt = compare_distributions(diagram, theory);
    CHECK(dt.support_equal);
    CHECK(dt.max_prob_diff <= 1e-9);
    CHECK(dt.max_amp_diff <= 1e-9);

    DistributionComparison ds = compare_distributions(diagram, sv);
    CHECK(ds.support_equal);
    CHECK(ds.max_prob_diff <= 1e-9);
    CHECK(ds.max_amp_diff <= 1e-9);
    CHECK(ds.off_support_residual <= 1e-9);

    CHECK(diagram.total_mass == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(sv.total_mass == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(theory.total_mass == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("the closed form is |H|^2/|G|^2 exactly on labels x annihilator") {
  HspInstance inst = build_instance(AbelianGroup({12}), {3}, 2);
  const AbelianGroup& g = inst.group.abelian();
  OutcomeDistribution theory = theoretical_distribution(inst);
  auto ann = annihilator(g, inst.hidden);
  REQUIRE(ann.size() == 3);
  const double p = 16.0 / 144.0;  // |H|^2 / |G|^2
  CHECK(theory.entries.size() == inst.coset_count() * ann.size());
  for (const auto& e : theory.entries) CHECK(e.prob == doctest::Approx(p));
  // Sanity: each entry's chi really annihilates H.
  for (const auto& e : theory.entries)
    for (std::size_t h : inst.hidden.elements)
      CHECK(char_value(g, e.chi, h) == Cx(1.0, 0.0));
}

TEST_CASE("the unnormalised outcome scalar counts the hidden subgroup") {
  HspInstance inst = build_instance(AbelianGroup({6}), {2}, 1);
  const AbelianGroup& g = inst.group.abelian();
  for (std::size_t c = 0; c < g.size(); ++c) {
    Character chi = character_at(g, c);
    bool in_ann = true;
    for (std::size_t h : inst.hidden.elements)
      in_ann = in_ann && char_value(g, chi, h) == Cx(1.0, 0.0);
    for (std::uint64_t label = 0; label < 2; ++label) {
      Cx s = unnormalized_outcome_scalar<ComplexF>(inst, label, chi);
      if (in_ann)
        CHECK(std::abs(s) == doctest::Approx(3.0).epsilon(1e-12));
      else
        CHECK(std::abs(s) < 1e-12);
    }
  }
}

TEST_CASE("the automatic route switch keeps answers consistent") {
  // 128 * 128 joint exceeds the diagram cap, so this goes state-vector.
  HspInstance inst = simon_instance(7, 0b1010101);
  CHECK_THROWS_AS(exact_distribution<ComplexF>(inst), SizeLimitError);
  OutcomeDistribution dist = computed_distribution<ComplexF>(inst);
  CHECK(dist.method == "state-vector");
  DistributionComparison c =
      compare_distributions(dist, theoretical_distribution(inst));
  CHECK(c.support_equal);
  CHECK(c.max_prob_diff <= 1e-9);
}

TEST_CASE("real semiring: full answer when all characters are real") {
  HspInstance inst = simon_instance(3, 0b110);
  OutcomeDistribution real_dist = computed_distribution<RealF>(inst);
  OutcomeDistribution cplx_dist = computed_distribution<ComplexF>(inst);
  DistributionComparison c = compare_distributions(real_dist, cplx_dist);
  CHECK(c.support_equal);
  CHECK(c.max_prob_diff <= 1e-9);
  CHECK(c.max_amp_diff <= 1e-9);
  CHECK_FALSE(real_dist.partial);
}

TEST_CASE("real semiring: partial distribution with the missing mass") {
  HspInstance inst = build_instance(AbelianGroup({3}), {}, 2);
  bool threw = false;
  try {
    computed_distribution<RealF>(inst);
  } catch (const PartialDistributionError& e) {
    threw = true;
    CHECK(e.distribution.partial);
    CHECK(e.distribution.character_count == 1);  // only the trivial one
    // Expressible part: 3 labels x 1 chi at 1/9 each.
    CHECK(e.distribution.entries.size() == 3);
    CHECK(e.distribution.total_mass == doctest::Approx(1.0 / 3.0));
  }
  CHECK(threw);
}

TEST_CASE("boolean semiring cannot produce a distribution") {
  CHECK_THROWS_AS(computed_distribution<BooleanRig>(simon_instance(2, 0b11)),
                  SemiringError);
}

TEST_CASE("sampling is deterministic and incremental") {
  OutcomeDistribution dist =
      exact_distribution<ComplexF>(simon_instance(3, 0b101));
  auto a = draw_samples(dist, 42, 10);
  auto b = draw_samples(dist, 42, 10);
  REQUIRE(a.size() == 10);
  for (std::size_t i = 0; i < 10; ++i) {
    CHECK(a[i].label == b[i].label);
    CHECK(a[i].chi_index == b[i].chi_index);
  }
  // Extending a transcript = drawing the tail with first_index offset.
  auto head = draw_samples(dist, 42, 4);
  auto tail = draw_samples(dist, 42, 6, 4);
  for (std::size_t i = 0; i < 4; ++i)
    CHECK(head[i].chi_index == a[i].chi_index);
  for (std::size_t i = 0; i < 6; ++i)
    CHECK(tail[i].chi_index == a[4 + i].chi_index);
  // A different seed gives a different transcript (overwhelmingly).
  auto c = draw_samples(dist, 43, 10);
  bool any_diff = false;
  for (std::size_t i = 0; i < 10; ++i)
    any_diff = any_diff || c[i].label != a[i].label ||
               c[i].chi_index != a[i].chi_index;
  CHECK(any_diff);
}

TEST_CASE("samples land on the support with roughly the right frequency") {
  OutcomeDistribution dist =
      exact_distribution<ComplexF>(simon_instance(2, 0b11));
  DistributionSampler sampler(dist);
  std::map<std::pair<std::uint64_t, std::size_t>, int> counts;
  const int trials = 4000;
  for (int i = 0; i < trials; ++i) {
    SampleRecord r = sampler.draw(7, static_cast<std::size_t>(i));
    CHECK(prob_at(dist, r.label, r.chi_index) > 0.0);
    ++counts[{r.label, r.chi_index}];
  }
  REQUIRE(counts.size() == 4);
  for (const auto& [key, n] : counts)
    CHECK(std::abs(n / static_cast<double>(trials) - 0.25) < 0.05);
}

TEST_CASE("the sampler rejects empty distributions") {
  OutcomeDistribution empty;
  CHECK_THROWS_AS(DistributionSampler{empty}, ConstructionError);
}

TEST_CASE("isotypic route: S3 with the alternating subgroup hidden") {
  LoadedCayley s3 = load_cayley_file(data_path("s3.json"));
  REQUIRE(s3.irreps.size() == 3);
  for (const auto& rho : s3.irreps)
    CHECK(validate_irrep(s3.group, rho, 1e-9).all_pass());

  HspInstance inst = build_instance(s3.group, {4}, 1);
  CHECK(inst.hidden.size() == 3);
  OutcomeDistribution dist = isotypic_distribution(inst, s3.irreps);
  CHECK(dist.method == "isotypic");
  CHECK(dist.total_mass == doctest::Approx(1.0).epsilon(1e-9));
  // Zero rows are kept: 2 labels x 3 irreps.
  REQUIRE(dist.entries.size() == 6);
  for (const auto& e : dist.entries) {
    INFO("label " << e.label << " irrep " << e.chi_name);
    const bool onedim = e.irrep_dim == 1;
    // Trivial and sign both restrict trivially to A3: probability 1/4.
    CHECK(e.prob == doctest::Approx(onedim ? 0.25 : 0.0).epsilon(1e-9));
    CHECK(e.kernel_contains_subgroup == onedim);
    CHECK(e.character_sum_nonzero == onedim);
    if (onedim) CHECK(e.closed_form == doctest::Approx(0.25).epsilon(1e-12));
  }
}

TEST_CASE("isotypic route: trivial hidden subgroup spreads by dimension") {
  LoadedCayley s3 = load_cayley_file(data_path("s3.json"));
  HspInstance inst = build_instance(s3.group, {}, 3);
  OutcomeDistribution dist = isotypic_distribution(inst, s3.irreps);
  CHECK(dist.total_mass == doctest::Approx(1.0).epsilon(1e-9));
  // Every irrep contains the trivial subgroup in its kernel; each of the
  // 6 singleton cosets carries d^2/36.
  for (const auto& e : dist.entries) {
    const double expect = static_cast<double>(e.irrep_dim * e.irrep_dim) / 36.0;
    CHECK(e.prob == doctest::Approx(expect).epsilon(1e-9));
    CHECK(e.kernel_contains_subgroup);
  }
}

TEST_CASE("isotypic route agrees with the abelian engine via 1x1 irreps") {
  HspInstance inst = build_instance(AbelianGroup({6}), {2}, 1);
  OutcomeDistribution exact = exact_distribution<ComplexF>(inst);
  OutcomeDistribution iso =
      isotypic_distribution(inst, character_irreps(inst.group.abelian()));
  CHECK(iso.total_mass == doctest::Approx(1.0).epsilon(1e-9));
  std::size_t positive = 0;
  for (const auto& e : iso.entries) {
    if (e.prob > kSupportProbEps) {
      ++positive;
      CHECK(e.prob ==
            doctest::Approx(prob_at(exact, e.label, e.chi_index)).epsilon(1e-9));
    } else {
      CHECK(prob_at(exact, e.label, e.chi_index) == 0.0);
    }
  }
  CHECK(positive == exact.entries.size());
}

TEST_CASE("isotypic route demands a complete irrep set") {
  LoadedCayley s3 = load_cayley_file(data_path("s3.json"));
  HspInstance inst = build_instance(s3.group, {4}, 1);
  std::vector<Irrep> incomplete = {s3.irreps[0], s3.irreps[1]};
  CHECK_THROWS_AS(isotypic_distribution(inst, incomplete), ConstructionError);
  CHECK_THROWS_AS(isotypic_distribution(inst, {}), ConstructionError);
}

TEST_CASE("isotypic route is capped") {
  AbelianGroup big(std::vector<std::int64_t>(8, 2));  // 256 > 128
  HspInstance inst = build_instance(big, {}, 8);
  CHECK_THROWS_AS(isotypic_distribution(inst, character_irreps(big)),
                  SizeLimitError);
}

TEST_CASE("remaining cayley data files validate and pass the laws") {
  for (const char* file : {"d4.json", "q8.json"}) {
    INFO("file: " << file);
    LoadedCayley data = load_cayley_file(data_path(file));
    CHECK(data.group.size() == 8);
    std::size_t dimsq = 0;
    for (const auto& rho : data.irreps) {
      CHECK(validate_irrep(data.group, rho, 1e-9).all_pass());
      dimsq += rho.dim * rho.dim;
    }
    CHECK(dimsq == data.group.size());
    // Q8 and D4 share a character table but are different groups; both
    // feed the isotypic route with mass 1.
    HspInstance inst = build_instance(data.group, {data.group.size() > 0 ? 1u : 0u}, 3);
    OutcomeDistribution dist = isotypic_distribution(inst, data.irreps);
    CHECK(dist.total_mass == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("label object width is capped") {
  HspInstance inst = build_instance(AbelianGroup({2}), {}, 21);
  CHECK_THROWS_AS(label_object(inst), SizeLimitError);
  CHECK_THROWS_AS(build_oracle<ComplexF>(inst), SizeLimitError);
}
