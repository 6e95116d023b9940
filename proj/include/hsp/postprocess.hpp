/*
 * Classical post-processing: reconstructing the hidden subgroup from
 * sampled characters.
 *
 * Every sampled character chi annihilates H, so each sample is a linear
 * congruence constraint sum_j p_j m_j / n_j = 0 (mod 1) on the elements m
 * of H.  SamplerState accumulates samples and tracks the subgroup of the
 * dual group they generate; once that dual subgroup stops growing for a
 * stability window, the candidate H is the set of elements annihilated by
 * every sample (a brute-force double annihilator -- desk scale by design).
 *
 * The GF(2) specialisation for Simon's problem keeps sampled exponent
 * vectors as machine words in reduced row-echelon form and reads the
 * hidden string off the one-dimensional kernel as soon as the rank reaches
 * N-1.
 *
 * dlog_instance and order_instance package the two standard number-theory
 * reductions as instances over explicit-label hiding functions, together
 * with extractors that read the answer back off a recovered subgroup.
 */
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hsp/engine.hpp"
#include "hsp/errors.hpp"
#include "hsp/group.hpp"
#include "hsp/rng.hpp"

namespace hsp {

class SamplerState {
 public:
  explicit SamplerState(AbelianGroup group);

  // Supplying the true annihilator arms the promise-violation flag; a
  // sample outside it marks the run as inconsistent (it should be
  // impossible for a correct oracle).
  void set_expected_annihilator(const std::vector<Character>& ann);

  void accumulate(const Character& chi);

  std::size_t sample_count() const { return sampled_.size(); }
  std::size_t dual_subgroup_size() const { return closure_elems_.size(); }
  // Consecutive accumulations that did not grow the dual subgroup.
  std::size_t stable_for() const { return stable_; }
  bool promise_violation() const { return violation_; }
  const std::vector<Character>& sampled() const { return sampled_; }

 private:
  AbelianGroup group_;
  AbelianGroup dual_;  // same orders; character index = dual element index
  std::vector<char> in_closure_;
  std::vector<std::size_t> closure_elems_;
  std::vector<Character> sampled_;
  std::size_t stable_ = 0;
  bool violation_ = false;
  std::vector<char> allowed_;  // empty until armed
};

// The elements annihilated by every sampled character; with enough samples
// this is exactly H, and it always contains H.
Subgroup recover_subgroup(const AbelianGroup& g,
                          const std::vector<Character>& sampled);

struct TranscriptRecord {
  std::size_t index = 0;
  std::uint64_t label = 0;  // b
  Character chi;
  std::size_t dual_subgroup_size = 0;
  std::size_t stable_for = 0;
};

struct RecoveryResult {
  Subgroup recovered;
  std::vector<TranscriptRecord> transcript;
  bool cap_reached = false;
  bool promise_violation = false;
};

inline std::size_t default_sample_cap(std::size_t group_size) {
  std::size_t bits = 0;
  while ((std::size_t{1} << bits) < group_size) ++bits;
  return 20 + 4 * bits;
}

// The sampling loop on an already-computed distribution, so repeated
// seeded trials on one instance pay for the distribution once.  Pass the
// precomputed annihilator of `hidden` to skip recomputing it per trial.
RecoveryResult recover_from_distribution(
    const OutcomeDistribution& dist, const AbelianGroup& g,
    const Subgroup& hidden, std::uint64_t seed, std::size_t stability = 10,
    std::size_t cap = 0,
    const std::vector<Character>* expected_annihilator = nullptr);

// Samples the instance until the generated dual subgroup is unchanged for
// `stability` consecutive samples (or the cap is hit; the result is still
// returned, flagged).  cap = 0 selects 20 + 4*log2|G|.
template <typename R>
RecoveryResult run_until_stable(const HspInstance& inst, std::uint64_t seed,
                                std::size_t stability = 10,
                                std::size_t cap = 0) {
  return recover_from_distribution(computed_distribution<R>(inst),
                                   inst.group.abelian(), inst.hidden, seed,
                                   stability, cap);
}

// --- Simon's problem over GF(2) ------------------------------------------------

// Sampled exponent vectors as machine words (component j at bit j), kept in
// reduced row-echelon form.
class SimonSystem {
 public:
  explicit SimonSystem(std::size_t n);

  // Reduces v against the basis; returns true when it was independent and
  // grew the rank.  Throws PromiseError when the rank reaches n (no
  // nonzero kernel vector is left).
  bool add(std::uint64_t v);

  std::size_t rank() const { return rows_.size(); }
  std::size_t width() const { return n_; }
  // Defined once rank() == n-1: the unique nonzero z with z . row = 0 for
  // every sampled row.
  std::uint64_t kernel_vector() const;

 private:
  std::size_t n_;
  std::vector<std::uint64_t> rows_;  // each with a distinct leading bit
};

// Draws words from sample_source until the kernel is pinned down, then
// returns the hidden string.  Throws PromiseError if the source produces n
// independent vectors (promise violated) or the budget (default 10n + 100)
// runs out first.  samples_used reports the number of draws on success.
std::uint64_t simon_solve(std::size_t n,
                          const std::function<std::uint64_t()>& sample_source,
                          std::size_t budget = 0,
                          std::size_t* samples_used = nullptr);

// Exponent vector of a character over Z_2^rank as bits (component j at bit
// j); throws ConstructionError unless every order is 2.
std::uint64_t character_bits(const AbelianGroup& g, const Character& chi);

// Element index of the bit-vector z inside Z_2^rank.
std::size_t element_from_bits(const AbelianGroup& g, std::uint64_t z);
std::uint64_t bits_from_element(const AbelianGroup& g, std::size_t e);

// Draw `index` of a reproducible stream of uniform words orthogonal to z
// (v . z = 0 over GF(2)).  This is exactly the sampling distribution of the
// subroutine for G = Z_2^n, H = {0, z}; it stands in for the simulator when
// n is too large to materialise.
std::uint64_t annihilator_sample(std::uint64_t z, std::size_t n,
                                 std::uint64_t seed, std::size_t index);

// The Simon instance: G = Z_2^n, H = {0, z}, default coset labelling.
HspInstance simon_instance(std::size_t n, std::uint64_t z);

// End to end on the exact engine: sample characters from the instance's
// distribution and feed their exponent vectors to simon_solve.
template <typename R>
std::uint64_t simon_solve_instance(const HspInstance& inst, std::uint64_t seed,
                                   std::size_t* samples_used = nullptr) {
  const AbelianGroup& g = inst.group.abelian();
  const auto dist = computed_distribution<R>(inst);
  const DistributionSampler sampler(dist);
  std::size_t counter = 0;
  auto source = [&]() {
    return character_bits(g, sampler.draw(seed, counter++).chi);
  };
  return simon_solve(g.rank(), source, 0, samples_used);
}

// --- number-theory adapters -----------------------------------------------------

// Discrete logarithm: find b with gen^b = target (mod p).  The instance
// hides H = <(b, 1)> inside Z_{p-1} x Z_{p-1} via f(x, y) = gen^x *
// target^(-y) mod p, with the residue value as the label.
struct DlogInstance {
  HspInstance instance;
  std::int64_t p = 0;
  std::int64_t generator = 0;
  std::int64_t target = 0;
  std::int64_t expected_b = 0;
};

DlogInstance dlog_instance(std::int64_t p, std::int64_t generator,
                           std::int64_t target);

// The unique x with (x, 1) in H.
std::int64_t dlog_from_subgroup(const AbelianGroup& g, const Subgroup& h);

// Order finding in the exact-group model: G = Z_phi(modulus), f(x) = a^x
// mod modulus, H = <ord(a)>; the order is the coset count |G|/|H|.
struct OrderInstance {
  HspInstance instance;
  std::int64_t modulus = 0;
  std::int64_t base = 0;
  std::size_t expected_order = 0;
};

OrderInstance order_instance(std::int64_t modulus, std::int64_t base);

std::size_t order_from_subgroup(const AbelianGroup& g, const Subgroup& h);

// --- small modular arithmetic helpers -------------------------------------------

bool is_prime_small(std::int64_t n);
std::int64_t pow_mod(std::int64_t base, std::int64_t exp, std::int64_t mod);
std::int64_t euler_phi_small(std::int64_t n);
std::size_t multiplicative_order(std::int64_t a, std::int64_t mod);
bool is_primitive_root(std::int64_t g, std::int64_t p);

}  // namespace hsp
