/*
 * Post-processing implementations: the dual-subgroup accumulator, the GF(2)
 * solver for Simon's problem, and the discrete-log / order-finding
 * reductions.
 */
#include "hsp/postprocess.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

namespace hsp {

SamplerState::SamplerState(AbelianGroup group)
    : group_(group), dual_(group.orders()) {
  in_closure_.assign(dual_.size(), 0);
  in_closure_[dual_.unit()] = 1;
  closure_elems_.push_back(dual_.unit());
}

void SamplerState::set_expected_annihilator(
    const std::vector<Character>& ann) {
  allowed_.assign(dual_.size(), 0);
  for (const Character& chi : ann)
    allowed_[character_index(group_, chi)] = 1;
}

void SamplerState::accumulate(const Character& chi) {
  const std::size_t idx = character_index(group_, chi);
  sampled_.push_back(chi);
  if (!allowed_.empty() && !allowed_[idx]) violation_ = true;
  if (in_closure_[idx]) {
    ++stable_;
    return;
  }
  stable_ = 0;
  // <C u {chi}> = union over j of C * chi^j, so extending costs one pass
  // per new coset of the previous closure.
  const std::vector<std::size_t> base = closure_elems_;
  std::size_t p = idx;
  while (!in_closure_[p]) {
    for (std::size_t x : base) {
      const std::size_t z = dual_.op(x, p);
      if (!in_closure_[z]) {
        in_closure_[z] = 1;
        closure_elems_.push_back(z);
      }
    }
    p = dual_.op(p, idx);
  }
}

Subgroup recover_subgroup(const AbelianGroup& g,
                          const std::vector<Character>& sampled) {
  return double_annihilator(g, sampled);
}

RecoveryResult recover_from_distribution(
    const OutcomeDistribution& dist, const AbelianGroup& g,
    const Subgroup& hidden, std::uint64_t seed, std::size_t stability,
    std::size_t cap, const std::vector<Character>* expected_annihilator) {
  if (cap == 0) cap = default_sample_cap(g.size());
  const DistributionSampler sampler(dist);
  SamplerState state(g);
  if (expected_annihilator)
    state.set_expected_annihilator(*expected_annihilator);
  else
    state.set_expected_annihilator(annihilator(g, hidden));

  RecoveryResult result;
  for (std::size_t i = 0; i < cap; ++i) {
    const SampleRecord rec = sampler.draw(seed, i);
    state.accumulate(rec.chi);
    result.transcript.push_back(TranscriptRecord{
        i, rec.label, rec.chi, state.dual_subgroup_size(), state.stable_for()});
    if (state.stable_for() >= stability) break;
  }
  result.cap_reached = result.transcript.size() == cap &&
                       result.transcript.back().stable_for < stability;
  result.promise_violation = state.promise_violation();
  result.recovered = recover_subgroup(g, state.sampled());
  return result;
}

// --- Simon -----------------------------------------------------------------------

SimonSystem::SimonSystem(std::size_t n) : n_(n) {
  if (n == 0 || n > 64)
    throw ConstructionError("Simon systems support 1 <= n <= 64");
}

bool SimonSystem::add(std::uint64_t v) {
  if (n_ < 64 && (v >> n_) != 0)
    throw ConstructionError("sampled vector has bits beyond position n-1");
  for (const std::uint64_t row : rows_) {
    const int lead = 63 - std::countl_zero(row);
    if ((v >> lead) & 1) v ^= row;
  }
  if (v == 0) return false;
  const int lead = 63 - std::countl_zero(v);
  // Keep the basis fully reduced: clear this pivot from existing rows.
  for (std::uint64_t& row : rows_)
    if ((row >> lead) & 1) row ^= v;
  rows_.push_back(v);
  if (rows_.size() == n_)
    throw PromiseError(
        "sampled vectors span the whole space; no nonzero hidden string can "
        "satisfy them all");
  return true;
}

std::uint64_t SimonSystem::kernel_vector() const {
  if (rows_.size() + 1 != n_)
    throw ConstructionError("kernel is not one-dimensional yet");
  std::uint64_t pivots = 0;
  for (const std::uint64_t row : rows_) pivots |= std::uint64_t{1}
                                                  << (63 - std::countl_zero(row));
  // The single free position carries a 1; each pivot position copies that
  // row's coefficient at the free position.
  std::uint64_t free_bit = 0;
  for (std::size_t j = 0; j < n_; ++j)
    if (!((pivots >> j) & 1)) {
      free_bit = std::uint64_t{1} << j;
      break;
    }
  std::uint64_t z = free_bit;
  for (const std::uint64_t row : rows_)
    if (row & free_bit) z |= std::uint64_t{1} << (63 - std::countl_zero(row));
  return z;
}

std::uint64_t simon_solve(std::size_t n,
                          const std::function<std::uint64_t()>& sample_source,
                          std::size_t budget, std::size_t* samples_used) {
  SimonSystem sys(n);
  if (budget == 0) budget = 10 * n + 100;
  std::size_t used = 0;
  while (sys.rank() + 1 < n && used < budget) {
    sys.add(sample_source());
    ++used;
  }
  if (sys.rank() + 1 < n)
    throw PromiseError(
        "sample budget exhausted before the hidden string was pinned down");
  if (samples_used) *samples_used = used;
  return sys.kernel_vector();
}

std::uint64_t character_bits(const AbelianGroup& g, const Character& chi) {
  std::uint64_t bits = 0;
  for (std::size_t j = 0; j < g.rank(); ++j) {
    if (g.orders()[j] != 2)
      throw ConstructionError("character_bits requires a Z_2^n group");
    if (chi.exponents[j] & 1) bits |= std::uint64_t{1} << j;
  }
  return bits;
}

std::size_t element_from_bits(const AbelianGroup& g, std::uint64_t z) {
  std::vector<std::int64_t> residues(g.rank());
  for (std::size_t j = 0; j < g.rank(); ++j) {
    if (g.orders()[j] != 2)
      throw ConstructionError("element_from_bits requires a Z_2^n group");
    residues[j] = (z >> j) & 1;
  }
  return g.index_of(residues);
}

std::uint64_t bits_from_element(const AbelianGroup& g, std::size_t e) {
  std::uint64_t bits = 0;
  const auto residues = g.residues(e);
  for (std::size_t j = 0; j < g.rank(); ++j) {
    if (g.orders()[j] != 2)
      throw ConstructionError("bits_from_element requires a Z_2^n group");
    if (residues[j] & 1) bits |= std::uint64_t{1} << j;
  }
  return bits;
}

std::uint64_t annihilator_sample(std::uint64_t z, std::size_t n,
                                 std::uint64_t seed, std::size_t index) {
  if (n == 0 || n > 64)
    throw ConstructionError("annihilator_sample supports 1 <= n <= 64");
  const std::uint64_t mask = n == 64 ? ~std::uint64_t{0}
                                     : (std::uint64_t{1} << n) - 1;
  if (z == 0 || (z & ~mask) != 0)
    throw ConstructionError(
        "the hidden string must be a nonzero n-bit vector");
  std::uint64_t v = rng_draw(seed, index) & mask;
  // Flipping the lowest set bit of z fixes the parity of v . z without
  // disturbing uniformity over the orthogonal complement.
  if (std::popcount(v & z) & 1) v ^= z & (~z + 1);
  return v;
}

HspInstance simon_instance(std::size_t n, std::uint64_t z) {
  // 2^(n-1) cosets mean a dense quotient table of 4^(n-1) entries; beyond
  // n = 12, drive simon_solve from an external sample source instead.
  if (n == 0 || n > 12)
    throw ConstructionError("Simon instances support 1 <= n <= 12");
  if (z == 0 || (z >> n) != 0)
    throw ConstructionError(
        "the hidden string must be a nonzero n-bit vector");
  AbelianGroup g(std::vector<std::int64_t>(n, 2));
  const std::size_t zel = element_from_bits(g, z);
  return build_instance(AnyGroup(g), {zel}, n, std::nullopt,
                        "simon-" + std::to_string(n));
}

// --- number theory ----------------------------------------------------------------

bool is_prime_small(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::int64_t pow_mod(std::int64_t base, std::int64_t exp, std::int64_t mod) {
  std::int64_t acc = 1 % mod;
  base %= mod;
  if (base < 0) base += mod;
  while (exp > 0) {
    if (exp & 1) acc = acc * base % mod;
    base = base * base % mod;
    exp >>= 1;
  }
  return acc;
}

std::int64_t euler_phi_small(std::int64_t n) {
  std::int64_t count = 0;
  for (std::int64_t k = 1; k <= n; ++k)
    if (std::gcd(k, n) == 1) ++count;
  return count;
}

std::size_t multiplicative_order(std::int64_t a, std::int64_t mod) {
  if (std::gcd(a, mod) != 1)
    throw ConstructionError("multiplicative order requires gcd(a, mod) = 1");
  std::int64_t x = a % mod;
  std::size_t k = 1;
  while (x != 1 % mod) {
    x = x * (a % mod) % mod;
    ++k;
  }
  return k;
}

bool is_primitive_root(std::int64_t g, std::int64_t p) {
  if (g % p == 0) return false;
  return multiplicative_order(g, p) == static_cast<std::size_t>(p - 1);
}

DlogInstance dlog_instance(std::int64_t p, std::int64_t generator,
                           std::int64_t target) {
  if (p < 3 || p > 64 || !is_prime_small(p))
    throw ConstructionError("p must be a prime in [3, 64]");
  if (generator <= 0 || generator >= p || !is_primitive_root(generator, p))
    throw ConstructionError(std::to_string(generator) +
                            " is not a primitive root mod " +
                            std::to_string(p));
  if (target <= 0 || target >= p)
    throw ConstructionError("the target must lie in [1, p-1]");

  const std::int64_t m = p - 1;
  std::int64_t b = -1;
  for (std::int64_t x = 0; x < m; ++x)
    if (pow_mod(generator, x, p) == target) {
      b = x;
      break;
    }
  if (b < 0)
    throw ConstructionError("no discrete logarithm exists (unreachable)");

  AbelianGroup g({m, m});
  // f(x, y) = generator^x * target^(-y); constant exactly on cosets of
  // <(b, 1)> because target = generator^b.
  const std::int64_t inv_target = pow_mod(target, m - 1, p);
  std::vector<std::uint64_t> labels(g.size());
  for (std::size_t e = 0; e < g.size(); ++e) {
    const auto r = g.residues(e);
    labels[e] = static_cast<std::uint64_t>(
        pow_mod(generator, r[0], p) * pow_mod(inv_target, r[1], p) % p);
  }
  std::size_t bits = 0;
  while ((std::uint64_t{1} << bits) < static_cast<std::uint64_t>(p)) ++bits;

  HspInstance inst = build_instance(
      AnyGroup(g), {g.index_of({b, 1})}, bits, labels,
      "dlog-p" + std::to_string(p) + "-g" + std::to_string(generator) + "-a" +
          std::to_string(target));
  return DlogInstance{std::move(inst), p, generator, target, b};
}

std::int64_t dlog_from_subgroup(const AbelianGroup& g, const Subgroup& h) {
  std::optional<std::int64_t> found;
  for (std::size_t e : h.elements) {
    const auto r = g.residues(e);
    if (r.size() == 2 && r[1] == 1) {
      if (found)
        throw ConstructionError(
            "subgroup meets the y = 1 line more than once");
      found = r[0];
    }
  }
  if (!found)
    throw ConstructionError("subgroup does not meet the y = 1 line");
  return *found;
}

OrderInstance order_instance(std::int64_t modulus, std::int64_t base) {
  if (modulus < 2 || modulus > 64)
    throw ConstructionError("modulus must lie in [2, 64]");
  if (base <= 0 || base >= modulus || std::gcd(base, modulus) != 1)
    throw ConstructionError("the base must be a unit mod the modulus");

  const std::int64_t phi = euler_phi_small(modulus);
  const std::size_t ord = multiplicative_order(base, modulus);
  AbelianGroup g({phi});
  std::vector<std::uint64_t> labels(g.size());
  for (std::size_t e = 0; e < g.size(); ++e)
    labels[e] = static_cast<std::uint64_t>(
        pow_mod(base, static_cast<std::int64_t>(e), modulus));
  std::size_t bits = 0;
  while ((std::uint64_t{1} << bits) < static_cast<std::uint64_t>(modulus))
    ++bits;

  HspInstance inst = build_instance(
      AnyGroup(g), {g.index_of({static_cast<std::int64_t>(ord)})}, bits,
      labels,
      "order-n" + std::to_string(modulus) + "-a" + std::to_string(base));
  return OrderInstance{std::move(inst), modulus, base, ord};
}

std::size_t order_from_subgroup(const AbelianGroup& g, const Subgroup& h) {
  return g.size() / h.size();
}

}  // namespace hsp
