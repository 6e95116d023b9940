/*
 * Instance construction and promise verification, the closed-form outcome
 * distribution, seeded sampling, and the isotypic measurement used by the
 * non-abelian extension.
 */
#include "hsp/engine.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

namespace hsp {

namespace {

std::string label_witness(std::size_t e1, std::size_t e2, std::uint64_t l1,
                          std::uint64_t l2) {
  std::ostringstream os;
  os << "elements " << e1 << " and " << e2 << " carry labels " << l1 << " and "
     << l2;
  return os.str();
}

}  // namespace

HspInstance build_instance(
    AnyGroup group, const std::vector<std::size_t>& subgroup_generators,
    std::size_t label_bits,
    const std::optional<std::vector<std::uint64_t>>& explicit_labels,
    std::string name) {
  if (label_bits > 63)
    throw ConstructionError("label width capped at 63 bits");
  Subgroup hidden = subgroup_closure(group, subgroup_generators);
  QuotientData quot = quotient(group, hidden);
  const std::size_t n = group.size();
  const std::size_t cosets = quot.representative.size();
  const std::uint64_t space = std::uint64_t{1} << label_bits;
  if (space < cosets)
    throw ConstructionError(
        "label width too small: " + std::to_string(cosets) +
        " cosets need at least " +
        std::to_string(static_cast<std::size_t>(
            std::ceil(std::log2(static_cast<double>(cosets))))) +
        " bits");

  std::vector<std::uint64_t> coset_label(cosets);
  std::vector<std::uint64_t> labels(n);
  if (!explicit_labels) {
    for (std::size_t b = 0; b < cosets; ++b) coset_label[b] = b;
    for (std::size_t e = 0; e < n; ++e)
      labels[e] = coset_label[quot.coset_of[e]];
  } else {
    const auto& table = *explicit_labels;
    if (table.size() != n)
      throw ConstructionError("explicit labelling must list all " +
                              std::to_string(n) + " elements");
    for (std::size_t e = 0; e < n; ++e)
      if (table[e] >= space)
        throw ConstructionError("label " + std::to_string(table[e]) +
                                " does not fit in " +
                                std::to_string(label_bits) + " bits");
    // Constant on each coset, with a witness on violation.
    std::vector<char> seen(cosets, 0);
    for (std::size_t e = 0; e < n; ++e) {
      const std::size_t cb = quot.coset_of[e];
      if (!seen[cb]) {
        seen[cb] = 1;
        coset_label[cb] = table[e];
      } else if (coset_label[cb] != table[e]) {
        const std::size_t rep = quot.representative[cb];
        throw PromiseError(
            "labelling is not constant on a coset: " +
            label_witness(rep, e, coset_label[cb], table[e]));
      }
    }
    // Injective across cosets, with a witness on violation.
    std::map<std::uint64_t, std::size_t> owner;
    for (std::size_t cb = 0; cb < cosets; ++cb) {
      auto [it, fresh] = owner.emplace(coset_label[cb], cb);
      if (!fresh) {
        const std::size_t r1 = quot.representative[it->second];
        const std::size_t r2 = quot.representative[cb];
        throw PromiseError(
            "labelling is not injective across cosets: distinct cosets of " +
            label_witness(r1, r2, coset_label[it->second], coset_label[cb]));
      }
    }
    labels = table;
  }

  if (name.empty())
    name = "g" + std::to_string(n) + "-h" + std::to_string(hidden.size());
  HspInstance inst{std::move(name),  std::move(group),       std::move(hidden),
                   std::move(quot),  label_bits,             std::move(coset_label),
                   std::move(labels)};
  return inst;
}

OutcomeDistribution theoretical_distribution(const HspInstance& inst) {
  const AbelianGroup& g = inst.group.abelian();
  const auto ann = annihilator(g, inst.hidden);
  OutcomeDistribution dist;
  dist.method = "closed-form";
  dist.label_space = inst.label_space();
  dist.character_count = g.size();
  const double ratio = static_cast<double>(inst.hidden.size()) /
                       static_cast<double>(g.size());
  const double prob = ratio * ratio;
  for (std::size_t cb = 0; cb < inst.coset_count(); ++cb) {
    const std::uint64_t label = inst.coset_label[cb];
    const std::size_t rep = inst.quot.representative[cb];
    for (const Character& chi : ann) {
      const auto amp = ratio * std::conj(char_value(g, chi, rep));
      dist.entries.push_back(OutcomeEntry{label, character_index(g, chi), chi,
                                          "", amp, prob});
    }
  }
  detail::finalize(dist);
  return dist;
}

DistributionComparison compare_distributions(const OutcomeDistribution& a,
                                             const OutcomeDistribution& b) {
  DistributionComparison cmp;
  cmp.off_support_residual =
      std::max(a.max_zero_residual, b.max_zero_residual);
  std::map<std::pair<std::uint64_t, std::size_t>, const OutcomeEntry*> in_b;
  for (const auto& e : b.entries) in_b[{e.label, e.chi_index}] = &e;
  std::size_t matched = 0;
  for (const auto& e : a.entries) {
    const auto it = in_b.find({e.label, e.chi_index});
    if (it == in_b.end()) {
      cmp.support_equal = false;
      cmp.max_prob_diff = std::max(cmp.max_prob_diff, e.prob);
      cmp.max_amp_diff = std::max(cmp.max_amp_diff, std::abs(e.amplitude));
      continue;
    }
    ++matched;
    cmp.max_prob_diff =
        std::max(cmp.max_prob_diff, std::abs(e.prob - it->second->prob));
    cmp.max_amp_diff = std::max(
        cmp.max_amp_diff, std::abs(e.amplitude - it->second->amplitude));
  }
  if (matched != b.entries.size()) {
    cmp.support_equal = false;
    for (const auto& e : b.entries) {
      bool found = false;
      for (const auto& f : a.entries)
        if (f.label == e.label && f.chi_index == e.chi_index) {
          found = true;
          break;
        }
      if (!found) {
        cmp.max_prob_diff = std::max(cmp.max_prob_diff, e.prob);
        cmp.max_amp_diff = std::max(cmp.max_amp_diff, std::abs(e.amplitude));
      }
    }
  }
  return cmp;
}

DistributionSampler::DistributionSampler(const OutcomeDistribution& dist)
    : dist_(&dist) {
  if (dist.entries.empty() || dist.total_mass <= 0.0)
    throw ConstructionError("cannot sample from an empty distribution");
  cumulative_.reserve(dist.entries.size());
  double cum = 0.0;
  for (const auto& e : dist.entries) {
    cum += e.prob;
    cumulative_.push_back(cum);
  }
}

SampleRecord DistributionSampler::draw(std::uint64_t seed,
                                       std::size_t index) const {
  const double u = uniform01(seed, index) * dist_->total_mass;
  const auto it =
      std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  const std::size_t pos =
      it == cumulative_.end()
          ? cumulative_.size() - 1
          : static_cast<std::size_t>(it - cumulative_.begin());
  const OutcomeEntry& pick = dist_->entries[pos];
  return SampleRecord{pick.label, pick.chi_index, pick.chi};
}

std::vector<SampleRecord> draw_samples(const OutcomeDistribution& dist,
                                       std::uint64_t seed, std::size_t count,
                                       std::size_t first_index) {
  const DistributionSampler sampler(dist);
  std::vector<SampleRecord> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k)
    out.push_back(sampler.draw(seed, first_index + k));
  return out;
}

OutcomeDistribution isotypic_distribution(const HspInstance& inst,
                                          const std::vector<Irrep>& irreps,
                                          double tol) {
  const AnyGroup& g = inst.group;
  const std::size_t n = g.size();
  if (n > kIsotypicCap)
    throw SizeLimitError("isotypic measurement capped at |G| <= " +
                         std::to_string(kIsotypicCap));
  std::size_t dim_sum = 0;
  for (const Irrep& rho : irreps) dim_sum += rho.dim * rho.dim;
  if (dim_sum != n)
    throw ConstructionError(
        "irrep set incomplete: squared dimensions sum to " +
        std::to_string(dim_sum) + ", expected " + std::to_string(n));

  std::vector<std::vector<std::size_t>> members(inst.coset_count());
  for (std::size_t e = 0; e < n; ++e)
    members[inst.quot.coset_of[e]].push_back(e);

  OutcomeDistribution dist;
  dist.method = "isotypic";
  dist.label_space = inst.label_space();
  dist.character_count = irreps.size();
  const double hsize = static_cast<double>(inst.hidden.size());
  const double nsize = static_cast<double>(n);

  for (std::size_t ri = 0; ri < irreps.size(); ++ri) {
    const Irrep& rho = irreps[ri];
    const double d = static_cast<double>(rho.dim);

    // P = (d/|G|) sum_g conj(tr rho(g)) L_g as a dense matrix.
    std::vector<std::complex<double>> proj(n * n, {0.0, 0.0});
    for (std::size_t e = 0; e < n; ++e) {
      const auto weight = (d / nsize) * std::conj(irrep_character(rho, e));
      for (std::size_t b = 0; b < n; ++b) proj[g.op(e, b) * n + b] += weight;
    }

    // Candidate support conditions.
    std::complex<double> hsum{0.0, 0.0};
    bool in_kernel = true;
    for (std::size_t h : inst.hidden.elements) {
      hsum += irrep_character(rho, h);
      for (std::size_t r = 0; r < rho.dim; ++r)
        for (std::size_t c = 0; c < rho.dim; ++c) {
          const std::complex<double> want = r == c ? 1.0 : 0.0;
          if (std::abs(rho.at(h, r, c) - want) > tol) in_kernel = false;
        }
    }
    const bool sum_nonzero = std::abs(hsum) > tol;
    const double closed =
        sum_nonzero ? hsize * hsize * d * d / (nsize * nsize) : 0.0;

    for (std::size_t cb = 0; cb < inst.coset_count(); ++cb) {
      // <branch| P |branch> with branch = (1/sqrt|G|) sum_{g in coset} |g>.
      std::complex<double> acc{0.0, 0.0};
      for (std::size_t a : members[cb])
        for (std::size_t b : members[cb]) acc += proj[a * n + b];
      const double prob = std::max(0.0, acc.real() / nsize);
      OutcomeEntry entry;
      entry.label = inst.coset_label[cb];
      entry.chi_index = ri;
      entry.chi_name = rho.name;
      entry.prob = prob;
      entry.irrep_dim = rho.dim;
      entry.closed_form = closed;
      entry.kernel_contains_subgroup = in_kernel;
      entry.character_sum_nonzero = sum_nonzero;
      dist.entries.push_back(std::move(entry));
    }
  }
  detail::finalize(dist);
  return dist;
}

std::vector<Irrep> character_irreps(const AbelianGroup& g) {
  std::vector<Irrep> out;
  for (std::size_t c = 0; c < g.size(); ++c) {
    const Character chi = character_at(g, c);
    Irrep rho;
    std::ostringstream os;
    os << "chi(";
    for (std::size_t j = 0; j < chi.exponents.size(); ++j)
      os << (j ? "," : "") << chi.exponents[j];
    os << ")";
    rho.name = os.str();
    rho.dim = 1;
    rho.mats.resize(g.size());
    for (std::size_t e = 0; e < g.size(); ++e)
      rho.mats[e] = {char_value(g, chi, e)};
    out.push_back(std::move(rho));
  }
  return out;
}

}  // namespace hsp
