/*
 * The five subcommands: laws, dist, run, simon, nonabelian.
 *
 * Every command prints one JSON document to stdout (deterministic given
 * config + seed) and a human summary to stderr, and maps failures onto the
 * exit codes documented in commands.hpp.
 */
#include "hsp/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "hsp/engine.hpp"
#include "hsp/errors.hpp"
#include "hsp/frobenius.hpp"
#include "hsp/json_io.hpp"
#include "hsp/postprocess.hpp"
#include "hsp/rng.hpp"

namespace hsp {

namespace {

constexpr std::size_t kJsonRowCap = 10000;   // distribution rows kept in JSON
constexpr std::size_t kTableRowCap = 40;     // distribution rows on stderr

void emit(std::ostream& out, const Json& doc) { out << doc.dump(2) << '\n'; }

Json error_json(const std::string& command, const std::string& kind,
                const std::string& message) {
  return Json{{"command", command},
              {"error", Json{{"kind", kind}, {"message", message}}}};
}

Json instance_json(const HspInstance& inst) {
  return Json{{"name", inst.name},
              {"group_size", inst.group.size()},
              {"abelian_carrier", inst.group.is_abelian_carrier()},
              {"subgroup_size", inst.hidden.size()},
              {"cosets", inst.coset_count()},
              {"label_bits", inst.label_bits}};
}

std::string sci(double v) {
  std::ostringstream os;
  os << std::scientific << std::setprecision(2) << v;
  return os.str();
}

std::string prob_text(double p) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(9) << p;
  return os.str();
}

Json capped_distribution_json(const OutcomeDistribution& d) {
  if (d.entries.size() <= kJsonRowCap) return distribution_json(d);
  OutcomeDistribution head = d;  // total_mass still covers every row
  head.entries.resize(kJsonRowCap);
  Json j = distribution_json(head);
  j["rows_shown"] = kJsonRowCap;
  j["rows_total"] = d.entries.size();
  return j;
}

template <typename Fn>
int with_semiring(const std::string& name, Fn&& fn) {
  if (name == "complex") return fn.template operator()<ComplexF>();
  if (name == "real") return fn.template operator()<RealF>();
  if (name == "boolean") return fn.template operator()<BooleanRig>();
  throw ConstructionError("config: semiring must be complex, real, or boolean");
}

// --- laws -------------------------------------------------------------------------

Json skipped_subject(const std::string& name, std::uint64_t size,
                     std::ostream& err) {
  err << "  " << name << " (size " << size << "): skipped, over the law-suite"
      << " cap of " << kLawObjectCap << '\n';
  return Json{{"name", name},
              {"size", size},
              {"evaluated", false},
              {"reason", "object size exceeds the law-suite cap of " +
                             std::to_string(kLawObjectCap)}};
}

template <typename R, FiniteGroupLike K>
Json law_subject(const std::string& name, const K& k, const char* wire,
                 double tol, bool& all_pass, std::ostream& err) {
  const IndexSet object{wire, k.size()};
  const auto pair = strong_pair<R>(k, object);
  const LawReport zr = check_frobenius(pair.point, tol);
  const LawReport xr = check_frobenius(pair.group, tol);
  const LawReport sr = check_strong_complementarity(pair, tol);
  const bool pass = zr.all_pass() && xr.all_pass() && sr.all_pass();
  all_pass = all_pass && pass;
  const double worst = std::max(
      {zr.max_residual(), xr.max_residual(), sr.max_residual()});
  err << "  " << name << " (size " << k.size() << "): "
      << (pass ? "pass" : "FAIL") << ", max residual " << sci(worst) << '\n';
  return Json{{"name", name},
              {"size", k.size()},
              {"evaluated", true},
              {"pass", pass},
              {"point", law_report_json(zr)},
              {"group", law_report_json(xr)},
              {"strong_complementarity", law_report_json(sr)}};
}

template <typename R>
int cmd_laws(const BuiltInstance& built, const CliOptions& opts,
             std::ostream& out, std::ostream& err) {
  const HspInstance& inst = built.instance;
  err << "law suite for " << inst.name << " over the " << R::name()
      << " semiring\n";
  bool all_pass = true;
  Json subjects = Json::array();

  if (inst.group.size() <= kLawObjectCap)
    subjects.push_back(
        law_subject<R>("group", inst.group, "G", opts.tol, all_pass, err));
  else
    subjects.push_back(skipped_subject("group", inst.group.size(), err));

  if (inst.hidden.size() <= kLawObjectCap) {
    const EmbeddedGroup sub = subgroup_group(inst.group, inst.hidden);
    subjects.push_back(law_subject<R>("hidden-subgroup", sub.group, "H",
                                      opts.tol, all_pass, err));
  } else {
    subjects.push_back(
        skipped_subject("hidden-subgroup", inst.hidden.size(), err));
  }

  if (inst.coset_count() <= kLawObjectCap)
    subjects.push_back(law_subject<R>("quotient", inst.quot.coset_group, "Q",
                                      opts.tol, all_pass, err));
  else
    subjects.push_back(skipped_subject("quotient", inst.coset_count(), err));

  if (inst.label_space() <= kLawObjectCap) {
    const AbelianGroup labels(
        std::vector<std::int64_t>(inst.label_bits, 2));
    subjects.push_back(
        law_subject<R>("labels", labels, "B", opts.tol, all_pass, err));
  } else {
    subjects.push_back(skipped_subject("labels", inst.label_space(), err));
  }

  Json doc{{"command", "laws"},
           {"semiring", R::name()},
           {"tol", opts.tol},
           {"instance", instance_json(inst)},
           {"subjects", std::move(subjects)},
           {"all_pass", all_pass}};

  if constexpr (std::is_same_v<R, BooleanRig>) {
    if (inst.group.size() <= 16) {
      const BooleanCensus census = boolean_character_census(inst.group);
      Json chars = Json::array();
      for (const auto& bits : census.characters) {
        Json row = Json::array();
        for (const auto b : bits) row.push_back(static_cast<int>(b));
        chars.push_back(std::move(row));
      }
      doc["census"] = Json{{"candidates", census.candidates},
                           {"character_count", census.characters.size()},
                           {"characters", std::move(chars)}};
      err << "  boolean census: " << census.characters.size()
          << " classical state(s) among " << census.candidates
          << " candidates\n";
    } else {
      doc["census"] =
          Json{{"skipped", "group larger than the census cap of 16"}};
    }
  }

  emit(out, doc);
  err << (all_pass ? "all evaluated law suites pass\n"
                   : "a law suite FAILED\n");
  return all_pass ? 0 : 2;
}

// --- dist -------------------------------------------------------------------------

void distribution_table(const OutcomeDistribution& computed,
                        const OutcomeDistribution& theory,
                        std::ostream& err) {
  std::map<std::pair<std::uint64_t, std::size_t>, double> expected;
  for (const OutcomeEntry& e : theory.entries)
    expected[{e.label, e.chi_index}] = e.prob;
  err << "  b     chi             computed      theoretical\n";
  std::size_t shown = 0;
  for (const OutcomeEntry& e : computed.entries) {
    if (++shown > kTableRowCap) {
      err << "  ... " << (computed.entries.size() - kTableRowCap)
          << " more rows\n";
      break;
    }
    const auto it = expected.find({e.label, e.chi_index});
    err << "  " << std::left << std::setw(5) << e.label << ' ' << std::setw(15)
        << chi_text(e.chi) << ' ' << prob_text(e.prob) << "   "
        << (it == expected.end() ? "0 (off support)" : prob_text(it->second))
        << '\n';
  }
}

template <typename R>
int cmd_dist(const BuiltInstance& built, const CliOptions& opts,
             std::uint64_t seed, std::ostream& out, std::ostream& err) {
  const HspInstance& inst = built.instance;
  if (!inst.group.is_abelian_carrier())
    throw ConstructionError(
        "dist needs a group given by orders; use the nonabelian command for "
        "Cayley-table carriers");
  Json doc{{"command", "dist"},
           {"semiring", R::name()},
           {"seed", seed},
           {"tol", opts.tol},
           {"instance", instance_json(inst)}};
  try {
    const OutcomeDistribution computed = opts.state_vector
                                             ? statevector_distribution<R>(inst)
                                             : computed_distribution<R>(inst);
    const OutcomeDistribution theory = theoretical_distribution(inst);
    const DistributionComparison cmp = compare_distributions(computed, theory);
    const double discrepancy =
        std::max(cmp.max_prob_diff, cmp.off_support_residual);
    const bool pass = discrepancy <= opts.tol &&
                      std::abs(computed.total_mass - 1.0) <= opts.tol;

    doc["distribution"] = capped_distribution_json(computed);
    doc["theoretical"] = capped_distribution_json(theory);
    doc["comparison"] = comparison_json(cmp);
    doc["discrepancy"] = discrepancy;
    doc["pass"] = pass;
    emit(out, doc);

    err << "instance " << inst.name << ": |G| = " << inst.group.size()
        << ", |H| = " << inst.hidden.size() << ", " << inst.coset_count()
        << " cosets, method " << computed.method << '\n';
    distribution_table(computed, theory, err);
    err << "  total mass " << prob_text(computed.total_mass)
        << ", max discrepancy " << sci(discrepancy) << " (tol "
        << sci(opts.tol) << ")\n";
    err << (pass ? "computed and closed-form distributions agree\n"
                 : "distributions DISAGREE beyond tolerance\n");
    return pass ? 0 : 2;
  } catch (const PartialDistributionError& e) {
    const AbelianGroup& g = inst.group.abelian();
    const IndexSet gobj = group_object(inst);
    std::vector<Tensor<R>> states;
    for (const Character& chi : available_characters<R>(g))
      states.push_back(character_state<R>(g, chi, gobj));
    doc["partial"] = true;
    doc["explanation"] = e.what();
    doc["character_states_span"] = has_enough_classical_states<R>(states, gobj);
    doc["distribution"] = capped_distribution_json(e.distribution);
    emit(out, doc);
    err << "semiring limitation: " << e.what() << '\n';
    return 3;
  }
}

// --- run --------------------------------------------------------------------------

template <typename R>
int cmd_run(const BuiltInstance& built, const CliOptions& opts,
            std::uint64_t seed, std::ostream& out, std::ostream& err) {
  const HspInstance& inst = built.instance;
  if (!inst.group.is_abelian_carrier())
    throw ConstructionError(
        "run needs a group given by orders; the sampler reconstructs "
        "subgroups from abelian characters");
  const RecoveryResult res = run_until_stable<R>(inst, seed);
  const bool success = res.recovered.elements == inst.hidden.elements;

  Json transcript = Json::array();
  for (const TranscriptRecord& r : res.transcript)
    transcript.push_back(transcript_record_json(r));
  Json doc{{"command", "run"},
           {"semiring", R::name()},
           {"seed", seed},
           {"instance", instance_json(inst)},
           {"samples", res.transcript.size()},
           {"recovered", subgroup_json(res.recovered)},
           {"expected", subgroup_json(inst.hidden)},
           {"success", success},
           {"cap_reached", res.cap_reached},
           {"promise_violation", res.promise_violation},
           {"transcript", std::move(transcript)}};
  emit(out, doc);

  if (opts.out_path) {
    std::ofstream file(*opts.out_path);
    if (!file)
      throw ConstructionError("cannot open " + *opts.out_path +
                              " for writing");
    for (const TranscriptRecord& r : res.transcript)
      file << transcript_record_json(r).dump() << '\n';
  }

  err << "instance " << inst.name << ": " << res.transcript.size()
      << " samples, recovered a subgroup of size " << res.recovered.size()
      << " (expected " << inst.hidden.size() << ")\n";
  if (res.cap_reached)
    err << "warning: sample cap reached before the stability window\n";
  if (res.promise_violation) {
    err << "promise violation: a sampled character lies outside the "
           "annihilator of the hidden subgroup\n";
    return 4;
  }
  err << (success ? "recovered the hidden subgroup\n" : "recovery MISSED\n");
  return success ? 0 : 2;
}

// --- simon ------------------------------------------------------------------------

std::string bit_string(std::uint64_t v, std::size_t n) {
  std::string s(n, '0');
  for (std::size_t i = 0; i < n; ++i)
    if ((v >> i) & 1) s[i] = '1';
  return s;
}

std::uint64_t parse_hidden_word(const std::string& text, std::size_t n,
                                std::uint64_t seed) {
  const std::uint64_t mask =
      n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
  if (text == "random") {
    const std::uint64_t zseed = splitmix64(seed ^ 0x5107ab1e5107ab1eULL);
    std::uint64_t z = 0;
    for (std::size_t i = 0; z == 0; ++i) z = rng_draw(zseed, i) & mask;
    return z;
  }
  if (text.size() != n)
    throw ConstructionError("the hidden word must have exactly " +
                            std::to_string(n) + " bits");
  std::uint64_t z = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (text[i] == '1')
      z |= std::uint64_t{1} << i;
    else if (text[i] != '0')
      throw ConstructionError("the hidden word must be a string of 0s and 1s");
  }
  if (z == 0)
    throw ConstructionError("the hidden word must be nonzero");
  return z;
}

template <typename R>
int cmd_simon(const CliOptions& opts, std::uint64_t seed, std::ostream& out,
              std::ostream& err) {
  if constexpr (std::is_same_v<R, BooleanRig>) {
    throw SemiringError(
        "outcome probabilities are not defined over the Boolean rig");
  } else {
    const std::size_t n = opts.simon_n;
    if (n == 0 || n > 64)
      throw ConstructionError("simon requires a width --n between 1 and 64");
    const std::uint64_t z = parse_hidden_word(opts.simon_z, n, seed);

    std::string method;
    std::uint64_t recovered = 0;
    std::size_t used = 0;
    if (n <= 12) {
      const HspInstance inst = simon_instance(n, z);
      recovered = simon_solve_instance<R>(inst, seed, &used);
      method = "simulated";
    } else {
      // Too wide to materialise; draw directly from the known sampling
      // distribution of the subroutine (uniform over the words orthogonal
      // to the hidden one).
      std::size_t counter = 0;
      const auto source = [&]() {
        return annihilator_sample(z, n, seed, counter++);
      };
      recovered = simon_solve(n, source, 0, &used);
      method = "synthetic-annihilator";
    }
    const bool success = recovered == z;

    Json doc{{"command", "simon"}, {"semiring", R::name()},
             {"seed", seed},      {"n", n},
             {"method", method},  {"z", bit_string(z, n)},
             {"recovered", bit_string(recovered, n)},
             {"samples_used", used},
             {"success", success}};
    emit(out, doc);
    err << "simon n=" << n << ", hidden word " << bit_string(z, n)
        << ": recovered " << bit_string(recovered, n) << " from " << used
        << " samples (" << method << ")\n";
    return success ? 0 : 2;
  }
}

// --- nonabelian -------------------------------------------------------------------

int cmd_nonabelian(const BuiltInstance& built, const CliOptions& opts,
                   std::ostream& out, std::ostream& err) {
  const HspInstance& inst = built.instance;
  Json doc{{"command", "nonabelian"},
           {"tol", opts.tol},
           {"instance", instance_json(inst)}};

  std::vector<Irrep> irreps;
  if (inst.group.is_abelian_carrier())
    irreps = character_irreps(inst.group.abelian());
  else
    irreps = built.irreps;
  if (irreps.empty())
    throw ConstructionError(
        "no irreducible representations available; list them in the Cayley "
        "file");

  // Validate the tables against the product before trusting them.
  const std::size_t n = inst.group.size();
  std::vector<std::size_t> table(n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) table[a * n + b] = inst.group.op(a, b);
  const CayleyGroup carrier(n, std::move(table));

  bool irreps_ok = true;
  Json irrep_rows = Json::array();
  for (const Irrep& rho : irreps) {
    const IrrepReport report = validate_irrep(carrier, rho, opts.tol);
    irreps_ok = irreps_ok && report.all_pass();
    Json checks = Json::array();
    for (const IrrepCheck& c : report.checks)
      checks.push_back(Json{
          {"check", c.check}, {"residual", c.residual}, {"pass", c.pass}});
    irrep_rows.push_back(Json{{"name", rho.name},
                              {"dim", rho.dim},
                              {"all_pass", report.all_pass()},
                              {"max_residual", report.max_residual()},
                              {"checks", std::move(checks)}});
  }
  doc["irreps"] = std::move(irrep_rows);
  if (!irreps_ok) {
    doc["pass"] = false;
    emit(out, doc);
    err << "an irreducible representation table FAILED validation\n";
    return 2;
  }

  const OutcomeDistribution dist =
      isotypic_distribution(inst, irreps, opts.tol);
  const bool pass = std::abs(dist.total_mass - 1.0) <= opts.tol;
  doc["distribution"] = capped_distribution_json(dist);
  doc["total_mass"] = dist.total_mass;
  doc["pass"] = pass;
  emit(out, doc);

  err << "instance " << inst.name << ": |G| = " << n << ", |H| = "
      << inst.hidden.size() << ", " << irreps.size() << " irreps\n";
  err << "  b     irrep           prob          closed form\n";
  std::size_t shown = 0;
  for (const OutcomeEntry& e : dist.entries) {
    if (++shown > kTableRowCap) {
      err << "  ... " << (dist.entries.size() - kTableRowCap)
          << " more rows\n";
      break;
    }
    err << "  " << std::left << std::setw(5) << e.label << ' ' << std::setw(15)
        << e.chi_name << ' ' << prob_text(e.prob) << "   "
        << prob_text(e.closed_form)
        << (e.kernel_contains_subgroup ? "   [H in kernel]" : "")
        << (e.character_sum_nonzero ? " [char sum != 0]" : "") << '\n';
  }
  err << "  total mass " << prob_text(dist.total_mass) << '\n';
  err << (pass ? "isotypic masses sum to one\n"
               : "isotypic masses DO NOT sum to one\n");
  return pass ? 0 : 2;
}

// --- dispatch ---------------------------------------------------------------------

int dispatch(const CliOptions& opts, std::ostream& out, std::ostream& err) {
  if (opts.command == "simon") {
    const std::string semiring = opts.semiring_override.value_or("complex");
    const std::uint64_t seed = opts.seed_override.value_or(0);
    return with_semiring(semiring, [&]<typename R>() {
      return cmd_simon<R>(opts, seed, out, err);
    });
  }

  if (opts.config_path.empty())
    throw ConstructionError("a config file is required (--config)");
  BuiltInstance built = instance_from_config_file(opts.config_path);
  if (opts.semiring_override) built.semiring = *opts.semiring_override;
  if (opts.seed_override) built.seed = *opts.seed_override;
  const std::uint64_t seed = built.seed;

  if (opts.command == "laws")
    return with_semiring(built.semiring, [&]<typename R>() {
      return cmd_laws<R>(built, opts, out, err);
    });
  if (opts.command == "dist")
    return with_semiring(built.semiring, [&]<typename R>() {
      return cmd_dist<R>(built, opts, seed, out, err);
    });
  if (opts.command == "run")
    return with_semiring(built.semiring, [&]<typename R>() {
      return cmd_run<R>(built, opts, seed, out, err);
    });
  if (opts.command == "nonabelian") {
    if (built.semiring != "complex")
      throw SemiringError(
          "the isotypic measurement requires complex amplitudes");
    return cmd_nonabelian(built, opts, out, err);
  }
  throw ConstructionError("unknown command \"" + opts.command + "\"");
}

}  // namespace

int run_command(const CliOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    return dispatch(opts, out, err);
  } catch (const PromiseError& e) {
    emit(out, error_json(opts.command, "promise-violation", e.what()));
    err << "promise violation: " << e.what() << '\n';
    return 4;
  } catch (const SemiringError& e) {
    emit(out, error_json(opts.command, "semiring", e.what()));
    err << "semiring limitation: " << e.what() << '\n';
    return 3;
  } catch (const HspError& e) {
    emit(out, error_json(opts.command, "error", e.what()));
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    emit(out, error_json(opts.command, "internal", e.what()));
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace hsp
