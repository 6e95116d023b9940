/*
 * Config parsing, Cayley/irrep file loading, and JSON serialisation.
 */
#include "hsp/json_io.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace hsp {

namespace {

[[noreturn]] void config_error(const std::string& msg) {
  throw ConstructionError("config: " + msg);
}

const Json& require_key(const Json& obj, const std::string& key,
                        const std::string& where) {
  if (!obj.is_object() || !obj.contains(key))
    config_error(where + " must contain \"" + key + "\"");
  return obj.at(key);
}

std::uint64_t as_uint(const Json& v, const std::string& what) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() &&
                                   v.get<std::int64_t>() >= 0))
    config_error(what + " must be a nonnegative integer");
  return v.get<std::uint64_t>();
}

}  // namespace

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConstructionError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConstructionError(path + ": " + e.what());
  }
}

LoadedCayley load_cayley_json(const Json& doc, const std::string& origin) {
  const std::size_t n =
      static_cast<std::size_t>(as_uint(require_key(doc, "size", origin),
                                       origin + " size"));
  const Json& table_json = require_key(doc, "table", origin);
  if (!table_json.is_array() || table_json.size() != n * n)
    config_error(origin + " table must list " + std::to_string(n * n) +
                 " products");
  std::vector<std::size_t> table;
  table.reserve(n * n);
  for (const Json& v : table_json)
    table.push_back(static_cast<std::size_t>(as_uint(v, origin + " table entry")));
  LoadedCayley out{CayleyGroup(n, std::move(table)), {}};

  if (doc.contains("irreps")) {
    const Json& irreps = doc.at("irreps");
    if (!irreps.is_array()) config_error(origin + " irreps must be a list");
    for (const Json& rj : irreps) {
      Irrep rho;
      rho.name = require_key(rj, "name", origin + " irrep").get<std::string>();
      rho.dim = static_cast<std::size_t>(
          as_uint(require_key(rj, "dim", origin + " irrep"), "irrep dim"));
      if (rho.dim == 0) config_error("irrep \"" + rho.name + "\" has dim 0");
      const Json& mats = require_key(rj, "matrices", origin + " irrep");
      if (!mats.is_array() || mats.size() != n)
        config_error("irrep \"" + rho.name + "\" must list " +
                     std::to_string(n) + " matrices");
      for (const Json& mj : mats) {
        if (!mj.is_array() || mj.size() != rho.dim * rho.dim)
          config_error("irrep \"" + rho.name + "\" matrices must have " +
                       std::to_string(rho.dim * rho.dim) + " entries");
        std::vector<std::complex<double>> mat;
        mat.reserve(mj.size());
        for (const Json& ej : mj) {
          if (!ej.is_array() || ej.size() != 2 || !ej[0].is_number() ||
              !ej[1].is_number())
            config_error("irrep \"" + rho.name +
                         "\" entries must be [re, im] pairs");
          mat.emplace_back(ej[0].get<double>(), ej[1].get<double>());
        }
        rho.mats.push_back(std::move(mat));
      }
      out.irreps.push_back(std::move(rho));
    }
  }
  return out;
}

LoadedCayley load_cayley_file(const std::string& path) {
  return load_cayley_json(read_json_file(path), path);
}

BuiltInstance instance_from_config(const Json& config,
                                   const std::string& base_dir) {
  if (!config.is_object()) config_error("top level must be an object");
  static const std::set<std::string> known{
      "semiring", "group",    "subgroup_generators",
      "label_bits", "labeling", "seed"};
  for (const auto& [key, value] : config.items())
    if (!known.count(key)) config_error("unknown key \"" + key + "\"");

  std::string semiring = "complex";
  if (config.contains("semiring")) {
    semiring = config.at("semiring").get<std::string>();
    if (semiring != "complex" && semiring != "real" && semiring != "boolean")
      config_error("semiring must be complex, real, or boolean");
  }

  const Json& gspec = require_key(config, "group", "config");
  std::vector<Irrep> irreps;
  std::vector<AnyGroup> parsed;
  if (gspec.contains("orders")) {
    const Json& orders_json = gspec.at("orders");
    if (!orders_json.is_array())
      config_error("group orders must be a list of factor sizes");
    std::vector<std::int64_t> orders;
    for (const Json& v : orders_json)
      orders.push_back(static_cast<std::int64_t>(as_uint(v, "group order")));
    parsed.emplace_back(AbelianGroup(orders));
  } else if (gspec.contains("cayley")) {
    std::filesystem::path p = gspec.at("cayley").get<std::string>();
    if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
    LoadedCayley loaded = load_cayley_file(p.string());
    irreps = std::move(loaded.irreps);
    parsed.emplace_back(std::move(loaded.group));
  } else {
    config_error("group must give \"orders\" or a \"cayley\" file");
  }
  AnyGroup group = std::move(parsed.front());

  std::vector<std::size_t> generators;
  const Json& gens = require_key(config, "subgroup_generators", "config");
  if (!gens.is_array()) config_error("subgroup_generators must be a list");
  for (const Json& item : gens) {
    if (item.is_array()) {
      if (!group.is_abelian_carrier())
        config_error(
            "residue-vector generators require a group given by orders");
      std::vector<std::int64_t> residues;
      for (const Json& v : item)
        residues.push_back(v.get<std::int64_t>());
      generators.push_back(group.abelian().index_of(residues));
    } else {
      const std::uint64_t idx = as_uint(item, "generator");
      if (idx >= group.size()) config_error("generator index out of range");
      generators.push_back(static_cast<std::size_t>(idx));
    }
  }

  std::size_t label_bits;
  if (config.contains("label_bits")) {
    label_bits =
        static_cast<std::size_t>(as_uint(config.at("label_bits"), "label_bits"));
  } else {
    const Subgroup h = subgroup_closure(group, generators);
    const std::size_t cosets = group.size() / h.size();
    label_bits = 1;
    while ((std::size_t{1} << label_bits) < cosets) ++label_bits;
  }

  std::optional<std::vector<std::uint64_t>> labeling;
  if (config.contains("labeling")) {
    const Json& lj = config.at("labeling");
    if (!lj.is_array()) config_error("labeling must be a per-element list");
    std::vector<std::uint64_t> table;
    for (const Json& v : lj) table.push_back(as_uint(v, "label"));
    labeling = std::move(table);
  }

  std::uint64_t seed = 0;
  if (config.contains("seed")) seed = as_uint(config.at("seed"), "seed");

  HspInstance inst =
      build_instance(std::move(group), generators, label_bits, labeling);
  return BuiltInstance{std::move(inst), std::move(irreps), semiring, seed};
}

BuiltInstance instance_from_config_file(const std::string& path) {
  const std::string dir =
      std::filesystem::path(path).parent_path().string();
  return instance_from_config(read_json_file(path), dir.empty() ? "." : dir);
}

// --- serialisation ---------------------------------------------------------------

std::string chi_text(const Character& chi) {
  std::ostringstream os;
  os << "(";
  for (std::size_t j = 0; j < chi.exponents.size(); ++j)
    os << (j ? "," : "") << chi.exponents[j];
  os << ")";
  return os.str();
}

Json law_report_json(const LawReport& report) {
  Json checks = Json::array();
  for (const LawCheck& c : report.checks)
    checks.push_back(
        Json{{"law", c.law}, {"residual", c.residual}, {"pass", c.pass}});
  return Json{{"subject", report.subject},
              {"all_pass", report.all_pass()},
              {"max_residual", report.max_residual()},
              {"checks", std::move(checks)}};
}

Json outcome_entry_json(const OutcomeEntry& e) {
  if (e.irrep_dim == 0) {
    return Json{{"b", e.label},
                {"chi", e.chi.exponents},
                {"c_re", e.amplitude.real()},
                {"c_im", e.amplitude.imag()},
                {"prob", e.prob}};
  }
  return Json{{"b", e.label},
              {"irrep", e.chi_name},
              {"dim", e.irrep_dim},
              {"prob", e.prob},
              {"closed_form", e.closed_form},
              {"kernel_contains_subgroup", e.kernel_contains_subgroup},
              {"character_sum_nonzero", e.character_sum_nonzero}};
}

Json distribution_json(const OutcomeDistribution& d) {
  Json rows = Json::array();
  for (const OutcomeEntry& e : d.entries) rows.push_back(outcome_entry_json(e));
  return Json{{"method", d.method},
              {"label_space", d.label_space},
              {"character_count", d.character_count},
              {"total_mass", d.total_mass},
              {"max_zero_residual", d.max_zero_residual},
              {"partial", d.partial},
              {"rows", std::move(rows)}};
}

Json comparison_json(const DistributionComparison& c) {
  return Json{{"max_prob_diff", c.max_prob_diff},
              {"max_amp_diff", c.max_amp_diff},
              {"support_equal", c.support_equal},
              {"off_support_residual", c.off_support_residual}};
}

Json subgroup_json(const Subgroup& h) {
  return Json{{"size", h.size()},
              {"elements", h.elements},
              {"generators", h.generators}};
}

Json transcript_record_json(const TranscriptRecord& r) {
  return Json{{"index", r.index},
              {"b", r.label},
              {"chi", r.chi.exponents},
              {"dual_subgroup_size", r.dual_subgroup_size},
              {"stable_for", r.stable_for}};
}

}  // namespace hsp
