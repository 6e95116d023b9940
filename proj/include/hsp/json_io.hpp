/*
 * JSON plumbing: instance configs, Cayley-table files with irrep tables,
 * and serialisation of reports, distributions, and sample transcripts.
 *
 * All output goes through nlohmann's ordered_json so field order is fixed
 * and two runs of the same build produce byte-identical documents.
 *
 * Config schema:
 *   {
 *     "semiring": "complex" | "real" | "boolean",        (default complex)
 *     "group": {"orders": [n1, ...]} | {"cayley": FILE},
 *     "subgroup_generators": [g, ...] | [[r1, ...], ...],
 *     "label_bits": N,                 (default: minimal width that fits)
 *     "labeling": [l0, ..., l_{|G|-1}],            (optional explicit f)
 *     "seed": integer                                       (default 0)
 *   }
 * A generator given as an integer is a flat element index; a list is a
 * residue vector (abelian carriers only).  A "cayley" path is resolved
 * relative to the config file.
 *
 * Cayley file schema:
 *   {
 *     "size": n,
 *     "table": [n*n flat row-major products],
 *     "irreps": [{"name": str, "dim": d,
 *                 "matrices": [per element: [d*d entries [re, im]]]}]
 *   }
 */
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "hsp/engine.hpp"
#include "hsp/group.hpp"
#include "hsp/frobenius.hpp"
#include "hsp/postprocess.hpp"

namespace hsp {

using Json = nlohmann::ordered_json;

Json read_json_file(const std::string& path);

struct LoadedCayley {
  CayleyGroup group;
  std::vector<Irrep> irreps;
};

LoadedCayley load_cayley_json(const Json& doc, const std::string& origin);
LoadedCayley load_cayley_file(const std::string& path);

struct BuiltInstance {
  HspInstance instance;
  std::vector<Irrep> irreps;  // populated when the group came from a file
  std::string semiring = "complex";
  std::uint64_t seed = 0;
};

// base_dir anchors relative "cayley" paths; pass the config file's
// directory (or "." when the config came from elsewhere).
BuiltInstance instance_from_config(const Json& config,
                                   const std::string& base_dir);
BuiltInstance instance_from_config_file(const std::string& path);

// --- serialisation ---------------------------------------------------------------

std::string chi_text(const Character& chi);
Json law_report_json(const LawReport& report);
Json outcome_entry_json(const OutcomeEntry& e);
Json distribution_json(const OutcomeDistribution& d);
Json comparison_json(const DistributionComparison& c);
Json subgroup_json(const Subgroup& h);
Json transcript_record_json(const TranscriptRecord& r);

}  // namespace hsp
