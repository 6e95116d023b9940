/*
 * Config parsing, Cayley-file loading, JSON serialisation, the in-process
 * command layer (exit codes + document shapes), and a few smoke checks
 * against the installed binary.
 */
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "hsp/commands.hpp"
#include "hsp/json_io.hpp"

using namespace hsp;

namespace {

std::string config_path(const std::string& file) {
  return std::string(TEST_CONFIG_DIR) + "/" + file;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("hsp_test_" + name))
      .string();
}

struct CmdResult {
  int code = -1;
  Json doc;
  std::string json_text;
  std::string err_text;
};

CmdResult call(const CliOptions& opts) {
  std::ostringstream out;
  std::ostringstream err;
  CmdResult r;
  r.code = run_command(opts, out, err);
  r.json_text = out.str();
  r.err_text = err.str();
  r.doc = Json::parse(r.json_text);
  return r;
}

CliOptions command_on(const std::string& command, const std::string& config) {
  CliOptions opts;
  opts.command = command;
  opts.config_path = config_path(config);
  return opts;
}

int run_binary(const std::string& args, const std::string& stdout_file) {
  const std::string cmd = std::string(HSPSIM_PATH) + " " + args + " > " +
                          stdout_file + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(static_cast<bool>(in));
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

// --- config parsing ----------------------------------------------------------------

TEST_CASE("a minimal config fills in every default") {
  const Json cfg{{"group", Json{{"orders", {6}}}},
                 {"subgroup_generators", {2}}};
  const BuiltInstance b = instance_from_config(cfg, ".");
  CHECK(b.semiring == "complex");
  CHECK(b.seed == 0);
  CHECK(b.irreps.empty());
  CHECK(b.instance.group.size() == 6);
  CHECK(b.instance.hidden.elements == std::vector<std::size_t>{0, 2, 4});
  CHECK(b.instance.coset_count() == 2);
  CHECK(b.instance.label_bits == 1);  // smallest width with 2 >= coset count
}

TEST_CASE("unknown config keys are rejected") {
  const Json cfg{{"group", Json{{"orders", {4}}}},
                 {"subgroup_generators", {2}},
                 {"extra", 1}};
  CHECK_THROWS_WITH_AS(instance_from_config(cfg, "."),
                       "config: unknown key \"extra\"", ConstructionError);
}

TEST_CASE("required config keys are enforced") {
  CHECK_THROWS_AS(instance_from_config(Json::object(), "."),
                  ConstructionError);  // no group
  CHECK_THROWS_AS(
      instance_from_config(Json{{"group", Json{{"orders", {4}}}}}, "."),
      ConstructionError);  // no subgroup_generators
  CHECK_THROWS_AS(instance_from_config(Json{{"group", Json::object()},
                                            {"subgroup_generators", {0}}},
                                       "."),
                  ConstructionError);  // group without orders or cayley
  CHECK_THROWS_AS(instance_from_config(Json::array(), "."),
                  ConstructionError);  // top level not an object
}

TEST_CASE("the semiring name must be recognised") {
  const Json cfg{{"semiring", "quaternion"},
                 {"group", Json{{"orders", {4}}}},
                 {"subgroup_generators", {2}}};
  CHECK_THROWS_AS(instance_from_config(cfg, "."), ConstructionError);
}

TEST_CASE("generators may be element indices or residue vectors") {
  const Json by_residues{{"group", Json{{"orders", {2, 2}}}},
                         {"subgroup_generators", Json::array({{1, 1}})}};
  const Json by_index{{"group", Json{{"orders", {2, 2}}}},
                      {"subgroup_generators", {3}}};
  const auto a = instance_from_config(by_residues, ".");
  const auto b = instance_from_config(by_index, ".");
  CHECK(a.instance.hidden.elements == std::vector<std::size_t>{0, 3});
  CHECK(b.instance.hidden.elements == a.instance.hidden.elements);

  const Json out_of_range{{"group", Json{{"orders", {6}}}},
                          {"subgroup_generators", {9}}};
  CHECK_THROWS_AS(instance_from_config(out_of_range, "."), ConstructionError);

  const Json residues_on_cayley{{"group", Json{{"cayley", "s3.json"}}},
                                {"subgroup_generators", Json::array({{1}})}};
  CHECK_THROWS_AS(instance_from_config(residues_on_cayley, TEST_DATA_DIR),
                  ConstructionError);
}

TEST_CASE("label width is honoured and validated") {
  const Json wide{{"group", Json{{"orders", {6}}}},
                  {"subgroup_generators", {2}},
                  {"label_bits", 3}};
  CHECK(instance_from_config(wide, ".").instance.label_bits == 3);

  const Json narrow{{"group", Json{{"orders", {6}}}},
                    {"subgroup_generators", Json::array()},
                    {"label_bits", 2}};  // 4 labels cannot separate 6 cosets
  CHECK_THROWS_AS(instance_from_config(narrow, "."), ConstructionError);
}

TEST_CASE("an explicit labeling is used and still checked against the promise") {
  const Json good{{"group", Json{{"orders", {4}}}},
                  {"subgroup_generators", {2}},
                  {"label_bits", 2},
                  {"labeling", {3, 1, 3, 1}}};
  const auto b = instance_from_config(good, ".");
  CHECK(b.instance.labels == std::vector<std::uint64_t>{3, 1, 3, 1});

  const Json not_constant{{"group", Json{{"orders", {4}}}},
                          {"subgroup_generators", {2}},
                          {"label_bits", 2},
                          {"labeling", {3, 1, 2, 1}}};
  CHECK_THROWS_AS(instance_from_config(not_constant, "."), PromiseError);
}

TEST_CASE("seed and semiring fields are carried through") {
  const Json cfg{{"semiring", "real"},
                 {"group", Json{{"orders", {6}}}},
                 {"subgroup_generators", {2}},
                 {"seed", 99}};
  const auto b = instance_from_config(cfg, ".");
  CHECK(b.semiring == "real");
  CHECK(b.seed == 99);
}

TEST_CASE("relative cayley paths resolve against the config directory") {
  const BuiltInstance b = instance_from_config_file(config_path("s3.json"));
  CHECK(b.instance.group.size() == 6);
  CHECK_FALSE(b.instance.group.is_abelian_carrier());
  CHECK(b.instance.hidden.elements == std::vector<std::size_t>{0, 4, 5});
  REQUIRE(b.irreps.size() == 3);  // the file also carries the irrep tables
  CHECK(b.irreps[2].dim == 2);
}

TEST_CASE("cayley files are validated before use") {
  Json ok{{"size", 2}, {"table", {0, 1, 1, 0}}};
  CHECK(load_cayley_json(ok, "test").group.size() == 2);

  Json short_table{{"size", 2}, {"table", {0, 1, 1}}};
  CHECK_THROWS_AS(load_cayley_json(short_table, "test"), ConstructionError);

  Json bad_irrep = ok;
  bad_irrep["irreps"] = Json::array(
      {Json{{"name", "x"}, {"dim", 1}, {"matrices", Json::array({Json::array(
           {Json::array({1.0, 0.0})})})}}});  // only 1 matrix for 2 elements
  CHECK_THROWS_AS(load_cayley_json(bad_irrep, "test"), ConstructionError);

  Json bad_entry = ok;
  bad_entry["irreps"] = Json::array({Json{
      {"name", "x"},
      {"dim", 1},
      {"matrices", Json::array({Json::array({Json::array({1.0})}),
                                Json::array({Json::array({1.0})})})}}});
  CHECK_THROWS_AS(load_cayley_json(bad_entry, "test"), ConstructionError);

  Json dim_zero = ok;
  dim_zero["irreps"] = Json::array(
      {Json{{"name", "x"}, {"dim", 0}, {"matrices", Json::array()}}});
  CHECK_THROWS_AS(load_cayley_json(dim_zero, "test"), ConstructionError);
}

TEST_CASE("reading json files reports missing and malformed input") {
  CHECK_THROWS_AS(read_json_file("/no/such/file.json"), ConstructionError);

  const std::string bad = temp_path("malformed.json");
  std::ofstream(bad) << "{ this is not json";
  CHECK_THROWS_AS(read_json_file(bad), ConstructionError);
  std::filesystem::remove(bad);
}

// --- serialisation -----------------------------------------------------------------

TEST_CASE("serialisation helpers produce the documented shapes") {
  Character chi;
  chi.exponents = {1, 0};
  CHECK(chi_text(chi) == "(1,0)");

  Subgroup h;
  h.elements = {0, 2, 4};
  h.generators = {2};
  const Json hj = subgroup_json(h);
  CHECK(hj["size"] == 3);
  CHECK(hj["elements"] == Json({0, 2, 4}));
  CHECK(hj["generators"] == Json({2}));

  TranscriptRecord r;
  r.index = 4;
  r.label = 1;
  r.chi = chi;
  r.dual_subgroup_size = 2;
  r.stable_for = 3;
  const Json rj = transcript_record_json(r);
  CHECK(rj["index"] == 4);
  CHECK(rj["b"] == 1);
  CHECK(rj["chi"] == Json({1, 0}));
  CHECK(rj["dual_subgroup_size"] == 2);
  CHECK(rj["stable_for"] == 3);
}

// --- laws command ------------------------------------------------------------------

TEST_CASE("laws reports every structural subject and passes") {
  const CmdResult r = call(command_on("laws", "simon2.json"));
  CHECK(r.code == 0);
  CHECK(r.doc["command"] == "laws");
  CHECK(r.doc["semiring"] == "complex");
  CHECK(r.doc["all_pass"] == true);
  REQUIRE(r.doc["subjects"].size() == 4);
  const std::vector<std::string> names{"group", "hidden-subgroup", "quotient",
                                       "labels"};
  for (std::size_t i = 0; i < 4; ++i) {
    const Json& s = r.doc["subjects"][i];
    CHECK(s["name"] == names[i]);
    CHECK(s["evaluated"] == true);
    CHECK(s["pass"] == true);
    CHECK(s["point"]["all_pass"] == true);
    CHECK(s["group"]["all_pass"] == true);
    CHECK(s["strong_complementarity"]["all_pass"] == true);
    CHECK(s["strong_complementarity"]["checks"].size() > 10);
  }
}

TEST_CASE("laws also covers groups given by cayley tables") {
  const CmdResult r = call(command_on("laws", "s3.json"));
  CHECK(r.code == 0);
  CHECK(r.doc["instance"]["abelian_carrier"] == false);
  CHECK(r.doc["subjects"][0]["size"] == 6);
  CHECK(r.doc["subjects"][1]["size"] == 3);  // hidden A3
  CHECK(r.doc["subjects"][2]["size"] == 2);  // quotient
  CHECK(r.doc["all_pass"] == true);
}

TEST_CASE("laws fails under an impossible tolerance") {
  CliOptions opts = command_on("laws", "simon2.json");
  opts.tol = 1e-30;
  const CmdResult r = call(opts);
  CHECK(r.code == 2);
  CHECK(r.doc["all_pass"] == false);
}

TEST_CASE("laws over the boolean semiring includes the character census") {
  CliOptions opts = command_on("laws", "z6.json");
  opts.semiring_override = "boolean";
  const CmdResult r = call(opts);
  CHECK(r.code == 0);
  CHECK(r.doc["semiring"] == "boolean");
  CHECK(r.doc["census"]["candidates"] == 64);
  CHECK(r.doc["census"]["character_count"] == 1);
  CHECK(r.doc["census"]["characters"][0] == Json({1, 1, 1, 1, 1, 1}));
}

// --- dist command ------------------------------------------------------------------

TEST_CASE("dist agrees with the closed form and is deterministic") {
  const CmdResult r = call(command_on("dist", "simon2.json"));
  CHECK(r.code == 0);
  CHECK(r.doc["command"] == "dist");
  CHECK(r.doc["seed"] == 7);  // from the config file
  CHECK(r.doc["distribution"]["method"] == "diagram");
  CHECK(r.doc["theoretical"]["method"] == "closed-form");
  CHECK(r.doc["comparison"]["support_equal"] == true);
  CHECK(r.doc["discrepancy"].get<double>() <= 1e-9);
  CHECK(r.doc["pass"] == true);
  CHECK(r.doc["distribution"]["rows"].size() == 4);

  const CmdResult again = call(command_on("dist", "simon2.json"));
  CHECK(again.json_text == r.json_text);
}

TEST_CASE("dist can take the state-vector route instead") {
  CliOptions opts = command_on("dist", "simon2.json");
  opts.state_vector = true;
  const CmdResult r = call(opts);
  CHECK(r.code == 0);
  CHECK(r.doc["distribution"]["method"] == "state-vector");
  CHECK(r.doc["pass"] == true);
}

TEST_CASE("dist over the reals reports the partial character span") {
  const CmdResult r = call(command_on("dist", "z3_real.json"));
  CHECK(r.code == 3);
  CHECK(r.doc["partial"] == true);
  CHECK(r.doc["character_states_span"] == false);
  CHECK(r.doc["distribution"]["character_count"] == 1);
  CHECK(r.doc.contains("explanation"));
}

TEST_CASE("dist over the boolean rig is refused") {
  CliOptions opts = command_on("dist", "z6.json");
  opts.semiring_override = "boolean";
  const CmdResult r = call(opts);
  CHECK(r.code == 3);
  CHECK(r.doc["error"]["kind"] == "semiring");
}

TEST_CASE("dist requires an abelian carrier") {
  const CmdResult r = call(command_on("dist", "s3.json"));
  CHECK(r.code == 1);
  CHECK(r.doc["error"]["kind"] == "error");
}

// --- run command -------------------------------------------------------------------

TEST_CASE("run recovers the hidden subgroup and logs the transcript") {
  const CmdResult r = call(command_on("run", "z6.json"));
  CHECK(r.code == 0);
  CHECK(r.doc["success"] == true);
  CHECK(r.doc["recovered"]["elements"] == Json({0, 2, 4}));
  CHECK(r.doc["expected"]["size"] == 3);
  CHECK(r.doc["samples"] == r.doc["transcript"].size());
  CHECK(r.doc["cap_reached"] == false);
  CHECK(r.doc["promise_violation"] == false);
  CHECK(r.doc["transcript"].back()["stable_for"] == 10);
}

TEST_CASE("run honours the seed override and writes a transcript file") {
  const std::string out_file = temp_path("transcript.jsonl");
  CliOptions opts = command_on("run", "z6.json");
  opts.seed_override = 5;
  opts.out_path = out_file;
  const CmdResult r = call(opts);
  CHECK(r.code == 0);
  CHECK(r.doc["seed"] == 5);

  std::ifstream in(out_file);
  REQUIRE(static_cast<bool>(in));
  std::string line;
  std::size_t lines = 0;
  while (std::getline(in, line)) {
    const Json record = Json::parse(line);
    CHECK(record["index"] == lines);
    ++lines;
  }
  CHECK(lines == r.doc["samples"].get<std::size_t>());
  std::filesystem::remove(out_file);
}

TEST_CASE("run surfaces hiding-promise violations from the config") {
  const CmdResult r = call(command_on("run", "bad_label.json"));
  CHECK(r.code == 4);
  CHECK(r.doc["error"]["kind"] == "promise-violation");
}

// --- simon command -----------------------------------------------------------------

TEST_CASE("simon solves simulated and synthetic widths end to end") {
  CliOptions opts;
  opts.command = "simon";
  opts.simon_n = 5;
  opts.simon_z = "10110";
  opts.seed_override = 3;
  const CmdResult r = call(opts);
  CHECK(r.code == 0);
  CHECK(r.doc["method"] == "simulated");
  CHECK(r.doc["z"] == "10110");
  CHECK(r.doc["recovered"] == "10110");
  CHECK(r.doc["success"] == true);

  opts.simon_n = 14;
  opts.simon_z = "random";
  const CmdResult wide = call(opts);
  CHECK(wide.code == 0);
  CHECK(wide.doc["method"] == "synthetic-annihilator");
  CHECK(wide.doc["success"] == true);
  CHECK(wide.doc["z"].get<std::string>().size() == 14);
}

TEST_CASE("simon validates its inputs") {
  CliOptions opts;
  opts.command = "simon";

  opts.simon_n = 0;
  CHECK(call(opts).code == 1);

  opts.simon_n = 5;
  opts.simon_z = "00000";  // the hidden word must be nonzero
  CHECK(call(opts).code == 1);

  opts.simon_z = "101";  // wrong width
  CHECK(call(opts).code == 1);

  opts.simon_z = "1011x";
  CHECK(call(opts).code == 1);

  opts.simon_z = "10110";
  opts.semiring_override = "boolean";
  CHECK(call(opts).code == 3);
}

// --- nonabelian command ------------------------------------------------------------

TEST_CASE("nonabelian validates the irrep tables and the isotypic masses") {
  const CmdResult r = call(command_on("nonabelian", "s3.json"));
  CHECK(r.code == 0);
  CHECK(r.doc["pass"] == true);
  REQUIRE(r.doc["irreps"].size() == 3);
  for (const Json& rho : r.doc["irreps"]) CHECK(rho["all_pass"] == true);
  REQUIRE(r.doc["distribution"]["rows"].size() == 6);
  for (const Json& row : r.doc["distribution"]["rows"]) {
    const double prob = row["prob"].get<double>();
    const bool supported = row["kernel_contains_subgroup"].get<bool>() &&
                           row["character_sum_nonzero"].get<bool>();
    CHECK(prob == doctest::Approx(supported ? 0.25 : 0.0).epsilon(1e-12));
    CHECK(row["closed_form"].get<double>() ==
          doctest::Approx(supported ? 0.25 : 0.0).epsilon(1e-12));
  }
  CHECK(r.doc["total_mass"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("nonabelian requires complex amplitudes") {
  CliOptions opts = command_on("nonabelian", "s3.json");
  opts.semiring_override = "real";
  const CmdResult r = call(opts);
  CHECK(r.code == 3);
  CHECK(r.doc["error"]["kind"] == "semiring");
}

TEST_CASE("nonabelian falls back to characters on abelian carriers") {
  const CmdResult r = call(command_on("nonabelian", "z6.json"));
  CHECK(r.code == 0);
  CHECK(r.doc["irreps"].size() == 6);
  CHECK(r.doc["distribution"]["rows"].size() == 12);
  CHECK(r.doc["pass"] == true);
}

// --- dispatch errors ---------------------------------------------------------------

TEST_CASE("configuration problems exit with code 1") {
  CliOptions opts;
  opts.command = "dist";
  opts.config_path = "/no/such/config.json";
  CHECK(call(opts).code == 1);

  opts.command = "bogus";
  opts.config_path = config_path("z6.json");
  CHECK(call(opts).code == 1);

  opts.command = "dist";
  opts.config_path.clear();
  const CmdResult r = call(opts);
  CHECK(r.code == 1);
  CHECK(r.doc["error"]["kind"] == "error");
}

// --- the binary itself -------------------------------------------------------------

TEST_CASE("the binary emits byte-identical JSON across runs") {
  const std::string a = temp_path("bin_a.json");
  const std::string b = temp_path("bin_b.json");
  const std::string args = "dist --config " + config_path("simon2.json");
  CHECK(run_binary(args, a) == 0);
  CHECK(run_binary(args, b) == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK(Json::parse(slurp(a))["pass"] == true);
  std::filesystem::remove(a);
  std::filesystem::remove(b);
}

TEST_CASE("the binary maps outcomes onto the documented exit codes") {
  const std::string out = temp_path("bin_out.json");
  CHECK(run_binary("--help", out) == 0);
  CHECK(run_binary("", out) == 1);                 // a subcommand is required
  CHECK(run_binary("dist", out) == 1);             // --config is required
  CHECK(run_binary("laws --config " + config_path("simon2.json") +
                       " --tol 1e-30", out) == 2);
  CHECK(run_binary("dist --config " + config_path("z3_real.json"), out) == 3);
  CHECK(run_binary("run --config " + config_path("bad_label.json"), out) == 4);

  CHECK(run_binary("simon --n 5 --z 10110 --seed 3", out) == 0);
  const Json doc = Json::parse(slurp(out));
  CHECK(doc["method"] == "simulated");
  CHECK(doc["recovered"] == "10110");
  std::filesystem::remove(out);
}
