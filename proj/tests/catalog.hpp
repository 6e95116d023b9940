/*
 * Shared instance catalogs for the distribution and recovery tests: a
 * spread of cyclic, product, Simon, discrete-log and order-finding
 * instances small enough for the exact engine, plus larger ones for the
 * sampling/recovery sweeps.
 */
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "hsp/engine.hpp"
#include "hsp/group.hpp"
#include "hsp/postprocess.hpp"

namespace catalog {

struct Entry {
  std::string title;
  hsp::HspInstance inst;
};

// Instances within the diagram-path cap (|G| * 2^label_bits <= 2^13), so
// both evaluation routes apply.  At least a dozen, mixing trivial, proper
// and full hidden subgroups.
inline std::vector<Entry> distribution_catalog() {
  using namespace hsp;
  std::vector<Entry> out;
  auto add = [&](std::string title, HspInstance inst) {
    out.push_back(Entry{std::move(title), std::move(inst)});
  };

  add("simon n=2 z=11", simon_instance(2, 0b11));
  add("simon n=3 z=101", simon_instance(3, 0b101));
  add("simon n=4 z=0110", simon_instance(4, 0b0110));
  add("simon n=4 z=1111", simon_instance(4, 0b1111));
  add("Z6 mod <2>", build_instance(AbelianGroup({6}), {2}, 1));
  add("Z6 mod <3>", build_instance(AbelianGroup({6}), {3}, 2));
  add("Z6 mod itself", build_instance(AbelianGroup({6}), {1}, 0));
  add("Z6 mod trivial", build_instance(AbelianGroup({6}), {}, 3));
  add("Z4 mod <2>", build_instance(AbelianGroup({4}), {2}, 1));
  add("Z12 mod <3>", build_instance(AbelianGroup({12}), {3}, 2));
  {
    AbelianGroup g({2, 4});
    add("Z2xZ4 mod <(1,2)>",
        build_instance(g, {g.index_of({1, 2})}, 2));
  }
  {
    AbelianGroup g({3, 3});
    add("Z3xZ3 mod diagonal",
        build_instance(g, {g.index_of({1, 1})}, 2));
  }
  add("Z5 mod trivial", build_instance(AbelianGroup({5}), {}, 3));
  add("dlog p=5 g=2 a=3", dlog_instance(5, 2, 3).instance);
  add("order m=15 a=2", order_instance(15, 2).instance);
  return out;
}

// Larger instances for the sampling loop; these go through the
// state-vector route where the diagram cap is exceeded.
inline std::vector<Entry> recovery_catalog() {
  using namespace hsp;
  std::vector<Entry> out;
  auto add = [&](std::string title, HspInstance inst) {
    out.push_back(Entry{std::move(title), std::move(inst)});
  };

  add("simon n=6", simon_instance(6, 0b101011));
  add("simon n=8", simon_instance(8, 0b10110101));
  add("simon n=10", simon_instance(10, 0b1011010011));
  {
    // Z2^12 with a rank-6 hidden subgroup: generators e_i + e_{6+i}.
    AbelianGroup g(std::vector<std::int64_t>(12, 2));
    std::vector<std::size_t> gens;
    for (std::size_t i = 0; i < 6; ++i) {
      std::vector<std::int64_t> r(12, 0);
      r[i] = 1;
      r[6 + i] = 1;
      gens.push_back(g.index_of(r));
    }
    add("Z2^12 mod rank-6", build_instance(g, gens, 6));
  }
  add("Z4096 mod <64>", build_instance(AbelianGroup({4096}), {64}, 6));
  add("Z60 mod <6>", build_instance(AbelianGroup({60}), {6}, 3));
  add("dlog p=5 g=2 a=3", dlog_instance(5, 2, 3).instance);
  return out;
}

}  // namespace catalog
