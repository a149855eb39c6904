#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "rtn/basis.hpp"

namespace rtncli {

enum class Command { none, ipr, purity, coherence, coherent_info, xeb, oracle, reduce_bench };

struct RunManifest {
  Command command = Command::none;
  rtn::Ensemble ensemble = rtn::Ensemble::unitary;
  int k = 2;
  int d = 2;
  std::vector<int> n_list;
  int t_lo = 1;
  int t_hi = 1;
  std::vector<std::string> channel_specs;  // empty = clean
  std::string device_spec = "id";          // xeb device channel
  bool region_set = false;
  int region_lo = 0;  // 0-based half-open after parsing
  int region_hi = 0;
  std::string reference = "auto";  // purity: auto|rw|page|none
  int big_k = 1;                   // coherent-info: Bell-paired input sites
  double p = 0.0;                  // depolarising strength (coherent-info, oracle)
  std::string method = "dense";    // oracle: dense|mc
  std::string observable = "ipr";  // oracle: ipr|purity|xeb|coherent-info
  std::int64_t n_samples = 1000;
  int chi = 0;  // 0 = structural cap only
  double cutoff = 1e-13;
  int threads = 1;
  std::uint64_t seed = 12345;
  std::string output;  // empty = stdout
  std::string format = "csv";
};

struct ParseOutcome {
  bool proceed = false;
  int exit_code = 0;
};

ParseOutcome parse_args(int argc, const char* const* argv, RunManifest& m, std::ostream& err);

// Validates the manifest (2 on rejection, before any file is touched), runs the
// requested points, writes rows to m.output or fallback_out. Returns 0, or 3 if
// some rows failed (those are emitted with nan values).
int run_manifest(const RunManifest& m, std::ostream& fallback_out, std::ostream& err);

}  // namespace rtncli
