#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace rtn {

inline constexpr const char* kResultsSchema = "rtn.results.v1";

struct ResultRow {
  std::string ensemble;
  int k = 2;
  int d = 2;
  int N = 0;
  int t = 0;
  double value = 0.0;
  double log_value = 0.0;
  double reference_value = 0.0;
  double deviation = 0.0;
  int chi_used = 1;
  double discarded_weight = 0.0;
  double wall_time_s = 0.0;
  std::uint64_t seed = 0;
  // sampling columns, emitted only when a writer is asked for them;
  // deterministic rows carry n_samples = 0
  std::int64_t n_samples = 0;
  double std_error = 0.0;
};

// 17 significant digits, enough to round-trip a double
std::string format_double(double x);

void sort_rows(std::vector<ResultRow>& rows);

void write_rows_csv(std::ostream& out, const std::vector<ResultRow>& rows, bool sampling_columns);
void write_rows_json(std::ostream& out, const std::vector<ResultRow>& rows, bool sampling_columns);

}  // namespace rtn
