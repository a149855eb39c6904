#include <algorithm>
#include <cmath>
#include <cstdio>
#include <tuple>

#include "rtn/records.hpp"

namespace rtn {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void sort_rows(std::vector<ResultRow>& rows) {
  std::stable_sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
    return std::tie(a.ensemble, a.k, a.d, a.N, a.t) < std::tie(b.ensemble, b.k, b.d, b.N, b.t);
  });
}

namespace {

const char* kColumns =
    "ensemble,k,d,N,t,value,log_value,reference_value,deviation,chi_used,"
    "discarded_weight,wall_time_s,seed";

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

std::string json_number(double x) {
  if (!std::isfinite(x)) return "null";
  return format_double(x);
}

}  // namespace

void write_rows_csv(std::ostream& out, const std::vector<ResultRow>& rows, bool sampling_columns) {
  out << "# schema: " << kResultsSchema << "\n";
  out << kColumns;
  if (sampling_columns) out << ",n_samples,std_error";
  out << "\n";
  for (const ResultRow& r : rows) {
    out << r.ensemble << ',' << r.k << ',' << r.d << ',' << r.N << ',' << r.t << ','
        << format_double(r.value) << ',' << format_double(r.log_value) << ','
        << format_double(r.reference_value) << ',' << format_double(r.deviation) << ','
        << r.chi_used << ',' << format_double(r.discarded_weight) << ','
        << format_double(r.wall_time_s) << ',' << r.seed;
    if (sampling_columns) out << ',' << r.n_samples << ',' << format_double(r.std_error);
    out << "\n";
  }
}

void write_rows_json(std::ostream& out, const std::vector<ResultRow>& rows, bool sampling_columns) {
  out << "{\n  \"schema\": \"" << kResultsSchema << "\",\n  \"rows\": [";
  bool first = true;
  for (const ResultRow& r : rows) {
    out << (first ? "\n" : ",\n");
    first = false;
    out << "    {\"ensemble\": \"" << json_escape(r.ensemble) << "\", \"k\": " << r.k
        << ", \"d\": " << r.d << ", \"N\": " << r.N << ", \"t\": " << r.t
        << ", \"value\": " << json_number(r.value)
        << ", \"log_value\": " << json_number(r.log_value)
        << ", \"reference_value\": " << json_number(r.reference_value)
        << ", \"deviation\": " << json_number(r.deviation) << ", \"chi_used\": " << r.chi_used
        << ", \"discarded_weight\": " << json_number(r.discarded_weight)
        << ", \"wall_time_s\": " << json_number(r.wall_time_s) << ", \"seed\": " << r.seed;
    if (sampling_columns)
      out << ", \"n_samples\": " << r.n_samples << ", \"std_error\": " << json_number(r.std_error);
    out << "}";
  }
  out << "\n  ]\n}\n";
}

}  // namespace rtn
