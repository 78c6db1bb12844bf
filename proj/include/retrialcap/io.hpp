#pragma once

#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "retrialcap/sweep.hpp"

#include <nlohmann/json.hpp>

namespace retrialcap {

inline constexpr const char* kCsvHeader =
    "c,g,m,lambda_n,lambda_h,nu,p,mu_r,P_b,P_d,M_b,M_o,M_s";

inline std::string format_number(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

inline void write_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << kCsvHeader << '\n';
  for (const auto& r : rows) {
    const auto& p = r.params;
    const auto& m = r.measures;
    os << p.c << ',' << p.g << ',' << p.m << ',' << format_number(p.lambda_n)
       << ',' << format_number(p.lambda_h) << ',' << format_number(p.nu) << ','
       << format_number(p.p) << ',' << format_number(p.mu_r) << ','
       << format_number(m.P_b) << ',' << format_number(m.P_d) << ','
       << format_number(m.M_b) << ',' << format_number(m.M_o) << ','
       << format_number(m.M_s) << '\n';
  }
}

inline nlohmann::json to_json(const SweepRow& row) {
  const auto& p = row.params;
  const auto& m = row.measures;
  return nlohmann::json{{"c", p.c},
                        {"g", p.g},
                        {"m", p.m},
                        {"lambda_n", p.lambda_n},
                        {"lambda_h", p.lambda_h},
                        {"nu", p.nu},
                        {"p", p.p},
                        {"mu_r", p.mu_r},
                        {"P_b", m.P_b},
                        {"P_d", m.P_d},
                        {"M_b", m.M_b},
                        {"M_o", m.M_o},
                        {"M_s", m.M_s}};
}

inline void write_json(std::ostream& os, const std::vector<SweepRow>& rows) {
  if (rows.size() == 1) {
    os << to_json(rows[0]).dump(2) << '\n';
    return;
  }
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) arr.push_back(to_json(r));
  os << arr.dump(2) << '\n';
}

}  // namespace retrialcap
