#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "nadyn/rational.hpp"

namespace nadyn::csv {

/// Rows of comma-separated fields. Blank lines and lines starting with '#' are
/// skipped; a first row whose first field is not numeric is taken as a header.
inline std::vector<std::vector<std::string>> read(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open CSV file '" + path + "'");
  std::vector<std::vector<std::string>> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    auto view = detail::trim(line);
    if (view.empty() || view.front() == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss{std::string(view)};
    std::string field;
    while (std::getline(ss, field, ',')) fields.emplace_back(detail::trim(field));
    if (first) {
      first = false;
      const auto& f0 = fields.front();
      if (!f0.empty() && !(f0[0] == '-' || f0[0] == '+' || (f0[0] >= '0' && f0[0] <= '9'))) continue;
    }
    rows.push_back(std::move(fields));
  }
  return rows;
}

inline std::int64_t to_int(const std::string& s, const std::string& where) {
  try {
    const auto r = parse_rational(s);
    if (r.denominator() != 1) throw Error("");
    return r.numerator();
  } catch (const Error&) {
    throw Error(where + ": expected an integer, got '" + s + "'");
  }
}

}  // namespace nadyn::csv
