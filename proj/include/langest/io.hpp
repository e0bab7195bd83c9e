#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "langest/asymptotics.hpp"
#include "langest/estimator.hpp"
#include "langest/sampler.hpp"

namespace langest {

/// A `t,x` series read from CSV.
struct Series {
  std::vector<double> t;
  std::vector<double> x;
  /// Common spacing; DegenerateInput unless the grid is uniform (relative 1e-6).
  double spacing() const;
};

/// Reads a CSV with header `t,x` and strictly increasing t. Throws
/// DegenerateInput on a missing header, no rows or malformed values.
Series read_series_csv(std::istream& in);
Series read_series_csv_file(const std::string& path);

/// Writes header `t,x` and one row per grid point with 17 significant digits.
void write_path_csv(std::ostream& out, const PathSample& path);

/// Shortest decimal text for a double with 17 significant digits.
std::string format_double(double value);

nlohmann::json estimate_to_json(const EstimateResult& result);
nlohmann::json asymptotics_to_json(const AsymptoticsReport& report,
                                   const std::vector<std::pair<double, double>>& r_samples);

std::string read_text_file(const std::string& path);

}  // namespace langest
