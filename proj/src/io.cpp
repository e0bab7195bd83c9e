#include "langest/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "langest/errors.hpp"

namespace langest {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_field(const std::string& field, std::size_t line) {
  const std::string f = trim(field);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(f, &used);
  } catch (const std::logic_error&) {
    used = 0;
  }
  if (f.empty() || used != f.size() || !std::isfinite(v)) {
    std::ostringstream os;
    os << "CSV line " << line << ": malformed number '" << f << "'";
    throw DegenerateInput(os.str());
  }
  return v;
}

nlohmann::json optional_number(const std::optional<double>& v) {
  return v && std::isfinite(*v) ? nlohmann::json(*v) : nlohmann::json();
}

}  // namespace

double Series::spacing() const {
  if (t.size() < 2) throw DegenerateInput("series needs at least two rows to define a spacing");
  const double dt = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
  for (std::size_t k = 1; k < t.size(); ++k) {
    if (std::abs((t[k] - t[k - 1]) - dt) > 1e-6 * dt)
      throw DegenerateInput("series is not on a uniform grid");
  }
  return dt;
}

Series read_series_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  Series s;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string l = trim(line);
    if (l.empty()) continue;
    if (!header) {
      std::string compact;
      for (char c : l)
        if (c != ' ' && c != '\t') compact += c;
      if (compact != "t,x") throw DegenerateInput("CSV header must be 't,x'");
      header = true;
      continue;
    }
    const auto comma = l.find(',');
    if (comma == std::string::npos || l.find(',', comma + 1) != std::string::npos) {
      std::ostringstream os;
      os << "CSV line " << line_no << ": expected two fields";
      throw DegenerateInput(os.str());
    }
    const double t = parse_field(l.substr(0, comma), line_no);
    const double x = parse_field(l.substr(comma + 1), line_no);
    if (!s.t.empty() && !(t > s.t.back())) {
      std::ostringstream os;
      os << "CSV line " << line_no << ": t must be strictly increasing";
      throw DegenerateInput(os.str());
    }
    s.t.push_back(t);
    s.x.push_back(x);
  }
  if (!header) throw DegenerateInput("CSV input is empty");
  if (s.t.empty()) throw DegenerateInput("CSV input has no observations");
  return s;
}

Series read_series_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DegenerateInput("cannot open '" + path + "'");
  return read_series_csv(in);
}

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_path_csv(std::ostream& out, const PathSample& path) {
  out << "t,x\n";
  for (std::size_t k = 0; k < path.values.size(); ++k)
    out << format_double(path.grid.at(k)) << ',' << format_double(path.values[k]) << '\n';
}

nlohmann::json estimate_to_json(const EstimateResult& r) {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["method"] = r.method;
  j["theta_hat"] = r.theta_hat;
  j["mean_square"] = r.mean_square;
  j["T"] = r.horizon;
  j["std_error"] = optional_number(r.std_error);
  j["ci"] = r.ci ? nlohmann::json::array({r.ci->first, r.ci->second}) : nlohmann::json();
  j["alpha"] = r.alpha;
  j["be_rate"] = optional_number(r.be_rate);
  j["mesh_ok"] = r.mesh_ok ? nlohmann::json(*r.mesh_ok) : nlohmann::json();
  j["notes"] = r.notes;
  return j;
}

nlohmann::json asymptotics_to_json(const AsymptoticsReport& rep,
                                   const std::vector<std::pair<double, double>>& r_samples) {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["psi"] = rep.psi;
  j["psi_prime"] = rep.psi_prime;
  j["psi_second"] = rep.psi_second;
  j["T"] = rep.horizon;
  j["w"] = rep.w;
  j["R"] = rep.R;
  j["sigma2"] = optional_number(rep.sigma2_classical);
  j["regime"] = to_string(rep.rate.regime);
  j["rate_exponent"] = rep.rate.exponent;
  j["rate"] = rep.rate.description;
  j["be_bound"] = rep.be_bound;
  if (rep.moments) {
    j["q2"] = rep.moments->q2;
    j["q4"] = rep.moments->q4;
    j["fourth_moment_bound"] = optional_number(rep.fourth_moment_bound);
  }
  auto samples = nlohmann::json::array();
  for (const auto& [t, r] : r_samples) samples.push_back({{"t", t}, {"r", r}});
  j["r_samples"] = std::move(samples);
  return j;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DegenerateInput("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace langest
