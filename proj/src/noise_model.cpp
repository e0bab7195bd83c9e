#include "langest/noise_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "langest/errors.hpp"

namespace langest {

namespace {

void require_unit_interval(double value, const char* what, bool closed_right) {
  const bool ok = closed_right ? (value > 0.0 && value <= 1.0) : (value > 0.0 && value < 1.0);
  if (!ok || !std::isfinite(value)) {
    std::ostringstream os;
    os << what << " must lie in (0," << (closed_right ? "1]" : "1)") << ", got " << value;
    throw DomainError(os.str());
  }
}

}  // namespace

NoiseModel NoiseModel::brownian() {
  NoiseModel m;
  m.kind_ = NoiseKind::brownian;
  m.hurst_ = 0.5;
  return m;
}

NoiseModel NoiseModel::fbm(double hurst) {
  require_unit_interval(hurst, "hurst", false);
  NoiseModel m;
  m.kind_ = NoiseKind::fbm;
  m.hurst_ = hurst;
  return m;
}

NoiseModel NoiseModel::mixed(std::vector<NoiseModel> components) {
  if (components.empty()) throw DomainError("mixed model needs at least one component");
  for (const auto& c : components) {
    if (c.flavor() != Flavor::increment)
      throw FlavorError("mixed model components must be increment-flavor noises");
  }
  NoiseModel m;
  m.kind_ = NoiseKind::mixed;
  m.components_ = std::move(components);
  m.hurst_ = m.holder_index();
  return m;
}

NoiseModel NoiseModel::lamperti_fbm(double hurst) {
  require_unit_interval(hurst, "hurst", false);
  NoiseModel m;
  m.kind_ = NoiseKind::lamperti_fbm;
  m.hurst_ = hurst;
  return m;
}

NoiseModel NoiseModel::lamperti_bifbm(double hurst, double kappa) {
  require_unit_interval(hurst, "hurst", false);
  require_unit_interval(kappa, "kappa", true);
  NoiseModel m;
  m.kind_ = NoiseKind::lamperti_bifbm;
  m.hurst_ = hurst;
  m.kappa_ = kappa;
  return m;
}

Flavor NoiseModel::flavor() const noexcept {
  switch (kind_) {
    case NoiseKind::lamperti_fbm:
    case NoiseKind::lamperti_bifbm:
      return Flavor::stationary;
    default:
      return Flavor::increment;
  }
}

double NoiseModel::holder_index() const noexcept {
  switch (kind_) {
    case NoiseKind::brownian:
      return 0.5;
    case NoiseKind::fbm:
    case NoiseKind::lamperti_fbm:
      return hurst_;
    case NoiseKind::lamperti_bifbm:
      return hurst_ * kappa_;
    case NoiseKind::mixed: {
      double h = 1.0;
      for (const auto& c : components_) h = std::min(h, c.holder_index());
      return h;
    }
  }
  return hurst_;
}

double NoiseModel::self_similarity() const {
  switch (kind_) {
    case NoiseKind::lamperti_fbm:
      return hurst_;
    case NoiseKind::lamperti_bifbm:
      return hurst_ * kappa_;
    default:
      throw FlavorError("self-similarity index is defined for lamperti models only");
  }
}

std::string NoiseModel::describe() const {
  std::ostringstream os;
  os << to_string(kind_);
  switch (kind_) {
    case NoiseKind::fbm:
    case NoiseKind::lamperti_fbm:
      os << "(H=" << hurst_ << ")";
      break;
    case NoiseKind::lamperti_bifbm:
      os << "(H=" << hurst_ << ",K=" << kappa_ << ")";
      break;
    case NoiseKind::mixed: {
      os << "[";
      for (std::size_t i = 0; i < components_.size(); ++i) {
        if (i) os << ",";
        os << components_[i].describe();
      }
      os << "]";
      break;
    }
    case NoiseKind::brownian:
      break;
  }
  return os.str();
}

std::string to_string(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::brownian:
      return "brownian";
    case NoiseKind::fbm:
      return "fbm";
    case NoiseKind::mixed:
      return "mixed";
    case NoiseKind::lamperti_fbm:
      return "lamperti_fbm";
    case NoiseKind::lamperti_bifbm:
      return "lamperti_bifbm";
  }
  return "unknown";
}

NoiseKind noise_kind_from_string(const std::string& name) {
  if (name == "brownian") return NoiseKind::brownian;
  if (name == "fbm") return NoiseKind::fbm;
  if (name == "mixed") return NoiseKind::mixed;
  if (name == "lamperti_fbm" || name == "lamperti-fbm") return NoiseKind::lamperti_fbm;
  if (name == "lamperti_bifbm" || name == "lamperti-bifbm") return NoiseKind::lamperti_bifbm;
  throw DomainError("unknown noise model kind '" + name + "'");
}

double eval_v(const NoiseModel& model, double t) {
  if (model.flavor() != Flavor::increment)
    throw FlavorError(model.describe() + " has no variance function");
  if (!(t >= 0.0)) throw DomainError("eval_v needs t >= 0");
  switch (model.kind()) {
    case NoiseKind::brownian:
      return t;
    case NoiseKind::fbm:
      return t == 0.0 ? 0.0 : std::pow(t, 2.0 * model.hurst());
    case NoiseKind::mixed: {
      double sum = 0.0;
      for (const auto& c : model.components()) sum += eval_v(c, t);
      return sum;
    }
    default:
      break;
  }
  throw FlavorError(model.describe() + " has no variance function");
}

double eval_g(const NoiseModel& model, double t, double s) {
  return 0.5 * (eval_v(model, std::abs(t)) + eval_v(model, std::abs(s)) -
                eval_v(model, std::abs(t - s)));
}

double v_second_difference(const NoiseModel& model, double t, double h) {
  if (!(t >= 0.0 && h >= 0.0)) throw DomainError("v_second_difference needs t, h >= 0");
  switch (model.kind()) {
    case NoiseKind::brownian:
      return h + std::abs(t - h) - t;
    case NoiseKind::fbm: {
      if (h >= t)
        return eval_v(model, t + h) + eval_v(model, h - t) - 2.0 * eval_v(model, t);
      const double two_h = 2.0 * model.hurst();
      const double z = h / t;
      return std::pow(t, two_h) *
             (std::expm1(two_h * std::log1p(z)) + std::expm1(two_h * std::log1p(-z)));
    }
    case NoiseKind::mixed: {
      double sum = 0.0;
      for (const auto& c : model.components()) sum += v_second_difference(c, t, h);
      return sum;
    }
    default:
      break;
  }
  throw FlavorError(model.describe() + " has no variance function");
}

std::function<double(double)> variance_function(const NoiseModel& model) {
  if (model.flavor() != Flavor::increment)
    throw FlavorError(model.describe() + " has no variance function");
  return [model](double t) { return eval_v(model, t); };
}

bool ValidationReport::ok() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const ValidationCheck& c) { return !c.applicable || c.passed; });
}

const ValidationCheck* ValidationReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

const std::vector<double>& validation_grid() {
  static const std::vector<double> grid = [] {
    std::vector<double> g;
    constexpr int n = 200;
    for (int k = 0; k < n; ++k) g.push_back(std::pow(10.0, -4.0 + 6.0 * k / (n - 1)));
    for (int k = 1; k <= 100; ++k) g.push_back(static_cast<double>(k));
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end(),
                        [](double a, double b) { return std::abs(a - b) <= 1e-12 * b; }),
            g.end());
    return g;
  }();
  return grid;
}

ValidationCheck check_monotone(const std::function<double(double)>& v) {
  ValidationCheck c{"v_strictly_increasing", true, true, std::nullopt, ""};
  if (v(0.0) != 0.0) {
    c.passed = false;
    c.witness = 0.0;
    c.detail = "v(0) != 0";
    return c;
  }
  double prev = 0.0;
  for (double t : validation_grid()) {
    const double value = v(t);
    if (!(value > prev)) {
      c.passed = false;
      c.witness = t;
      c.detail = "v does not increase at t";
      return c;
    }
    prev = value;
  }
  return c;
}

ValidationCheck check_quadratic_growth(const std::function<double(double)>& v) {
  ValidationCheck c{"v_quadratic_growth", true, true, std::nullopt, ""};
  const double bound = 2.0 * (v(1.0) + 1.0);
  for (double t : validation_grid()) {
    if (t < 1.0) continue;
    if (v(t) > bound * t * t) {
      c.passed = false;
      c.witness = t;
      c.detail = "v(t) > 2(v(1)+1) t^2";
      return c;
    }
  }
  return c;
}

ValidationCheck check_holder(const std::function<double(double)>& v, double holder, double eps) {
  ValidationCheck c{"v_holder", true, true, std::nullopt, ""};
  const double bound = 2.0 * (v(1.0) + 1.0);
  const double exponent = 2.0 * holder - eps;
  for (double t : validation_grid()) {
    if (t > 1.0) break;
    if (v(t) > bound * std::pow(t, exponent)) {
      c.passed = false;
      c.witness = t;
      std::ostringstream os;
      os << "v(t) > C t^" << exponent;
      c.detail = os.str();
      return c;
    }
  }
  return c;
}

ValidationReport validate_variance_function(const std::function<double(double)>& v,
                                            double holder) {
  ValidationReport report;
  report.checks.push_back(check_monotone(v));
  report.checks.push_back(check_quadratic_growth(v));
  report.checks.push_back(check_holder(v, holder));
  return report;
}

ValidationReport validate_model(const NoiseModel& model) {
  if (model.flavor() == Flavor::increment)
    return validate_variance_function(variance_function(model), model.holder_index());

  ValidationReport report;
  for (const char* name : {"v_strictly_increasing", "v_quadratic_growth", "v_holder"}) {
    report.checks.push_back(
        {name, false, true, std::nullopt, "stationary-flavor model has no variance function"});
  }
  const double h = model.self_similarity();
  report.checks.push_back({"self_similarity_in_unit_interval", true, h > 0.0 && h < 1.0,
                           std::nullopt, ""});
  return report;
}

void to_json(nlohmann::json& j, const NoiseModel& model) {
  j = nlohmann::json{{"kind", to_string(model.kind())}};
  switch (model.kind()) {
    case NoiseKind::fbm:
    case NoiseKind::lamperti_fbm:
      j["hurst"] = model.hurst();
      break;
    case NoiseKind::lamperti_bifbm:
      j["hurst"] = model.hurst();
      j["kappa"] = model.kappa();
      break;
    case NoiseKind::mixed: {
      auto arr = nlohmann::json::array();
      for (const auto& c : model.components()) arr.push_back(c);
      j["components"] = std::move(arr);
      break;
    }
    case NoiseKind::brownian:
      break;
  }
}

NoiseModel model_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    throw DomainError("model descriptor must be an object with a string 'kind'");
  const auto number = [&](const char* key) {
    if (!j.contains(key) || !j[key].is_number())
      throw DomainError(std::string("model descriptor needs numeric '") + key + "'");
    return j[key].get<double>();
  };
  switch (noise_kind_from_string(j["kind"].get<std::string>())) {
    case NoiseKind::brownian:
      return NoiseModel::brownian();
    case NoiseKind::fbm:
      return NoiseModel::fbm(number("hurst"));
    case NoiseKind::lamperti_fbm:
      return NoiseModel::lamperti_fbm(number("hurst"));
    case NoiseKind::lamperti_bifbm:
      return NoiseModel::lamperti_bifbm(number("hurst"), number("kappa"));
    case NoiseKind::mixed: {
      if (!j.contains("components") || !j["components"].is_array())
        throw DomainError("mixed model descriptor needs a 'components' array");
      std::vector<NoiseModel> parts;
      for (const auto& c : j["components"]) parts.push_back(model_from_json(c));
      return NoiseModel::mixed(std::move(parts));
    }
  }
  throw DomainError("unreachable model kind");
}

void from_json(const nlohmann::json& j, NoiseModel& model) { model = model_from_json(j); }

}  // namespace langest
