#include "porebench/closure.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "porebench/error.hpp"

namespace porebench {

namespace {

double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

void need_features(std::span<const double> f, std::size_t n, const char* model) {
  if (f.size() < n)
    throw Error(ErrorCode::InvalidArgument, std::string(model) + " model needs " +
                                                std::to_string(n) + " feature(s)");
}

// Nelder-Mead state for one start.
struct StartResult {
  bool ok = false;
  std::vector<double> x;
  double f = std::numeric_limits<double>::infinity();
  int iterations = 0;
  std::size_t evaluations = 0;
  bool converged = false;
};

class Objective {
 public:
  Objective(const ClosureModel& model, const std::vector<Sample>& samples, LossKind kind)
      : model_(model), samples_(samples), kind_(kind) {}

  void clamp(std::vector<double>& x) const {
    for (std::size_t i = 0; i < model_.bounds.size() && i < x.size(); ++i)
      x[i] = std::clamp(x[i], model_.bounds[i].first, model_.bounds[i].second);
  }

  double operator()(const std::vector<double>& x) {
    ++evaluations;
    return loss(model_, x, samples_, kind_);
  }

  std::size_t evaluations = 0;

 private:
  const ClosureModel& model_;
  const std::vector<Sample>& samples_;
  LossKind kind_;
};

struct NonFinite {};

StartResult nelder_mead(Objective& objective, std::vector<double> x0, const FitOptions& opt) {
  constexpr double kReflect = 1.0, kExpand = 2.0, kContract = 0.5, kShrink = 0.5;
  const std::size_t n = x0.size();
  StartResult r;
  objective.evaluations = 0;

  auto eval = [&](std::vector<double>& x) {
    objective.clamp(x);
    const double v = objective(x);
    if (!std::isfinite(v)) throw NonFinite{};
    return v;
  };

  std::vector<std::vector<double>> simplex(n + 1, x0);
  std::vector<double> fv(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    auto& v = simplex[i + 1];
    const double step = opt.initial_step * std::max(1.0, std::abs(x0[i]));
    v[i] += step;
    objective.clamp(v);
    if (v[i] == x0[i]) v[i] = x0[i] - step;  // pushed onto a bound
  }
  try {
    for (std::size_t i = 0; i <= n; ++i) fv[i] = eval(simplex[i]);

    std::vector<std::size_t> order(n + 1);
    std::vector<double> centroid(n), xr(n), xe(n), xc(n);
    int iter = 0;
    for (;;) {
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
      const std::size_t best = order.front(), worst = order.back();
      const std::size_t second = order[n - 1];  // second worst

      double diameter = 0.0;
      for (std::size_t i = 0; i <= n; ++i)
        for (std::size_t k = 0; k < n; ++k)
          diameter = std::max(diameter, std::abs(simplex[i][k] - simplex[best][k]));
      const double spread = fv[worst] - fv[best];
      if (opt.max_iter > 0 && diameter < opt.xtol && spread <= opt.ftol) {
        r.converged = true;
        break;
      }
      if (iter >= opt.max_iter) break;
      ++iter;

      std::fill(centroid.begin(), centroid.end(), 0.0);
      for (std::size_t i = 0; i <= n; ++i) {
        if (i == worst) continue;
        for (std::size_t k = 0; k < n; ++k) centroid[k] += simplex[i][k] / static_cast<double>(n);
      }
      for (std::size_t k = 0; k < n; ++k)
        xr[k] = centroid[k] + kReflect * (centroid[k] - simplex[worst][k]);
      const double fr = eval(xr);

      if (fr < fv[best]) {
        for (std::size_t k = 0; k < n; ++k) xe[k] = centroid[k] + kExpand * (xr[k] - centroid[k]);
        const double fe = eval(xe);
        if (fe < fr) {
          simplex[worst] = xe;
          fv[worst] = fe;
        } else {
          simplex[worst] = xr;
          fv[worst] = fr;
        }
        continue;
      }
      if (fr < fv[second]) {
        simplex[worst] = xr;
        fv[worst] = fr;
        continue;
      }
      bool shrink = false;
      if (fr < fv[worst]) {
        for (std::size_t k = 0; k < n; ++k) xc[k] = centroid[k] + kContract * (xr[k] - centroid[k]);
        const double fc = eval(xc);
        if (fc <= fr) {
          simplex[worst] = xc;
          fv[worst] = fc;
        } else {
          shrink = true;
        }
      } else {
        for (std::size_t k = 0; k < n; ++k)
          xc[k] = centroid[k] + kContract * (simplex[worst][k] - centroid[k]);
        const double fc = eval(xc);
        if (fc < fv[worst]) {
          simplex[worst] = xc;
          fv[worst] = fc;
        } else {
          shrink = true;
        }
      }
      if (shrink) {
        for (std::size_t i = 0; i <= n; ++i) {
          if (i == best) continue;
          for (std::size_t k = 0; k < n; ++k)
            simplex[i][k] = simplex[best][k] + kShrink * (simplex[i][k] - simplex[best][k]);
          fv[i] = eval(simplex[i]);
        }
      }
    }
    r.iterations = iter;
    const auto best = static_cast<std::size_t>(std::min_element(fv.begin(), fv.end()) - fv.begin());
    r.x = simplex[best];
    r.f = fv[best];
    r.ok = true;
  } catch (const NonFinite&) {
    r.ok = false;
  }
  r.evaluations = objective.evaluations;
  return r;
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  const auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

ClosureModel constant_model() {
  return {"constant", 1, [](std::span<const double> a, std::span<const double>) { return a[0]; }, {}};
}

ClosureModel linear_model(std::size_t n_features) {
  return {"linear", n_features + 1,
          [n_features](std::span<const double> a, std::span<const double> x) {
            need_features(x, n_features, "linear");
            double v = a[0];
            for (std::size_t i = 0; i < n_features; ++i) v += a[i + 1] * x[i];
            return v;
          },
          {}};
}

ClosureModel quadratic_model() {
  return {"quadratic", 3,
          [](std::span<const double> a, std::span<const double> x) {
            need_features(x, 1, "quadratic");
            return a[0] + x[0] * (a[1] + a[2] * x[0]);
          },
          {}};
}

ClosureModel power_model() {
  return {"power", 2,
          [](std::span<const double> a, std::span<const double> x) {
            need_features(x, 1, "power");
            if (!(x[0] > 0.0)) return std::numeric_limits<double>::quiet_NaN();
            return a[0] * std::pow(x[0], a[1]);
          },
          {}};
}

ClosureModel make_model(std::string_view name, std::size_t n_features) {
  if (name == "constant") return constant_model();
  if (name == "linear") return linear_model(n_features);
  if (name == "quadratic") return quadratic_model();
  if (name == "power") return power_model();
  throw Error(ErrorCode::InvalidArgument, "unknown closure model '" + std::string(name) + "'");
}

std::string_view loss_kind_name(LossKind kind) noexcept {
  return kind == LossKind::MSE ? "MSE" : "MAPE";
}

std::optional<LossKind> parse_loss_kind(std::string_view name) noexcept {
  if (name == "mse" || name == "MSE") return LossKind::MSE;
  if (name == "mape" || name == "MAPE") return LossKind::MAPE;
  return std::nullopt;
}

std::vector<double> residuals(const ClosureModel& model, std::span<const double> alpha,
                              const std::vector<Sample>& samples) {
  if (alpha.size() != model.n_params)
    throw Error(ErrorCode::InvalidArgument,
                model.name + " model takes " + std::to_string(model.n_params) + " parameter(s)");
  std::vector<double> r;
  r.reserve(samples.size());
  for (const auto& s : samples) r.push_back(s.target - model.predict(alpha, s.features));
  return r;
}

double loss(const ClosureModel& model, std::span<const double> alpha,
            const std::vector<Sample>& samples, LossKind kind) {
  if (samples.empty()) throw Error(ErrorCode::EmptySamples, "loss needs at least one sample");
  if (kind == LossKind::MAPE)
    for (const auto& s : samples)
      if (s.target == 0.0)
        throw Error(ErrorCode::MapeZeroTarget, "MAPE is undefined for a zero target");
  const auto r = residuals(model, alpha, samples);
  double total = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i)
    total += kind == LossKind::MSE ? r[i] * r[i] : std::abs(r[i] / samples[i].target) * 100.0;
  return total / static_cast<double>(r.size());
}

ClosureFit fit(const ClosureModel& model, const std::vector<Sample>& samples, LossKind kind,
               const FitOptions& options) {
  if (samples.empty()) throw Error(ErrorCode::EmptySamples, "fit needs at least one sample");
  if (model.n_params == 0) throw Error(ErrorCode::InvalidArgument, "model has no parameters");
  if (options.n_starts < 1) throw Error(ErrorCode::InvalidArgument, "n_starts must be positive");
  if (!model.bounds.empty() && model.bounds.size() != model.n_params)
    throw Error(ErrorCode::InvalidArgument, "bounds must cover every parameter");
  // Surface argument errors (MapeZeroTarget, feature count) before searching.
  std::vector<double> x0 = options.initial;
  if (x0.empty()) {
    x0.assign(model.n_params, 0.0);
    for (std::size_t i = 0; i < model.bounds.size(); ++i)
      x0[i] = 0.5 * (model.bounds[i].first + model.bounds[i].second);
  }
  if (x0.size() != model.n_params)
    throw Error(ErrorCode::InvalidArgument, "initial point has the wrong dimension");
  (void)loss(model, x0, samples, kind);

  std::mt19937_64 rng(options.seed);
  Objective objective(model, samples, kind);
  ClosureFit best;
  best.loss_kind = kind;
  best.underdetermined = samples.size() < model.n_params;
  bool have = false;
  for (int s = 0; s < options.n_starts; ++s) {
    std::vector<double> start = x0;
    if (s > 0) {
      for (std::size_t i = 0; i < start.size(); ++i) {
        const double u = unit_uniform(rng);
        if (!model.bounds.empty())
          start[i] = model.bounds[i].first + u * (model.bounds[i].second - model.bounds[i].first);
        else
          start[i] = x0[i] + options.start_spread * std::max(1.0, std::abs(x0[i])) * (2.0 * u - 1.0);
      }
    }
    const StartResult r = nelder_mead(objective, start, options);
    best.n_evaluations += r.evaluations;
    if (!r.ok) {
      ++best.failed_starts;
      continue;
    }
    if (!have || r.f < best.loss_value) {
      have = true;
      best.alpha = r.x;
      best.loss_value = r.f;
      best.n_iterations = r.iterations;
      best.converged = r.converged;
      best.best_start = s;
    }
  }
  if (!have)
    throw Error(ErrorCode::NonFiniteLoss, "the loss was non-finite in every start");
  best.residuals = residuals(model, best.alpha, samples);
  return best;
}

std::vector<Sample> closure_residual_data(const ScalarField& m, const ScalarField& n,
                                          const AveragingScheme& scheme, const SampleSpec& spec) {
  if (!(m.mask() == n.mask()))
    throw Error(ErrorCode::MaskMismatch, "pore fields do not share a mask");
  const auto dm = decompose(m, scheme);
  const auto dn = decompose(n, scheme);
  const auto product = variation_product(dm.variation, dn.variation, scheme);
  const auto mean_m = average(m, scheme);
  const auto mean_n = average(n, scheme);

  std::vector<Sample> samples;
  for (std::size_t k = 0; k < product.values.size(); ++k) {
    if (product.void_counts[k] == 0) continue;
    Sample s;
    s.features = spec.metric_features;
    if (spec.include_window_means) {
      s.features.push_back(mean_m.values[k]);
      s.features.push_back(mean_n.values[k]);
    }
    s.target = product.values[k];
    samples.push_back(std::move(s));
  }
  return samples;
}

std::vector<double> select_metric_features(const MetricsReport& r,
                                           const std::vector<std::string>& names) {
  std::vector<double> out;
  for (const auto& name : names) {
    auto need = [&](const auto& opt) {
      if (!opt)
        throw Error(ErrorCode::InvalidArgument, "metric '" + name + "' is undefined for this geometry");
      return static_cast<double>(*opt);
    };
    if (name == "porosity") out.push_back(r.porosity);
    else if (name == "n_pores") out.push_back(r.n_pores);
    else if (name == "mu_p") out.push_back(r.mean_pore_size);
    else if (name == "sigma_p") out.push_back(r.std_pore_size);
    else if (name == "S") out.push_back(r.specific_surface);
    else if (name == "sigma_Di") out.push_back(r.directionality_std);
    else if (name == "connectivity") out.push_back(r.connectivity);
    else if (name == "tau_x") out.push_back(need(r.tau_x));
    else if (name == "tau_y") out.push_back(need(r.tau_y));
    else if (name == "f_max_x") out.push_back(need(r.max_flow_x));
    else if (name == "f_max_y") out.push_back(need(r.max_flow_y));
    else if (name.size() == 3 && name.starts_with("Di") && name[2] >= '0' && name[2] <= '7')
      out.push_back(r.directionality[static_cast<std::size_t>(name[2] - '0')]);
    else
      throw Error(ErrorCode::InvalidArgument, "unknown metric '" + name + "'");
  }
  return out;
}

void write_samples_csv(const std::vector<Sample>& samples, std::ostream& out,
                       const std::vector<std::string>& feature_names) {
  const std::size_t nf = samples.empty() ? feature_names.size() : samples.front().features.size();
  for (std::size_t i = 0; i < nf; ++i)
    out << (i < feature_names.size() ? feature_names[i] : "x" + std::to_string(i)) << ',';
  out << "target\n";
  std::ostringstream cell;
  cell.precision(17);
  for (const auto& s : samples) {
    if (s.features.size() != nf)
      throw Error(ErrorCode::MalformedSamples, "samples have differing feature counts");
    cell.str("");
    for (double f : s.features) cell << f << ',';
    cell << s.target << '\n';
    out << cell.str();
  }
}

std::vector<Sample> read_samples_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line))
    throw Error(ErrorCode::MalformedSamples, "samples CSV has no header row");
  const std::size_t columns = split_csv(line).size();
  if (columns < 1) throw Error(ErrorCode::MalformedSamples, "samples CSV header is empty");
  std::vector<Sample> samples;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != columns)
      throw Error(ErrorCode::MalformedSamples, "row " + std::to_string(row) + " has " +
                                                   std::to_string(cells.size()) + " columns, expected " +
                                                   std::to_string(columns));
    std::vector<double> values;
    for (const auto& c : cells) {
      char* end = nullptr;
      const double v = std::strtod(c.c_str(), &end);
      if (c.empty() || end != c.c_str() + c.size())
        throw Error(ErrorCode::MalformedSamples,
                    "row " + std::to_string(row) + ": '" + c + "' is not a number");
      values.push_back(v);
    }
    Sample s;
    s.target = values.back();
    values.pop_back();
    s.features = std::move(values);
    samples.push_back(std::move(s));
  }
  return samples;
}

void write_samples_json(const std::vector<Sample>& samples, std::ostream& out) {
  nlohmann::json doc;
  doc["schema_version"] = 1;
  doc["samples"] = nlohmann::json::array();
  for (const auto& s : samples) doc["samples"].push_back({{"features", s.features}, {"target", s.target}});
  out << doc.dump(2) << '\n';
}

std::vector<Sample> read_samples_json(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
    const auto& list = doc.is_array() ? doc : doc.at("samples");
    std::vector<Sample> samples;
    for (const auto& item : list)
      samples.push_back({item.at("features").get<std::vector<double>>(), item.at("target").get<double>()});
    return samples;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedSamples, std::string("samples JSON: ") + e.what());
  }
}

std::vector<Sample> read_samples(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::FileError, "cannot open " + path.string());
  return path.extension() == ".json" ? read_samples_json(in) : read_samples_csv(in);
}

void write_samples(const std::vector<Sample>& samples, const std::filesystem::path& path,
                   const std::vector<std::string>& feature_names) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::FileError, "cannot create " + path.string());
  if (path.extension() == ".json")
    write_samples_json(samples, out);
  else
    write_samples_csv(samples, out, feature_names);
}

}  // namespace porebench
