#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "porebench/averaging.hpp"
#include "porebench/metrics.hpp"

namespace porebench {

/// One fitting sample: closure target with the features it is predicted from.
struct Sample {
  std::vector<double> features;
  double target = 0.0;
};

using ClosureFunction =
    std::function<double(std::span<const double> alpha, std::span<const double> features)>;

/// Parametric closure F(alpha, features). Must be deterministic and safe to
/// call concurrently.
struct ClosureModel {
  std::string name;
  std::size_t n_params = 0;
  ClosureFunction predict;
  /// Optional per-parameter [lower, upper] box; empty means unbounded.
  std::vector<std::pair<double, double>> bounds;
};

/// F = a0.
ClosureModel constant_model();
/// F = a0 + sum_i a(i+1) * x_i.
ClosureModel linear_model(std::size_t n_features);
/// F = a0 + a1 * x0 + a2 * x0^2.
ClosureModel quadratic_model();
/// F = a0 * x0^a1 (x0 > 0).
ClosureModel power_model();
/// Builds one of the models above by name; throws InvalidArgument.
ClosureModel make_model(std::string_view name, std::size_t n_features);

enum class LossKind { MSE, MAPE };

std::string_view loss_kind_name(LossKind kind) noexcept;
std::optional<LossKind> parse_loss_kind(std::string_view name) noexcept;

/// target - prediction per sample.
std::vector<double> residuals(const ClosureModel& model, std::span<const double> alpha,
                              const std::vector<Sample>& samples);

/// MSE: mean squared residual. MAPE: mean |residual / target| * 100.
/// Throws EmptySamples, MapeZeroTarget.
double loss(const ClosureModel& model, std::span<const double> alpha,
            const std::vector<Sample>& samples, LossKind kind);

struct FitOptions {
  int n_starts = 8;
  int max_iter = 10000;
  double xtol = 1e-8;
  double ftol = 1e-10;
  std::uint64_t seed = 0;
  /// First start point; zeros (or the box center) when empty.
  std::vector<double> initial;
  /// Initial simplex edge, relative to max(1, |x|) per coordinate.
  double initial_step = 0.5;
  /// Half-width of the region unbounded random starts are drawn from,
  /// relative to max(1, |initial|).
  double start_spread = 2.0;
};

struct ClosureFit {
  std::vector<double> alpha;
  double loss_value = 0.0;
  LossKind loss_kind = LossKind::MSE;
  int n_iterations = 0;
  std::size_t n_evaluations = 0;
  bool converged = false;
  bool underdetermined = false;
  int failed_starts = 0;
  int best_start = 0;
  std::vector<double> residuals;
};

/// Multi-start Nelder-Mead minimization of the loss (coefficients 1, 2,
/// 0.5, 0.5). A start stops once the simplex is smaller than xtol and its
/// loss spread is below ftol, or after max_iter iterations.
ClosureFit fit(const ClosureModel& model, const std::vector<Sample>& samples, LossKind kind,
               const FitOptions& options = {});

struct SampleSpec {
  /// Appended first to every sample's features.
  std::vector<double> metric_features;
  /// Append the window means of both fields.
  bool include_window_means = true;
};

/// One sample per non-empty window: target is the window average of the
/// product of the two fields' variations, features are the caller's metric
/// values followed by the window means. Throws MaskMismatch.
std::vector<Sample> closure_residual_data(const ScalarField& m, const ScalarField& n,
                                          const AveragingScheme& scheme,
                                          const SampleSpec& spec = {});

/// Values of named metrics (porosity, n_pores, mu_p, sigma_p, S, Di0..Di7,
/// sigma_Di, connectivity, tau_x, tau_y, f_max_x, f_max_y).
std::vector<double> select_metric_features(const MetricsReport& report,
                                           const std::vector<std::string>& names);

/// CSV with a header row; feature columns then the target column last.
void write_samples_csv(const std::vector<Sample>& samples, std::ostream& out,
                       const std::vector<std::string>& feature_names = {});
std::vector<Sample> read_samples_csv(std::istream& in);

void write_samples_json(const std::vector<Sample>& samples, std::ostream& out);
std::vector<Sample> read_samples_json(std::istream& in);

/// Chooses the format by extension (.json, otherwise CSV).
std::vector<Sample> read_samples(const std::filesystem::path& path);
void write_samples(const std::vector<Sample>& samples, const std::filesystem::path& path,
                   const std::vector<std::string>& feature_names = {});

}  // namespace porebench
