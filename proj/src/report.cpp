#include "porebench/report.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>

#include "porebench/error.hpp"

namespace porebench {

Analysis analyze_geometry(const PoreImage& image, const AnalyzeOptions& options) {
  Analysis a;
  a.preprocess = preprocess_report(image, options.discontinuity_threshold);
  if (a.preprocess.n_components == 0)
    throw Error(ErrorCode::NoVoidSpace, "image has no void pixels");
  a.analyzed = options.clean ? keep_largest_component(image) : image;
  a.metrics = compute_metrics(a.analyzed, options.metrics);
  return a;
}

std::string fnv1a64_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
  return buf;
}

nlohmann::json to_json(const GeneratorSpec& s) {
  nlohmann::json j;
  j["kind"] = generator_kind_name(s.kind);
  if (is_shape(s.kind)) {
    j["radius"] = s.radius;
    j["half_width"] = s.half_width;
    j["half_height"] = s.half_height;
    j["rotation"] = s.rotation;
  } else if (is_noise(s.kind)) {
    j["scale"] = s.scale;
    j["threshold"] = s.threshold;
    if (s.kind == GeneratorKind::Fractal) {
      j["octaves"] = s.octaves;
      j["persistence"] = s.persistence;
    }
  } else {
    j["seeds"] = s.seeds;
    j["aperture"] = s.aperture;
    if (!s.seed_points.empty()) j["seed_points"] = s.seed_points;
  }
  j["rng_seed"] = s.rng_seed;
  return j;
}

GeneratorSpec generator_spec_from_json(const nlohmann::json& j) {
  GeneratorSpec s;
  const auto kind = parse_generator_kind(j.at("kind").get<std::string>());
  if (!kind) throw Error(ErrorCode::InvalidArgument, "unknown generator kind");
  s.kind = *kind;
  s.radius = j.value("radius", s.radius);
  s.half_width = j.value("half_width", s.half_width);
  s.half_height = j.value("half_height", s.half_height);
  s.rotation = j.value("rotation", s.rotation);
  s.scale = j.value("scale", s.scale);
  s.threshold = j.value("threshold", s.threshold);
  s.octaves = j.value("octaves", s.octaves);
  s.persistence = j.value("persistence", s.persistence);
  s.seeds = j.value("seeds", s.seeds);
  s.aperture = j.value("aperture", s.aperture);
  if (j.contains("seed_points")) s.seed_points = j["seed_points"].get<std::vector<std::array<double, 2>>>();
  s.rng_seed = j.value("rng_seed", s.rng_seed);
  return s;
}

nlohmann::json to_json(const PreprocessReport& r, bool cleaned) {
  return {
      {"cleaned", cleaned},
      {"n_components", r.n_components},
      {"void_pixels", r.void_pixels},
      {"largest_component_pixels", r.largest_component_pixels},
      {"largest_fraction", r.largest_fraction},
      {"high_discontinuity", r.high_discontinuity},
      {"removed_pixels", cleaned ? r.removed_pixels : 0},
      {"periodic_connectivity", {{"x", r.periodicity.connected_x}, {"y", r.periodicity.connected_y}}},
  };
}

nlohmann::json to_json(const MetricsReport& r) {
  auto opt = [](const auto& v) -> nlohmann::json {
    if (v) return *v;
    return nullptr;
  };
  return {
      {"porosity", r.porosity},
      {"n_pores", r.n_pores},
      {"mu_p", r.mean_pore_size},
      {"sigma_p", r.std_pore_size},
      {"S", r.specific_surface},
      {"Di", r.directionality},
      {"sigma_Di", r.directionality_std},
      {"connectivity", r.connectivity},
      {"tau", {{"x", opt(r.tau_x)}, {"y", opt(r.tau_y)}}},
      {"f_max", {{"x", opt(r.max_flow_x)}, {"y", opt(r.max_flow_y)}}},
  };
}

nlohmann::json to_json(const ClosureFit& f, const ClosureModel& model) {
  return {
      {"schema_version", kSchemaVersion},
      {"model", model.name},
      {"alpha", f.alpha},
      {"loss_kind", loss_kind_name(f.loss_kind)},
      {"loss_value", f.loss_value},
      {"n_iterations", f.n_iterations},
      {"n_evaluations", f.n_evaluations},
      {"converged", f.converged},
      {"underdetermined", f.underdetermined},
      {"failed_starts", f.failed_starts},
      {"best_start", f.best_start},
      {"per_sample_residuals", f.residuals},
  };
}

nlohmann::json analysis_document(const Analysis& a, const InputInfo& input,
                                 const AnalyzeOptions& options, const std::string& timestamp) {
  nlohmann::json warnings = nlohmann::json::array();
  for (const auto& w : a.metrics.warnings)
    warnings.push_back({{"code", w.code}, {"axis", w.axis}, {"message", w.message}});
  nlohmann::json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["input"] = {{"path", input.path},
                  {"width", a.analyzed.width()},
                  {"height", a.analyzed.height()},
                  {"checksum", input.checksum}};
  doc["preprocess"] = to_json(a.preprocess, options.clean);
  doc["metrics"] = to_json(a.metrics);
  doc["warnings"] = warnings;
  doc["options"] = {
      {"smoothing_radius", options.metrics.pore_size.smoothing_radius},
      {"discontinuity_threshold", options.discontinuity_threshold},
      {"periodic", {{"x", a.analyzed.periodic_x()}, {"y", a.analyzed.periodic_y()}}},
      {"pixel_length", a.analyzed.pixel_length()},
  };
  nlohmann::json seed = nullptr;
  if (input.seed) seed = *input.seed;
  doc["provenance"] = {{"version", kVersion}, {"timestamp", timestamp}, {"seed", seed}};
  return doc;
}

nlohmann::json error_document(std::string_view code, std::string_view message) {
  return {{"error", {{"code", code}, {"message", message}}}};
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace porebench
