#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "porebench/closure.hpp"
#include "porebench/geometry.hpp"
#include "porebench/metrics.hpp"
#include "porebench/preprocess.hpp"

namespace porebench {

inline constexpr std::string_view kVersion = "0.1.0";
/// Bumped whenever a JSON document layout changes.
inline constexpr int kSchemaVersion = 1;

struct AnalyzeOptions {
  bool clean = false;  // drop every void component but the largest first
  double discontinuity_threshold = 0.5;
  MetricsOptions metrics;
};

struct Analysis {
  PreprocessReport preprocess;
  PoreImage analyzed;  // the image the metrics were computed on
  MetricsReport metrics;
};

/// Preprocess report, optional cleanup, then every metric.
Analysis analyze_geometry(const PoreImage& image, const AnalyzeOptions& options = {});

/// FNV-1a 64-bit digest, formatted as "fnv1a64:<16 hex digits>".
std::string fnv1a64_hex(std::string_view bytes);

nlohmann::json to_json(const GeneratorSpec& spec);
GeneratorSpec generator_spec_from_json(const nlohmann::json& j);
nlohmann::json to_json(const PreprocessReport& report, bool cleaned);
nlohmann::json to_json(const MetricsReport& report);
nlohmann::json to_json(const ClosureFit& fit, const ClosureModel& model);

struct InputInfo {
  std::string path;
  std::string checksum;
  std::optional<std::uint64_t> seed;  // generator seed from a sidecar, when known
};

/// Complete analyze document. The timestamp lives only in
/// provenance.timestamp.
nlohmann::json analysis_document(const Analysis& analysis, const InputInfo& input,
                                 const AnalyzeOptions& options, const std::string& timestamp);

/// {"error": {"code": ..., "message": ...}}
nlohmann::json error_document(std::string_view code, std::string_view message);

/// Current UTC time in ISO 8601.
std::string utc_timestamp();

}  // namespace porebench
