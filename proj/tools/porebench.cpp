// porebench: generate geometries, analyze them, average fields, fit closures.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "porebench/averaging.hpp"
#include "porebench/closure.hpp"
#include "porebench/error.hpp"
#include "porebench/field_io.hpp"
#include "porebench/geometry.hpp"
#include "porebench/metrics.hpp"
#include "porebench/parallel.hpp"
#include "porebench/preprocess.hpp"
#include "porebench/raster_io.hpp"
#include "porebench/report.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace porebench;

namespace {

constexpr int kRuntimeError = 1;

std::string read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::FileError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& text, const std::optional<fs::path>& path) {
  if (!path) {
    std::cout << text << '\n';
    return;
  }
  std::ofstream out(*path, std::ios::binary);
  if (!out) throw Error(ErrorCode::FileError, "cannot write " + path->string());
  out << text << '\n';
}

std::string dump(const json& j) { return j.dump(2); }

// Options shared by everything that reads a geometry.
struct GeometryFlags {
  bool no_periodic_x = false;
  bool no_periodic_y = false;
  double pixel_length = 1.0;

  void add(CLI::App& cmd) {
    cmd.add_flag("--no-periodic-x", no_periodic_x, "Treat the x boundaries as walls");
    cmd.add_flag("--no-periodic-y", no_periodic_y, "Treat the y boundaries as walls");
    cmd.add_option("--pixel-length", pixel_length, "Physical length of one pixel")
        ->check(CLI::PositiveNumber);
  }

  PoreImage load(const fs::path& path) const {
    PoreImage img = parse_raster(read_bytes(path));
    apply(img);
    return img;
  }

  void apply(PoreImage& img) const {
    img.set_periodic(!no_periodic_x, !no_periodic_y);
    img.set_pixel_length(pixel_length);
  }
};

struct SchemeFlags {
  std::string kind = "full";
  std::vector<int> sub{1, 1};
  std::vector<int> filter{1, 1};
  bool superficial = false;

  void add(CLI::App& cmd) {
    cmd.add_option("--scheme", kind, "full, sub or convolutional")
        ->check(CLI::IsMember({"full", "sub", "convolutional"}));
    cmd.add_option("--sub", sub, "Sub-averaging regions NX NY")->expected(2);
    cmd.add_option("--filter", filter, "Convolution filter size W H (odd)")->expected(2);
    cmd.add_flag("--superficial", superficial, "Divide by all window pixels");
  }

  AveragingScheme scheme() const {
    AveragingScheme s;
    s.kind = *parse_averaging_kind(kind);
    s.sub_nx = sub[0];
    s.sub_ny = sub[1];
    s.filter_w = filter[0];
    s.filter_h = filter[1];
    s.superficial = superficial;
    return s;
  }
};

json scheme_json(const AveragingScheme& s) {
  json j{{"kind", averaging_kind_name(s.kind)}, {"superficial", s.superficial}};
  if (s.kind == AveragingKind::Sub) j["sub"] = {s.sub_nx, s.sub_ny};
  if (s.kind == AveragingKind::Convolutional) j["filter"] = {s.filter_w, s.filter_h};
  return j;
}

json averages_json(const WindowAverages& a) {
  json values = json::array();
  for (double v : a.values) values.push_back(std::isnan(v) ? json(nullptr) : json(v));
  json j{{"nx", a.nx}, {"ny", a.ny}, {"values", values}, {"empty_windows", a.empty_windows()}};
  if (a.kind == AveragingKind::Full) j["scalar"] = values.front();
  return j;
}

ScalarField load_field(const fs::path& path, const std::optional<fs::path>& mask_path,
                       const GeometryFlags& geo) {
  std::optional<PoreImage> mask;
  if (mask_path) mask = geo.load(*mask_path);
  ScalarField f = read_field(path, mask);
  if (mask) return f;
  // Without a mask the NaN pattern defines it; geometry flags still apply.
  PoreImage m = f.mask();
  geo.apply(m);
  return ScalarField(std::move(m), f.values());
}

// --- generate --------------------------------------------------------------

struct GenerateCmd {
  std::string kind;
  GeneratorSpec spec;
  int width = PoreImage::kDefaultResolution;
  int height = PoreImage::kDefaultResolution;
  std::optional<fs::path> out;
  bool plain = false;

  void add(CLI::App& app) {
    auto* cmd = app.add_subcommand("generate", "Write a periodic geometry and its JSON sidecar");
    cmd->add_option("--kind", kind, "square, rectangle, circle, ellipse, triangle, cross, perlin, fractal, voronoi")
        ->required();
    cmd->add_option("--width", width, "Image width")->check(CLI::PositiveNumber);
    cmd->add_option("--height", height, "Image height")->check(CLI::PositiveNumber);
    cmd->add_option("--radius", spec.radius);
    cmd->add_option("--half-width", spec.half_width);
    cmd->add_option("--half-height", spec.half_height);
    cmd->add_option("--rotation", spec.rotation, "Degrees, counterclockwise");
    cmd->add_option("--scale", spec.scale, "Noise lattice wavelength in pixels");
    cmd->add_option("--threshold", spec.threshold, "Void iff noise >= threshold");
    cmd->add_option("--octaves", spec.octaves);
    cmd->add_option("--persistence", spec.persistence);
    cmd->add_option("--seeds", spec.seeds, "Voronoi seed count");
    cmd->add_option("--aperture", spec.aperture, "Voronoi channel half-width");
    cmd->add_option("--seed", spec.rng_seed, "Random seed");
    cmd->add_option("--out", out, "Output PBM (default <kind>.pbm)");
    cmd->add_flag("--plain", plain, "Write plain P1 instead of P4");
    cmd->callback([this] { run(); });
  }

  void run() {
    const auto k = parse_generator_kind(kind);
    if (!k) throw CLI::ValidationError("--kind", "unknown generator kind '" + kind + "'");
    spec.kind = *k;
    const PoreImage img = generate(spec, width, height);
    const fs::path path = out.value_or(fs::path(kind + ".pbm"));
    std::ostringstream bytes;
    write_raster(img, bytes, plain ? PnmEncoding::Plain : PnmEncoding::Binary);
    {
      std::ofstream f(path, std::ios::binary);
      if (!f) throw Error(ErrorCode::FileError, "cannot write " + path.string());
      f << bytes.str();
    }
    const json sidecar{
        {"schema_version", kSchemaVersion},
        {"spec", to_json(spec)},
        {"width", width},
        {"height", height},
        {"seed", spec.rng_seed},
        {"porosity", porosity(img)},
        {"checksum", fnv1a64_hex(bytes.str())},
        {"version", kVersion},
    };
    fs::path side = path;
    side.replace_extension(".json");
    write_text(dump(sidecar), side);
  }
};

// --- analyze ---------------------------------------------------------------

struct AnalyzeCmd {
  std::optional<fs::path> input;
  std::optional<fs::path> batch;
  std::optional<fs::path> out;
  std::optional<fs::path> debug_dir;
  GeometryFlags geo;
  AnalyzeOptions options;
  int* status = nullptr;

  void add(CLI::App& app, int& exit_status) {
    status = &exit_status;
    auto* cmd = app.add_subcommand("analyze", "Preprocess a geometry and compute every metric");
    auto* in = cmd->add_option("input", input, "Geometry file (PBM or PGM)");
    auto* bt = cmd->add_option("--batch", batch, "Analyze every .pbm/.pgm file in a directory")
                   ->check(CLI::ExistingDirectory);
    in->excludes(bt);
    cmd->add_option("--out", out, "Output JSON file, or directory with --batch");
    cmd->add_flag("--clean", options.clean, "Keep only the largest void component");
    cmd->add_option("--smoothing-radius", options.metrics.pore_size.smoothing_radius)
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--discontinuity-threshold", options.discontinuity_threshold)
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--debug-dir", debug_dir, "Write distance and segmentation overlays here");
    geo.add(*cmd);
    cmd->callback([this] { run(); });
  }

  // Analysis document on success, error document otherwise.
  json analyze_file(const fs::path& path, const std::string& timestamp, bool& ok) const {
    try {
      const std::string bytes = read_bytes(path);
      PoreImage img = parse_raster(bytes);
      geo.apply(img);
      InputInfo info{path.string(), fnv1a64_hex(bytes), sidecar_seed(path)};
      const Analysis a = analyze_geometry(img, options);
      if (debug_dir) write_overlays(a.analyzed, path);
      ok = true;
      return analysis_document(a, info, options, timestamp);
    } catch (const Error& e) {
      ok = false;
      json doc = error_document(e.code_name(), e.what());
      doc["input"] = {{"path", path.string()}};
      return doc;
    }
  }

  static std::optional<std::uint64_t> sidecar_seed(const fs::path& path) {
    fs::path side = path;
    side.replace_extension(".json");
    std::ifstream in(side);
    if (!in) return std::nullopt;
    const json j = json::parse(in, nullptr, false);
    if (j.is_discarded() || !j.contains("seed") || !j["seed"].is_number_unsigned()) return std::nullopt;
    return j["seed"].get<std::uint64_t>();
  }

  void write_overlays(const PoreImage& img, const fs::path& path) const {
    fs::create_directories(*debug_dir);
    const std::string stem = path.stem().string();
    const auto dist = distance_transform(img);
    double top = 0.0;
    for (double d : dist)
      if (std::isfinite(d)) top = std::max(top, d);
    std::vector<std::uint8_t> gray(img.size(), 0);
    for (std::size_t i = 0; i < img.size(); ++i) {
      if (!img.is_void(i)) continue;
      const double d = std::isfinite(dist[i]) ? dist[i] : top;
      gray[i] = static_cast<std::uint8_t>(top > 0 ? 1 + std::lround(254.0 * d / top) : 255);
    }
    write_graymap(img.width(), img.height(), gray, *debug_dir / (stem + ".distance.pgm"));
    const auto psd = pore_size_distribution(img, options.metrics.pore_size);
    for (std::size_t i = 0; i < img.size(); ++i) {
      const auto s = psd.segments[i];
      // Spread consecutive pore ids over the gray range.
      gray[i] = s < 0 ? 0 : static_cast<std::uint8_t>(1 + (static_cast<std::uint32_t>(s) * 97u) % 255u);
    }
    write_graymap(img.width(), img.height(), gray, *debug_dir / (stem + ".segments.pgm"));
  }

  void run() {
    const std::string timestamp = utc_timestamp();
    if (!batch) {
      if (!input) throw CLI::ValidationError("input", "an input file or --batch is required");
      bool ok = false;
      const json doc = analyze_file(*input, timestamp, ok);
      write_text(dump(doc), out);
      if (!ok) *status = kRuntimeError;
      return;
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(*batch)) {
      const auto ext = entry.path().extension();
      if (entry.is_regular_file() && (ext == ".pbm" || ext == ".pgm")) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    std::vector<json> docs(files.size());
    std::vector<char> ok(files.size(), 0);
    parallel_for(files.size(), [&](std::size_t i) {
      bool good = false;
      docs[i] = analyze_file(files[i], timestamp, good);
      ok[i] = good;
    });
    if (out) fs::create_directories(*out);
    json summary = json::array();
    for (std::size_t i = 0; i < files.size(); ++i) {
      if (out) write_text(dump(docs[i]), *out / (files[i].stem().string() + ".json"));
      summary.push_back({{"path", files[i].string()}, {"ok", static_cast<bool>(ok[i])}});
      if (!ok[i]) *status = kRuntimeError;
    }
    if (out)
      std::cout << dump({{"schema_version", kSchemaVersion}, {"files", summary}}) << '\n';
    else
      std::cout << dump(json(docs)) << '\n';
  }
};

// --- components / clean ----------------------------------------------------

struct ComponentsCmd {
  fs::path input;
  std::optional<fs::path> labels;
  GeometryFlags geo;

  void add(CLI::App& app) {
    auto* cmd = app.add_subcommand("components", "Label the void components of a geometry");
    cmd->add_option("input", input)->required();
    cmd->add_option("--labels", labels, "Write the labeling as a PGM overlay");
    geo.add(*cmd);
    cmd->callback([this] { run(); });
  }

  void run() {
    const PoreImage img = geo.load(input);
    const auto lab = label_components(img);
    const auto pre = preprocess_report(img);
    if (labels) {
      std::vector<std::uint8_t> gray(img.size(), 0);
      for (std::size_t i = 0; i < img.size(); ++i)
        if (lab.labels[i] >= 0) gray[i] = static_cast<std::uint8_t>(1 + (static_cast<std::uint32_t>(lab.labels[i]) * 97u) % 255u);
      write_graymap(img.width(), img.height(), gray, *labels);
    }
    json j = to_json(pre, false);
    j.erase("removed_pixels");
    j.erase("cleaned");
    j["sizes"] = lab.sizes;
    std::cout << dump(j) << '\n';
  }
};

struct CleanCmd {
  fs::path input;
  fs::path out;
  GeometryFlags geo;

  void add(CLI::App& app) {
    auto* cmd = app.add_subcommand("clean", "Keep only the largest void component");
    cmd->add_option("input", input)->required();
    cmd->add_option("--out", out)->required();
    geo.add(*cmd);
    cmd->callback([this] { run(); });
  }

  void run() {
    const PoreImage img = geo.load(input);
    const auto pre = preprocess_report(img);
    write_raster(keep_largest_component(img), out);
    std::cout << dump(to_json(pre, true)) << '\n';
  }
};

// --- average ---------------------------------------------------------------

struct AverageCmd {
  fs::path field;
  std::optional<fs::path> mask;
  std::optional<fs::path> other;
  std::optional<fs::path> out;
  std::optional<fs::path> variation;
  bool require_nonempty = false;
  SchemeFlags scheme_flags;
  GeometryFlags geo;

  void add(CLI::App& app) {
    auto* cmd = app.add_subcommand("average", "Volume-average a PSF1 field");
    cmd->add_option("field", field, "PSF1 field")->required();
    cmd->add_option("--mask", mask, "Geometry defining the void space");
    cmd->add_option("--product", other, "Second PSF1 field: also average the product of variations");
    cmd->add_option("--out", out, "JSON report, or a .psf1 file for the per-pixel mean");
    cmd->add_option("--variation", variation, "Write the variation field as PSF1");
    cmd->add_flag("--require-nonempty", require_nonempty, "Fail when a window has no void pixel");
    scheme_flags.add(*cmd);
    geo.add(*cmd);
    cmd->callback([this] { run(); });
  }

  void run() {
    const ScalarField f = load_field(field, mask, geo);
    const AveragingScheme s = scheme_flags.scheme();
    const WindowAverages avg = average(f, s);
    if (require_nonempty) avg.require_nonempty();
    const Decomposition dec = decompose(f, s);
    if (variation) write_field(dec.variation, *variation);

    json report{{"schema_version", kSchemaVersion},
                {"scheme", scheme_json(s)},
                {"field", {{"path", field.string()}, {"width", f.width()}, {"height", f.height()}}},
                {"average", averages_json(avg)}};
    if (other) {
      const ScalarField g = load_field(*other, mask, geo);
      const Decomposition dg = decompose(g, s);
      report["variation_product"] = averages_json(variation_product(dec.variation, dg.variation, s));
    }
    if (out && out->extension() == ".psf1") {
      write_field(dec.mean, *out);
      std::cout << dump(report) << '\n';
    } else {
      write_text(dump(report), out);
    }
  }
};

// --- samples / fit ---------------------------------------------------------

struct SamplesCmd {
  fs::path m_path, n_path;
  std::optional<fs::path> mask;
  std::optional<fs::path> geometry;
  std::vector<std::string> features;
  bool no_means = false;
  fs::path out;
  SchemeFlags scheme_flags;
  GeometryFlags geo;

  void add(CLI::App& app) {
    auto* cmd = app.add_subcommand("samples", "Build closure fitting samples from two fields");
    cmd->add_option("m", m_path, "First PSF1 field")->required();
    cmd->add_option("n", n_path, "Second PSF1 field")->required();
    cmd->add_option("--mask", mask, "Geometry defining the void space");
    cmd->add_option("--geometry", geometry, "Geometry whose metrics become features");
    cmd->add_option("--features", features, "Metric names (porosity, S, tau_x, ...)");
    cmd->add_flag("--no-means", no_means, "Leave the window means out of the features");
    cmd->add_option("--out", out, "CSV or .json")->required();
    scheme_flags.add(*cmd);
    geo.add(*cmd);
    cmd->callback([this] { run(); });
  }

  void run() {
    const ScalarField m = load_field(m_path, mask, geo);
    const ScalarField n = load_field(n_path, mask, geo);
    SampleSpec spec;
    spec.include_window_means = !no_means;
    std::vector<std::string> names;
    if (!features.empty()) {
      if (!geometry) throw CLI::ValidationError("--features", "needs --geometry");
      const auto report = compute_metrics(geo.load(*geometry));
      spec.metric_features = select_metric_features(report, features);
      names = features;
    }
    if (spec.include_window_means) {
      names.push_back("mean_m");
      names.push_back("mean_n");
    }
    const auto samples = closure_residual_data(m, n, scheme_flags.scheme(), spec);
    write_samples(samples, out, names);
    std::cout << dump({{"samples", samples.size()}, {"out", out.string()}}) << '\n';
  }
};

struct FitCmd {
  fs::path samples_path;
  std::string model_name = "linear";
  std::string loss_name = "mse";
  FitOptions options;
  std::optional<fs::path> out;

  void add(CLI::App& app) {
    auto* cmd = app.add_subcommand("fit", "Fit closure parameters to samples");
    cmd->add_option("samples", samples_path, "CSV or JSON samples")->required();
    cmd->add_option("--model", model_name, "constant, linear, quadratic or power");
    cmd->add_option("--loss", loss_name, "mse or mape")->check(CLI::IsMember({"mse", "mape"}));
    cmd->add_option("--starts", options.n_starts)->check(CLI::PositiveNumber);
    cmd->add_option("--max-iter", options.max_iter)->check(CLI::NonNegativeNumber);
    cmd->add_option("--xtol", options.xtol);
    cmd->add_option("--ftol", options.ftol);
    cmd->add_option("--seed", options.seed);
    cmd->add_option("--initial", options.initial, "Start point of the first run");
    cmd->add_option("--out", out, "ClosureFit JSON");
    cmd->callback([this] { run(); });
  }

  void run() {
    const auto samples = read_samples(samples_path);
    if (samples.empty()) throw Error(ErrorCode::EmptySamples, "no samples in " + samples_path.string());
    const ClosureModel model = make_model(model_name, samples.front().features.size());
    const ClosureFit f = fit(model, samples, *parse_loss_kind(loss_name), options);
    json j = to_json(f, model);
    j["seed"] = options.seed;
    j["n_starts"] = options.n_starts;
    j["version"] = kVersion;
    write_text(dump(j), out);
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Periodic pore geometry generation, analysis, averaging and closure fitting"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));
  int status = 0;

  GenerateCmd generate_cmd;
  AnalyzeCmd analyze_cmd;
  ComponentsCmd components_cmd;
  CleanCmd clean_cmd;
  AverageCmd average_cmd;
  SamplesCmd samples_cmd;
  FitCmd fit_cmd;
  generate_cmd.add(app);
  analyze_cmd.add(app, status);
  components_cmd.add(app);
  clean_cmd.add(app);
  average_cmd.add(app);
  samples_cmd.add(app);
  fit_cmd.add(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::Error& e) {
    app.exit(e);
    return 2;
  } catch (const Error& e) {
    std::cout << error_document(e.code_name(), e.what()).dump(2) << '\n';
    return kRuntimeError;
  } catch (const std::exception& e) {
    std::cout << error_document("InternalError", e.what()).dump(2) << '\n';
    return kRuntimeError;
  }
  return status;
}
