#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <string>

#include <json.hpp>

#include "porebench/averaging.hpp"
#include "porebench/closure.hpp"
#include "porebench/error.hpp"
#include "porebench/geometry.hpp"
#include "porebench/metrics.hpp"
#include "porebench/preprocess.hpp"
#include "porebench/raster_io.hpp"
#include "porebench/report.hpp"

namespace py = pybind11;
using namespace porebench;

namespace {

using U8Array = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;
using F64Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

// JSON value to Python by way of the json module; keeps key order and nulls.
py::object to_python(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

Axis parse_axis(const std::string& s) {
  if (s == "x") return Axis::X;
  if (s == "y") return Axis::Y;
  throw Error(ErrorCode::InvalidArgument, "axis must be 'x' or 'y'");
}

PoreImage image_from_array(const U8Array& a, bool periodic_x, bool periodic_y, double pixel_length) {
  if (a.ndim() != 2) throw Error(ErrorCode::InvalidArgument, "image must be a 2-D array");
  const int h = static_cast<int>(a.shape(0)), w = static_cast<int>(a.shape(1));
  std::vector<std::uint8_t> cells(a.data(), a.data() + a.size());
  for (auto& c : cells) c = c ? 1 : 0;
  PoreImage img(w, h, std::move(cells));
  img.set_periodic(periodic_x, periodic_y);
  img.set_pixel_length(pixel_length);
  return img;
}

U8Array image_to_array(const PoreImage& img) {
  U8Array out({img.height(), img.width()});
  std::copy(img.cells().begin(), img.cells().end(), out.mutable_data());
  return out;
}

F64Array field_to_array(const ScalarField& f) {
  F64Array out({f.height(), f.width()});
  double* p = out.mutable_data();
  for (std::size_t i = 0; i < f.size(); ++i) p[i] = f.mask().is_void(i) ? f[i] : std::nan("");
  return out;
}

ScalarField field_from_array(const F64Array& values, const PoreImage& mask) {
  if (values.ndim() != 2 || values.shape(0) != mask.height() || values.shape(1) != mask.width())
    throw Error(ErrorCode::MaskMismatch, "field shape does not match the mask");
  return ScalarField(mask, std::vector<double>(values.data(), values.data() + values.size()));
}

AveragingScheme make_scheme(const std::string& kind, std::pair<int, int> sub, std::pair<int, int> filter,
                            bool superficial) {
  const auto k = parse_averaging_kind(kind);
  if (!k) throw Error(ErrorCode::InvalidArgument, "unknown averaging scheme '" + kind + "'");
  AveragingScheme s;
  s.kind = *k;
  s.sub_nx = sub.first;
  s.sub_ny = sub.second;
  s.filter_w = filter.first;
  s.filter_h = filter.second;
  s.superficial = superficial;
  return s;
}

F64Array window_values(const WindowAverages& a) {
  F64Array out({a.ny, a.nx});
  std::copy(a.values.begin(), a.values.end(), out.mutable_data());
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Periodic 2D pore geometry generation, metrics, volume averaging and closure fitting";
  m.attr("__version__") = std::string(kVersion);

  static py::exception<Error> error(m, "Error");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      // args = (code, message)
      PyErr_SetObject(error.ptr(), py::make_tuple(std::string(e.code_name()), e.what()).ptr());
    }
  });

  py::class_<PoreImage>(m, "Image")
      .def(py::init(&image_from_array), py::arg("cells"), py::arg("periodic_x") = true,
           py::arg("periodic_y") = true, py::arg("pixel_length") = 1.0,
           "Binary geometry from a 2-D array indexed [y, x]; nonzero is void.")
      .def_property_readonly("width", &PoreImage::width)
      .def_property_readonly("height", &PoreImage::height)
      .def_property_readonly("periodic_x", &PoreImage::periodic_x)
      .def_property_readonly("periodic_y", &PoreImage::periodic_y)
      .def_property("pixel_length", &PoreImage::pixel_length, &PoreImage::set_pixel_length)
      .def("set_periodic", &PoreImage::set_periodic, py::arg("x"), py::arg("y"))
      .def("to_array", &image_to_array)
      .def("tiled", &PoreImage::tiled, py::arg("nx"), py::arg("ny"))
      .def("__eq__", [](const PoreImage& a, const PoreImage& b) { return a == b; })
      .def("__repr__", [](const PoreImage& img) {
        return "<porebench.Image " + std::to_string(img.width()) + "x" + std::to_string(img.height()) + ">";
      });

  m.def(
      "generate",
      [](const std::string& kind, int width, int height, const py::dict& params) {
        nlohmann::json spec = nlohmann::json::parse(
            py::module_::import("json").attr("dumps")(params).cast<std::string>());
        spec["kind"] = kind;
        return generate(generator_spec_from_json(spec), width, height);
      },
      py::arg("kind"), py::arg("width") = PoreImage::kDefaultResolution,
      py::arg("height") = PoreImage::kDefaultResolution, py::arg("params") = py::dict(),
      "Generate a periodic geometry; params uses the JSON spec keys (radius, scale, rng_seed, ...).");

  m.def("read_raster", [](const std::string& path) { return read_raster(std::filesystem::path(path)); },
        py::arg("path"));
  m.def(
      "write_raster",
      [](const PoreImage& img, const std::string& path, bool plain) {
        write_raster(img, std::filesystem::path(path), plain ? PnmEncoding::Plain : PnmEncoding::Binary);
      },
      py::arg("image"), py::arg("path"), py::arg("plain") = false);

  m.def("porosity", &porosity, py::arg("image"));
  m.def(
      "surface",
      [](const PoreImage& img) {
        const auto s = surface_metrics(img);
        py::dict d;
        d["raw_surface"] = s.raw_surface;
        d["S"] = s.specific_surface;
        d["Di"] = s.directionality;
        d["sigma_Di"] = s.directionality_std;
        d["boundary_pixels"] = s.boundary_pixels;
        return d;
      },
      py::arg("image"));
  m.def(
      "tortuosity", [](const PoreImage& img, const std::string& axis) { return tortuosity(img, parse_axis(axis)).tau; },
      py::arg("image"), py::arg("axis"));
  m.def(
      "max_flow", [](const PoreImage& img, const std::string& axis) { return max_flow(img, parse_axis(axis)).flow; },
      py::arg("image"), py::arg("axis"));
  m.def(
      "label_components",
      [](const PoreImage& img) {
        const auto lab = label_components(img);
        py::array_t<std::int32_t> labels({img.height(), img.width()});
        std::copy(lab.labels.begin(), lab.labels.end(), labels.mutable_data());
        return py::make_tuple(labels, lab.sizes);
      },
      py::arg("image"), "Component id per pixel (-1 on solid) and the component sizes.");
  m.def("keep_largest_component", &keep_largest_component, py::arg("image"));

  m.def(
      "analyze",
      [](const PoreImage& img, bool clean, int smoothing_radius, double discontinuity_threshold) {
        AnalyzeOptions opt;
        opt.clean = clean;
        opt.metrics.pore_size.smoothing_radius = smoothing_radius;
        opt.discontinuity_threshold = discontinuity_threshold;
        const Analysis a = analyze_geometry(img, opt);
        return to_python({{"preprocess", to_json(a.preprocess, clean)}, {"metrics", to_json(a.metrics)}});
      },
      py::arg("image"), py::arg("clean") = false, py::arg("smoothing_radius") = 2,
      py::arg("discontinuity_threshold") = 0.5, "Preprocess report and every metric as a dict.");

  m.def(
      "average",
      [](const F64Array& values, const PoreImage& mask, const std::string& scheme, std::pair<int, int> sub,
         std::pair<int, int> filter, bool superficial) {
        const auto s = make_scheme(scheme, sub, filter, superficial);
        return window_values(average(field_from_array(values, mask), s));
      },
      py::arg("values"), py::arg("mask"), py::arg("scheme") = "full", py::arg("sub") = std::pair{1, 1},
      py::arg("filter") = std::pair{1, 1}, py::arg("superficial") = false,
      "Window averages shaped [ny, nx]; windows without void hold NaN.");
  m.def(
      "decompose",
      [](const F64Array& values, const PoreImage& mask, const std::string& scheme, std::pair<int, int> sub,
         std::pair<int, int> filter, bool superficial) {
        const auto s = make_scheme(scheme, sub, filter, superficial);
        const auto d = decompose(field_from_array(values, mask), s);
        return py::make_tuple(field_to_array(d.mean), field_to_array(d.variation));
      },
      py::arg("values"), py::arg("mask"), py::arg("scheme") = "full", py::arg("sub") = std::pair{1, 1},
      py::arg("filter") = std::pair{1, 1}, py::arg("superficial") = false,
      "Mean and variation fields; solid pixels are NaN.");

  m.def(
      "fit",
      [](const F64Array& features, const F64Array& targets, const std::string& model_name,
         const std::string& loss_name, int n_starts, std::uint64_t seed) {
        if (features.ndim() != 2 || targets.ndim() != 1 || features.shape(0) != targets.shape(0))
          throw Error(ErrorCode::MalformedSamples, "features must be [n, k] and targets [n]");
        const auto n = static_cast<std::size_t>(features.shape(0));
        const auto k = static_cast<std::size_t>(features.shape(1));
        std::vector<Sample> samples(n);
        for (std::size_t i = 0; i < n; ++i) {
          samples[i].features.assign(features.data() + i * k, features.data() + (i + 1) * k);
          samples[i].target = targets.data()[i];
        }
        const auto loss = parse_loss_kind(loss_name);
        if (!loss) throw Error(ErrorCode::InvalidArgument, "loss must be 'mse' or 'mape'");
        const ClosureModel model = make_model(model_name, k);
        FitOptions opt;
        opt.n_starts = n_starts;
        opt.seed = seed;
        return to_python(to_json(fit(model, samples, *loss, opt), model));
      },
      py::arg("features"), py::arg("targets"), py::arg("model") = "linear", py::arg("loss") = "mse",
      py::arg("n_starts") = 8, py::arg("seed") = 0, "Closure fit report as a dict.");
}
