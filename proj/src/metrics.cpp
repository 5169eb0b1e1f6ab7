#include "porebench/metrics.hpp"

#include "porebench/error.hpp"

namespace porebench {

double porosity(const PoreImage& image) {
  return static_cast<double>(image.void_count()) / static_cast<double>(image.size());
}

MetricsReport compute_metrics(const PoreImage& image, const MetricsOptions& options) {
  if (!image.any_void()) throw Error(ErrorCode::NoVoidSpace, "image has no void pixels");

  MetricsReport r;
  r.porosity = porosity(image);

  const auto psd = pore_size_distribution(image, options.pore_size);
  r.n_pores = psd.n_pores;
  r.mean_pore_size = psd.mean;
  r.std_pore_size = psd.stddev;

  const auto surface = surface_metrics(image);
  r.specific_surface = surface.specific_surface;
  r.directionality = surface.directionality;
  r.directionality_std = surface.directionality_std;

  r.connectivity = connectivity(build_graph(image));

  for (Axis axis : {Axis::X, Axis::Y}) {
    const std::string name = axis == Axis::X ? "x" : "y";
    auto& tau = axis == Axis::X ? r.tau_x : r.tau_y;
    auto& flow = axis == Axis::X ? r.max_flow_x : r.max_flow_y;
    try {
      tau = tortuosity(image, axis, options.tortuosity).tau;
    } catch (const Error& e) {
      r.warnings.push_back({std::string(e.code_name()), name, std::string("tortuosity: ") + e.what()});
    }
    try {
      flow = max_flow(image, axis).flow;
    } catch (const Error& e) {
      r.warnings.push_back({std::string(e.code_name()), name, std::string("max_flow: ") + e.what()});
    }
  }
  return r;
}

}  // namespace porebench
