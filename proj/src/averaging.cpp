#include "porebench/averaging.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <string>

#include "porebench/error.hpp"

namespace porebench {

namespace {

// Neumaier compensated sum.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v))
      comp_ += (sum_ - t) + v;
    else
      comp_ += (v - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

WindowAverages region_average(const ScalarField& f, const AveragingScheme& s) {
  const int w = f.width(), h = f.height();
  WindowAverages out;
  out.kind = s.kind;
  out.nx = s.kind == AveragingKind::Full ? 1 : s.sub_nx;
  out.ny = s.kind == AveragingKind::Full ? 1 : s.sub_ny;
  const std::size_t n = static_cast<std::size_t>(out.nx) * static_cast<std::size_t>(out.ny);
  std::vector<CompensatedSum> sums(n);
  std::vector<std::size_t> totals(n, 0);
  out.void_counts.assign(n, 0);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const std::size_t k = window_of(s, w, h, i);
    ++totals[k];
    if (!f.mask().is_void(i)) continue;
    sums[k].add(f[i]);
    ++out.void_counts[k];
  }
  out.values.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (out.void_counts[k] == 0) {
      out.values[k] = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    const double denom = static_cast<double>(s.superficial ? totals[k] : out.void_counts[k]);
    out.values[k] = sums[k].value() / denom;
  }
  return out;
}

// Separable direct window sums; each output sums its window in the same
// relative order, which keeps the result exactly translation-equivariant.
WindowAverages convolution_average(const ScalarField& f, const AveragingScheme& s) {
  const PoreImage& mask = f.mask();
  const int w = f.width(), h = f.height();
  const int rx = s.filter_w / 2, ry = s.filter_h / 2;
  const std::size_t n = f.size();
  std::vector<double> hv(n, 0.0), hc(n, 0.0), ht(n, 0.0);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double sv = 0.0, sc = 0.0, st = 0.0;
      for (int d = -rx; d <= rx; ++d) {
        int cx = x;
        if (!step_coord(cx, d, w, mask.periodic_x())) continue;
        const std::size_t j = mask.index(cx, y);
        st += 1.0;
        if (!mask.is_void(j)) continue;
        sv += f[j];
        sc += 1.0;
      }
      const std::size_t i = mask.index(x, y);
      hv[i] = sv;
      hc[i] = sc;
      ht[i] = st;
    }

  WindowAverages out;
  out.kind = AveragingKind::Convolutional;
  out.nx = w;
  out.ny = h;
  out.values.assign(n, 0.0);
  out.void_counts.assign(n, 0);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double sv = 0.0, sc = 0.0, st = 0.0;
      for (int d = -ry; d <= ry; ++d) {
        int cy = y;
        if (!step_coord(cy, d, h, mask.periodic_y())) continue;
        const std::size_t j = mask.index(x, cy);
        sv += hv[j];
        sc += hc[j];
        st += ht[j];
      }
      const std::size_t i = mask.index(x, y);
      out.void_counts[i] = static_cast<std::size_t>(sc);
      out.values[i] = sc > 0.0 ? sv / (s.superficial ? st : sc)
                               : std::numeric_limits<double>::quiet_NaN();
    }
  return out;
}

bool same_mask(const PoreImage& a, const PoreImage& b) { return a == b; }

}  // namespace

ScalarField::ScalarField(PoreImage mask, double fill)
    : mask_(std::move(mask)), values_(mask_.size(), fill) {}

ScalarField::ScalarField(PoreImage mask, std::vector<double> values)
    : mask_(std::move(mask)), values_(std::move(values)) {
  if (values_.size() != mask_.size())
    throw Error(ErrorCode::MaskMismatch, "field has " + std::to_string(values_.size()) +
                                             " values for a mask of " +
                                             std::to_string(mask_.size()) + " pixels");
}

bool operator==(const ScalarField& a, const ScalarField& b) noexcept {
  if (!(a.mask_ == b.mask_)) return false;
  for (std::size_t i = 0; i < a.values_.size(); ++i)
    if (a.mask_.is_void(i) &&
        std::bit_cast<std::uint64_t>(a.values_[i]) != std::bit_cast<std::uint64_t>(b.values_[i]))
      return false;
  return true;
}

std::string_view averaging_kind_name(AveragingKind kind) noexcept {
  switch (kind) {
    case AveragingKind::Full: return "full";
    case AveragingKind::Sub: return "sub";
    case AveragingKind::Convolutional: return "convolutional";
  }
  return "unknown";
}

std::optional<AveragingKind> parse_averaging_kind(std::string_view name) noexcept {
  if (name == "full") return AveragingKind::Full;
  if (name == "sub") return AveragingKind::Sub;
  if (name == "convolutional" || name == "conv") return AveragingKind::Convolutional;
  return std::nullopt;
}

void validate_scheme(const AveragingScheme& s, int width, int height) {
  switch (s.kind) {
    case AveragingKind::Full:
      return;
    case AveragingKind::Sub:
      if (s.sub_nx < 1 || s.sub_ny < 1 || width % s.sub_nx != 0 || height % s.sub_ny != 0)
        throw Error(ErrorCode::NonDividingSubgrid,
                    "sub-region grid " + std::to_string(s.sub_nx) + "x" + std::to_string(s.sub_ny) +
                        " does not divide " + std::to_string(width) + "x" + std::to_string(height));
      return;
    case AveragingKind::Convolutional:
      if (s.filter_w < 1 || s.filter_h < 1 || s.filter_w % 2 == 0 || s.filter_h % 2 == 0)
        throw Error(ErrorCode::EvenFilter, "filter dimensions must be positive and odd");
      if (s.filter_w > width || s.filter_h > height)
        throw Error(ErrorCode::InvalidArgument, "filter is larger than the field");
      return;
  }
}

std::size_t window_of(const AveragingScheme& s, int width, int height, std::size_t pixel) {
  switch (s.kind) {
    case AveragingKind::Full:
      return 0;
    case AveragingKind::Sub: {
      const int x = static_cast<int>(pixel % static_cast<std::size_t>(width));
      const int y = static_cast<int>(pixel / static_cast<std::size_t>(width));
      const int rx = x / (width / s.sub_nx);
      const int ry = y / (height / s.sub_ny);
      return static_cast<std::size_t>(ry) * static_cast<std::size_t>(s.sub_nx) +
             static_cast<std::size_t>(rx);
    }
    case AveragingKind::Convolutional:
      return pixel;
  }
  return 0;
}

std::size_t WindowAverages::empty_windows() const noexcept {
  std::size_t n = 0;
  for (auto c : void_counts) n += c == 0;
  return n;
}

void WindowAverages::require_nonempty() const {
  const auto n = empty_windows();
  if (n > 0)
    throw Error(ErrorCode::EmptyWindow,
                std::to_string(n) + " averaging window(s) contain no void pixel");
}

WindowAverages average(const ScalarField& field, const AveragingScheme& scheme) {
  validate_scheme(scheme, field.width(), field.height());
  return scheme.kind == AveragingKind::Convolutional ? convolution_average(field, scheme)
                                                     : region_average(field, scheme);
}

ScalarField broadcast(const WindowAverages& averages, const AveragingScheme& scheme,
                      const PoreImage& mask) {
  ScalarField out(mask, 0.0);
  for (std::size_t i = 0; i < mask.size(); ++i)
    out[i] = averages.values[window_of(scheme, mask.width(), mask.height(), i)];
  return out;
}

Decomposition decompose(const ScalarField& field, const AveragingScheme& scheme) {
  const auto avg = average(field, scheme);
  Decomposition d{broadcast(avg, scheme, field.mask()), ScalarField(field.mask(), 0.0)};
  for (std::size_t i = 0; i < field.size(); ++i)
    if (field.mask().is_void(i)) d.variation[i] = field[i] - d.mean[i];
  return d;
}

WindowAverages variation_product(const ScalarField& a_var, const ScalarField& b_var,
                                 const AveragingScheme& scheme) {
  if (!same_mask(a_var.mask(), b_var.mask()))
    throw Error(ErrorCode::MaskMismatch, "variation fields do not share a mask");
  ScalarField product(a_var.mask(), 0.0);
  for (std::size_t i = 0; i < product.size(); ++i)
    if (product.mask().is_void(i)) product[i] = a_var[i] * b_var[i];
  return average(product, scheme);
}

}  // namespace porebench
