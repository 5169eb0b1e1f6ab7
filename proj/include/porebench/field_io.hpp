#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "porebench/averaging.hpp"

namespace porebench {

/// PSF1 layout, little-endian: "PSF1", int32 width, int32 height, uint32
/// reserved (0), then width*height float64 values in row-major order.
struct RawField {
  int width = 0;
  int height = 0;
  std::vector<double> values;
};

void write_psf1(const RawField& raw, std::ostream& out);
void write_psf1(const RawField& raw, const std::filesystem::path& path);
RawField read_psf1(std::istream& in);
RawField read_psf1(const std::filesystem::path& path);

/// Solid pixels are written as NaN so the file also carries the mask.
void write_field(const ScalarField& field, const std::filesystem::path& path);
/// With a mask the dimensions must match (MaskMismatch); without one the
/// mask is every non-NaN value.
ScalarField read_field(const std::filesystem::path& path,
                       const std::optional<PoreImage>& mask = std::nullopt);

/// Quantized preview: void values scaled to 1..255, solid 0.
void write_field_pgm(const ScalarField& field, const std::filesystem::path& path);

}  // namespace porebench
