#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "porebench/image.hpp"

namespace porebench {

enum class PnmEncoding { Plain, Binary };

/// Reads P1/P4 bitmaps (1 = black = solid) and P2/P5 graymaps, which are
/// thresholded at mid-gray (2 * value > maxval is void).
PoreImage read_raster(std::istream& in);
PoreImage read_raster(const std::filesystem::path& path);
PoreImage parse_raster(const std::string& bytes);

/// Writes a PBM (P4 by default, P1 when `encoding` is Plain).
void write_raster(const PoreImage& image, std::ostream& out,
                  PnmEncoding encoding = PnmEncoding::Binary);
void write_raster(const PoreImage& image, const std::filesystem::path& path,
                  PnmEncoding encoding = PnmEncoding::Binary);

/// 8-bit binary graymap (P5) of arbitrary gray levels, for debug overlays.
void write_graymap(int width, int height, const std::vector<std::uint8_t>& gray,
                   const std::filesystem::path& path);

}  // namespace porebench
