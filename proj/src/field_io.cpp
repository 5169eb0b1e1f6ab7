#include "porebench/field_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <string>

#include "porebench/error.hpp"
#include "porebench/raster_io.hpp"

namespace porebench {

namespace {

constexpr std::array<char, 4> kMagic{'P', 'S', 'F', '1'};

template <typename T>
void put_le(std::ostream& out, T value) {
  auto bits = static_cast<std::uint64_t>(value);
  char buf[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    buf[i] = static_cast<char>(bits & 0xffu);
    bits >>= 8;
  }
  out.write(buf, sizeof(T));
}

std::uint64_t get_le(const unsigned char* p, std::size_t n) {
  std::uint64_t v = 0;
  for (std::size_t i = n; i-- > 0;) v = (v << 8) | p[i];
  return v;
}

}  // namespace

void write_psf1(const RawField& raw, std::ostream& out) {
  if (raw.width < 1 || raw.height < 1 ||
      raw.values.size() != static_cast<std::size_t>(raw.width) * static_cast<std::size_t>(raw.height))
    throw Error(ErrorCode::InvalidArgument, "field size does not match its dimensions");
  out.write(kMagic.data(), kMagic.size());
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(raw.width));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(raw.height));
  put_le<std::uint32_t>(out, 0u);
  for (double v : raw.values) put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(v));
  if (!out) throw Error(ErrorCode::FileError, "failed writing PSF1 field");
}

void write_psf1(const RawField& raw, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::FileError, "cannot create " + path.string());
  write_psf1(raw, out);
}

RawField read_psf1(std::istream& in) {
  unsigned char header[16];
  in.read(reinterpret_cast<char*>(header), sizeof header);
  if (in.gcount() < 4 || std::memcmp(header, kMagic.data(), kMagic.size()) != 0)
    throw Error(ErrorCode::UnsupportedMagic, "not a PSF1 field file");
  if (in.gcount() != static_cast<std::streamsize>(sizeof header))
    throw Error(ErrorCode::MalformedHeader, "PSF1 header is shorter than 16 bytes");
  const auto w = static_cast<std::int32_t>(get_le(header + 4, 4));
  const auto h = static_cast<std::int32_t>(get_le(header + 8, 4));
  const auto reserved = get_le(header + 12, 4);
  if (w < 1 || h < 1) throw Error(ErrorCode::MalformedHeader, "PSF1 dimensions must be positive");
  if (reserved != 0) throw Error(ErrorCode::MalformedHeader, "PSF1 reserved header word is not 0");

  RawField raw{w, h, {}};
  const std::size_t n = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
  std::vector<unsigned char> payload(n * 8);
  in.read(reinterpret_cast<char*>(payload.data()), static_cast<std::streamsize>(payload.size()));
  if (static_cast<std::size_t>(in.gcount()) != payload.size())
    throw Error(ErrorCode::TruncatedPayload,
                "PSF1 payload holds " + std::to_string(in.gcount()) + " of " +
                    std::to_string(payload.size()) + " bytes");
  raw.values.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    raw.values[i] = std::bit_cast<double>(get_le(payload.data() + 8 * i, 8));
  return raw;
}

RawField read_psf1(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::FileError, "cannot open " + path.string());
  return read_psf1(in);
}

void write_field(const ScalarField& field, const std::filesystem::path& path) {
  RawField raw{field.width(), field.height(), field.values()};
  for (std::size_t i = 0; i < raw.values.size(); ++i)
    if (!field.mask().is_void(i)) raw.values[i] = std::numeric_limits<double>::quiet_NaN();
  write_psf1(raw, path);
}

ScalarField read_field(const std::filesystem::path& path, const std::optional<PoreImage>& mask) {
  RawField raw = read_psf1(path);
  if (mask) {
    if (mask->width() != raw.width || mask->height() != raw.height)
      throw Error(ErrorCode::MaskMismatch, "field and mask dimensions differ");
    return ScalarField(*mask, std::move(raw.values));
  }
  PoreImage derived(raw.width, raw.height, false);
  for (std::size_t i = 0; i < raw.values.size(); ++i)
    derived.set_void(i, !std::isnan(raw.values[i]));
  return ScalarField(std::move(derived), std::move(raw.values));
}

void write_field_pgm(const ScalarField& field, const std::filesystem::path& path) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t i = 0; i < field.size(); ++i)
    if (field.mask().is_void(i) && std::isfinite(field[i])) {
      lo = std::min(lo, field[i]);
      hi = std::max(hi, field[i]);
    }
  std::vector<std::uint8_t> gray(field.size(), 0);
  for (std::size_t i = 0; i < field.size(); ++i) {
    if (!field.mask().is_void(i) || !std::isfinite(field[i])) continue;
    const double t = hi > lo ? (field[i] - lo) / (hi - lo) : 1.0;
    gray[i] = static_cast<std::uint8_t>(1 + std::lround(t * 254.0));
  }
  write_graymap(field.width(), field.height(), gray, path);
}

}  // namespace porebench
