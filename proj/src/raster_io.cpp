#include "porebench/raster_io.hpp"

#include <cctype>
#include <fstream>
#include <istream>
#include <iterator>
#include <limits>
#include <ostream>
#include <sstream>

#include "porebench/error.hpp"

namespace porebench {

namespace {

class HeaderReader {
 public:
  explicit HeaderReader(std::istream& in) : in_(in) {}

  void skip_space_and_comments() {
    for (;;) {
      const int c = in_.peek();
      if (c == std::char_traits<char>::eof()) return;
      if (c == '#') {
        std::string discard;
        std::getline(in_, discard);
      } else if (std::isspace(c)) {
        in_.get();
      } else {
        return;
      }
    }
  }

  long read_uint(const char* what, ErrorCode on_eof = ErrorCode::MalformedHeader) {
    skip_space_and_comments();
    if (in_.peek() == std::char_traits<char>::eof())
      throw Error(on_eof, std::string("unexpected end of file reading ") + what);
    long value = 0;
    int digits = 0;
    while (std::isdigit(in_.peek())) {
      value = value * 10 + (in_.get() - '0');
      if (value > std::numeric_limits<int>::max())
        throw Error(ErrorCode::MalformedHeader, std::string(what) + " is out of range");
      ++digits;
    }
    if (digits == 0) throw Error(ErrorCode::MalformedHeader, std::string("expected ") + what);
    return value;
  }

  // Binary payloads start after exactly one whitespace byte.
  void end_of_header() {
    const int c = in_.get();
    if (c == std::char_traits<char>::eof())
      throw Error(ErrorCode::TruncatedPayload, "missing pixel data");
    if (!std::isspace(c))
      throw Error(ErrorCode::MalformedHeader, "header must end with a whitespace byte");
  }

 private:
  std::istream& in_;
};

void read_exact(std::istream& in, char* dst, std::size_t n) {
  in.read(dst, static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in.gcount()) != n)
    throw Error(ErrorCode::TruncatedPayload,
                "expected " + std::to_string(n) + " payload bytes, got " +
                    std::to_string(in.gcount()));
}

}  // namespace

PoreImage read_raster(std::istream& in) {
  char magic[2] = {0, 0};
  in.read(magic, 2);
  if (in.gcount() != 2 || magic[0] != 'P')
    throw Error(ErrorCode::UnsupportedMagic, "not a Netpbm file");
  const char kind = magic[1];
  if (kind != '1' && kind != '2' && kind != '4' && kind != '5')
    throw Error(ErrorCode::UnsupportedMagic,
                std::string("unsupported Netpbm magic P") + kind);

  HeaderReader header(in);
  const long width = header.read_uint("width");
  const long height = header.read_uint("height");
  if (width < 1 || height < 1)
    throw Error(ErrorCode::MalformedHeader, "image dimensions must be positive");
  long maxval = 1;
  if (kind == '2' || kind == '5') {
    maxval = header.read_uint("maxval");
    if (maxval < 1 || maxval > 65535)
      throw Error(ErrorCode::MalformedHeader, "maxval must be in [1, 65535]");
  }

  const auto w = static_cast<int>(width), h = static_cast<int>(height);
  PoreImage img(w, h, false);
  const std::size_t n = img.size();

  switch (kind) {
    case '1': {
      for (std::size_t i = 0; i < n; ++i) {
        header.skip_space_and_comments();
        const int c = in.get();
        if (c == std::char_traits<char>::eof())
          throw Error(ErrorCode::TruncatedPayload, "plain bitmap ended early");
        if (c != '0' && c != '1')
          throw Error(ErrorCode::MalformedHeader, "plain bitmap pixels must be 0 or 1");
        img.set_void(i, c == '0');
      }
      break;
    }
    case '4': {
      header.end_of_header();
      const std::size_t row_bytes = (static_cast<std::size_t>(w) + 7) / 8;
      std::vector<char> row(row_bytes);
      for (int y = 0; y < h; ++y) {
        read_exact(in, row.data(), row_bytes);
        for (int x = 0; x < w; ++x) {
          const auto byte = static_cast<unsigned char>(row[static_cast<std::size_t>(x) / 8]);
          const bool black = (byte >> (7 - x % 8)) & 1u;
          img.set_void(x, y, !black);
        }
      }
      break;
    }
    case '2': {
      for (std::size_t i = 0; i < n; ++i) {
        const long v = header.read_uint("gray value", ErrorCode::TruncatedPayload);
        if (v > maxval) throw Error(ErrorCode::MalformedHeader, "gray value exceeds maxval");
        img.set_void(i, 2 * v > maxval);
      }
      break;
    }
    case '5': {
      header.end_of_header();
      const std::size_t bpp = maxval < 256 ? 1 : 2;
      std::vector<char> data(n * bpp);
      read_exact(in, data.data(), data.size());
      for (std::size_t i = 0; i < n; ++i) {
        long v = static_cast<unsigned char>(data[i * bpp]);
        if (bpp == 2) v = (v << 8) | static_cast<unsigned char>(data[i * bpp + 1]);
        img.set_void(i, 2 * v > maxval);
      }
      break;
    }
    default:
      break;
  }
  return img;
}

PoreImage read_raster(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::FileError, "cannot open " + path.string());
  return read_raster(in);
}

PoreImage parse_raster(const std::string& bytes) {
  std::istringstream in(bytes, std::ios::binary);
  return read_raster(in);
}

void write_raster(const PoreImage& image, std::ostream& out, PnmEncoding encoding) {
  const int w = image.width(), h = image.height();
  if (encoding == PnmEncoding::Plain) {
    out << "P1\n" << w << ' ' << h << '\n';
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        if (x) out << ' ';
        out << (image.is_void(x, y) ? '0' : '1');
      }
      out << '\n';
    }
  } else {
    out << "P4\n" << w << ' ' << h << '\n';
    const std::size_t row_bytes = (static_cast<std::size_t>(w) + 7) / 8;
    std::vector<char> row(row_bytes);
    for (int y = 0; y < h; ++y) {
      std::fill(row.begin(), row.end(), 0);
      for (int x = 0; x < w; ++x)
        if (!image.is_void(x, y))
          row[static_cast<std::size_t>(x) / 8] =
              static_cast<char>(static_cast<unsigned char>(row[static_cast<std::size_t>(x) / 8]) |
                                (0x80u >> (x % 8)));
      out.write(row.data(), static_cast<std::streamsize>(row_bytes));
    }
  }
  if (!out) throw Error(ErrorCode::FileError, "failed writing bitmap");
}

void write_raster(const PoreImage& image, const std::filesystem::path& path,
                  PnmEncoding encoding) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::FileError, "cannot create " + path.string());
  write_raster(image, out, encoding);
}

void write_graymap(int width, int height, const std::vector<std::uint8_t>& gray,
                   const std::filesystem::path& path) {
  if (width < 1 || height < 1 ||
      gray.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height))
    throw Error(ErrorCode::InvalidArgument, "graymap size does not match its dimensions");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::FileError, "cannot create " + path.string());
  out << "P5\n" << width << ' ' << height << "\n255\n";
  out.write(reinterpret_cast<const char*>(gray.data()), static_cast<std::streamsize>(gray.size()));
  if (!out) throw Error(ErrorCode::FileError, "failed writing " + path.string());
}

}  // namespace porebench
