#include "ttc/image_io.hpp"

#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace ttc {

namespace {

[[noreturn]] void parse_fail(const std::string& path, const std::string& why) {
  throw std::runtime_error(path + ": " + why);
}

// Skips whitespace and '#' comments between header tokens.
int next_header_int(std::istream& is, const std::string& path) {
  int ch = is.get();
  while (ch != EOF) {
    if (ch == '#') {
      while (ch != EOF && ch != '\n') ch = is.get();
    } else if (std::isspace(ch)) {
      ch = is.get();
    } else {
      break;
    }
  }
  if (ch == EOF || !std::isdigit(ch)) parse_fail(path, "malformed PNM header");
  long value = 0;
  while (ch != EOF && std::isdigit(ch)) {
    value = value * 10 + (ch - '0');
    if (value > 1 << 30) parse_fail(path, "header value out of range");
    ch = is.get();
  }
  if (ch != EOF) is.unget();
  return static_cast<int>(value);
}

int next_ascii_sample(std::istream& is, const std::string& path) {
  return next_header_int(is, path);
}

}  // namespace

Image load_image(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path);
  char p = 0, kind = 0;
  is.get(p);
  is.get(kind);
  if (p != 'P' || (kind != '2' && kind != '3' && kind != '5' && kind != '6'))
    parse_fail(path, "unsupported PNM type");
  const bool binary = kind == '5' || kind == '6';
  const bool gray = kind == '2' || kind == '5';

  const int width = next_header_int(is, path);
  const int height = next_header_int(is, path);
  const int maxval = next_header_int(is, path);
  if (width < 1 || height < 1) parse_fail(path, "bad image size");
  if (maxval < 1 || maxval > 255) parse_fail(path, "only 8-bit data supported");

  const Index h = height, w = width;
  const Index channels = gray ? 1 : 3;
  std::vector<std::uint8_t> raw(static_cast<std::size_t>(h) * w * channels);
  if (binary) {
    const int sep = is.get();
    if (sep == EOF || !std::isspace(sep))
      parse_fail(path, "malformed PNM header");
    is.read(reinterpret_cast<char*>(raw.data()),
            static_cast<std::streamsize>(raw.size()));
    if (static_cast<std::size_t>(is.gcount()) != raw.size())
      parse_fail(path, "truncated pixel data");
  } else {
    for (auto& b : raw) {
      const int v = next_ascii_sample(is, path);
      if (v > maxval) parse_fail(path, "sample exceeds maxval");
      b = static_cast<std::uint8_t>(v);
    }
  }

  Image img;
  img.maxval = maxval;
  img.from_grayscale = gray;
  img.tensor = DenseTensor(Dims{h, w, 3});
  const double scale = 1.0 / maxval;
  for (Index i = 0; i < h; ++i)
    for (Index j = 0; j < w; ++j)
      for (Index c = 0; c < 3; ++c) {
        const std::size_t src =
            (static_cast<std::size_t>(i) * w + j) * channels +
            (gray ? 0 : static_cast<std::size_t>(c));
        img.tensor[i + j * h + c * h * w] = raw[src] * scale;
      }
  return img;
}

void save_image(const DenseTensor& tensor, const std::string& path,
                int maxval) {
  if (tensor.order() != 3 || tensor.dims()[2] != 3)
    detail::fail("image tensor must be H x W x 3");
  if (maxval < 1 || maxval > 255) detail::fail("maxval must be in [1, 255]");
  const Index h = tensor.dims()[0], w = tensor.dims()[1];
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  os << "P6\n" << w << " " << h << "\n" << maxval << "\n";
  std::vector<std::uint8_t> row(static_cast<std::size_t>(w) * 3);
  for (Index i = 0; i < h; ++i) {
    for (Index j = 0; j < w; ++j)
      for (Index c = 0; c < 3; ++c) {
        double v = tensor[i + j * h + c * h * w];
        v = std::min(1.0, std::max(0.0, v));
        row[static_cast<std::size_t>(j) * 3 + c] =
            static_cast<std::uint8_t>(std::lround(v * maxval));
      }
    os.write(reinterpret_cast<const char*>(row.data()),
             static_cast<std::streamsize>(row.size()));
  }
  if (!os) throw std::runtime_error("write failed: " + path);
}

namespace {
constexpr char kDenseMagic[4] = {'T', 'T', 'C', 'D'};
}

void save_dense(const DenseTensor& t, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  os.write(kDenseMagic, 4);
  const std::int64_t d = t.order();
  os.write(reinterpret_cast<const char*>(&d), sizeof(d));
  for (Index k = 0; k < d; ++k) {
    const std::int64_t v = t.dims()[k];
    os.write(reinterpret_cast<const char*>(&v), sizeof(v));
  }
  os.write(reinterpret_cast<const char*>(t.data().data()),
           sizeof(double) * t.size());
  if (!os) throw std::runtime_error("write failed: " + path);
}

DenseTensor load_dense(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kDenseMagic, 4) != 0)
    throw std::runtime_error("not a dense tensor file: " + path);
  std::int64_t d = 0;
  is.read(reinterpret_cast<char*>(&d), sizeof(d));
  if (!is || d < 1 || d > 64)
    throw std::runtime_error("corrupt dense tensor file: " + path);
  Dims dims(d);
  for (auto& v : dims) {
    std::int64_t raw = 0;
    is.read(reinterpret_cast<char*>(&raw), sizeof(raw));
    v = raw;
  }
  if (!is) throw std::runtime_error("corrupt dense tensor file: " + path);
  DenseTensor t(dims);
  is.read(reinterpret_cast<char*>(t.data().data()), sizeof(double) * t.size());
  if (!is) throw std::runtime_error("truncated dense tensor file: " + path);
  return t;
}

}  // namespace ttc
