#include "atv/image_io.hpp"

#include <zlib.h>

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

namespace atv {

namespace {

std::vector<unsigned char> read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<unsigned char> data((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return data;
}

void write_bytes(const std::filesystem::path& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(data.data(), std::streamsize(data.size()));
  if (!out) throw std::runtime_error("short write to " + path.string());
}

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// ---- PGM ----

struct PgmData {
  int width = 0, height = 0;
  std::vector<int> pixels;  // row-major, top row first
};

int next_pgm_token(const std::vector<unsigned char>& data, std::size_t& pos) {
  // skips whitespace and '#' comments, returns a nonnegative integer
  while (pos < data.size()) {
    if (std::isspace(data[pos])) {
      ++pos;
    } else if (data[pos] == '#') {
      while (pos < data.size() && data[pos] != '\n') ++pos;
    } else {
      break;
    }
  }
  if (pos >= data.size() || !std::isdigit(data[pos]))
    throw std::runtime_error("malformed PGM header");
  int value = 0;
  while (pos < data.size() && std::isdigit(data[pos])) {
    value = value * 10 + (data[pos] - '0');
    ++pos;
  }
  return value;
}

PgmData parse_pgm(const std::vector<unsigned char>& data,
                  const std::string& name) {
  if (data.size() < 2 || data[0] != 'P' || (data[1] != '2' && data[1] != '5'))
    throw std::runtime_error(name + ": not a P2/P5 graymap");
  const bool binary = data[1] == '5';
  std::size_t pos = 2;
  PgmData out;
  out.width = next_pgm_token(data, pos);
  out.height = next_pgm_token(data, pos);
  const int maxval = next_pgm_token(data, pos);
  if (maxval != 255)
    throw std::runtime_error(name + ": only maxval 255 is supported");
  out.pixels.resize(std::size_t(out.width) * out.height);
  if (binary) {
    ++pos;  // single whitespace after maxval
    if (pos + out.pixels.size() > data.size())
      throw std::runtime_error(name + ": truncated pixel data");
    for (std::size_t k = 0; k < out.pixels.size(); ++k)
      out.pixels[k] = data[pos + k];
  } else {
    for (std::size_t k = 0; k < out.pixels.size(); ++k) {
      const int p = next_pgm_token(data, pos);
      if (p > 255) throw std::runtime_error(name + ": sample out of range");
      out.pixels[k] = p;
    }
  }
  return out;
}

// ---- PNG (8-bit grayscale, non-interlaced) ----

std::uint32_t be32(const unsigned char* p) {
  return (std::uint32_t(p[0]) << 24) | (std::uint32_t(p[1]) << 16) |
         (std::uint32_t(p[2]) << 8) | std::uint32_t(p[3]);
}

int paeth(int a, int b, int c) {
  const int p = a + b - c;
  const int pa = std::abs(p - a), pb = std::abs(p - b), pc = std::abs(p - c);
  if (pa <= pb && pa <= pc) return a;
  if (pb <= pc) return b;
  return c;
}

PgmData parse_png(const std::vector<unsigned char>& data,
                  const std::string& name) {
  static const unsigned char sig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a,
                                       '\n'};
  if (data.size() < 8 || std::memcmp(data.data(), sig, 8) != 0)
    throw std::runtime_error(name + ": not a PNG file");

  std::size_t pos = 8;
  std::uint32_t width = 0, height = 0;
  std::vector<unsigned char> idat;
  bool have_header = false;
  while (pos + 8 <= data.size()) {
    const std::uint32_t len = be32(&data[pos]);
    const char* type = reinterpret_cast<const char*>(&data[pos + 4]);
    if (pos + 12 + len > data.size())
      throw std::runtime_error(name + ": truncated chunk");
    const unsigned char* body = &data[pos + 8];
    if (std::memcmp(type, "IHDR", 4) == 0) {
      if (len != 13) throw std::runtime_error(name + ": bad IHDR");
      width = be32(body);
      height = be32(body + 4);
      const int bit_depth = body[8], color_type = body[9];
      const int interlace = body[12];
      if (bit_depth != 8 || color_type != 0)
        throw std::runtime_error(name +
                                 ": only 8-bit grayscale PNG is supported");
      if (interlace != 0)
        throw std::runtime_error(name + ": interlaced PNG is not supported");
      have_header = true;
    } else if (std::memcmp(type, "IDAT", 4) == 0) {
      idat.insert(idat.end(), body, body + len);
    } else if (std::memcmp(type, "IEND", 4) == 0) {
      break;
    }
    pos += 12 + len;
  }
  if (!have_header || width == 0 || height == 0 || idat.empty())
    throw std::runtime_error(name + ": missing PNG image data");

  const std::size_t stride = width;                 // one byte per pixel
  const std::size_t raw_size = (stride + 1) * height;
  std::vector<unsigned char> raw(raw_size);
  uLongf out_len = raw_size;
  if (uncompress(raw.data(), &out_len, idat.data(), uLong(idat.size())) != Z_OK ||
      out_len != raw_size)
    throw std::runtime_error(name + ": corrupt PNG pixel stream");

  PgmData out;
  out.width = int(width);
  out.height = int(height);
  out.pixels.resize(std::size_t(width) * height);
  std::vector<unsigned char> prev(stride, 0), cur(stride, 0);
  for (std::uint32_t row = 0; row < height; ++row) {
    const unsigned char* line = &raw[(stride + 1) * row];
    const int filter = line[0];
    for (std::size_t x = 0; x < stride; ++x) {
      const int rawv = line[1 + x];
      const int a = x > 0 ? cur[x - 1] : 0;
      const int b = prev[x];
      const int c = x > 0 ? prev[x - 1] : 0;
      int value = 0;
      switch (filter) {
        case 0: value = rawv; break;
        case 1: value = rawv + a; break;
        case 2: value = rawv + b; break;
        case 3: value = rawv + (a + b) / 2; break;
        case 4: value = rawv + paeth(a, b, c); break;
        default:
          throw std::runtime_error(name + ": unknown PNG filter type");
      }
      cur[x] = static_cast<unsigned char>(value & 0xff);
      out.pixels[std::size_t(row) * width + x] = cur[x];
    }
    prev.swap(cur);
  }
  return out;
}

}  // namespace

ScalarField read_image(const std::filesystem::path& path, const ValueMap& map,
                       double half_width) {
  const std::vector<unsigned char> data = read_bytes(path);
  const std::string name = path.string();
  PgmData img;
  if (data.size() >= 2 && data[0] == 'P' && (data[1] == '2' || data[1] == '5'))
    img = parse_pgm(data, name);
  else
    img = parse_png(data, name);
  if (img.width != img.height)
    throw std::runtime_error(name + ": image must be square");
  if (img.width < 2) throw std::runtime_error(name + ": image too small");
  const double hw = half_width > 0.0 ? half_width : (img.width - 1) / 2.0;
  ScalarField out(GridSpec(img.width, hw));
  for (std::size_t k = 0; k < img.pixels.size(); ++k)
    out.v[k] = map.to_value(img.pixels[k]);
  return out;
}

void write_pgm(const std::filesystem::path& path, const ScalarField& u,
               const ValueMap& map, bool binary) {
  const int n = u.n();
  std::string out;
  char head[64];
  std::snprintf(head, sizeof head, "%s\n%d %d\n255\n", binary ? "P5" : "P2", n,
                n);
  out += head;
  if (binary) {
    out.reserve(out.size() + u.v.size());
    for (double x : u.v) out.push_back(char(map.to_pixel(x)));
  } else {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (j) out.push_back(' ');
        out += std::to_string(map.to_pixel(u(i, j)));
      }
      out.push_back('\n');
    }
  }
  write_bytes(path, out);
}

void write_value_map_sidecar(const std::filesystem::path& path,
                             const ValueMap& map) {
  std::string out;
  out += "min = " + format_double(map.vmin) + "\n";
  out += "max = " + format_double(map.vmax) + "\n";
  out += "M = " + format_double(map.depth) + "\n";
  write_bytes(path, out);
}

ValueMap read_value_map_sidecar(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  ValueMap map;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string key, eq;
    double value;
    if (ls >> key >> eq >> value && eq == "=") {
      if (key == "min") map.vmin = value;
      if (key == "max") map.vmax = value;
      if (key == "M") map.depth = value;
    }
  }
  return map;
}

void write_field(const std::filesystem::path& path, const ScalarField& u) {
  std::string out = "ATVF1\n";
  out += std::to_string(u.n()) + " " + format_double(u.grid.half_width) + "\n";
  const std::size_t bytes = u.v.size() * sizeof(double);
  const std::size_t head = out.size();
  out.resize(head + bytes);
  std::memcpy(out.data() + head, u.v.data(), bytes);
  write_bytes(path, out);
}

ScalarField read_field(const std::filesystem::path& path) {
  const std::vector<unsigned char> data = read_bytes(path);
  const std::string name = path.string();
  const char* p = reinterpret_cast<const char*>(data.data());
  if (data.size() < 6 || std::strncmp(p, "ATVF1\n", 6) != 0)
    throw std::runtime_error(name + ": not a field dump");
  std::size_t pos = 6;
  std::size_t line_end = pos;
  while (line_end < data.size() && data[line_end] != '\n') ++line_end;
  if (line_end >= data.size())
    throw std::runtime_error(name + ": truncated field header");
  int n = 0;
  double hw = 0.0;
  if (std::sscanf(p + pos, "%d %lf", &n, &hw) != 2 || n < 2 || !(hw > 0.0))
    throw std::runtime_error(name + ": malformed field header");
  pos = line_end + 1;
  ScalarField out(GridSpec(n, hw));
  const std::size_t bytes = out.v.size() * sizeof(double);
  if (data.size() - pos != bytes)
    throw std::runtime_error(name + ": field payload size mismatch");
  std::memcpy(out.v.data(), data.data() + pos, bytes);
  return out;
}

}  // namespace atv
