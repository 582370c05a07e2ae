#include "handsynth/image.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include "handsynth/errors.hpp"

namespace handsynth {

void write_ppm(const Image& img, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open for write: " + path);
  f << "P6\n" << img.width << " " << img.height << "\n255\n";
  f.write(reinterpret_cast<const char*>(img.pixels.data()),
          static_cast<std::streamsize>(img.pixels.size()));
  if (!f) throw IoError("write failed: " + path);
}

namespace {

// Reads one whitespace/comment-delimited PNM header token.
std::string next_token(std::istream& in) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (!std::isspace(c)) {
      tok.push_back(static_cast<char>(c));
      while ((c = in.peek()) != EOF && !std::isspace(c)) tok.push_back(static_cast<char>(in.get()));
      return tok;
    }
  }
  return tok;
}

}  // namespace

Image read_ppm(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open: " + path);
  if (next_token(f) != "P6") throw SchemaError("not a binary PPM: " + path);
  int w = std::stoi(next_token(f));
  int h = std::stoi(next_token(f));
  int maxv = std::stoi(next_token(f));
  if (maxv != 255) throw SchemaError("unsupported PPM maxval in " + path);
  f.get();  // single whitespace after maxval
  Image img(w, h);
  f.read(reinterpret_cast<char*>(img.pixels.data()),
         static_cast<std::streamsize>(img.pixels.size()));
  if (f.gcount() != static_cast<std::streamsize>(img.pixels.size()))
    throw SchemaError("truncated PPM: " + path);
  return img;
}

void write_pfm(const FloatImage& img, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open for write: " + path);
  f << "PF\n" << img.width << " " << img.height << "\n-1.0\n";
  // PFM stores rows bottom-up.
  for (int y = img.height - 1; y >= 0; --y)
    f.write(reinterpret_cast<const char*>(img.at(0, y)),
            static_cast<std::streamsize>(img.width) * 3 * sizeof(float));
  if (!f) throw IoError("write failed: " + path);
}

FloatImage read_pfm(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open: " + path);
  std::string magic = next_token(f);
  if (magic != "PF") throw SchemaError("not a color PFM: " + path);
  int w = std::stoi(next_token(f));
  int h = std::stoi(next_token(f));
  double scale = std::stod(next_token(f));
  f.get();
  FloatImage img(w, h);
  std::vector<float> row(static_cast<size_t>(w) * 3);
  for (int y = h - 1; y >= 0; --y) {
    f.read(reinterpret_cast<char*>(row.data()),
           static_cast<std::streamsize>(row.size() * sizeof(float)));
    if (!f) throw SchemaError("truncated PFM: " + path);
    if (scale > 0) {
      // Big-endian file: swap.
      for (auto& v : row) {
        uint32_t u;
        std::memcpy(&u, &v, 4);
        u = __builtin_bswap32(u);
        std::memcpy(&v, &u, 4);
      }
    }
    std::memcpy(img.at(0, y), row.data(), row.size() * sizeof(float));
  }
  double mag = std::fabs(scale);
  if (mag != 1.0 && mag > 0.0)
    for (auto& v : img.pixels) v *= static_cast<float>(mag);
  return img;
}

namespace {

void rgbe_to_float(const uint8_t rgbe[4], float out[3]) {
  if (rgbe[3] == 0) {
    out[0] = out[1] = out[2] = 0.f;
    return;
  }
  float scale = std::ldexp(1.f, static_cast<int>(rgbe[3]) - (128 + 8));
  out[0] = rgbe[0] * scale;
  out[1] = rgbe[1] * scale;
  out[2] = rgbe[2] * scale;
}

}  // namespace

FloatImage read_radiance_hdr(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open: " + path);
  std::string line;
  if (!std::getline(f, line) || line.rfind("#?", 0) != 0)
    throw SchemaError("not a Radiance file: " + path);
  bool rgbe = false;
  while (std::getline(f, line) && !line.empty()) {
    if (line.rfind("FORMAT=", 0) == 0) rgbe = line.find("32-bit_rle_rgbe") != std::string::npos;
  }
  if (!rgbe) throw SchemaError("unsupported Radiance format in " + path);
  if (!std::getline(f, line)) throw SchemaError("missing resolution line: " + path);
  int w = 0, h = 0;
  if (std::sscanf(line.c_str(), "-Y %d +X %d", &h, &w) != 2)
    throw SchemaError("unsupported Radiance orientation: " + path);
  FloatImage img(w, h);
  std::vector<uint8_t> scan(static_cast<size_t>(w) * 4);
  for (int y = 0; y < h; ++y) {
    uint8_t head[4];
    f.read(reinterpret_cast<char*>(head), 4);
    if (!f) throw SchemaError("truncated Radiance file: " + path);
    if (head[0] == 2 && head[1] == 2 && ((head[2] << 8) | head[3]) == w && w >= 8 && w < 32768) {
      // New-style RLE: four separated component planes.
      for (int c = 0; c < 4; ++c) {
        int x = 0;
        while (x < w) {
          int count = f.get();
          if (count == EOF) throw SchemaError("truncated Radiance RLE: " + path);
          if (count > 128) {
            int run = count - 128;
            int value = f.get();
            for (int i = 0; i < run; ++i) scan[(x + i) * 4 + c] = static_cast<uint8_t>(value);
            x += run;
          } else {
            for (int i = 0; i < count; ++i) scan[(x + i) * 4 + c] = static_cast<uint8_t>(f.get());
            x += count;
          }
        }
      }
    } else {
      // Flat scanline; the 4 bytes already read are the first pixel.
      std::memcpy(scan.data(), head, 4);
      f.read(reinterpret_cast<char*>(scan.data() + 4), static_cast<std::streamsize>(w - 1) * 4);
      if (!f) throw SchemaError("truncated Radiance file: " + path);
    }
    for (int x = 0; x < w; ++x) rgbe_to_float(&scan[x * 4], img.at(x, y));
  }
  return img;
}

void sample_bilinear(const Image& img, double x, double y, uint8_t out[3]) {
  if (x < 0.0 || y < 0.0 || x > img.width - 1.0 || y > img.height - 1.0) {
    out[0] = out[1] = out[2] = 0;
    return;
  }
  int x0 = static_cast<int>(std::floor(x));
  int y0 = static_cast<int>(std::floor(y));
  int x1 = std::min(x0 + 1, img.width - 1);
  int y1 = std::min(y0 + 1, img.height - 1);
  double fx = x - x0, fy = y - y0;
  const uint8_t* p00 = img.at(x0, y0);
  const uint8_t* p10 = img.at(x1, y0);
  const uint8_t* p01 = img.at(x0, y1);
  const uint8_t* p11 = img.at(x1, y1);
  for (int c = 0; c < 3; ++c) {
    double v = (1 - fx) * (1 - fy) * p00[c] + fx * (1 - fy) * p10[c] + (1 - fx) * fy * p01[c] +
               fx * fy * p11[c];
    out[c] = static_cast<uint8_t>(std::lround(std::clamp(v, 0.0, 255.0)));
  }
}

double srgb_encode(double linear) {
  if (linear <= 0.0031308) return 12.92 * linear;
  return 1.055 * std::pow(linear, 1.0 / 2.4) - 0.055;
}

double srgb_decode(double encoded) {
  if (encoded <= 0.04045) return encoded / 12.92;
  return std::pow((encoded + 0.055) / 1.055, 2.4);
}

uint8_t quantize8(double v01) {
  return static_cast<uint8_t>(std::lround(std::clamp(v01, 0.0, 1.0) * 255.0));
}

}  // namespace handsynth
