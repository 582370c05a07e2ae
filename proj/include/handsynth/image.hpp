#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace handsynth {

// 8-bit sRGB raster. Row-major, interleaved RGB.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> pixels;  // size = width * height * 3

  Image() = default;
  Image(int w, int h, uint8_t fill = 0) : width(w), height(h), pixels(w * h * 3, fill) {}

  uint8_t* at(int x, int y) { return pixels.data() + 3 * (y * width + x); }
  const uint8_t* at(int x, int y) const { return pixels.data() + 3 * (y * width + x); }

  bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }

  bool operator==(const Image& o) const {
    return width == o.width && height == o.height && pixels == o.pixels;
  }
};

// Linear float raster (RGB), used for environment maps and debug z-dumps.
struct FloatImage {
  int width = 0;
  int height = 0;
  std::vector<float> pixels;  // size = width * height * 3

  FloatImage() = default;
  FloatImage(int w, int h, float fill = 0.f) : width(w), height(h), pixels(w * h * 3, fill) {}

  float* at(int x, int y) { return pixels.data() + 3 * (y * width + x); }
  const float* at(int x, int y) const { return pixels.data() + 3 * (y * width + x); }
};

// Binary PPM (P6), the pipeline's lossless 8-bit output format.
void write_ppm(const Image& img, const std::string& path);
Image read_ppm(const std::string& path);

// PFM, color, little-endian negative-scale convention.
void write_pfm(const FloatImage& img, const std::string& path);
FloatImage read_pfm(const std::string& path);

// Radiance RGBE (.hdr), run-length and flat encodings.
FloatImage read_radiance_hdr(const std::string& path);

// Bilinear sample in index coordinates; out-of-range returns black.
// Coordinates are pixel indices, valid range [0, w-1] x [0, h-1].
void sample_bilinear(const Image& img, double x, double y, uint8_t out[3]);

// sRGB transfer functions.
double srgb_encode(double linear);
double srgb_decode(double encoded);
uint8_t quantize8(double v01);

}  // namespace handsynth
