#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace clic {

// 8-bit RGB raster image, row-major, 3 channels.
struct RasterImage {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<std::uint8_t> data; // width*height*3 samples

    bool valid() const { return width >= 1 && height >= 1 && data.size() == width * height * 3; }
};

// Desk-scale stand-in for an image: a plain feature vector.
struct FeatureImage {
    std::vector<double> features;
};

enum class Orientation { Landscape, Portrait, Square };

enum class ConcatOrder { AB, BA };

Orientation orientation(const RasterImage& img);

// Square images pair with landscape.
inline bool same_orientation_class(Orientation a, Orientation b) {
    const auto cls = [](Orientation o) { return o == Orientation::Portrait ? 1 : 0; };
    return cls(a) == cls(b);
}

// Aspect-preserving bilinear resize (half-pixel centers) to the target width
// or height.
RasterImage resize_bilinear(const RasterImage& img, std::size_t out_width, std::size_t out_height);

// Landscape pairs stack vertically after resizing b to a's width; portrait
// pairs join horizontally after resizing b to a's height. order selects
// which image comes first (top/left).
RasterImage concat_images(const RasterImage& a, const RasterImage& b, ConcatOrder order);

FeatureImage concat_features(const FeatureImage& a, const FeatureImage& b, ConcatOrder order);

// Binary PPM (P6), bit-exact round trip.
RasterImage read_ppm(const std::string& path);
void write_ppm(const RasterImage& img, const std::string& path);
RasterImage decode_ppm(const std::string& bytes);
std::string encode_ppm(const RasterImage& img);

} // namespace clic
