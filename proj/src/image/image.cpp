#include "clic/image/image.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "clic/error.hpp"

namespace clic {

Orientation orientation(const RasterImage& img) {
    if (img.width > img.height) return Orientation::Landscape;
    if (img.height > img.width) return Orientation::Portrait;
    return Orientation::Square;
}

RasterImage resize_bilinear(const RasterImage& img, std::size_t out_width, std::size_t out_height) {
    RasterImage out;
    out.width = out_width;
    out.height = out_height;
    out.data.resize(out_width * out_height * 3);

    const double sx = static_cast<double>(img.width) / static_cast<double>(out_width);
    const double sy = static_cast<double>(img.height) / static_cast<double>(out_height);

    for (std::size_t y = 0; y < out_height; ++y) {
        // half-pixel centers
        const double src_y = (static_cast<double>(y) + 0.5) * sy - 0.5;
        const double cy = std::clamp(src_y, 0.0, static_cast<double>(img.height - 1));
        const std::size_t y0 = static_cast<std::size_t>(std::floor(cy));
        const std::size_t y1 = std::min(y0 + 1, img.height - 1);
        const double fy = cy - static_cast<double>(y0);
        for (std::size_t x = 0; x < out_width; ++x) {
            const double src_x = (static_cast<double>(x) + 0.5) * sx - 0.5;
            const double cx = std::clamp(src_x, 0.0, static_cast<double>(img.width - 1));
            const std::size_t x0 = static_cast<std::size_t>(std::floor(cx));
            const std::size_t x1 = std::min(x0 + 1, img.width - 1);
            const double fx = cx - static_cast<double>(x0);
            for (std::size_t c = 0; c < 3; ++c) {
                const auto at = [&](std::size_t yy, std::size_t xx) {
                    return static_cast<double>(img.data[(yy * img.width + xx) * 3 + c]);
                };
                const double top = at(y0, x0) * (1.0 - fx) + at(y0, x1) * fx;
                const double bottom = at(y1, x0) * (1.0 - fx) + at(y1, x1) * fx;
                const double v = top * (1.0 - fy) + bottom * fy;
                out.data[(y * out_width + x) * 3 + c] =
                    static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
            }
        }
    }
    return out;
}

RasterImage concat_images(const RasterImage& a, const RasterImage& b, ConcatOrder order) {
    const Orientation oa = orientation(a);
    const Orientation ob = orientation(b);
    if (!same_orientation_class(oa, ob))
        throw OrientationMismatch("concat_images: orientation classes differ");

    const bool vertical = oa != Orientation::Portrait; // landscape and square stack vertically

    RasterImage rb = b;
    if (vertical) {
        if (b.width != a.width) {
            const std::size_t h = std::max<std::size_t>(
                1, static_cast<std::size_t>(std::lround(static_cast<double>(b.height) *
                                                        static_cast<double>(a.width) /
                                                        static_cast<double>(b.width))));
            rb = resize_bilinear(b, a.width, h);
        }
        const RasterImage& top = order == ConcatOrder::AB ? a : rb;
        const RasterImage& bottom = order == ConcatOrder::AB ? rb : a;
        RasterImage out;
        out.width = a.width;
        out.height = top.height + bottom.height;
        out.data.reserve(out.width * out.height * 3);
        out.data.insert(out.data.end(), top.data.begin(), top.data.end());
        out.data.insert(out.data.end(), bottom.data.begin(), bottom.data.end());
        return out;
    }

    if (b.height != a.height) {
        const std::size_t w = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::lround(static_cast<double>(b.width) *
                                                    static_cast<double>(a.height) /
                                                    static_cast<double>(b.height))));
        rb = resize_bilinear(b, w, a.height);
    }
    const RasterImage& left = order == ConcatOrder::AB ? a : rb;
    const RasterImage& right = order == ConcatOrder::AB ? rb : a;
    RasterImage out;
    out.width = left.width + right.width;
    out.height = a.height;
    out.data.resize(out.width * out.height * 3);
    for (std::size_t y = 0; y < out.height; ++y) {
        std::copy_n(left.data.begin() + static_cast<std::ptrdiff_t>(y * left.width * 3),
                    left.width * 3, out.data.begin() + static_cast<std::ptrdiff_t>(y * out.width * 3));
        std::copy_n(right.data.begin() + static_cast<std::ptrdiff_t>(y * right.width * 3),
                    right.width * 3,
                    out.data.begin() +
                        static_cast<std::ptrdiff_t>(y * out.width * 3 + left.width * 3));
    }
    return out;
}

FeatureImage concat_features(const FeatureImage& a, const FeatureImage& b, ConcatOrder order) {
    if (a.features.size() != b.features.size())
        throw DimensionMismatch("concat_features: dimensions differ");
    FeatureImage out;
    const FeatureImage& first = order == ConcatOrder::AB ? a : b;
    const FeatureImage& second = order == ConcatOrder::AB ? b : a;
    out.features = first.features;
    out.features.insert(out.features.end(), second.features.begin(), second.features.end());
    return out;
}

namespace {

// Reads one PPM header token, skipping whitespace and '#' comments.
std::string next_ppm_token(std::istream& in) {
    std::string tok;
    int c = in.get();
    while (c != EOF) {
        if (c == '#') {
            while (c != EOF && c != '\n') c = in.get();
        } else if (std::isspace(c)) {
            c = in.get();
        } else {
            break;
        }
    }
    while (c != EOF && !std::isspace(c)) {
        tok.push_back(static_cast<char>(c));
        c = in.get();
    }
    return tok;
}

RasterImage decode_ppm_stream(std::istream& in, const std::string& origin) {
    if (next_ppm_token(in) != "P6") throw IoError(origin + ": not a binary PPM (P6)");
    RasterImage img;
    try {
        img.width = std::stoul(next_ppm_token(in));
        img.height = std::stoul(next_ppm_token(in));
        const unsigned long maxval = std::stoul(next_ppm_token(in));
        if (maxval != 255) throw IoError(origin + ": only maxval 255 is supported");
    } catch (const std::logic_error&) {
        throw IoError(origin + ": malformed PPM header");
    }
    if (img.width == 0 || img.height == 0) throw IoError(origin + ": zero dimension");
    img.data.resize(img.width * img.height * 3);
    in.read(reinterpret_cast<char*>(img.data.data()), static_cast<std::streamsize>(img.data.size()));
    if (static_cast<std::size_t>(in.gcount()) != img.data.size())
        throw IoError(origin + ": truncated pixel data");
    return img;
}

} // namespace

RasterImage read_ppm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open image: " + path);
    return decode_ppm_stream(in, path);
}

RasterImage decode_ppm(const std::string& bytes) {
    std::istringstream in(bytes);
    return decode_ppm_stream(in, "<memory>");
}

std::string encode_ppm(const RasterImage& img) {
    std::ostringstream out;
    out << "P6\n" << img.width << " " << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.data.data()),
              static_cast<std::streamsize>(img.data.size()));
    return out.str();
}

void write_ppm(const RasterImage& img, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write image: " + path);
    const std::string bytes = encode_ppm(img);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("short write: " + path);
}

} // namespace clic
