#ifndef PLENOPTIC_LIGHTFIELD_HPP
#define PLENOPTIC_LIGHTFIELD_HPP

// Reorganises a calibrated raw plenoptic capture into a 4-D light field
// [j, h, i, g] and gathers sub-aperture views from it.
//
// Pixel column k of the raw image belongs to micro lens j and viewpoint
// offset i through k = j*M + c + i (rows likewise with h, g). The raw image is
// assumed rectified so that every micro image is exactly M x M pixels with its
// centre on the central pixel.

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "plenoptic/error.hpp"
#include "plenoptic/image.hpp"
#include "plenoptic/optics.hpp"

namespace plenoptic::lightfield {

struct Layout {
    int lenses_h = 0;         // J
    int lenses_v = 0;         // H
    int micro_image_size = 1; // M, odd

    int center() const noexcept { return (micro_image_size - 1) / 2; }
    int raw_width() const noexcept { return lenses_h * micro_image_size; }
    int raw_height() const noexcept { return lenses_v * micro_image_size; }
    bool operator==(const Layout&) const = default;
};

inline Layout layout_of(const optics::CameraConfig& cfg)
{
    return {cfg.mla.count_h, cfg.mla.count_v, cfg.sensor.micro_image_size};
}

/// Raw column (or row) index of sample c+i under lens j.
inline int index_translate(int j, int i, int micro_image_size)
{
    const int c = (micro_image_size - 1) / 2;
    if (micro_image_size < 1 || micro_image_size % 2 == 0)
        throw invalid_argument("micro image size must be odd and positive");
    if (j < 0 || i < -c || i > c)
        throw invalid_argument("index pair (" + std::to_string(j) + ", " + std::to_string(i) + ") out of range");
    return j * micro_image_size + c + i;
}

/// Inverse of index_translate: (lens index, viewpoint offset).
inline std::pair<int, int> index_split(int k, int micro_image_size)
{
    if (micro_image_size < 1 || micro_image_size % 2 == 0)
        throw invalid_argument("micro image size must be odd and positive");
    if (k < 0)
        throw invalid_argument("raw index must be non-negative");
    const int c = (micro_image_size - 1) / 2;
    return {k / micro_image_size, k % micro_image_size - c};
}

struct RawLightFieldImage {
    ImageF samples;
    Layout layout;
};

/// Rotates by 180 degrees; applying it twice restores the input.
inline ImageF rotate_180(const ImageF& img)
{
    ImageF out(img.width(), img.height());
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x)
            out(img.width() - 1 - x, img.height() - 1 - y) = img(x, y);
    return out;
}

class LightField4D {
public:
    LightField4D() = default;
    explicit LightField4D(Layout layout)
        : layout_(layout),
          data_(static_cast<std::size_t>(layout.lenses_h) * layout.lenses_v * layout.micro_image_size *
                layout.micro_image_size)
    {
    }

    const Layout& layout() const noexcept { return layout_; }

    double& operator()(int j, int h, int i, int g) noexcept { return data_[index(j, h, i, g)]; }
    double operator()(int j, int h, int i, int g) const noexcept { return data_[index(j, h, i, g)]; }

    double at(int j, int h, int i, int g) const
    {
        const int c = layout_.center();
        if (j < 0 || h < 0 || j >= layout_.lenses_h || h >= layout_.lenses_v || i < -c || i > c || g < -c || g > c)
            throw invalid_argument("light field index out of range");
        return (*this)(j, h, i, g);
    }

    std::size_t size() const noexcept { return data_.size(); }

private:
    std::size_t index(int j, int h, int i, int g) const noexcept
    {
        const int m = layout_.micro_image_size;
        const int c = layout_.center();
        return ((static_cast<std::size_t>(h) * layout_.lenses_h + j) * m + (g + c)) * m + (i + c);
    }

    Layout layout_;
    std::vector<double> data_;
};

inline LightField4D decode(const RawLightFieldImage& raw, bool rotate = false)
{
    const auto& lay = raw.layout;
    if (lay.micro_image_size < 1 || lay.micro_image_size % 2 == 0)
        throw invalid_argument("micro image size must be odd and positive");
    if (raw.samples.width() != lay.raw_width() || raw.samples.height() != lay.raw_height())
        throw invalid_argument("raw image " + std::to_string(raw.samples.width()) + "x" +
                               std::to_string(raw.samples.height()) + " does not match " +
                               std::to_string(lay.lenses_h) + "x" + std::to_string(lay.lenses_v) +
                               " micro images of " + std::to_string(lay.micro_image_size) + " px");

    const ImageF rotated = rotate ? rotate_180(raw.samples) : ImageF{};
    const ImageF& src = rotate ? rotated : raw.samples;

    LightField4D lf(lay);
    const int m = lay.micro_image_size;
    const int c = lay.center();
    for (int l = 0; l < src.height(); ++l) {
        const int h = l / m;
        const int g = l % m - c;
        for (int k = 0; k < src.width(); ++k)
            lf(k / m, h, k % m - c, g) = src(k, l);
    }
    return lf;
}

/// Inverse of decode (without rotation).
inline RawLightFieldImage flatten(const LightField4D& lf)
{
    const auto& lay = lf.layout();
    RawLightFieldImage raw{ImageF(lay.raw_width(), lay.raw_height()), lay};
    const int m = lay.micro_image_size;
    const int c = lay.center();
    for (int l = 0; l < lay.raw_height(); ++l)
        for (int k = 0; k < lay.raw_width(); ++k)
            raw.samples(k, l) = lf(k / m, l / m, k % m - c, l % m - c);
    return raw;
}

struct SubApertureImage {
    int i = 0;
    int g = 0;
    ImageF pixels; // lenses_h x lenses_v
};

inline SubApertureImage extract_view(const LightField4D& lf, int i, int g)
{
    const auto& lay = lf.layout();
    const int c = lay.center();
    if (i < -c || i > c || g < -c || g > c)
        throw invalid_argument("viewpoint (" + std::to_string(i) + ", " + std::to_string(g) + ") outside [-c, c]");
    SubApertureImage view{i, g, ImageF(lay.lenses_h, lay.lenses_v)};
    for (int h = 0; h < lay.lenses_v; ++h)
        for (int j = 0; j < lay.lenses_h; ++j)
            view.pixels(j, h) = lf(j, h, i, g);
    return view;
}

/// All M*M views, g-major then i, both ascending from -c.
inline std::vector<SubApertureImage> extract_all_views(const LightField4D& lf)
{
    const int c = lf.layout().center();
    std::vector<SubApertureImage> views;
    views.reserve(static_cast<std::size_t>(lf.layout().micro_image_size) * lf.layout().micro_image_size);
    for (int g = -c; g <= c; ++g)
        for (int i = -c; i <= c; ++i)
            views.push_back(extract_view(lf, i, g));
    return views;
}

/// File name used for a view on disk, e.g. view_-2_0.pgm.
inline std::string view_filename(int i, int g)
{
    return "view_" + std::to_string(i) + "_" + std::to_string(g) + ".pgm";
}

} // namespace plenoptic::lightfield

#endif // PLENOPTIC_LIGHTFIELD_HPP
