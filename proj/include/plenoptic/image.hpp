#ifndef PLENOPTIC_IMAGE_HPP
#define PLENOPTIC_IMAGE_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "plenoptic/error.hpp"

namespace plenoptic {

/// Row-major single-channel raster.
template <typename T>
class Image {
public:
    Image() = default;
    Image(int width, int height, T fill = T{})
        : width_(width), height_(height), data_(checked_size(width, height), fill) {}

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    T& operator()(int x, int y) noexcept { return data_[index(x, y)]; }
    const T& operator()(int x, int y) const noexcept { return data_[index(x, y)]; }

    T& at(int x, int y)
    {
        bounds(x, y);
        return data_[index(x, y)];
    }
    const T& at(int x, int y) const
    {
        bounds(x, y);
        return data_[index(x, y)];
    }

    std::span<T> row(int y) noexcept { return {data_.data() + index(0, y), static_cast<std::size_t>(width_)}; }
    std::span<const T> row(int y) const noexcept
    {
        return {data_.data() + index(0, y), static_cast<std::size_t>(width_)};
    }

    std::span<T> pixels() noexcept { return data_; }
    std::span<const T> pixels() const noexcept { return data_; }

    bool operator==(const Image&) const = default;

private:
    static std::size_t checked_size(int w, int h)
    {
        if (w < 0 || h < 0)
            throw invalid_argument("image dimensions must be non-negative");
        return static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
    }
    std::size_t index(int x, int y) const noexcept
    {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
    }
    void bounds(int x, int y) const
    {
        if (x < 0 || y < 0 || x >= width_ || y >= height_)
            throw invalid_argument("pixel outside image");
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<T> data_;
};

using ImageF = Image<double>;

} // namespace plenoptic

#endif // PLENOPTIC_IMAGE_HPP
