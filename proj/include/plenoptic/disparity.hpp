#ifndef PLENOPTIC_DISPARITY_HPP
#define PLENOPTIC_DISPARITY_HPP

// Horizontal disparity between two sub-aperture views by sum-of-absolute-
// differences block matching, winner-take-all, with parabolic sub-pixel
// refinement.
//
// Convention: the left view has the lower viewpoint index. A disparity d
// matches left(x, y) with right(x - d, y), so d = x_left - x_right and points
// nearer than the zero-disparity plane get d > 0.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <string>
#include <vector>

#include "plenoptic/error.hpp"
#include "plenoptic/image.hpp"

namespace plenoptic::disparity {

struct MatchParams {
    int block_size = 29;   // odd
    int max_disparity = 5; // search range is [-max, +max]
    bool subpixel = true;
};

struct DisparityMap {
    ImageF values;          // NaN where invalid
    Image<std::uint8_t> valid;

    int width() const noexcept { return values.width(); }
    int height() const noexcept { return values.height(); }
    std::size_t valid_count() const noexcept
    {
        std::size_t n = 0;
        for (auto v : valid.pixels())
            n += v != 0;
        return n;
    }
};

inline void check(const MatchParams& p, int width)
{
    if (p.block_size < 1 || p.block_size % 2 == 0)
        throw invalid_argument("block size must be odd and positive, got " + std::to_string(p.block_size));
    if (p.max_disparity < 0 || p.max_disparity >= width)
        throw invalid_argument("max disparity must lie in [0, width)");
}

/// SAD between the block centred at (x, y) in `left` and the block centred at (x - d, y) in `right`.
inline double sad_cost(const ImageF& left, const ImageF& right, int x, int y, int d, int block)
{
    if (block < 1 || block % 2 == 0)
        throw invalid_argument("block size must be odd and positive");
    const int r = block / 2;
    const auto inside = [r](const ImageF& img, int cx, int cy) {
        return cx - r >= 0 && cy - r >= 0 && cx + r < img.width() && cy + r < img.height();
    };
    if (!inside(left, x, y) || !inside(right, x - d, y))
        throw invalid_argument("matching window leaves the image");

    double sum = 0.0;
    for (int v = -r; v <= r; ++v)
        for (int u = -r; u <= r; ++u)
            sum += std::abs(left(x + u, y + v) - right(x + u - d, y + v));
    return sum;
}

/// Vertex offset of the parabola through (-1, c_minus), (0, c_zero), (1, c_plus),
/// kept inside the open interval (-0.5, 0.5). A flat or non-convex triple gives 0,
/// and so does an exact match (zero cost).
inline double subpixel_refine(double c_minus, double c_zero, double c_plus)
{
    if (c_zero == 0.0)
        return 0.0;
    const double curvature = c_minus - 2.0 * c_zero + c_plus;
    if (!(curvature > 0.0))
        return 0.0;
    const double offset = (c_minus - c_plus) / (2.0 * curvature);
    const double limit = std::nextafter(0.5, 0.0);
    return std::clamp(offset, -limit, limit);
}

/// Dense disparity of `left` against `right`. Pixels whose window does not fit
/// for every candidate shift are flagged invalid. Ties go to the smaller |d|,
/// then to the positive candidate.
inline DisparityMap block_match(const ImageF& left, const ImageF& right, const MatchParams& p)
{
    if (left.width() != right.width() || left.height() != right.height())
        throw invalid_argument("views differ in size");
    const int w = left.width();
    const int h = left.height();
    check(p, w);

    const int r = p.block_size / 2;
    const int max_d = p.max_disparity;
    const int n_d = 2 * max_d + 1;
    const int x0 = r + max_d, x1 = w - 1 - r - max_d;
    const int y0 = r, y1 = h - 1 - r;

    DisparityMap map{ImageF(w, h, std::numeric_limits<double>::quiet_NaN()), Image<std::uint8_t>(w, h, 0)};
    if (x0 > x1 || y0 > y1)
        return map;

    // cost volume over the valid region, layout [d][y][x]
    const std::size_t plane = static_cast<std::size_t>(w) * h;
    std::vector<double> cost(plane * n_d, 0.0);
    std::vector<double> integral(static_cast<std::size_t>(w + 1) * (h + 1));
    const auto I = [&](int x, int y) -> double& { return integral[static_cast<std::size_t>(y) * (w + 1) + x]; };

    for (int k = 0; k < n_d; ++k) {
        const int d = k - max_d;
        for (int y = 0; y < h; ++y) {
            double row_sum = 0.0;
            I(0, y + 1) = 0.0;
            for (int x = 0; x < w; ++x) {
                const int xr = x - d;
                if (xr >= 0 && xr < w)
                    row_sum += std::abs(left(x, y) - right(xr, y));
                I(x + 1, y + 1) = I(x + 1, y) + row_sum;
            }
        }
        double* out = cost.data() + plane * k;
        for (int y = y0; y <= y1; ++y)
            for (int x = x0; x <= x1; ++x)
                out[static_cast<std::size_t>(y) * w + x] =
                    I(x + r + 1, y + r + 1) - I(x - r, y + r + 1) - I(x + r + 1, y - r) + I(x - r, y - r);
    }

    for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
            const std::size_t at = static_cast<std::size_t>(y) * w + x;
            const auto c = [&](int d) { return cost[plane * (d + max_d) + at]; };
            int best = 0;
            double best_cost = c(0);
            for (int mag = 1; mag <= max_d; ++mag) {
                for (int d : {mag, -mag}) {
                    if (c(d) < best_cost) {
                        best_cost = c(d);
                        best = d;
                    }
                }
            }
            double value = best;
            if (p.subpixel && best > -max_d && best < max_d)
                value += subpixel_refine(c(best - 1), best_cost, c(best + 1));
            map.values(x, y) = value;
            map.valid(x, y) = 1;
        }
    }
    return map;
}

/// Maps [-max_disparity, +max_disparity] linearly onto [0, 1] for viewing; invalid pixels become 0.
inline ImageF to_display(const DisparityMap& map, int max_disparity)
{
    ImageF out(map.width(), map.height(), 0.0);
    const double span = max_disparity > 0 ? 2.0 * max_disparity : 1.0;
    for (int y = 0; y < map.height(); ++y)
        for (int x = 0; x < map.width(); ++x)
            if (map.valid(x, y))
                out(x, y) = (map.values(x, y) + max_disparity) / span;
    return out;
}

} // namespace plenoptic::disparity

#endif // PLENOPTIC_DISPARITY_HPP
