#ifndef PLENOPTIC_TESTS_SUPPORT_HPP
#define PLENOPTIC_TESTS_SUPPORT_HPP

#include <cmath>
#include <random>
#include <string>

#include "plenoptic/config.hpp"
#include "plenoptic/image.hpp"
#include "plenoptic/optics.hpp"

namespace support {

using namespace plenoptic;

inline std::string fixture(const std::string& name) { return std::string(PLENOPTIC_DATA_DIR) + "/configs/" + name; }

inline config::LoadedConfig load_fixture(const std::string& name) { return config::load(fixture(name)); }

struct MainLens {
    double f_u, exit_pupil_inf, h1h2;
};

inline constexpr MainLens f193{193.2935, 111.0324, -65.5563};
inline constexpr MainLens f90{90.4036, 85.1198, -1.2273};
inline constexpr MainLens f197{197.1264, 100.5000, 147.4618};

inline constexpr double mla_1 = 1.25;
inline constexpr double mla_2 = 2.75;

/// Camera with the experimental sensor and MLA geometry.
inline optics::CameraConfig camera(MainLens lens, double f_s, double d_f = infinity, int lenses = 281, int m = 13)
{
    optics::CameraConfig c;
    c.sensor.pixel_pitch = 0.009;
    c.sensor.micro_image_size = m;
    c.mla.focal_length = f_s;
    c.mla.pitch = 0.125;
    c.mla.principal_gap = 0.396;
    c.mla.count_h = lenses;
    c.mla.count_v = lenses;
    c.sensor.image_width_px = lenses * m;
    c.sensor.image_height_px = lenses * m;
    c.main_lens.focal_length = lens.f_u;
    c.main_lens.image_distance_inf = lens.f_u;
    c.main_lens.exit_pupil_dist_inf = lens.exit_pupil_inf;
    c.main_lens.principal_gap = lens.h1h2;
    c.focus.distance = d_f;
    return c;
}

inline ImageF random_image(int w, int h, std::uint32_t seed)
{
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    ImageF img(w, h);
    for (auto& v : img.pixels())
        v = u(rng);
    return img;
}

inline double relative_error(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

} // namespace support

#endif // PLENOPTIC_TESTS_SUPPORT_HPP
