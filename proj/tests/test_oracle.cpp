#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "plenoptic/commands.hpp"
#include "plenoptic/disparity.hpp"
#include "plenoptic/lightfield.hpp"
#include "plenoptic/paraxial.hpp"
#include "plenoptic/ray_model.hpp"
#include "support.hpp"

using namespace plenoptic;
using namespace plenoptic::oracle;

namespace {

const std::vector<std::string> simulated_setups = {
    "f193_mla2_inf.cfg", "f90_mla2_inf.cfg", "f193_mla1_inf.cfg", "f193_mla2_3m.cfg",  "f90_mla2_3m.cfg",
    "f193_mla1_3m.cfg",  "f193_mla2_1p5m.cfg", "f90_mla2_1p5m.cfg", "f193_mla1_1p5m.cfg",
};

optics::CameraConfig small_camera(double d_f, int lenses_h = 121, int lenses_v = 45)
{
    auto cfg = support::camera(support::f197, support::mla_2, d_f);
    cfg.mla.count_h = lenses_h;
    cfg.mla.count_v = lenses_v;
    cfg.sensor.image_width_px = lenses_h * cfg.sensor.micro_image_size;
    cfg.sensor.image_height_px = lenses_v * cfg.sensor.micro_image_size;
    return cfg;
}

Scene noise_plane(double depth, double cell)
{
    Scene s;
    s.planes.push_back({depth, NoiseTexture{cell, 7}, {}});
    return s;
}

struct Measured {
    double mean = 0.0;
    std::size_t valid = 0;
    disparity::DisparityMap map;
};

Measured measure(const lightfield::LightField4D& lf, int left, int right, int block = 15, int maxd = 5)
{
    const auto l = lightfield::extract_view(lf, left, 0).pixels;
    const auto r = lightfield::extract_view(lf, right, 0).pixels;
    Measured m{0.0, 0, disparity::block_match(l, r, {block, maxd, true})};
    double sum = 0.0;
    for (int y = 0; y < m.map.height(); ++y)
        for (int x = 0; x < m.map.width(); ++x)
            if (m.map.valid(x, y)) {
                sum += m.map.values(x, y);
                ++m.valid;
            }
    m.mean = sum / static_cast<double>(m.valid);
    return m;
}

/// Disparity that the closed-form model assigns to an object at z.
double model_disparity(const ray_model::VirtualCameraArray& arr, int i, int gap, double z)
{
    const double b_n = arr.virtual_image_distance;
    return (b_n * ray_model::baseline(arr, i, gap) / z - b_n * std::tan(ray_model::relative_tilt(arr, i, gap))) /
           arr.virtual_pixel_pitch;
}

} // namespace

TEST(Trace, FreeSpace)
{
    const auto r = trace({{Translation{25.0}}}, {1.0, 0.0, 0.0});
    EXPECT_EQ(r.height, 1.0);
    EXPECT_EQ(r.angle, 0.0);
    EXPECT_EQ(r.z, 25.0);
}

TEST(Trace, ThinLensFocus)
{
    const double f = 40.0;
    const auto r = trace({{Refraction{1.0 / f}, Translation{f}}}, {2.5, 0.0, 0.0});
    EXPECT_NEAR(static_cast<double>(r.height), 0.0, 1e-15);
}

TEST(Trace, MlaOneFocusesBehindRearPrincipalPlane)
{
    const optics::LensPrescription p{1.1, 1.5626, 0.70325, -infinity};
    const auto out = trace(thick_lens(p), {0.01, 0.0, 0.0});
    const double rear_vertex_to_focus = static_cast<double>(-out.height / out.angle);
    const auto cp = optics::mla_cardinal_points(p.thickness, p.refractive_index, p.radius_front, p.radius_back);
    // H2 sits t - gap before the rear vertex for a plano-convex lens with its flat side last
    const double rear_principal_to_vertex = p.thickness - cp.principal_gap;
    EXPECT_NEAR(rear_vertex_to_focus + rear_principal_to_vertex, 1.25, 1e-4);
}

TEST(Aim, HitsTarget)
{
    const ParaxialSystem s{{Translation{3.0}, Refraction{0.2, 0.5}, Translation{7.0}}};
    const auto a = aim(s, 0.3, -1.2);
    EXPECT_NEAR(static_cast<double>(trace(s, {0.3, a, 0.0}).height), -1.2, 1e-15);
}

TEST(SimulateVirtualCameras, ReferenceBaselines)
{
    const auto at_inf = simulate_virtual_cameras(support::camera(support::f193, support::mla_2));
    EXPECT_NEAR(at_inf.baseline(0, 6), 3.7956, 1e-3);

    const auto at_3m = simulate_virtual_cameras(support::camera(support::f193, support::mla_2, 3000));
    EXPECT_NEAR(at_3m.baseline(0, 6), 4.2748, 1e-3);
    EXPECT_NEAR(std::abs(to_degrees(at_3m.tilt(6) - at_3m.tilt(0))), 0.0816, 5e-4);
}

TEST(SimulateVirtualCameras, EquivalentToClosedForm)
{
    for (const auto& name : simulated_setups) {
        const auto cfg = support::load_fixture(name).camera;
        const auto sim = simulate_virtual_cameras(cfg);
        const auto arr = ray_model::build_virtual_camera_array(optics::derive_focus_state(cfg), cfg);
        EXPECT_LT(sim.spread, 1e-9) << name;
        EXPECT_TRUE(commands::relative_close(sim.entrance_pupil_to_h1, arr.entrance_pupil_to_h1, 1e-9)) << name;
        for (int i = -arr.center; i <= arr.center; ++i) {
            EXPECT_TRUE(commands::relative_close(sim.position(i), arr.position(i), 1e-9)) << name << " " << i;
            EXPECT_TRUE(commands::relative_close(sim.tilt(i), arr.tilt(i), 1e-9)) << name << " " << i;
        }
        for (int g = 1; g <= arr.center; ++g)
            EXPECT_TRUE(commands::relative_close(sim.baseline(0, g), ray_model::baseline(arr, 0, g), 1e-9));
    }
}

TEST(SimulateDistance, ReferencePredictions)
{
    const auto inf = support::camera(support::f193, support::mla_2);
    EXPECT_NEAR(simulate_distance(inf, 1, 2.0), 489.1075, 0.05);
    EXPECT_TRUE(std::isinf(simulate_distance(inf, 1, 0.0)));

    EXPECT_NEAR(simulate_distance(support::camera(support::f90, support::mla_2, 1500), 1, 2.0), 113.2965, 0.01);
    EXPECT_NEAR(simulate_distance(support::camera(support::f193, support::mla_2, 1500), 1, -1.0), 15770.8729, 2.0);
}

TEST(SimulateDistance, AgreesWithTriangulation)
{
    for (const auto& name : simulated_setups) {
        const auto cfg = support::load_fixture(name).camera;
        const auto arr = ray_model::build_virtual_camera_array(optics::derive_focus_state(cfg), cfg);
        for (int g : {1, 2, 6})
            for (double dx : {0.5, 1.0, 2.0, 3.0}) {
                const double z = ray_model::triangulate(arr, {g, dx});
                EXPECT_LT(support::relative_error(simulate_distance(cfg, g, dx), z), 1e-9) << name;
            }
    }
}

TEST(RenderSyntheticScene, RejectsPlaneBehindPupil)
{
    EXPECT_THROW(render_synthetic_scene(small_camera(infinity, 11, 11), noise_plane(-5.0, 4.0)), invalid_argument);
}

TEST(RenderSyntheticScene, NearestPlaneWins)
{
    auto cfg = small_camera(infinity, 11, 11);
    Scene s;
    s.background = 0.25;
    s.planes.push_back({3000.0, CheckerTexture{1e9}, {}});                   // uniform 0 for x, y > 0
    s.planes.push_back({1000.0, CheckerTexture{1e9}, {-1e6, 1e6, -1e6, -1e6}}); // extent misses every ray
    const auto raw = render_synthetic_scene(cfg, s);
    const auto lf = lightfield::decode(raw);
    EXPECT_EQ(lf.at(10, 10, 0, 0), 0.0);

    Scene empty;
    empty.background = 0.25;
    EXPECT_EQ(render_synthetic_scene(cfg, empty).samples(0, 0), 0.25);
}

TEST(RenderSyntheticScene, EndToEndDisparityAndDepth)
{
    const auto cfg = small_camera(infinity);
    const auto arr = ray_model::build_virtual_camera_array(optics::derive_focus_state(cfg), cfg);
    const double z = ray_model::triangulate(arr, {4, 2.0});
    EXPECT_NEAR(z, 2034.789, 1e-3);

    const auto lf = lightfield::decode(render_synthetic_scene(cfg, noise_plane(z, 4.0)));
    const auto m = measure(lf, -2, 2);
    EXPECT_GT(m.valid, 1000u);
    EXPECT_NEAR(m.mean, 2.0, 0.25);

    const auto depth = commands::depth_map(cfg, m.map.values, 4);
    const double lo = ray_model::triangulate(arr, {4, 2.25}), hi = ray_model::triangulate(arr, {4, 1.75});
    double sum = 0.0;
    std::size_t n = 0;
    for (int y = 0; y < depth.height(); ++y)
        for (int x = 0; x < depth.width(); ++x)
            if (m.map.valid(x, y)) {
                sum += depth(x, y);
                ++n;
            } else {
                EXPECT_TRUE(std::isnan(depth(x, y)));
            }
    const double mean = sum / static_cast<double>(n);
    EXPECT_GT(mean, lo);
    EXPECT_LT(mean, hi);
}

TEST(RenderSyntheticScene, BaselineProportionality)
{
    // depth chosen so that both disparities are whole pixels (4 and 2)
    const auto cfg = small_camera(infinity);
    const auto arr = ray_model::build_virtual_camera_array(optics::derive_focus_state(cfg), cfg);
    const double z = ray_model::triangulate(arr, {4, 4.0});
    const auto lf = lightfield::decode(render_synthetic_scene(cfg, noise_plane(z, 3.0)));
    const auto g2 = measure(lf, -1, 1), g4 = measure(lf, -2, 2);
    EXPECT_NEAR(g2.mean, 2.0, 0.1);
    EXPECT_NEAR(g4.mean, 2.0 * g2.mean, 0.1);
}

TEST(RenderSyntheticScene, ViewpointPairInvariance)
{
    const auto cfg = small_camera(infinity);
    const auto lf = lightfield::decode(render_synthetic_scene(cfg, noise_plane(1800.0, 3.5)));
    EXPECT_NEAR(measure(lf, -2, 2).mean, measure(lf, 0, 4).mean, 0.1);
}

TEST(RenderSyntheticScene, FocusedPlaneHasNoDisparity)
{
    const auto cfg = small_camera(4000.0);
    const auto arr = ray_model::build_virtual_camera_array(optics::derive_focus_state(cfg), cfg);
    const auto lf = lightfield::decode(render_synthetic_scene(cfg, noise_plane(4000.0, 8.0)));
    const auto m = measure(lf, -2, 2);
    EXPECT_NEAR(m.mean, model_disparity(arr, -2, 4, 4000.0), 0.25);
    EXPECT_NEAR(m.mean, 0.0, 0.25);
}

TEST(RenderSyntheticScene, BeyondFocusIsNegative)
{
    const auto cfg = small_camera(4000.0);
    const auto arr = ray_model::build_virtual_camera_array(optics::derive_focus_state(cfg), cfg);
    const auto lf = lightfield::decode(render_synthetic_scene(cfg, noise_plane(12000.0, 25.0)));
    const auto m = measure(lf, -4, 4);
    const double expected = model_disparity(arr, -4, 8, 12000.0);
    EXPECT_LT(expected, -1.0);
    EXPECT_NEAR(m.mean, expected, 0.25);
    EXPECT_LT(m.mean, 0.0);
}
