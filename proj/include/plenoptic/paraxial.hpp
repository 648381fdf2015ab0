#ifndef PLENOPTIC_PARAXIAL_HPP
#define PLENOPTIC_PARAXIAL_HPP

// First-order ray tracer used as an independent check on the closed-form
// plenoptic ray model, and as a renderer for synthetic raw captures.
//
// The camera is modelled as a sequence of paraxial elements: sensor -> f_s ->
// decentred thin micro lens -> b_U -> main lens (thin-lens power placed at
// H2U; the ray leaves from H1U with unchanged height). Virtual camera
// positions are recovered by brute-force intersection of traced object-space
// rays, never through the closed-form expressions in ray_model.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "plenoptic/error.hpp"
#include "plenoptic/image.hpp"
#include "plenoptic/lightfield.hpp"
#include "plenoptic/optics.hpp"

namespace plenoptic::oracle {

/// Extended precision keeps the pairwise crossings well below 1e-9 mm.
using real = long double;

struct Translation {
    real distance = 0.0;
    real refractive_index = 1.0;
};

/// Thin refracting element; `center` is the height of its optical axis.
struct Refraction {
    real power = 0.0;
    real center = 0.0;
};

using Element = std::variant<Translation, Refraction>;

struct ParaxialSystem {
    std::vector<Element> elements;
};

/// Ray state: height, reduced angle n*u, and axial position.
struct TracedRay {
    real height = 0.0;
    real angle = 0.0;
    real z = 0.0;
};

inline TracedRay trace(const ParaxialSystem& system, TracedRay ray)
{
    for (const auto& e : system.elements) {
        if (const auto* t = std::get_if<Translation>(&e)) {
            ray.height += ray.angle * t->distance / t->refractive_index;
            ray.z += t->distance;
        } else {
            const auto& r = std::get<Refraction>(e);
            ray.angle -= (ray.height - r.center) * r.power;
        }
    }
    return ray;
}

/// Surface sequence of a thick lens in air.
inline ParaxialSystem thick_lens(const optics::LensPrescription& p)
{
    ParaxialSystem s;
    const real n = p.refractive_index;
    s.elements.emplace_back(Refraction{(n - 1) / p.radius_front});
    s.elements.emplace_back(Translation{p.thickness, n});
    if (!std::isinf(p.radius_back))
        s.elements.emplace_back(Refraction{(1 - n) / p.radius_back});
    return s;
}

/// Launch angle from `start_height` that reaches `target_height` at the end of
/// `system`; solved with two probe rays since transfer is affine in the angle.
inline real aim(const ParaxialSystem& system, real start_height, real target_height)
{
    const real h0 = trace(system, {start_height, 0.0, 0.0}).height;
    const real h1 = trace(system, {start_height, 1.0, 0.0}).height;
    if (h1 == h0)
        throw degenerate_optics_error("cannot aim through a system with zero angular reach");
    return (target_height - h0) / (h1 - h0);
}

/// Object-side chief ray: height at H1U and slope, depth measured from H1U.
struct ObjectLine {
    real height = 0.0;
    real slope = 0.0;

    real at(real z) const noexcept { return height + slope * z; }
};

/// Traces the chief ray of viewpoint offset i under a micro lens whose optical
/// centre sits at `lens_height` (need not coincide with a physical lens).
inline ObjectLine trace_chief_ray(real lens_height, int i, const optics::FocusState& st,
                                  const optics::CameraConfig& cfg)
{
    const real f_s = cfg.mla.focal_length;
    const Refraction micro{1 / f_s, lens_height};

    // micro image centre: ray from the exit pupil centre through the micro lens centre
    real mic = lens_height;
    if (!std::isinf(st.exit_pupil_dist)) {
        const ParaxialSystem to_mla{{Translation{st.exit_pupil_dist}}};
        const ParaxialSystem to_sensor{{Translation{st.exit_pupil_dist}, micro, Translation{f_s}}};
        mic = trace(to_sensor, {0.0, aim(to_mla, 0.0, lens_height), 0.0}).height;
    }

    const real sample = mic + i * static_cast<real>(cfg.sensor.pixel_pitch);
    const ParaxialSystem sensor_to_mla{{Translation{f_s}}};
    const ParaxialSystem camera{{Translation{f_s}, micro, Translation{st.image_distance},
                                 Refraction{1 / static_cast<real>(cfg.main_lens.focal_length)}}};
    const auto out = trace(camera, {sample, aim(sensor_to_mla, sample, lens_height), 0.0});
    return {out.height, out.angle};
}

inline real lens_height(int j, int count, double pitch) { return (j - (count - 1) / 2) * static_cast<real>(pitch); }

struct VirtualCameraSimulation {
    int center = 0;
    double entrance_pupil_to_h1 = 0.0; // mean pairwise crossing depth
    double spread = 0.0;               // max - min of all pairwise crossings
    std::vector<double> positions;     // [i + c]
    std::vector<double> tilts;         // [i + c], radians

    double position(int i) const { return positions.at(static_cast<std::size_t>(i + center)); }
    double tilt(int i) const { return tilts.at(static_cast<std::size_t>(i + center)); }
    double baseline(int i, int gap) const { return std::abs(position(i + gap) - position(i)); }
};

/// Intersects same-viewpoint chief rays of every adjacent micro lens pair.
inline VirtualCameraSimulation simulate_virtual_cameras(const optics::CameraConfig& cfg)
{
    const auto st = optics::derive_focus_state(cfg);
    const int c = cfg.sensor.center();
    const int count = cfg.mla.count_h;
    if (count < 2)
        throw invalid_argument("at least two micro lenses are required");

    std::vector<std::vector<ObjectLine>> lines(static_cast<std::size_t>(2 * c + 1));
    std::vector<real> crossings;
    for (int i = -c; i <= c; ++i) {
        auto& row = lines[static_cast<std::size_t>(i + c)];
        for (int j = 0; j < count; ++j)
            row.push_back(trace_chief_ray(lens_height(j, count, cfg.mla.pitch), i, st, cfg));
        for (std::size_t j = 0; j + 1 < row.size(); ++j) {
            const real dq = row[j].slope - row[j + 1].slope;
            if (dq == 0.0)
                throw degenerate_optics_error("parallel chief rays, entrance pupil at infinity");
            crossings.push_back((row[j + 1].height - row[j].height) / dq);
        }
    }

    VirtualCameraSimulation sim;
    sim.center = c;
    const real mean = std::accumulate(crossings.begin(), crossings.end(), real{0}) / static_cast<real>(crossings.size());
    const auto [lo, hi] = std::minmax_element(crossings.begin(), crossings.end());
    sim.entrance_pupil_to_h1 = static_cast<double>(mean);
    sim.spread = static_cast<double>(*hi - *lo);

    const auto o = static_cast<std::size_t>(cfg.mla.center_h());
    for (const auto& row : lines) {
        sim.positions.push_back(static_cast<double>(row[o].at(mean)));
        sim.tilts.push_back(static_cast<double>(std::atan(row[o].slope)));
    }
    return sim;
}

/// Distance from the entrance pupil at which viewpoint i (central lens) and
/// viewpoint i+G (lens displaced by -disparity pitches) cross. Fractional
/// disparities use a virtual lens between physical ones.
inline double simulate_distance(const optics::CameraConfig& cfg, int gap, double disparity, int i = 0)
{
    const int c = cfg.sensor.center();
    if (gap < 1 || i < -c || i + gap > c)
        throw invalid_argument("viewpoints outside the micro image");
    const auto st = optics::derive_focus_state(cfg);
    const auto sim = simulate_virtual_cameras(cfg);

    const auto a = trace_chief_ray(0.0, i, st, cfg);
    const auto b = trace_chief_ray(-disparity * static_cast<real>(cfg.mla.pitch), i + gap, st, cfg);
    const real dq = a.slope - b.slope;
    if (dq == 0)
        return infinity;
    return static_cast<double>((b.height - a.height) / dq - sim.entrance_pupil_to_h1);
}

// ---------------------------------------------------------------------------
// Synthetic scenes

struct CheckerTexture {
    double period = 10.0; // mm, one light plus one dark square
};

/// Smooth value noise on a square lattice of `cell` mm.
struct NoiseTexture {
    double cell = 5.0;
    std::uint64_t seed = 1;
};

struct BitmapTexture {
    ImageF image;
    double pixel_size = 1.0; // mm per texel, image centred on the optical axis
};

using Texture = std::variant<CheckerTexture, NoiseTexture, BitmapTexture>;

struct Extent {
    double x_min = -infinity, x_max = infinity;
    double y_min = -infinity, y_max = infinity;

    bool contains(double x, double y) const noexcept { return x >= x_min && x <= x_max && y >= y_min && y <= y_max; }
};

/// Frontal plane at `depth` mm from the entrance pupil.
struct Plane {
    double depth = 1000.0;
    Texture texture = NoiseTexture{};
    Extent extent;
};

struct Scene {
    double background = 0.0;
    std::vector<Plane> planes;
};

namespace detail {

inline std::uint64_t mix(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline double lattice(std::int64_t ix, std::int64_t iy, std::uint64_t seed)
{
    const auto h = mix(seed ^ mix(static_cast<std::uint64_t>(ix) ^ mix(static_cast<std::uint64_t>(iy))));
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

inline double smooth(double t) { return t * t * (3.0 - 2.0 * t); }

struct TextureSampler {
    double x, y;

    double operator()(const CheckerTexture& t) const
    {
        const auto cx = static_cast<std::int64_t>(std::floor(2.0 * x / t.period));
        const auto cy = static_cast<std::int64_t>(std::floor(2.0 * y / t.period));
        return ((cx + cy) & 1) ? 1.0 : 0.0;
    }

    double operator()(const NoiseTexture& t) const
    {
        const double u = x / t.cell, v = y / t.cell;
        const double fu = std::floor(u), fv = std::floor(v);
        const auto ix = static_cast<std::int64_t>(fu), iy = static_cast<std::int64_t>(fv);
        const double su = smooth(u - fu), sv = smooth(v - fv);
        const double top = lattice(ix, iy, t.seed) * (1 - su) + lattice(ix + 1, iy, t.seed) * su;
        const double bottom = lattice(ix, iy + 1, t.seed) * (1 - su) + lattice(ix + 1, iy + 1, t.seed) * su;
        return top * (1 - sv) + bottom * sv;
    }

    double operator()(const BitmapTexture& t) const
    {
        if (t.image.empty())
            return 0.0;
        const double px = x / t.pixel_size + 0.5 * (t.image.width() - 1);
        const double py = y / t.pixel_size + 0.5 * (t.image.height() - 1);
        const int ix = std::clamp(static_cast<int>(std::lround(px)), 0, t.image.width() - 1);
        const int iy = std::clamp(static_cast<int>(std::lround(py)), 0, t.image.height() - 1);
        return t.image(ix, iy);
    }
};

} // namespace detail

inline double sample(const Texture& texture, double x, double y)
{
    return std::visit(detail::TextureSampler{x, y}, texture);
}

/// Point-samples the scene along every chief ray and assembles the raw mosaic
/// that lightfield::decode inverts.
inline lightfield::RawLightFieldImage render_synthetic_scene(const optics::CameraConfig& cfg, const Scene& scene)
{
    for (const auto& p : scene.planes)
        if (!(p.depth > 0.0))
            throw invalid_argument("plane depth " + std::to_string(p.depth) + " mm lies behind the entrance pupil");

    const auto st = optics::derive_focus_state(cfg);
    const auto sim = simulate_virtual_cameras(cfg);
    const auto lay = lightfield::layout_of(cfg);
    const int m = lay.micro_image_size;
    const int c = lay.center();

    // rays are separable: horizontal (j, i) and vertical (h, g) share the optics
    const auto table = [&](int count) {
        std::vector<ObjectLine> t;
        t.reserve(static_cast<std::size_t>(count) * m);
        for (int j = 0; j < count; ++j)
            for (int i = -c; i <= c; ++i)
                t.push_back(trace_chief_ray(lens_height(j, count, cfg.mla.pitch), i, st, cfg));
        return t;
    };
    const auto horizontal = table(lay.lenses_h);
    const auto vertical = lay.lenses_v == lay.lenses_h ? horizontal : table(lay.lenses_v);

    std::vector<const Plane*> planes;
    for (const auto& p : scene.planes)
        planes.push_back(&p);
    std::stable_sort(planes.begin(), planes.end(), [](const Plane* a, const Plane* b) { return a->depth < b->depth; });

    lightfield::RawLightFieldImage raw{ImageF(lay.raw_width(), lay.raw_height(), scene.background), lay};
    for (int l = 0; l < lay.raw_height(); ++l) {
        const auto& ray_y = vertical[static_cast<std::size_t>(l)];
        for (int k = 0; k < lay.raw_width(); ++k) {
            const auto& ray_x = horizontal[static_cast<std::size_t>(k)];
            for (const Plane* p : planes) {
                const real z = sim.entrance_pupil_to_h1 + p->depth;
                const auto x = static_cast<double>(ray_x.at(z)), y = static_cast<double>(ray_y.at(z));
                if (p->extent.contains(x, y)) {
                    raw.samples(k, l) = sample(p->texture, x, y);
                    break;
                }
            }
        }
    }
    return raw;
}

} // namespace plenoptic::oracle

#endif // PLENOPTIC_PARAXIAL_HPP
