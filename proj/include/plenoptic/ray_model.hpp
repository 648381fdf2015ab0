#ifndef PLENOPTIC_RAY_MODEL_HPP
#define PLENOPTIC_RAY_MODEL_HPP

// Chief-ray geometry of a standard plenoptic camera and the virtual camera
// array it induces on the main lens entrance pupil.
//
// Coordinates: heights are measured from the main optical axis. Image-side
// rays run from the sensor (one micro lens focal length behind the MLA) to the
// MLA and on to the main lens; object-side depths z are measured from the
// object-side principal plane H1U, positive towards the scene.

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "plenoptic/error.hpp"
#include "plenoptic/optics.hpp"

namespace plenoptic::ray_model {

using optics::CameraConfig;
using optics::FocusState;

// ---------------------------------------------------------------------------
// Classical two-camera stereo

struct StereoRig {
    double baseline = 0.0;        // B
    double image_distance = 0.0;  // b
    double tilt = 0.0;            // Phi, radians
};

/// Depth of a point with disparity `delta_x` (same unit as image_distance).
/// A vanishing denominator means parallel rays, reported as +infinity.
inline double stereo_depth(const StereoRig& rig, double delta_x)
{
    const double den = delta_x + rig.image_distance * std::tan(rig.tilt);
    if (den == 0.0)
        return infinity;
    return rig.image_distance * rig.baseline / den;
}

/// Distance at which the two optical axes cross, Z0 = B / tan(Phi).
inline double convergence_distance(const StereoRig& rig)
{
    const double t = std::tan(rig.tilt);
    return t == 0.0 ? infinity : rig.baseline / t;
}

// ---------------------------------------------------------------------------
// Chief rays

struct ChiefRay {
    enum class Reference { mla_plane, main_lens_object_side };

    double slope = 0.0;
    double intercept = 0.0;
    Reference reference = Reference::mla_plane;

    double at(double z) const noexcept { return slope * z + intercept; }
};

namespace detail {

inline void check_lens(int j, const CameraConfig& cfg)
{
    if (j < 0 || j >= cfg.mla.count_h)
        throw invalid_argument("micro lens index " + std::to_string(j) + " out of range");
}

inline void check_view(int i, const CameraConfig& cfg)
{
    const int c = cfg.sensor.center();
    if (i < -c || i > c)
        throw invalid_argument("viewpoint index " + std::to_string(i) + " outside [-c, c]");
}

} // namespace detail

/// Optical centre height of micro lens j, s_j = (j - o) * p_M.
inline double micro_lens_height(int j, const CameraConfig& cfg)
{
    detail::check_lens(j, cfg);
    return (j - cfg.mla.center_h()) * cfg.mla.pitch;
}

/// Micro image centre: where the chief ray from the exit pupil centre through
/// the optical centre of lens j lands on the sensor.
inline double mic_position(int j, const FocusState& st, const CameraConfig& cfg)
{
    const double s = micro_lens_height(j, cfg);
    return s / st.exit_pupil_dist * cfg.mla.focal_length + s;
}

inline double micro_image_sample(int j, int i, const FocusState& st, const CameraConfig& cfg)
{
    detail::check_view(i, cfg);
    return mic_position(j, st, cfg) + i * cfg.sensor.pixel_pitch;
}

/// Image-side slope of the chief ray from sample c+i of micro image j through the lens centre.
inline double chief_slope(int j, int i, const FocusState& st, const CameraConfig& cfg)
{
    return (micro_lens_height(j, cfg) - micro_image_sample(j, i, st, cfg)) / cfg.mla.focal_length;
}

inline ChiefRay image_ray(int j, int i, const FocusState& st, const CameraConfig& cfg)
{
    return {chief_slope(j, i, st, cfg), micro_lens_height(j, cfg), ChiefRay::Reference::mla_plane};
}

/// The same chief ray after refraction by the main lens. The intercept is the
/// height at the main lens, the slope follows from the ray's crossing of the
/// main lens focal plane.
inline ChiefRay object_ray(int j, int i, const FocusState& st, const CameraConfig& cfg)
{
    const double m = chief_slope(j, i, st, cfg);
    const double f = cfg.main_lens.focal_length;
    const double at_lens = m * st.image_distance + micro_lens_height(j, cfg);
    const double at_focal_plane = m * f;
    return {(at_focal_plane - at_lens) / f, at_lens, ChiefRay::Reference::main_lens_object_side};
}

/// Image-side baseline between viewpoints i and i+G measured in the exit pupil plane.
inline double exit_pupil_baseline(int i, int gap, const FocusState& st, const CameraConfig& cfg)
{
    const int o = cfg.mla.center_h();
    return std::abs(chief_slope(o, i + gap, st, cfg) - chief_slope(o, i, st, cfg)) * st.exit_pupil_dist;
}

/// Signed depth of the entrance pupil relative to H1U (A''H1U): the common
/// crossing of all object-side chief rays sharing viewpoint i. Evaluated from
/// lenses j and j+1; the result is the same for every i and j.
inline double entrance_pupil_distance(const FocusState& st, const CameraConfig& cfg, int i = 0, int j = -1)
{
    if (j < 0)
        j = cfg.mla.center_h();
    if (j + 1 >= cfg.mla.count_h)
        j = cfg.mla.count_h - 2;
    const auto a = object_ray(j, i, st, cfg);
    const auto b = object_ray(j + 1, i, st, cfg);
    const double dq = a.slope - b.slope;
    if (dq == 0.0)
        throw degenerate_optics_error("object-side chief rays are parallel; entrance pupil at infinity");
    return (b.intercept - a.intercept) / dq;
}

// ---------------------------------------------------------------------------
// Virtual camera array

inline constexpr double default_virtual_image_distance = 1.0;

struct VirtualCameraArray {
    int center = 0;                      // c; cameras are indexed -c..c
    std::vector<double> positions;       // A''_i, stored at [i + c]
    std::vector<double> tilt_angles;     // Phi_i (radians), stored at [i + c]
    double entrance_pupil_to_h1 = 0.0;   // A''H1U
    double virtual_image_distance = 0.0; // b_N
    double virtual_pixel_pitch = 0.0;    // p_N

    bool contains(int i) const noexcept { return i >= -center && i <= center; }

    double position(int i) const { return positions.at(static_cast<std::size_t>(i + center)); }
    double tilt(int i) const { return tilt_angles.at(static_cast<std::size_t>(i + center)); }
};

inline VirtualCameraArray build_virtual_camera_array(const FocusState& st, const CameraConfig& cfg,
                                                     double b_n = default_virtual_image_distance)
{
    if (!(b_n > 0.0))
        throw invalid_argument("virtual image distance must be positive");
    if (cfg.mla.count_h < 2)
        throw invalid_argument("at least two micro lenses are required");

    const int c = cfg.sensor.center();
    const int o = cfg.mla.center_h();

    VirtualCameraArray arr;
    arr.center = c;
    arr.virtual_image_distance = b_n;
    arr.entrance_pupil_to_h1 = entrance_pupil_distance(st, cfg, 0, o);
    for (int i = -c; i <= c; ++i) {
        const auto ray = object_ray(o, i, st, cfg);
        arr.positions.push_back(ray.at(arr.entrance_pupil_to_h1));
        arr.tilt_angles.push_back(std::atan(ray.slope));
    }

    // virtual image points of two neighbouring lenses for the central camera
    const double n_o = -object_ray(o, 0, st, cfg).slope * b_n + arr.position(0);
    const double n_next = -object_ray(o + 1, 0, st, cfg).slope * b_n + arr.position(0);
    arr.virtual_pixel_pitch = std::abs(n_o - n_next);
    return arr;
}

namespace detail {

inline void check_pair(const VirtualCameraArray& arr, int i, int gap)
{
    if (!arr.contains(i) || !arr.contains(i + gap))
        throw invalid_argument("camera pair (" + std::to_string(i) + ", " + std::to_string(i + gap) +
                               ") outside the array");
}

} // namespace detail

/// Distance between virtual cameras i and i+G.
inline double baseline(const VirtualCameraArray& arr, int i, int gap)
{
    detail::check_pair(arr, i, gap);
    return std::abs(arr.position(i + gap) - arr.position(i));
}

/// Relative tilt Phi_{i+G} - Phi_i in radians. Positive means the two optical
/// axes converge in object space (the case b_U > f_U); its magnitude is the
/// tabulated tilt angle.
inline double relative_tilt(const VirtualCameraArray& arr, int i, int gap)
{
    detail::check_pair(arr, i, gap);
    return arr.tilt(i + gap) - arr.tilt(i);
}

struct TriangulationQuery {
    int gap = 1;            // G
    double disparity = 0.0; // delta x in view pixels
};

namespace detail {

inline int reference_camera(const VirtualCameraArray& arr, const TriangulationQuery& q)
{
    if (q.gap < 1 || q.gap > 2 * arr.center)
        throw invalid_argument("gap " + std::to_string(q.gap) + " outside [1, M-1]");
    return q.gap <= arr.center ? 0 : -arr.center;
}

} // namespace detail

/// Object distance from the entrance pupil for a disparity between views G apart.
/// Returns +infinity when the rays are parallel and a negative value when they
/// cross behind the camera.
inline double triangulate(const VirtualCameraArray& arr, const TriangulationQuery& q)
{
    const int i = detail::reference_camera(arr, q);
    const double b_n = arr.virtual_image_distance;
    const double den = q.disparity * arr.virtual_pixel_pitch + b_n * std::tan(relative_tilt(arr, i, q.gap));
    if (den == 0.0)
        return infinity;
    return b_n * baseline(arr, i, q.gap) / den;
}

/// Baseline that explains disparity q.disparity for an object at distance z.
inline double measure_baseline(const TriangulationQuery& q, double z, const VirtualCameraArray& arr)
{
    const int i = detail::reference_camera(arr, q);
    const double b_n = arr.virtual_image_distance;
    return z * (q.disparity * arr.virtual_pixel_pitch + b_n * std::tan(relative_tilt(arr, i, q.gap))) / b_n;
}

/// Relative tilt (radians) that explains disparity q.disparity at distance z for a given baseline.
inline double measure_tilt(const TriangulationQuery& q, double z, double baseline_mm, const VirtualCameraArray& arr)
{
    detail::reference_camera(arr, q);
    const double b_n = arr.virtual_image_distance;
    return std::atan((baseline_mm * b_n / z - q.disparity * arr.virtual_pixel_pitch) / b_n);
}

/// V1UA'' = V1UH1U + A''H1U.
constexpr double front_vertex_to_entrance_pupil(double v1_h1, double a_h1) noexcept
{
    return v1_h1 + a_h1;
}

} // namespace plenoptic::ray_model

#endif // PLENOPTIC_RAY_MODEL_HPP
