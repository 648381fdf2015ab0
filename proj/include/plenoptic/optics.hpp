#ifndef PLENOPTIC_OPTICS_HPP
#define PLENOPTIC_OPTICS_HPP

// Lens and camera parameter types of a standard plenoptic camera plus the
// focus-dependent quantities derived from them. All lengths are millimetres.

#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "plenoptic/error.hpp"

namespace plenoptic {

inline constexpr double infinity = std::numeric_limits<double>::infinity();
inline constexpr double pi = 3.14159265358979323846;

constexpr double to_degrees(double radians) noexcept { return radians * 180.0 / pi; }
constexpr double to_radians(double degrees) noexcept { return degrees * pi / 180.0; }

namespace optics {

/// Maximum disagreement between a stated micro lens focal length and the one
/// recomputed from its prescription.
inline constexpr double prescription_tolerance_mm = 1e-3;

/// Convergence threshold and iteration cap of the image distance solver.
inline constexpr double focus_tolerance_mm = 1e-9;
inline constexpr int focus_max_iterations = 1000;

struct SensorSpec {
    double pixel_pitch = 0.0;   // p_p
    int micro_image_size = 0;   // M, odd
    int image_width_px = 0;     // K = J * M
    int image_height_px = 0;    // L = H * M

    /// Index offset of the central pixel inside a micro image, c = (M - 1) / 2.
    int center() const noexcept { return (micro_image_size - 1) / 2; }
};

/// Surface description of a single micro lens; radii are signed, the back
/// radius may be +/- infinity for a plano surface.
struct LensPrescription {
    double thickness = 0.0;
    double refractive_index = 1.0;
    double radius_front = 0.0;
    double radius_back = -infinity;
};

struct MicroLensSpec {
    double focal_length = 0.0;  // f_s
    double pitch = 0.0;         // p_M
    double principal_gap = 0.0; // H1sH2s
    std::optional<LensPrescription> prescription;
    int count_h = 0;            // J, odd
    int count_v = 0;            // H, odd

    int center_h() const noexcept { return (count_h - 1) / 2; }
    int center_v() const noexcept { return (count_v - 1) / 2; }
};

struct MainLensSpec {
    double focal_length = 0.0;        // f_U
    double image_distance_inf = 0.0;  // b_U at infinity focus, equal to f_U
    double exit_pupil_dist_inf = 0.0; // d_A' at infinity focus, may be +inf when unknown
    double principal_gap = 0.0;       // H1UH2U, signed
    std::optional<double> front_vertex_to_h1;     // V1UH1U
    std::optional<double> entrance_pupil_diameter;
};

/// Distance from the MLA front vertex to the plane in focus, or infinity.
struct FocusSetting {
    double distance = infinity;

    bool at_infinity() const noexcept { return std::isinf(distance); }
};

struct FocusState {
    double image_distance = 0.0;   // b_U
    double exit_pupil_dist = 0.0;  // d_A'
    double object_distance = infinity; // a_U
};

struct CameraConfig {
    SensorSpec sensor;
    MicroLensSpec mla;
    MainLensSpec main_lens;
    FocusSetting focus;
};

struct CardinalPoints {
    double focal_length = 0.0;
    double principal_gap = 0.0;  // separation H1 -> H2
};

/// Effective focal length and principal plane separation of a thick lens in
/// air, from the paraxial system matrix refract * translate * refract.
inline CardinalPoints mla_cardinal_points(double thickness, double n, double r1, double r2)
{
    if (!(n > 1.0))
        throw invalid_argument("refractive index must exceed 1");
    if (r1 == 0.0 || r2 == 0.0)
        throw invalid_argument("surface radius must be non-zero");

    const double p1 = (n - 1.0) / r1;
    const double p2 = std::isinf(r2) ? 0.0 : (1.0 - n) / r2;
    const double reduced = thickness / n;

    // [[a, b], [c, d]] = R(p2) * T(t/n) * R(p1) acting on (height, reduced angle)
    const double a = 1.0 - reduced * p1;
    const double c = -p1 - p2 + p2 * reduced * p1;
    const double d = 1.0 - p2 * reduced;
    if (c == 0.0)
        throw degenerate_optics_error("prescription has zero optical power");

    const double h1_from_front = (d - 1.0) / c;
    const double h2_from_back = (1.0 - a) / c;
    return {-1.0 / c, thickness - h1_from_front + h2_from_back};
}

/// Main lens image distance for a focus setting. The object distance depends
/// on the unknown image distance, a_U = d_f - b_U - H1UH2U, so the thin lens
/// equation is iterated from b_U := f_U until it stops changing.
inline double solve_image_distance(double focal_length, double principal_gap, double focus_distance)
{
    if (!(focal_length > 0.0))
        throw invalid_argument("focal length must be positive");
    if (std::isinf(focus_distance))
        return focal_length;

    double b = focal_length;
    for (int it = 0; it < focus_max_iterations; ++it) {
        const double a = focus_distance - b - principal_gap;
        if (!(a > focal_length))
            throw unfocusable_error("object distance " + std::to_string(a) +
                                    " mm does not exceed the focal length");
        const double next = 1.0 / (1.0 / focal_length - 1.0 / a);
        if (std::abs(next - b) < focus_tolerance_mm)
            return next;
        b = next;
    }
    throw unfocusable_error("image distance did not converge");
}

/// The exit pupil moves with the image distance by a constant lens-internal offset.
inline double exit_pupil_at_focus(double image_distance, double image_distance_inf, double exit_pupil_inf)
{
    return image_distance - (image_distance_inf - exit_pupil_inf);
}

/// Throws config_error naming the first field that breaks an invariant.
inline void validate(const CameraConfig& cfg)
{
    const auto& s = cfg.sensor;
    const auto& m = cfg.mla;
    const auto& u = cfg.main_lens;

    if (!(s.pixel_pitch > 0.0))
        throw config_error("sensor.pixel_pitch_mm", "must be positive");
    if (s.micro_image_size < 3 || s.micro_image_size % 2 == 0)
        throw config_error("sensor.micro_image_px", "must be an odd integer >= 3");
    if (!(m.focal_length > 0.0))
        throw config_error("mla.f_s_mm", "must be positive");
    if (!(m.pitch > 0.0))
        throw config_error("mla.pitch_mm", "must be positive");
    if (m.count_h < 1 || m.count_h % 2 == 0)
        throw config_error("mla.lenses_h", "must be an odd positive integer");
    if (m.count_v < 1 || m.count_v % 2 == 0)
        throw config_error("mla.lenses_v", "must be an odd positive integer");
    if (s.image_width_px != m.count_h * s.micro_image_size)
        throw config_error("sensor.image_width_px", "must equal lenses_h * micro_image_px");
    if (s.image_height_px != m.count_v * s.micro_image_size)
        throw config_error("sensor.image_height_px", "must equal lenses_v * micro_image_px");
    if (m.prescription) {
        const auto& p = *m.prescription;
        const auto cp = mla_cardinal_points(p.thickness, p.refractive_index, p.radius_front, p.radius_back);
        if (std::abs(cp.focal_length - m.focal_length) > prescription_tolerance_mm)
            throw config_error("mla.f_s_mm", "disagrees with the prescription focal length " +
                                                 std::to_string(cp.focal_length));
    }
    if (!(u.focal_length > 0.0))
        throw config_error("main_lens.f_u_mm", "must be positive");
    if (std::abs(u.image_distance_inf - u.focal_length) > 1e-6)
        throw config_error("main_lens.b_u_inf_mm", "must equal f_u_mm (focus is set by shifting the sensor)");
    if (!(u.exit_pupil_dist_inf > 0.0))
        throw config_error("main_lens.exit_pupil_inf_mm", "must be positive");
    if (!cfg.focus.at_infinity() && !(cfg.focus.distance > u.focal_length + u.principal_gap))
        throw config_error("focus.d_f_mm", "must exceed f_u_mm + h1h2_mm");
}

inline FocusState derive_focus_state(const CameraConfig& cfg)
{
    const auto& u = cfg.main_lens;
    FocusState st;
    st.image_distance = solve_image_distance(u.focal_length, u.principal_gap, cfg.focus.distance);
    st.object_distance = cfg.focus.at_infinity()
                             ? infinity
                             : cfg.focus.distance - st.image_distance - u.principal_gap;
    st.exit_pupil_dist = exit_pupil_at_focus(st.image_distance, u.image_distance_inf, u.exit_pupil_dist_inf);
    return st;
}

} // namespace optics
} // namespace plenoptic

#endif // PLENOPTIC_OPTICS_HPP
