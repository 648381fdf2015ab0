#ifndef PLENOPTIC_COMMANDS_HPP
#define PLENOPTIC_COMMANDS_HPP

// Implementations behind the `spc` command-line tool. Each command writes its
// data to the given stream; diagnostics go to `log`.

#include <cmath>
#include <filesystem>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "plenoptic/config.hpp"
#include "plenoptic/csv.hpp"
#include "plenoptic/disparity.hpp"
#include "plenoptic/lightfield.hpp"
#include "plenoptic/optics.hpp"
#include "plenoptic/paraxial.hpp"
#include "plenoptic/pgm.hpp"
#include "plenoptic/ray_model.hpp"

namespace plenoptic::commands {

using csv::format_number;

// ---------------------------------------------------------------------------
// predict

struct PredictionRow {
    int gap = 0;
    std::optional<double> disparity;
    double baseline = 0.0;  // mm
    double tilt_deg = 0.0;  // magnitude
    std::optional<double> distance; // mm from the entrance pupil
};

struct PredictionReport {
    optics::FocusState focus;
    ray_model::VirtualCameraArray array;
    std::vector<PredictionRow> rows;

    std::string axes() const
    {
        if (array.tilt_angles.empty() || array.center == 0)
            return "parallel";
        const double t = array.tilt(array.center);
        return t > 0 ? "converging" : t < 0 ? "diverging" : "parallel";
    }
};

inline PredictionReport predict(const optics::CameraConfig& cfg, const std::vector<int>& gaps,
                                const std::vector<double>& disparities)
{
    PredictionReport r;
    r.focus = optics::derive_focus_state(cfg);
    r.array = ray_model::build_virtual_camera_array(r.focus, cfg);
    for (int g : gaps) {
        const ray_model::TriangulationQuery probe{g, 0.0};
        const int i = g <= r.array.center ? 0 : -r.array.center;
        ray_model::triangulate(r.array, probe); // validates the gap
        const double b = ray_model::baseline(r.array, i, g);
        const double phi = std::abs(to_degrees(ray_model::relative_tilt(r.array, i, g)));
        if (disparities.empty()) {
            r.rows.push_back({g, std::nullopt, b, phi, std::nullopt});
            continue;
        }
        for (double dx : disparities)
            r.rows.push_back({g, dx, b, phi, ray_model::triangulate(r.array, {g, dx})});
    }
    return r;
}

inline void write_prediction(std::ostream& out, const PredictionReport& r)
{
    out << "# b_u_mm=" << format_number(r.focus.image_distance) << " d_ap_mm=" << format_number(r.focus.exit_pupil_dist)
        << " a_u_mm=" << format_number(r.focus.object_distance)
        << " entrance_pupil_h1_mm=" << format_number(r.array.entrance_pupil_to_h1)
        << " b_n_mm=" << format_number(r.array.virtual_image_distance)
        << " p_n_mm=" << format_number(r.array.virtual_pixel_pitch, 9) << " axes=" << r.axes() << '\n';
    out << "G,dx,B_mm,Phi_deg,Z_mm\n";
    for (const auto& row : r.rows) {
        out << row.gap << ',' << (row.disparity ? format_number(*row.disparity, 2) : "-") << ','
            << format_number(row.baseline) << ',' << format_number(row.tilt_deg) << ','
            << (row.distance ? format_number(*row.distance, 4) : "-") << '\n';
    }
}

/// Baselines wider than the entrance pupil cannot be realised.
inline std::vector<std::string> pupil_warnings(const optics::CameraConfig& cfg, const PredictionReport& r)
{
    std::vector<std::string> w;
    const auto& d = cfg.main_lens.entrance_pupil_diameter;
    if (!d)
        return w;
    for (const auto& row : r.rows)
        if (row.baseline > *d)
            w.push_back("baseline B_" + std::to_string(row.gap) + " = " + format_number(row.baseline, 4) +
                        " mm exceeds the entrance pupil diameter " + format_number(*d, 4) + " mm");
    return w;
}

// ---------------------------------------------------------------------------
// extract

inline int extract(const optics::CameraConfig& cfg, const std::string& raw_path, const std::string& out_dir,
                   bool rotate, std::ostream& log)
{
    const auto g = pgm::read(raw_path);
    const auto lay = lightfield::layout_of(cfg);
    if (g.image.width() % lay.micro_image_size != 0 || g.image.height() % lay.micro_image_size != 0)
        throw invalid_argument("raw image " + std::to_string(g.image.width()) + "x" +
                               std::to_string(g.image.height()) + " is not divisible by micro_image_px " +
                               std::to_string(lay.micro_image_size));
    const auto lf = lightfield::decode({g.image, lay}, rotate);
    std::filesystem::create_directories(out_dir);
    int n = 0;
    for (const auto& v : lightfield::extract_all_views(lf)) {
        pgm::write((std::filesystem::path(out_dir) / lightfield::view_filename(v.i, v.g)).string(), v.pixels,
                   g.maxval);
        ++n;
    }
    log << "wrote " << n << " views of " << lay.lenses_h << "x" << lay.lenses_v << " px to " << out_dir << '\n';
    return n;
}

// ---------------------------------------------------------------------------
// disparity

inline disparity::DisparityMap disparity_from_files(const std::string& left, const std::string& right,
                                                    const disparity::MatchParams& p)
{
    return disparity::block_match(pgm::read(left).image, pgm::read(right).image, p);
}

inline void write_disparity(std::ostream& out, const disparity::DisparityMap& map, const disparity::MatchParams& p)
{
    csv::write_grid(out, map.values, 4,
                    {"disparity px, left index < right index; block=" + std::to_string(p.block_size) +
                     " max_disparity=" + std::to_string(p.max_disparity) +
                     " subpixel=" + (p.subpixel ? "1" : "0")});
}

// ---------------------------------------------------------------------------
// depth

inline ImageF depth_map(const optics::CameraConfig& cfg, const ImageF& disparities, int gap)
{
    const auto st = optics::derive_focus_state(cfg);
    const auto arr = ray_model::build_virtual_camera_array(st, cfg);
    ImageF z(disparities.width(), disparities.height());
    for (int y = 0; y < z.height(); ++y)
        for (int x = 0; x < z.width(); ++x) {
            const double dx = disparities(x, y);
            z(x, y) = std::isnan(dx) ? dx : ray_model::triangulate(arr, {gap, dx});
        }
    return z;
}

inline void write_depth(std::ostream& out, const ImageF& z, int gap)
{
    csv::write_grid(out, z, 4, {"distance mm from the entrance pupil; G=" + std::to_string(gap)});
}

// ---------------------------------------------------------------------------
// verify

inline constexpr double oracle_relative_tolerance = 1e-9;
inline constexpr double oracle_spread_tolerance_mm = 1e-9;
inline constexpr double length_tolerance_mm = 5e-4;
inline constexpr double pupil_tolerance_mm = 1e-3;
inline constexpr double angle_tolerance_deg = 5e-4;
inline constexpr double distance_relative_tolerance = 1e-4;

struct Check {
    std::string name;
    double expected = 0.0;
    double actual = 0.0;
    double tolerance = 0.0;
    bool passed = false;
    bool skipped = false;
    std::string note;
};

inline bool relative_close(double a, double b, double rel)
{
    if (std::isinf(a) || std::isinf(b))
        return a == b;
    return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b)) || std::abs(a - b) <= 1e-12;
}

inline std::vector<Check> verify(const config::LoadedConfig& loaded)
{
    const auto& cfg = loaded.camera;
    const auto& e = loaded.expect;
    std::vector<Check> checks;
    const auto absolute = [&](std::string name, double expected, double actual, double tol) {
        checks.push_back({std::move(name), expected, actual, tol, std::abs(expected - actual) <= tol, false, ""});
    };
    const auto relative = [&](std::string name, double expected, double actual, double rel) {
        checks.push_back({std::move(name), expected, actual, rel, relative_close(expected, actual, rel), false,
                          "relative"});
    };

    const auto st = optics::derive_focus_state(cfg);
    const auto arr = ray_model::build_virtual_camera_array(st, cfg);
    const auto sim = oracle::simulate_virtual_cameras(cfg);

    relative("oracle A''H1U", sim.entrance_pupil_to_h1, arr.entrance_pupil_to_h1, oracle_relative_tolerance);
    absolute("oracle crossing spread", 0.0, sim.spread, oracle_spread_tolerance_mm);
    for (int i = -arr.center; i <= arr.center; ++i) {
        relative("oracle A''_" + std::to_string(i), sim.position(i), arr.position(i), oracle_relative_tolerance);
        relative("oracle Phi_" + std::to_string(i), sim.tilt(i), arr.tilt(i), oracle_relative_tolerance);
    }
    for (int g = 1; g <= 2 * arr.center; ++g) {
        const int i = g <= arr.center ? 0 : -arr.center;
        relative("oracle B_" + std::to_string(g), sim.baseline(i, g), ray_model::baseline(arr, i, g),
                 oracle_relative_tolerance);
    }

    if (e.image_distance)
        absolute("b_U", *e.image_distance, st.image_distance, length_tolerance_mm);
    if (e.exit_pupil_dist)
        absolute("d_A'", *e.exit_pupil_dist, st.exit_pupil_dist, length_tolerance_mm);
    if (e.entrance_pupil_to_h1)
        absolute("A''H1U", *e.entrance_pupil_to_h1, arr.entrance_pupil_to_h1, pupil_tolerance_mm);
    if (e.vertex_to_pupil) {
        if (cfg.main_lens.front_vertex_to_h1) {
            absolute("V1UA''", *e.vertex_to_pupil,
                     ray_model::front_vertex_to_entrance_pupil(*cfg.main_lens.front_vertex_to_h1,
                                                               arr.entrance_pupil_to_h1),
                     length_tolerance_mm);
        } else {
            checks.push_back({"V1UA''", *e.vertex_to_pupil, 0.0, 0.0, true, true,
                              "skipped: main_lens.v1h1_mm not given"});
        }
    }
    for (const auto& [g, b] : e.baselines) {
        const int i = g <= arr.center ? 0 : -arr.center;
        absolute("B_" + std::to_string(g), b, ray_model::baseline(arr, i, g), length_tolerance_mm);
    }
    for (const auto& [g, phi] : e.tilts_deg) {
        const int i = g <= arr.center ? 0 : -arr.center;
        absolute("Phi_" + std::to_string(g), phi, std::abs(to_degrees(ray_model::relative_tilt(arr, i, g))),
                 angle_tolerance_deg);
    }
    for (const auto& [key, z] : e.distances) {
        std::ostringstream name;
        name << "Z_" << key.first << "," << key.second;
        relative(name.str(), z, ray_model::triangulate(arr, {key.first, key.second}), distance_relative_tolerance);
    }
    return checks;
}

inline bool write_verification(std::ostream& out, const std::vector<Check>& checks)
{
    bool ok = true;
    for (const auto& c : checks) {
        if (c.skipped) {
            out << "SKIP  " << c.name << "  (" << c.note << ")\n";
            continue;
        }
        ok = ok && c.passed;
        out << (c.passed ? "PASS  " : "FAIL  ") << c.name << "  expected=" << format_number(c.expected, 6)
            << " actual=" << format_number(c.actual, 6) << " tol=" << std::setprecision(3) << c.tolerance
            << (c.note.empty() ? "" : " " + c.note) << '\n';
    }
    return ok;
}

} // namespace plenoptic::commands

#endif // PLENOPTIC_COMMANDS_HPP
