#ifndef PLENOPTIC_CONFIG_HPP
#define PLENOPTIC_CONFIG_HPP

// Sectioned key/value camera description:
//
//   [sensor]    pixel_pitch_mm, micro_image_px, image_width_px?, image_height_px?
//   [mla]       lenses_h, lenses_v, pitch_mm, f_s_mm and/or r1_mm r2_mm t_mm n, h1h2_mm?
//   [main_lens] f_u_mm, b_u_inf_mm?, exit_pupil_inf_mm, h1h2_mm, v1h1_mm?, pupil_diameter_mm?
//   [focus]     d_f_mm (number or inf)
//   [expect]    optional reference values checked by `spc verify`
//
// Lengths are millimetres. '#' and ';' start comments.

#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <regex>
#include <sstream>
#include <string>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "plenoptic/csv.hpp"
#include "plenoptic/error.hpp"
#include "plenoptic/optics.hpp"

namespace plenoptic::config {

namespace pt = boost::property_tree;

/// Reference values attached to a configuration.
struct Expectations {
    std::optional<double> image_distance;        // b_u_mm
    std::optional<double> exit_pupil_dist;       // exit_pupil_mm
    std::optional<double> entrance_pupil_to_h1;  // entrance_pupil_h1_mm
    std::optional<double> vertex_to_pupil;       // v1a_mm
    std::map<int, double> baselines;             // baseline_<G>_mm
    std::map<int, double> tilts_deg;             // tilt_<G>_deg, magnitudes
    std::map<std::pair<int, double>, double> distances; // distance_<G>_<dx>_mm

    bool empty() const noexcept
    {
        return !image_distance && !exit_pupil_dist && !entrance_pupil_to_h1 && !vertex_to_pupil &&
               baselines.empty() && tilts_deg.empty() && distances.empty();
    }
};

struct LoadedConfig {
    optics::CameraConfig camera;
    Expectations expect;
};

namespace detail {

class Section {
public:
    Section(const pt::ptree& root, std::string name) : name_(std::move(name))
    {
        if (auto child = root.get_child_optional(name_))
            node_ = &*child;
    }

    bool has(const std::string& key) const { return node_ && node_->find(key) != node_->not_found(); }

    std::optional<double> number(const std::string& key) const
    {
        if (!has(key))
            return std::nullopt;
        const auto raw = node_->find(key)->second.data();
        try {
            return csv::parse_number(raw);
        } catch (const error&) {
            throw config_error(name_ + "." + key, "'" + raw + "' is not a number");
        }
    }

    double required(const std::string& key) const
    {
        auto v = number(key);
        if (!v)
            throw config_error(name_ + "." + key, "missing");
        return *v;
    }

    int integer(const std::string& key) const
    {
        const double v = required(key);
        if (v != std::floor(v) || std::isinf(v))
            throw config_error(name_ + "." + key, "must be an integer");
        return static_cast<int>(v);
    }

    const pt::ptree* node() const noexcept { return node_; }

private:
    std::string name_;
    const pt::ptree* node_ = nullptr;
};

inline Expectations parse_expectations(const Section& s)
{
    Expectations e;
    e.image_distance = s.number("b_u_mm");
    e.exit_pupil_dist = s.number("exit_pupil_mm");
    e.entrance_pupil_to_h1 = s.number("entrance_pupil_h1_mm");
    e.vertex_to_pupil = s.number("v1a_mm");
    if (!s.node())
        return e;

    static const std::regex baseline_key(R"(baseline_(\d+)_mm)");
    static const std::regex tilt_key(R"(tilt_(\d+)_deg)");
    static const std::regex distance_key(R"(distance_(\d+)_(-?\d+(?:\.\d+)?)_mm)");
    for (const auto& [key, node] : *s.node()) {
        std::smatch m;
        if (std::regex_match(key, m, baseline_key))
            e.baselines[std::stoi(m[1])] = *s.number(key);
        else if (std::regex_match(key, m, tilt_key))
            e.tilts_deg[std::stoi(m[1])] = *s.number(key);
        else if (std::regex_match(key, m, distance_key))
            e.distances[{std::stoi(m[1]), std::stod(m[2])}] = *s.number(key);
    }
    return e;
}

} // namespace detail

inline LoadedConfig parse(std::istream& in)
{
    pt::ptree root;
    try {
        pt::ini_parser::read_ini(in, root);
    } catch (const pt::ini_parser_error& e) {
        throw config_error("line " + std::to_string(e.line()), e.message());
    }

    const detail::Section sensor(root, "sensor"), mla(root, "mla"), lens(root, "main_lens"), focus(root, "focus");

    LoadedConfig out;
    auto& cfg = out.camera;

    cfg.sensor.pixel_pitch = sensor.required("pixel_pitch_mm");
    cfg.sensor.micro_image_size = sensor.integer("micro_image_px");

    cfg.mla.count_h = mla.integer("lenses_h");
    cfg.mla.count_v = mla.integer("lenses_v");
    cfg.mla.pitch = mla.required("pitch_mm");
    const bool has_prescription = mla.has("r1_mm") || mla.has("t_mm") || mla.has("n");
    if (has_prescription) {
        optics::LensPrescription p;
        p.radius_front = mla.required("r1_mm");
        p.radius_back = mla.number("r2_mm").value_or(-infinity);
        p.thickness = mla.required("t_mm");
        p.refractive_index = mla.required("n");
        try {
            const auto cp = optics::mla_cardinal_points(p.thickness, p.refractive_index, p.radius_front,
                                                        p.radius_back);
            cfg.mla.focal_length = mla.number("f_s_mm").value_or(cp.focal_length);
            cfg.mla.principal_gap = mla.number("h1h2_mm").value_or(cp.principal_gap);
        } catch (const invalid_argument& e) {
            throw config_error("mla.r1_mm", e.what());
        } catch (const degenerate_optics_error& e) {
            throw config_error("mla.r1_mm", e.what());
        }
        cfg.mla.prescription = p;
    } else {
        cfg.mla.focal_length = mla.required("f_s_mm");
        cfg.mla.principal_gap = mla.number("h1h2_mm").value_or(0.0);
    }

    cfg.sensor.image_width_px = sensor.has("image_width_px")
                                    ? sensor.integer("image_width_px")
                                    : cfg.mla.count_h * cfg.sensor.micro_image_size;
    cfg.sensor.image_height_px = sensor.has("image_height_px")
                                     ? sensor.integer("image_height_px")
                                     : cfg.mla.count_v * cfg.sensor.micro_image_size;

    cfg.main_lens.focal_length = lens.required("f_u_mm");
    cfg.main_lens.image_distance_inf = lens.number("b_u_inf_mm").value_or(cfg.main_lens.focal_length);
    cfg.main_lens.exit_pupil_dist_inf = lens.required("exit_pupil_inf_mm");
    cfg.main_lens.principal_gap = lens.required("h1h2_mm");
    cfg.main_lens.front_vertex_to_h1 = lens.number("v1h1_mm");
    cfg.main_lens.entrance_pupil_diameter = lens.number("pupil_diameter_mm");

    if (focus.has("d_f_mm"))
        cfg.focus.distance = focus.required("d_f_mm");
    else if (focus.has("d_f"))
        cfg.focus.distance = focus.required("d_f");
    else
        throw config_error("focus.d_f_mm", "missing");

    optics::validate(cfg);
    out.expect = detail::parse_expectations(detail::Section(root, "expect"));
    return out;
}

inline LoadedConfig load(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw error("cannot open config " + path);
    return parse(in);
}

inline LoadedConfig parse_string(const std::string& text)
{
    std::istringstream in(text);
    return parse(in);
}

} // namespace plenoptic::config

#endif // PLENOPTIC_CONFIG_HPP
