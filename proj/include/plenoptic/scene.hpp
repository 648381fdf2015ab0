#ifndef PLENOPTIC_SCENE_HPP
#define PLENOPTIC_SCENE_HPP

// Scene description for the synthetic renderer. One [scene] section and any
// number of sections whose name starts with "plane":
//
//   [scene]
//   background = 0.0
//
//   [plane_near]
//   depth_mm = 2034.79          ; from the entrance pupil
//   texture = noise             ; noise | checker | file
//   noise_cell_mm = 4
//   seed = 7
//   x_min_mm = -50              ; optional extent, default unbounded
//
// Texture keys: checker_period_mm; noise_cell_mm, seed; file (PGM, relative to
// the scene file), texel_mm.

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "plenoptic/csv.hpp"
#include "plenoptic/error.hpp"
#include "plenoptic/paraxial.hpp"
#include "plenoptic/pgm.hpp"

namespace plenoptic::scene {

namespace pt = boost::property_tree;

inline oracle::Scene parse(std::istream& in, const std::filesystem::path& base_dir = {})
{
    pt::ptree root;
    try {
        pt::ini_parser::read_ini(in, root);
    } catch (const pt::ini_parser_error& e) {
        throw config_error("line " + std::to_string(e.line()), e.message());
    }

    const auto number = [](const pt::ptree& node, const std::string& section, const std::string& key,
                           std::optional<double> fallback = std::nullopt) -> double {
        const auto it = node.find(key);
        if (it == node.not_found()) {
            if (fallback)
                return *fallback;
            throw config_error(section + "." + key, "missing");
        }
        try {
            return csv::parse_number(it->second.data());
        } catch (const error&) {
            throw config_error(section + "." + key, "'" + it->second.data() + "' is not a number");
        }
    };

    oracle::Scene scene;
    for (const auto& [name, node] : root) {
        if (name == "scene") {
            scene.background = number(node, name, "background", 0.0);
            continue;
        }
        if (name.rfind("plane", 0) != 0)
            throw config_error(name, "unknown section");

        oracle::Plane plane;
        plane.depth = number(node, name, "depth_mm");
        const std::string kind = node.get<std::string>("texture", "noise");
        if (kind == "checker") {
            plane.texture = oracle::CheckerTexture{number(node, name, "checker_period_mm")};
        } else if (kind == "noise") {
            plane.texture = oracle::NoiseTexture{number(node, name, "noise_cell_mm", 5.0),
                                                 static_cast<std::uint64_t>(number(node, name, "seed", 1.0))};
        } else if (kind == "file") {
            const auto file = node.get<std::string>("file", "");
            if (file.empty())
                throw config_error(name + ".file", "missing");
            plane.texture = oracle::BitmapTexture{pgm::read((base_dir / file).string()).image,
                                                  number(node, name, "texel_mm", 1.0)};
        } else {
            throw config_error(name + ".texture", "expected checker, noise or file");
        }
        plane.extent.x_min = number(node, name, "x_min_mm", -infinity);
        plane.extent.x_max = number(node, name, "x_max_mm", infinity);
        plane.extent.y_min = number(node, name, "y_min_mm", -infinity);
        plane.extent.y_max = number(node, name, "y_max_mm", infinity);
        scene.planes.push_back(std::move(plane));
    }
    return scene;
}

inline oracle::Scene load(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw error("cannot open scene " + path);
    return parse(in, std::filesystem::path(path).parent_path());
}

} // namespace plenoptic::scene

#endif // PLENOPTIC_SCENE_HPP
