// spc: plenoptic camera geometry, decoding and depth from the command line.

#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "plenoptic/commands.hpp"
#include "plenoptic/config.hpp"
#include "plenoptic/scene.hpp"

namespace {

using namespace plenoptic;

/// Writes to the named file, or stdout when the name is empty or "-".
class Output {
public:
    explicit Output(const std::string& path)
    {
        if (!path.empty() && path != "-") {
            file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
            if (!*file_)
                throw error("cannot write " + path);
        }
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

const char* units_note = "Lengths are millimetres and angles degrees.";

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Standard plenoptic camera geometry: virtual camera baselines, tilts and triangulated "
                 "distances; raw light field decoding and SAD disparity."};
    app.footer(units_note);
    app.require_subcommand(1);

    // predict
    std::string cfg_path, out_path;
    std::vector<int> gaps;
    std::vector<double> disparities;
    auto* predict = app.add_subcommand("predict", "Baselines, tilt angles and distances as CSV");
    predict->add_option("config", cfg_path, "Camera configuration")->required()->check(CLI::ExistingFile);
    predict->add_option("--gaps", gaps, "Viewpoint gaps G")->delimiter(',');
    predict->add_option("--disparities", disparities, "Disparities in view pixels")->delimiter(',');
    predict->add_option("-o,--output", out_path, "Output CSV (default stdout)");

    // extract
    std::string raw_path, out_dir;
    bool rotate = false;
    auto* extract = app.add_subcommand("extract", "Decode a raw capture into view_{i}_{g}.pgm files");
    extract->add_option("config", cfg_path, "Camera configuration")->required()->check(CLI::ExistingFile);
    extract->add_option("raw", raw_path, "Calibrated raw capture (PGM)")->required()->check(CLI::ExistingFile);
    extract->add_option("out_dir", out_dir, "Directory for the views")->required();
    extract->add_flag("--rotate-180", rotate, "Rotate the raw capture by 180 degrees before decoding");

    // disparity
    std::string left_path, right_path, pgm_path;
    disparity::MatchParams match;
    auto* disp = app.add_subcommand("disparity", "SAD block matching between two views, CSV output");
    disp->add_option("left", left_path, "View with the lower viewpoint index")->required()->check(CLI::ExistingFile);
    disp->add_option("right", right_path, "View with the higher viewpoint index")->required()->check(CLI::ExistingFile);
    disp->add_option("--block", match.block_size, "Odd block size")
        ->check(CLI::Validator(
            [](std::string& v) -> std::string {
                const int b = std::stoi(v);
                return (b > 0 && b % 2 == 1) ? "" : "block size must be odd and positive";
            },
            "ODD"));
    disp->add_option("--maxd", match.max_disparity, "Maximum |disparity| in pixels")->check(CLI::NonNegativeNumber);
    disp->add_flag("--subpixel,!--no-subpixel", match.subpixel, "Parabolic sub-pixel refinement (default on)");
    disp->add_option("-o,--output", out_path, "Output CSV (default stdout)");
    disp->add_option("--pgm", pgm_path, "Also write a 16-bit graymap for viewing");

    // depth
    std::string disparity_path;
    int gap = 1;
    auto* depth = app.add_subcommand("depth", "Triangulate a disparity CSV into distances (mm)");
    depth->add_option("config", cfg_path, "Camera configuration")->required()->check(CLI::ExistingFile);
    depth->add_option("disparity", disparity_path, "Disparity CSV")->required()->check(CLI::ExistingFile);
    depth->add_option("--gap", gap, "Viewpoint gap G of the disparity map")->required();
    depth->add_option("-o,--output", out_path, "Output CSV (default stdout)");

    // verify
    std::vector<std::string> verify_paths;
    auto* verify = app.add_subcommand("verify", "Cross-check the ray model against the paraxial oracle "
                                                "and the [expect] values of each config");
    verify->add_option("configs", verify_paths, "Camera configurations")->required()->check(CLI::ExistingFile);

    // render
    std::string scene_path;
    int bits = 16;
    auto* render = app.add_subcommand("render", "Render a synthetic raw capture of textured planes");
    render->add_option("config", cfg_path, "Camera configuration")->required()->check(CLI::ExistingFile);
    render->add_option("scene", scene_path, "Scene description")->required()->check(CLI::ExistingFile);
    render->add_option("output", out_path, "Raw capture to write (PGM)")->required();
    render->add_option("--bits", bits, "Sample depth, 8 or 16")->check(CLI::IsMember({8, 16}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (*predict) {
            const auto cfg = config::load(cfg_path).camera;
            const auto report = commands::predict(cfg, gaps, disparities);
            for (const auto& w : commands::pupil_warnings(cfg, report))
                std::cerr << "warning: " << w << '\n';
            Output out(out_path);
            commands::write_prediction(out.stream(), report);
        } else if (*extract) {
            commands::extract(config::load(cfg_path).camera, raw_path, out_dir, rotate, std::cerr);
        } else if (*disp) {
            const auto map = commands::disparity_from_files(left_path, right_path, match);
            Output out(out_path);
            commands::write_disparity(out.stream(), map, match);
            if (!pgm_path.empty())
                pgm::write(pgm_path, disparity::to_display(map, match.max_disparity), 65535);
        } else if (*depth) {
            const auto cfg = config::load(cfg_path).camera;
            std::ifstream in(disparity_path);
            const auto z = commands::depth_map(cfg, csv::read_grid(in), gap);
            Output out(out_path);
            commands::write_depth(out.stream(), z, gap);
        } else if (*verify) {
            bool ok = true;
            for (const auto& path : verify_paths) {
                std::cout << "# " << path << '\n';
                ok = commands::write_verification(std::cout, commands::verify(config::load(path))) && ok;
            }
            std::cout << (ok ? "all checks passed\n" : "some checks FAILED\n");
            return ok ? 0 : 1;
        } else if (*render) {
            const auto cfg = config::load(cfg_path).camera;
            const auto raw = oracle::render_synthetic_scene(cfg, scene::load(scene_path));
            pgm::write(out_path, raw.samples, bits == 16 ? 65535 : 255);
        }
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
