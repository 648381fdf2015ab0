#ifndef PLENOPTIC_PGM_HPP
#define PLENOPTIC_PGM_HPP

// Portable graymap (P2 ASCII / P5 binary) reading and writing. Samples are
// held as doubles normalised by maxval so that write(read(x)) is bit exact.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "plenoptic/error.hpp"
#include "plenoptic/image.hpp"

namespace plenoptic::pgm {

struct Graymap {
    ImageF image;
    int maxval = 255;
};

namespace detail {

inline void skip_space_and_comments(std::istream& in)
{
    for (;;) {
        const int ch = in.peek();
        if (ch == '#') {
            std::string line;
            std::getline(in, line);
        } else if (ch != EOF && std::isspace(ch)) {
            in.get();
        } else {
            return;
        }
    }
}

inline int read_header_int(std::istream& in, const char* what)
{
    skip_space_and_comments(in);
    int v = 0;
    if (!(in >> v) || v <= 0)
        throw error(std::string("pgm: bad ") + what);
    return v;
}

} // namespace detail

inline Graymap read(std::istream& in)
{
    char magic[2] = {0, 0};
    in.read(magic, 2);
    if (!in || magic[0] != 'P' || (magic[1] != '2' && magic[1] != '5'))
        throw error("pgm: expected P2 or P5 magic number");
    const bool binary = magic[1] == '5';

    const int w = detail::read_header_int(in, "width");
    const int h = detail::read_header_int(in, "height");
    const int maxval = detail::read_header_int(in, "maxval");
    if (maxval > 65535)
        throw error("pgm: maxval exceeds 65535");

    Graymap g{ImageF(w, h), maxval};
    auto px = g.image.pixels();
    if (binary) {
        in.get(); // single whitespace after maxval
        const bool wide = maxval > 255;
        for (auto& v : px) {
            unsigned value = 0;
            if (wide) {
                const int hi = in.get();
                const int lo = in.get();
                value = (static_cast<unsigned>(hi) << 8) | static_cast<unsigned>(lo);
            } else {
                value = static_cast<unsigned>(in.get());
            }
            if (!in)
                throw error("pgm: truncated pixel data");
            v = static_cast<double>(value) / maxval;
        }
    } else {
        for (auto& v : px) {
            detail::skip_space_and_comments(in);
            int value = 0;
            if (!(in >> value))
                throw error("pgm: truncated pixel data");
            v = static_cast<double>(value) / maxval;
        }
    }
    return g;
}

inline Graymap read(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw error("cannot open " + path);
    return read(in);
}

/// Writes samples clamped to [0, 1] and quantised to maxval as binary P5.
inline void write(std::ostream& out, const ImageF& img, int maxval = 255)
{
    if (maxval < 1 || maxval > 65535)
        throw invalid_argument("pgm: maxval must be in [1, 65535]");
    out << "P5\n" << img.width() << ' ' << img.height() << '\n' << maxval << '\n';
    const bool wide = maxval > 255;
    for (double v : img.pixels()) {
        const double clamped = std::clamp(std::isnan(v) ? 0.0 : v, 0.0, 1.0);
        const auto q = static_cast<unsigned>(std::lround(clamped * maxval));
        if (wide)
            out.put(static_cast<char>((q >> 8) & 0xff));
        out.put(static_cast<char>(q & 0xff));
    }
}

inline void write(const std::string& path, const ImageF& img, int maxval = 255)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw error("cannot write " + path);
    write(out, img, maxval);
}

} // namespace plenoptic::pgm

#endif // PLENOPTIC_PGM_HPP
