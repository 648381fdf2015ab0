#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "plenoptic/lightfield.hpp"
#include "plenoptic/pgm.hpp"
#include "support.hpp"

using namespace plenoptic;
using namespace plenoptic::lightfield;

namespace {

RawLightFieldImage indexed_raw(Layout lay)
{
    RawLightFieldImage raw{ImageF(lay.raw_width(), lay.raw_height()), lay};
    for (int l = 0; l < lay.raw_height(); ++l)
        for (int k = 0; k < lay.raw_width(); ++k)
            raw.samples(k, l) = k * lay.raw_height() + l;
    return raw;
}

} // namespace

TEST(IndexTranslate, Examples)
{
    EXPECT_EQ(index_translate(0, 0, 3), 1);
    EXPECT_EQ(index_translate(2, 1, 3), 8);
    EXPECT_THROW(index_translate(0, 2, 3), invalid_argument);
    EXPECT_THROW(index_translate(0, 0, 4), invalid_argument);
}

TEST(IndexTranslate, RoundTrip)
{
    for (int m : {1, 3, 9, 13})
        for (int k = 0; k < 40 * m; ++k) {
            const auto [j, i] = index_split(k, m);
            EXPECT_EQ(index_translate(j, i, m), k);
        }
}

TEST(Decode, NineByNineLoopOracle)
{
    // walk every micro image pixel by pixel, without the index formula
    const Layout lay{3, 3, 3};
    const auto raw = indexed_raw(lay);
    const auto lf = decode(raw);
    int y = 0;
    for (int h = 0; h < 3; ++h)
        for (int g = -1; g <= 1; ++g, ++y) {
            int x = 0;
            for (int j = 0; j < 3; ++j)
                for (int i = -1; i <= 1; ++i, ++x)
                    EXPECT_EQ(lf.at(j, h, i, g), x * 9.0 + y) << j << h << i << g;
        }
}

TEST(Decode, UnitMicroImageIsIdentity)
{
    const Layout lay{7, 5, 1};
    const auto raw = RawLightFieldImage{support::random_image(7, 5, 3), lay};
    const auto view = extract_view(decode(raw), 0, 0);
    EXPECT_EQ(view.pixels, raw.samples);
}

TEST(Decode, RejectsDimensionMismatch)
{
    EXPECT_THROW(decode({ImageF(10, 9), Layout{3, 3, 3}}), invalid_argument);
    EXPECT_THROW(decode({ImageF(9, 9), Layout{3, 3, 2}}), invalid_argument);
}

TEST(Decode, FlattenRoundTripIsBitExact)
{
    for (const Layout lay : {Layout{3, 3, 3}, Layout{11, 7, 5}, Layout{4, 6, 13}}) {
        const RawLightFieldImage raw{support::random_image(lay.raw_width(), lay.raw_height(), 11), lay};
        const auto back = flatten(decode(raw));
        EXPECT_EQ(back.samples, raw.samples);
        EXPECT_EQ(back.layout, raw.layout);
    }
}

TEST(Decode, RotationTwiceRestores)
{
    const auto img = support::random_image(15, 9, 5);
    EXPECT_EQ(rotate_180(rotate_180(img)), img);
    EXPECT_NE(rotate_180(img), img);
}

TEST(Decode, RotateFlagMatchesRotatedInput)
{
    const Layout lay{5, 3, 3};
    const RawLightFieldImage raw{support::random_image(15, 9, 6), lay};
    const auto a = flatten(decode(raw, true));
    EXPECT_EQ(a.samples, rotate_180(raw.samples));
}

TEST(ExtractView, ColourPatternLandsInOneView)
{
    // every micro image coloured by its pixel offset (i, g)
    const Layout lay{6, 4, 3};
    RawLightFieldImage raw{ImageF(lay.raw_width(), lay.raw_height()), lay};
    for (int l = 0; l < lay.raw_height(); ++l)
        for (int k = 0; k < lay.raw_width(); ++k)
            raw.samples(k, l) = 10 * (k % 3) + (l % 3);
    const auto lf = decode(raw);
    for (int g = -1; g <= 1; ++g)
        for (int i = -1; i <= 1; ++i) {
            const auto v = extract_view(lf, i, g);
            for (double p : v.pixels.pixels())
                EXPECT_EQ(p, 10 * (i + 1) + (g + 1));
        }
}

TEST(ExtractView, ConstantImage)
{
    const Layout lay{5, 5, 3};
    const auto v = extract_view(decode({ImageF(15, 15, 0.25), lay}), 0, 0);
    for (double p : v.pixels.pixels())
        EXPECT_EQ(p, 0.25);
}

TEST(ExtractView, MatchesGatheredGrid)
{
    const Layout lay{3, 3, 3};
    const auto raw = indexed_raw(lay);
    const auto lf = decode(raw);
    for (int g = -1; g <= 1; ++g)
        for (int i = -1; i <= 1; ++i) {
            const auto v = extract_view(lf, i, g);
            for (int h = 0; h < 3; ++h)
                for (int j = 0; j < 3; ++j)
                    EXPECT_EQ(v.pixels(j, h), raw.samples(3 * j + 1 + i, 3 * h + 1 + g));
        }
    EXPECT_THROW(extract_view(lf, 2, 0), invalid_argument);
}

TEST(ExtractView, ExperimentalSensorDimensions)
{
    const Layout lay{281, 188, 3};
    const auto lf = decode({ImageF(lay.raw_width(), lay.raw_height(), 0.5), lay});
    const auto v = extract_view(lf, -1, 1);
    EXPECT_EQ(v.pixels.width(), 281);
    EXPECT_EQ(v.pixels.height(), 188);
}

TEST(ExtractAllViews, CountsAndConservation)
{
    const Layout lay{7, 5, 3};
    const auto views = extract_all_views(decode({support::random_image(21, 15, 9), lay}));
    ASSERT_EQ(views.size(), 9u);
    std::size_t pixels = 0;
    std::set<std::pair<int, int>> seen;
    for (const auto& v : views) {
        pixels += v.pixels.size();
        seen.insert({v.i, v.g});
    }
    EXPECT_EQ(pixels, 21u * 15u);
    EXPECT_EQ(seen.size(), 9u);
    EXPECT_EQ(view_filename(-2, 0), "view_-2_0.pgm");
}

TEST(Pgm, RoundTripsBothDepths)
{
    ImageF img(4, 3);
    for (int k = 0; k < 12; ++k)
        img.pixels()[k] = k / 11.0;
    for (int maxval : {255, 65535}) {
        std::stringstream s;
        pgm::write(s, img, maxval);
        const auto back = pgm::read(s);
        EXPECT_EQ(back.maxval, maxval);
        for (int k = 0; k < 12; ++k)
            EXPECT_NEAR(back.image.pixels()[k], img.pixels()[k], 0.5 / maxval);
    }
}

TEST(Pgm, ReadsPlainFormat)
{
    std::istringstream s("P2\n# comment\n3 1\n10\n0 5 10\n");
    const auto g = pgm::read(s);
    EXPECT_EQ(g.image.width(), 3);
    EXPECT_DOUBLE_EQ(g.image(1, 0), 0.5);
}
