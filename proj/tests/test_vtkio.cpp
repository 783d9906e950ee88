#include "support.hpp"

#include "vizpipe/errors.hpp"
#include "vizpipe/vtkio.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>

using namespace vizpipe;

namespace {

constexpr const char* kMinimalGrid = R"(# vtk DataFile Version 2.0
tiny
ASCII
DATASET STRUCTURED_POINTS
DIMENSIONS 2 2 2
ORIGIN 0 0 0
SPACING 1 1 1
POINT_DATA 8
SCALARS density double 1
LOOKUP_TABLE default
0 1 2 3 4 5 6 7
)";

constexpr const char* kTriangle = R"(# vtk DataFile Version 2.0
one triangle
ASCII
DATASET POLYDATA
POINTS 3 float
0 0 0  1 0 0  0 1 0
POLYGONS 1 4
3 0 1 2
POINT_DATA 3
SCALARS s float 1
LOOKUP_TABLE default
0.5 1.5 2.5
NORMALS n float
0 0 1 0 0 1 0 0 1
)";

std::size_t expect_parse_error_line(const std::string& text) {
    try {
        read_legacy(text);
    } catch (const ParseError& e) {
        return e.line();
    }
    FAIL("expected a ParseError");
    return 0;
}

} // namespace

TEST_CASE("minimal structured points") {
    const Dataset d = read_legacy(kMinimalGrid);
    const auto& g = std::get<ImageData>(d);
    CHECK(g.dims() == Dims{2, 2, 2});
    CHECK(g.scalars_name() == "density");
    REQUIRE(g.point_scalars());
    CHECK(g.point_scalars()->to_doubles() == std::vector<double>{0, 1, 2, 3, 4, 5, 6, 7});
}

TEST_CASE("polydata with scalars and normals") {
    const Dataset d = read_legacy(kTriangle);
    const auto& p = std::get<PolyData>(d);
    CHECK(p.points.size() == 3);
    CHECK(p.triangles.size() == 1);
    REQUIRE(p.point_scalars);
    CHECK(*p.point_scalars == std::vector<double>{0.5, 1.5, 2.5});
    REQUIRE(p.point_normals);
    CHECK((*p.point_normals)[2] == Vec3{0, 0, 1});
}

TEST_CASE("writing canonicalizes and is idempotent") {
    for (const char* f : {kMinimalGrid, kTriangle}) {
        const std::string canonical = write_legacy(read_legacy(f));
        CHECK(canonical.rfind("# vtk DataFile Version 2.0\n", 0) == 0);
        CHECK(write_legacy(read_legacy(canonical)) == canonical);
    }
}

TEST_CASE("empty polydata writes POINTS 0") {
    const std::string text = write_legacy(PolyData{});
    CHECK(text.find("POINTS 0") != std::string::npos);
    CHECK(read_legacy(text) == Dataset(PolyData{}));
}

TEST_CASE("the 100^3 grid writes as STRUCTURED_POINTS") {
    const std::string text = write_legacy(testing::ellipsoid_grid(100));
    CHECK(text.find("DATASET STRUCTURED_POINTS") != std::string::npos);
    CHECK(text.find("DIMENSIONS 100 100 100") != std::string::npos);
    CHECK(read_legacy(text) == Dataset(testing::ellipsoid_grid(100)));
}

TEST_CASE("rejections") {
    std::string quad = kTriangle;
    quad.replace(quad.find("POLYGONS 1 4\n3 0 1 2"), 20, "POLYGONS 1 5\n4 0 1 2 0");
    CHECK_THROWS_AS(read_legacy(quad), UnsupportedCellError);

    std::string binary = kMinimalGrid;
    binary.replace(binary.find("ASCII"), 5, "BINARY");
    CHECK_THROWS_AS(read_legacy(binary), UnsupportedFormatError);

    std::string grid = kMinimalGrid;
    grid.replace(grid.find("STRUCTURED_POINTS"), 17, "UNSTRUCTURED_GRID");
    CHECK_THROWS_AS(read_legacy(grid), UnsupportedDatasetError);

    std::string short_data = kMinimalGrid;
    short_data.replace(short_data.find("0 1 2 3 4 5 6 7"), 15, "0 1 2 3 4 5 6");
    CHECK_THROWS_AS(read_legacy(short_data), ParseError);

    CHECK(expect_parse_error_line("") == 1);
    CHECK(expect_parse_error_line("# vtk DataFile Version 2.0\n") == 2);

    std::string bad_count = kTriangle;
    bad_count.replace(bad_count.find("POINTS 3"), 8, "POINTS x");
    CHECK(expect_parse_error_line(bad_count) == 5);

    std::string bad_index = kTriangle;
    bad_index.replace(bad_index.find("3 0 1 2"), 7, "3 0 1 9");
    CHECK(expect_parse_error_line(bad_index) == 8);
}

TEST_CASE("shortest round-trip number formatting") {
    for (double v : {0.1, 1.0 / 3, -2.5e-300, 1e21, 123456789.0, 5e-324, -0.0})
        CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(2) == "2");
}

TEST_CASE("read(write(d)) == d on random datasets") {
    testing::Rng rng(7);
    for (int i = 0; i < 50; ++i) {
        const Dataset d = testing::random_dataset(rng);
        const std::string text = write_legacy(d);
        CAPTURE(text);
        CHECK(read_legacy(text) == d);
        CHECK(write_legacy(read_legacy(text)) == text);
    }
}

TEST_CASE("fuzzed files parse or raise ParseError") {
    testing::Rng rng(11);
    std::vector<std::string> seeds{kMinimalGrid, kTriangle};
    for (int i = 0; i < 8; ++i) seeds.push_back(write_legacy(testing::random_dataset(rng)));
    const std::string alphabet = "0123456789 -.e\n\tABCDEFGHIJKLMNOPQRSTUVWXYZ#";
    std::size_t parsed = 0, rejected = 0;
    for (int i = 0; i < 10000; ++i) {
        std::string text = seeds[rng() % seeds.size()];
        const int edits = 1 + static_cast<int>(rng() % 4);
        for (int k = 0; k < edits && !text.empty(); ++k) {
            const std::size_t at = rng() % text.size();
            switch (rng() % 5) {
            case 0: text[at] = alphabet[rng() % alphabet.size()]; break;
            case 1: text.erase(at, 1 + rng() % 8); break;
            case 2: text.insert(at, 1, alphabet[rng() % alphabet.size()]); break;
            case 3: text.resize(at); break;
            default: text.insert(at, text.substr(rng() % text.size(), rng() % 16)); break;
            }
        }
        try {
            read_legacy(text);
            ++parsed;
        } catch (const ParseError& e) {
            CHECK(e.line() >= 1);
            ++rejected;
        }
    }
    CHECK(parsed + rejected == 10000);
    CHECK(rejected > 0);
}

TEST_CASE("array text reader") {
    const ImageData g = read_array_text("1 2 3\n4 5 6\n");
    CHECK(g.dims() == Dims{3, 2, 1});
    CHECK(g.point_scalars()->to_doubles() == std::vector<double>{1, 2, 3, 4, 5, 6});
    CHECK_THROWS_AS(read_array_text("1 2\n3\n"), ParseError);
    CHECK_THROWS_AS(read_array_text(""), ParseError);
    CHECK_THROWS_AS(read_array_text("1 x\n"), ParseError);
}

TEST_CASE("file round trip") {
    const auto dir = testing::temp_dir("vtkio");
    const auto path = std::filesystem::path(dir) / "tri.vtk";
    const Dataset d = read_legacy(kTriangle);
    write_legacy_file(path, d);
    CHECK(read_legacy_file(path) == d);
    CHECK_THROWS_AS(read_legacy_file(std::filesystem::path(dir) / "missing.vtk"), Error);
}

TEST_CASE("extreme magnitudes survive the round trip") {
    PolyData p;
    p.points = {{5e-324, -1e-310, 1.7976931348623157e308}, {-0.0, 2.2250738585072014e-308, 1}};
    p.lines = {{0, 1}};
    CHECK(read_legacy(write_legacy(p)) == Dataset(p));
}
