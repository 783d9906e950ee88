#include "support.hpp"

#include "vizpipe/dataset.hpp"
#include "vizpipe/errors.hpp"

#include <doctest.h>

using namespace vizpipe;

TEST_CASE("image_data_new validates and derives bounds") {
    std::vector<double> v(8, 0.0);
    const auto img = image_data_new({2, 2, 2}, {0, 0, 0}, {1, 1, 1}, NumericArray({8}, v));
    const auto b = img.bounds();
    CHECK(b[0] == Vec3{0, 0, 0});
    CHECK(b[1] == Vec3{1, 1, 1});

    CHECK_THROWS_AS(image_data_new({2, 2, 2}, {0, 0, 0}, {1, 1, 1}, NumericArray({7}, std::vector<double>(7))),
                    DatasetShapeError);
    CHECK_THROWS_AS(image_data_new({2, 2, 2}, {0, 0, 0}, {1, 0, 1}), DatasetParamError);
    CHECK_THROWS_AS(image_data_new({2, 2, 2}, {0, 0, 0}, {1, -1, 1}), DatasetParamError);
    CHECK_THROWS_AS(image_data_new({0, 2, 2}, {0, 0, 0}, {1, 1, 1}), DatasetParamError);
}

TEST_CASE("the ellipsoid field is valid source data") {
    const auto img = testing::ellipsoid_grid(100);
    CHECK(img.point_count() == 1000000);
    const auto b = img.bounds();
    CHECK(b[0][0] == doctest::Approx(-10));
    CHECK(b[1][2] == doctest::Approx(10));
    CHECK(dataset_info(img).dataset_kind == DatasetKind::ImageData);
}

TEST_CASE("dataset_info reports exactly what is present") {
    const auto img = image_data_new({2, 2, 2}, {0, 0, 0}, {1, 1, 1}, NumericArray({8}, std::vector<double>(8)));
    CHECK(dataset_info(img) == DatasetInfo{DatasetKind::ImageData, {"point"}, {"scalars"}});

    PolyData p;
    p.points = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
    p.triangles = {{0, 1, 2}};
    CHECK(dataset_info(p) == DatasetInfo{DatasetKind::PolyData, {"point"}, {}});

    p.point_scalars = std::vector<double>{1, 2, 3};
    p.point_normals = std::vector<Vec3>{{0, 0, 1}, {0, 0, 1}, {0, 0, 1}};
    CHECK(dataset_info(p) == DatasetInfo{DatasetKind::PolyData, {"point"}, {"scalars", "normals"}});
}

TEST_CASE("point_position uses x-fastest ordering") {
    const auto cube = image_data_new({2, 2, 2}, {0, 0, 0}, {1, 1, 1});
    CHECK(point_position(cube, 0) == Vec3{0, 0, 0});
    CHECK(point_position(cube, 7) == Vec3{1, 1, 1});
    CHECK_THROWS_AS(point_position(cube, 8), IndexError);

    // Enumerate the 3x2x2 lattice by the ordering and compare each index.
    const auto g = image_data_new({3, 2, 2}, {0, 0, 0}, {1, 1, 1});
    std::size_t index = 0;
    for (int k = 0; k < 2; ++k)
        for (int j = 0; j < 2; ++j)
            for (int i = 0; i < 3; ++i, ++index)
                CHECK(point_position(g, index) == Vec3{double(i), double(j), double(k)});
    CHECK(point_position(g, 4) == Vec3{1, 1, 0});
}

TEST_CASE("point_position is a bijection on grids up to 5^3") {
    for (std::size_t nx = 1; nx <= 5; ++nx)
        for (std::size_t ny = 1; ny <= 5; ++ny)
            for (std::size_t nz = 1; nz <= 5; ++nz) {
                const auto g = image_data_new({nx, ny, nz}, {0.5, -1, 2}, {0.25, 0.5, 2});
                for (std::size_t idx = 0; idx < g.point_count(); ++idx) {
                    const auto ijk = lattice_index(g, idx);
                    REQUIRE(ijk[0] + nx * (ijk[1] + ny * ijk[2]) == idx);
                    const auto p = point_position(g, idx);
                    for (int a = 0; a < 3; ++a)
                        REQUIRE(p[a] == g.origin()[a] + g.spacing()[a] * static_cast<double>(ijk[a]));
                }
            }
}

TEST_CASE("dataset_info of a constructed image is always image_data") {
    testing::Rng rng(7);
    for (int t = 0; t < 50; ++t) {
        Dims d{1 + rng() % 4, 1 + rng() % 4, 1 + rng() % 4};
        const bool with = rng() % 2;
        std::optional<NumericArray> s;
        if (with) s = NumericArray({d[0] * d[1] * d[2]}, std::vector<double>(d[0] * d[1] * d[2], 1.0));
        CHECK(dataset_info(image_data_new(d, {0, 0, 0}, {1, 1, 1}, s)).dataset_kind == DatasetKind::ImageData);
    }
}

TEST_CASE("PolyData validation") {
    PolyData p;
    p.points = {{0, 0, 0}, {1, 0, 0}};
    p.triangles = {{0, 1, 2}};
    CHECK_THROWS_AS(p.validate(), DatasetShapeError);
    p.triangles.clear();
    p.lines = {{0, 1}};
    CHECK_NOTHROW(p.validate());
    p.point_normals = std::vector<Vec3>{{0, 0, 2}, {0, 0, 1}};
    CHECK_THROWS_AS(p.validate(), DatasetParamError);
    p.point_normals = std::vector<Vec3>{{0, 0, 1}};
    CHECK_THROWS_AS(p.validate(), DatasetShapeError);
}

TEST_CASE("NumericArray keeps its shape contract") {
    CHECK_THROWS_AS(NumericArray({2, 3}, std::vector<double>(5)), DatasetShapeError);
    const NumericArray a({2, 3}, std::vector<std::int32_t>{1, 2, 3, 4, 5, 6});
    CHECK(a.element_kind() == ElementKind::Int32);
    CHECK(a.at(5) == 6.0);
    CHECK(a.size() == 6);
    CHECK_THROWS_AS(a.doubles(), DatasetShapeError);
}
