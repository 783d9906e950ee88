#include "support.hpp"

#include "vizpipe/errors.hpp"
#include "vizpipe/mlab.hpp"

#include <doctest.h>

#include <chrono>
#include <algorithm>
#include <cmath>
#include <set>

using namespace vizpipe;

namespace {

NumericArray field(std::size_t n, double c) { return testing::ellipsoid_array(n, c); }

std::string doc_text(const Engine& e) { return state_to_text(e.save_state()); }

const PolyData& mesh_of(const Node& n) { return std::get<PolyData>(*n.outputs().front()); }

Contour3dOptions at_level(double v) {
    Contour3dOptions o;
    o.contours = std::vector<double>{v};
    return o;
}

Contour3dOptions gray_wireframe() {
    Contour3dOptions o;
    o.colormap = "gray";
    o.representation = "wireframe";
    return o;
}

std::vector<double> linspace(double a, double b, std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    return v;
}

} // namespace

TEST_CASE("contour3d equals the explicit two-command pipeline") {
    const auto start = std::chrono::steady_clock::now();
    const NumericArray s = field(100, 2);

    Engine a;
    Mlab(a).contour3d(s);

    Engine b;
    b.new_scene();
    auto src = b.create("array_source");
    src->load_data({{"scalars", s}});
    Node& sn = b.add_source(std::move(src));
    b.add_module(b.create("iso_surface"));

    Engine c;
    Mlab mc(c);
    Node& field_node = mc.pipeline("scalar_field", s);
    mc.pipeline("iso_surface", field_node);

    CHECK(doc_text(a) == doc_text(b));
    CHECK(doc_text(a) == doc_text(c));
    CHECK(sn.factory_id() == "array_source");
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    CHECK(seconds < 30);
}

TEST_CASE("contour3d options") {
    Engine e;
    Mlab m(e);
    Node& iso = m.contour3d(field(20, 2), at_level(50));
    CHECK(iso.factory_id() == "iso_surface");
    CHECK(iso.get_as<FloatList>("contours") == FloatList{50});
    for (double v : *mesh_of(iso).point_scalars) CHECK(v == doctest::Approx(50));

    Node& auto_iso = m.contour3d(field(20, 2));
    const auto& g = std::get<ImageData>(*auto_iso.parent()->parent()->outputs().front());
    const auto values = g.point_scalars()->to_doubles();
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    const auto levels = auto_levels(*lo, *hi, 3);
    std::set<double> seen(mesh_of(auto_iso).point_scalars->begin(), mesh_of(auto_iso).point_scalars->end());
    CHECK(seen.size() == levels.size());

    Node& gray = m.contour3d(field(10, 2), gray_wireframe());
    CHECK(gray.parent()->get_as<std::string>("colormap") == "gray");
    CHECK(gray.get_as<std::string>("representation") == "wireframe");

    CHECK_THROWS_AS(m.contour3d(NumericArray({4, 4}, std::vector<double>(16))), ShapeError);
    CHECK_THROWS_AS(m.contour3d(NumericArray({1, 4, 4}, std::vector<double>(16))), ShapeError);
}

TEST_CASE("without an engine a context creates one lazily") {
    Mlab m;
    Engine& e = m.engine();
    CHECK(&m.engine() == &e);
    CHECK(e.scenes().empty());
    m.contour3d(field(8, 2));
    CHECK(e.scenes().size() == 1);
    m.contour3d(field(8, 2));
    CHECK(e.scenes().size() == 1);
}

TEST_CASE("animation: nine updates, nine recomputes, final mesh equals a fresh build") {
    Engine e;
    Mlab m(e);
    Node& other = m.contour3d(field(12, 2));
    Node& iso = m.contour3d(field(100, 2));
    Node& src = *iso.parent()->parent();
    Node& manager = *iso.parent();
    const auto iso0 = iso.recompute_count();
    const auto manager0 = manager.recompute_count();
    const auto src0 = src.recompute_count();
    const auto other0 = other.recompute_count();

    for (int i = 1; i <= 9; ++i) m.mlab_source(iso).set({{"scalars", field(100, i)}});

    CHECK(iso.recompute_count() == iso0 + 9);
    CHECK(manager.recompute_count() == manager0 + 9);
    CHECK(src.recompute_count() == src0 + 9);
    CHECK(other.recompute_count() == other0);

    Engine fresh;
    Node& ref = Mlab(fresh).contour3d(field(100, 9));
    CHECK(mesh_of(iso) == mesh_of(ref));
}

TEST_CASE("plot3d") {
    Engine e;
    Mlab m(e);
    const auto t = linspace(0, 2 * std::acos(-1.0), 2000);
    std::vector<double> x, y, z;
    for (double u : t) {
        x.push_back(std::sin(11 * u));
        y.push_back(std::cos(11 * u) * (1 + std::cos(u)));
        z.push_back(std::sin(u));
    }
    Node& plot = m.plot3d(NumericArray::vector(x), NumericArray::vector(y), NumericArray::vector(z));
    CHECK(plot.factory_id() == "surface");
    CHECK(plot.get_as<std::string>("representation") == "wireframe");
    CHECK(mesh_of(plot).points.size() == 2000);
    REQUIRE(mesh_of(plot).lines.size() == 1);
    CHECK(mesh_of(plot).lines[0].size() == 2000);
    auto src = m.mlab_source(plot);
    CHECK(src.slots() == std::vector<std::string>{"x", "y", "z"});
    CHECK(src.get("x") == NumericArray::vector(x));

    Node& seg = m.plot3d(NumericArray::vector({0, 1}), NumericArray::vector({0, 0}), NumericArray::vector({0, 0}));
    CHECK(mesh_of(seg).lines == std::vector<Polyline>{{0, 1}});

    CHECK_THROWS_AS(m.plot3d(NumericArray::vector({0, 1, 2}), NumericArray::vector({0, 1, 2, 3}),
                             NumericArray::vector({0, 1, 2})),
                    ShapeError);
    CHECK_THROWS_AS(m.plot3d(NumericArray::vector({0}), NumericArray::vector({0}), NumericArray::vector({0})),
                    ShapeError);
}

TEST_CASE("mlab_source set is atomic") {
    Engine e;
    Mlab m(e);
    Node& plot = m.plot3d(NumericArray::vector({0, 1, 2}), NumericArray::vector({0, 1, 0}),
                          NumericArray::vector({0, 0, 1}));
    auto src = m.mlab_source(plot);
    const auto before = plot.recompute_count();
    src.set({{"x", NumericArray::vector({1, 2, 3})}, {"y", NumericArray::vector({3, 2, 1})},
             {"z", NumericArray::vector({0, 5, 0})}});
    CHECK(plot.recompute_count() == before + 1);
    CHECK(mesh_of(plot).points[2] == Vec3{3, 1, 0});

    const std::string saved = doc_text(e);
    CHECK_THROWS_AS(src.set({{"x", NumericArray::vector({1, 2})}, {"y", NumericArray::vector({1, 2})},
                             {"z", NumericArray::vector({1, 2})}}),
                    ShapeError);
    CHECK_THROWS_AS(src.set({{"x", NumericArray::vector({9, 9, 9})}, {"w", NumericArray::vector({1, 2, 3})}}),
                    UnknownSlotError);
    CHECK_THROWS_AS(src.get("w"), UnknownSlotError);
    CHECK(doc_text(e) == saved);
    CHECK(plot.recompute_count() == before + 1);
}

TEST_CASE("pipeline calls") {
    Engine e;
    Mlab m(e);
    PolyData tri;
    tri.points = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
    tri.triangles = {{0, 1, 2}};
    Node& line = m.pipeline("line_source", PipelineArgs{nullptr, {{"x", NumericArray::vector({0, 1})},
                                                                   {"y", NumericArray::vector({0, 1})},
                                                                   {"z", NumericArray::vector({0, 1})}},
                                                       {}});
    CHECK(e.current_object() == &line);
    Node& normals = m.pipeline("poly_data_normals", line);
    CHECK(e.current_object() == &normals);
    CHECK(normals.parent() == &line);
    Node& surf = m.pipeline("surface");
    CHECK(surf.parent()->parent() == &normals);
    CHECK(e.current_object() == &normals);
    CHECK_THROWS_AS(m.pipeline("bogus"), RegistryError);
    CHECK(resolve_pipeline_name("scalar_field") == "array_source");
    CHECK(resolve_pipeline_name("outline") == "outline");

    Mlab fresh;
    CHECK_THROWS_AS(fresh.pipeline("surface"), EngineStateError);
}

TEST_CASE("builder handles stay live") {
    Engine e;
    Mlab m(e);
    Node& iso = m.contour3d(field(30, 2), at_level(50));
    const auto before = encode_png(m.render(160, 120));
    iso.set_property("contours", FloatList{20});
    CHECK(encode_png(m.render(160, 120)) != before);

    const auto dir = testing::temp_dir("mlab");
    m.save_png(dir + "/frame.png", 64, 48);
    const auto png = testing::decode_png(testing::read_file(dir + "/frame.png"));
    CHECK(png.width == 64);
    CHECK(png.height == 48);
}
