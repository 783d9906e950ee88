#include "support.hpp"

#include "vizpipe/errors.hpp"
#include "vizpipe/mlab.hpp"
#include "vizpipe/nodes.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>

using namespace vizpipe;

namespace {

std::vector<std::string> ids(const std::vector<NodeMetadata>& list) {
    std::vector<std::string> out;
    for (const auto& m : list) out.push_back(m.factory_id);
    return out;
}

bool contains(const std::vector<std::string>& v, const std::string& s) {
    return std::find(v.begin(), v.end(), s) != v.end();
}

NodeMetadata text_reader_metadata(const std::string& id) {
    NodeMetadata m;
    m.factory_id = id;
    m.class_name = "ArrayTextReader";
    m.kind = NodeKind::Source;
    m.menu_name = "Array text files";
    m.extensions = {"txt"};
    m.wildcards = "TXT files (*.txt)|*.txt";
    m.output_info.datasets = {"image_data"};
    return m;
}

class MyNormals final : public Node {
public:
    MyNormals() : Node(NodeKind::Filter, "my_normals", "MyNormals") {}

protected:
    std::vector<DatasetPtr> compute(const std::vector<DatasetPtr>& inputs) override { return inputs; }
};

} // namespace

TEST_CASE("scripting_name") {
    CHECK(scripting_name("IsoSurface") == "iso_surface");
    CHECK(scripting_name("ScalarField") == "scalar_field");
    CHECK(scripting_name("Surface") == "surface");
    CHECK(scripting_name("PolyDataNormals") == "poly_data_normals");
    CHECK(scripting_name("Plot3d") == "plot3d");
    CHECK(scripting_name("Shape3DSource") == "shape3_d_source");
    CHECK_THROWS_AS(scripting_name(""), NameError);
}

TEST_CASE("register makes a reader available by extension") {
    Registry r;
    r.register_node(text_reader_metadata("array_text_reader"), [] { return std::make_unique<ArrayTextReader>(); });
    const auto* m = r.reader_for("/data/table.txt");
    REQUIRE(m);
    CHECK(m->factory_id == "array_text_reader");
    CHECK(m->wildcards == "TXT files (*.txt)|*.txt");
    CHECK(r.reader_for("x.vtk") == nullptr);
    CHECK_THROWS_AS(r.register_node(text_reader_metadata("array_text_reader"), [] { return std::make_unique<ArrayTextReader>(); }),
                    RegistryError);
}

TEST_CASE("custom filter is constructible right after registration") {
    Registry r;
    NodeMetadata m;
    m.factory_id = "my_normals";
    m.class_name = "MyNormals";
    m.kind = NodeKind::Filter;
    m.menu_name = "My normals";
    m.input_info = PipelineInfo{{"poly_data"}, {"any"}, {"any"}};
    r.register_node(m, [] { return std::make_unique<MyNormals>(); });
    auto n = r.create_by_name("my_normals");
    CHECK(n->kind() == NodeKind::Filter);

    NodeMetadata bad = m;
    bad.factory_id = "bad_source";
    bad.kind = NodeKind::Source;
    CHECK_THROWS_AS(r.register_node(bad, [] { return std::make_unique<ArrayTextReader>(); }), RegistryError);
}

TEST_CASE("applicable matches the constraint table") {
    const auto& r = builtin_registry();
    const auto image = ids(r.applicable({DatasetKind::ImageData, {"point"}, {"scalars"}}));
    CHECK(contains(image, "iso_surface"));
    CHECK(contains(image, "outline"));
    CHECK_FALSE(contains(image, "poly_data_normals"));
    CHECK_FALSE(contains(image, "surface"));

    const auto poly = ids(r.applicable({DatasetKind::PolyData, {"point"}, {}}));
    CHECK(contains(poly, "surface"));
    CHECK(contains(poly, "poly_data_normals"));
    CHECK(contains(poly, "outline"));
    CHECK_FALSE(contains(poly, "iso_surface"));

    const auto bare_image = ids(r.applicable({DatasetKind::ImageData, {"point"}, {}}));
    CHECK_FALSE(contains(bare_image, "iso_surface"));

    CHECK(Registry().applicable({DatasetKind::ImageData, {"point"}, {"scalars"}}).empty());
}

TEST_CASE("applicable is ordered by menu name and never lists sources") {
    const auto list = builtin_registry().applicable({DatasetKind::PolyData, {"point"}, {"scalars", "normals"}});
    for (std::size_t i = 1; i < list.size(); ++i) CHECK(list[i - 1].menu_name <= list[i].menu_name);
    for (const auto& m : list) CHECK(m.kind != NodeKind::Source);
}

TEST_CASE("applicable is monotone in attributes") {
    const auto& r = builtin_registry();
    const std::vector<std::vector<std::string>> subsets{{}, {"scalars"}, {"normals"}, {"scalars", "normals"}};
    for (auto kind : {DatasetKind::ImageData, DatasetKind::PolyData})
        for (const auto& small : subsets)
            for (const auto& big : subsets) {
                if (!std::includes(big.begin(), big.end(), small.begin(), small.end())) continue;
                const auto a = ids(r.applicable({kind, {"point"}, small}));
                const auto b = ids(r.applicable({kind, {"point"}, big}));
                for (const auto& id : a) CHECK(contains(b, id));
            }
}

TEST_CASE("create_by_name gives fresh default nodes") {
    const auto& r = builtin_registry();
    auto a = r.create_by_name("iso_surface");
    auto b = r.create_by_name("iso_surface");
    CHECK(a.get() != b.get());
    CHECK(a->get_as<FloatList>("contours").empty());
    CHECK(a->get_as<bool>("auto_contours"));
    a->set_property("contours", FloatList{1});
    CHECK(b->get_as<FloatList>("contours").empty());
    try {
        r.create_by_name("no_such");
        FAIL("expected RegistryError");
    } catch (const RegistryError& e) {
        CHECK(std::string(e.what()) == "no_such");
    }
}

TEST_CASE("every entry is consistent with the scripting namespace") {
    Mlab mlab;
    const auto names = mlab.pipeline_names();
    std::set<std::string> seen;
    for (const auto& e : builtin_registry().entries()) {
        const auto& m = e.metadata;
        CHECK(seen.insert(m.factory_id).second);
        CHECK(m.factory_id == scripting_name(m.class_name));
        CHECK(contains(names, m.factory_id));
        auto node = builtin_registry().create_by_name(m.factory_id);
        CHECK(node->factory_id() == m.factory_id);
        CHECK(node->kind() == m.kind);
        if (m.kind == NodeKind::Source) CHECK_FALSE(m.input_info.has_value());
        else CHECK(m.input_info.has_value());
    }
    CHECK(contains(names, "scalar_field"));
}

TEST_CASE("the text array source is registered like the extension example") {
    const auto* m = builtin_registry().reader_for("grid.txt");
    REQUIRE(m);
    CHECK(m->menu_name == "Array text files");
    CHECK(m->extensions == std::vector<std::string>{"txt"});
    CHECK(m->wildcards == "TXT files (*.txt)|*.txt");
    CHECK(m->output_info.datasets == std::vector<std::string>{"image_data"});
    CHECK(builtin_registry().reader_for("mesh.VTK")->factory_id == "vtk_file_reader");
}
