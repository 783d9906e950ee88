#include "vizpipe/nodes.hpp"

#include "vizpipe/errors.hpp"
#include "vizpipe/vtkio.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace vizpipe {

namespace {

std::string id_of(std::string_view class_name) { return scripting_name(class_name); }

DatasetPtr share(Dataset d) { return std::make_shared<const Dataset>(std::move(d)); }

const PolyData* poly_input(const std::vector<DatasetPtr>& inputs, std::string_view who) {
    if (inputs.empty() || !inputs.front()) return nullptr;
    const auto* poly = std::get_if<PolyData>(inputs.front().get());
    if (!poly) throw DatasetAttributeError(std::string(who) + " needs poly data input");
    return poly;
}

Representation representation_from(const std::string& name) {
    if (name == "wireframe") return Representation::Wireframe;
    if (name == "points") return Representation::Points;
    return Representation::Surface;
}

PropertyDescriptor representation_property() {
    return {"representation", PropertyKind::Enum, std::string("surface"), std::nullopt, {"surface", "wireframe"}};
}

} // namespace

// ---------------------------------------------------------------------------

ArraySource::ArraySource() : Node(NodeKind::Source, id_of(kClassName), std::string(kClassName)) {
    declare({"origin", PropertyKind::FloatTriplet, Triplet{0, 0, 0}, std::nullopt, {}});
    declare({"spacing", PropertyKind::FloatTriplet, Triplet{1, 1, 1}, std::pair{1e-12, 1e12}, {}});
    declare({"scalars_name", PropertyKind::Text, std::string("scalars"), std::nullopt, {}});
}

void ArraySource::validate_data(const DataSlots& slots) const {
    auto it = slots.find("scalars");
    if (it == slots.end()) return;
    const auto& shape = it->second.shape();
    if (shape.size() != 3) throw ShapeError("scalars must be a 3-D array, got rank " + std::to_string(shape.size()));
    for (auto n : shape)
        if (n == 0) throw ShapeError("scalars must not have an empty axis");
}

std::vector<DatasetPtr> ArraySource::compute(const std::vector<DatasetPtr>&) {
    auto it = data().find("scalars");
    if (it == data().end()) return {};
    const NumericArray& a = it->second;
    const std::size_t nx = a.shape()[0], ny = a.shape()[1], nz = a.shape()[2];
    std::vector<double> values(a.size());
    for (std::size_t i = 0; i < nx; ++i)
        for (std::size_t j = 0; j < ny; ++j)
            for (std::size_t k = 0; k < nz; ++k) values[i + nx * (j + ny * k)] = a.at((i * ny + j) * nz + k);
    const std::size_t count = values.size();
    const auto& o = get_as<Triplet>("origin");
    const auto& s = get_as<Triplet>("spacing");
    return {share(image_data_new({nx, ny, nz}, o, s, NumericArray({count}, std::move(values)),
                                 get_as<std::string>("scalars_name")))};
}

// ---------------------------------------------------------------------------

ParametricCurveSource::ParametricCurveSource()
    : Node(NodeKind::Source, id_of(kClassName), std::string(kClassName)) {
    declare({"n_turns", PropertyKind::Int, std::int64_t{11}, std::pair{0.0, 30.0}, {}});
    declare({"sample_count", PropertyKind::Int, std::int64_t{2000}, std::pair{2.0, 100000.0}, {}});
}

std::vector<DatasetPtr> ParametricCurveSource::compute(const std::vector<DatasetPtr>&) {
    return {share(curve(static_cast<int>(get_as<std::int64_t>("n_turns")),
                        static_cast<int>(get_as<std::int64_t>("sample_count"))))};
}

// ---------------------------------------------------------------------------

LineSource::LineSource() : Node(NodeKind::Source, id_of(kClassName), std::string(kClassName)) {}

void LineSource::validate_data(const DataSlots& slots) const {
    std::optional<std::size_t> length;
    for (const auto& [name, array] : slots) {
        if (array.rank() != 1) throw ShapeError("'" + name + "' must be 1-D");
        if (length && *length != array.size())
            throw ShapeError("x, y and z must have equal lengths (" + std::to_string(*length) + " vs " +
                             std::to_string(array.size()) + ")");
        length = array.size();
    }
    if (length && *length < 2) throw ShapeError("a line needs at least two points");
}

std::vector<DatasetPtr> LineSource::compute(const std::vector<DatasetPtr>&) {
    const auto& d = data();
    if (d.size() != 3) return {};
    const auto& x = d.at("x");
    const auto& y = d.at("y");
    const auto& z = d.at("z");
    PolyData poly;
    poly.points.resize(x.size());
    Polyline line(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        poly.points[i] = {x.at(i), y.at(i), z.at(i)};
        line[i] = static_cast<std::int32_t>(i);
    }
    poly.lines.push_back(std::move(line));
    return {share(std::move(poly))};
}

// ---------------------------------------------------------------------------

VtkFileReader::VtkFileReader() : Node(NodeKind::Source, id_of(kClassName), std::string(kClassName)) {
    declare({"file_name", PropertyKind::Text, std::string(), std::nullopt, {}});
}

std::vector<DatasetPtr> VtkFileReader::compute(const std::vector<DatasetPtr>&) {
    const auto& path = get_as<std::string>("file_name");
    if (path.empty()) return {};
    return {share(read_legacy_file(path))};
}

ArrayTextReader::ArrayTextReader() : Node(NodeKind::Source, id_of(kClassName), std::string(kClassName)) {
    declare({"file_name", PropertyKind::Text, std::string(), std::nullopt, {}});
}

std::vector<DatasetPtr> ArrayTextReader::compute(const std::vector<DatasetPtr>&) {
    const auto& path = get_as<std::string>("file_name");
    if (path.empty()) return {};
    return {share(read_array_text_file(path))};
}

// ---------------------------------------------------------------------------

PolyDataNormals::PolyDataNormals() : Node(NodeKind::Filter, id_of(kClassName), std::string(kClassName)) {}

std::vector<DatasetPtr> PolyDataNormals::compute(const std::vector<DatasetPtr>& inputs) {
    const PolyData* poly = poly_input(inputs, "PolyDataNormals");
    if (!poly) return {};
    return {share(compute_normals(*poly))};
}

// ---------------------------------------------------------------------------

IsoSurface::IsoSurface() : ModuleNode(id_of(kClassName), std::string(kClassName)) {
    declare({"contours", PropertyKind::FloatList, FloatList{}, std::nullopt, {}});
    declare({"auto_contours", PropertyKind::Bool, true, std::nullopt, {}});
    declare({"n_auto", PropertyKind::Int, std::int64_t{3}, std::pair{1.0, 64.0}, {}});
    declare({"compute_normals", PropertyKind::Bool, true, std::nullopt, {}});
    declare(representation_property());
}

Representation IsoSurface::representation() const { return representation_from(get_as<std::string>("representation")); }

std::vector<double> IsoSurface::levels(const ImageData& grid) const {
    const auto& explicit_levels = get_as<FloatList>("contours");
    if (!explicit_levels.empty()) return explicit_levels;
    if (!get_as<bool>("auto_contours") || !grid.point_scalars()) return {};
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (double v : grid.point_scalars()->to_doubles())
        if (!std::isnan(v)) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    if (lo > hi) return {};
    return auto_levels(lo, hi, static_cast<int>(get_as<std::int64_t>("n_auto")));
}

std::vector<DatasetPtr> IsoSurface::compute(const std::vector<DatasetPtr>& inputs) {
    if (inputs.empty() || !inputs.front()) return {};
    const auto* grid = std::get_if<ImageData>(inputs.front().get());
    if (!grid) throw DatasetAttributeError("IsoSurface needs image data input");
    PolyData merged;
    merged.point_scalars.emplace();
    merged.scalars_name = grid->scalars_name();
    for (double level : levels(*grid)) {
        PolyData part = marching_cubes(*grid, level);
        const auto offset = static_cast<std::int32_t>(merged.points.size());
        merged.points.insert(merged.points.end(), part.points.begin(), part.points.end());
        merged.point_scalars->insert(merged.point_scalars->end(), part.point_scalars->begin(),
                                     part.point_scalars->end());
        for (auto t : part.triangles) merged.triangles.push_back({t[0] + offset, t[1] + offset, t[2] + offset});
    }
    if (get_as<bool>("compute_normals")) merged = compute_normals(merged);
    return {share(std::move(merged))};
}

// ---------------------------------------------------------------------------

Surface::Surface() : ModuleNode(id_of(kClassName), std::string(kClassName)) { declare(representation_property()); }

Representation Surface::representation() const { return representation_from(get_as<std::string>("representation")); }

std::vector<DatasetPtr> Surface::compute(const std::vector<DatasetPtr>& inputs) {
    if (!poly_input(inputs, "Surface")) return {};
    return {inputs.front()};
}

Outline::Outline() : ModuleNode(id_of(kClassName), std::string(kClassName)) {}

std::vector<DatasetPtr> Outline::compute(const std::vector<DatasetPtr>& inputs) {
    if (inputs.empty() || !inputs.front()) return {};
    return {share(outline_bounds(*inputs.front()))};
}

// ---------------------------------------------------------------------------

namespace {

PipelineInfo info(std::vector<std::string> datasets, std::vector<std::string> attributes = {"any"}) {
    PipelineInfo p;
    p.datasets = std::move(datasets);
    p.attribute_types = {"any"};
    p.attributes = std::move(attributes);
    return p;
}

template <typename T>
void add(Registry& r, NodeKind kind, std::string menu, PipelineInfo output, std::optional<PipelineInfo> input = {},
         std::vector<std::string> extensions = {}, std::string wildcards = {}) {
    NodeMetadata m;
    m.class_name = std::string(T::kClassName);
    m.factory_id = scripting_name(m.class_name);
    m.kind = kind;
    m.menu_name = std::move(menu);
    m.extensions = std::move(extensions);
    m.wildcards = std::move(wildcards);
    m.input_info = std::move(input);
    m.output_info = std::move(output);
    r.register_node(std::move(m), [] { return std::make_unique<T>(); });
}

} // namespace

void register_builtins(Registry& r) {
    add<ArraySource>(r, NodeKind::Source, "Array source", info({"image_data"}, {"scalars"}));
    add<ParametricCurveSource>(r, NodeKind::Source, "Parametric curve", info({"poly_data"}));
    add<LineSource>(r, NodeKind::Source, "Line source", info({"poly_data"}));
    add<VtkFileReader>(r, NodeKind::Source, "VTK file", PipelineInfo::any(), {}, {"vtk"}, "VTK files (*.vtk)|*.vtk");
    add<ArrayTextReader>(r, NodeKind::Source, "Array text files", info({"image_data"}, {"scalars"}), {}, {"txt"},
                         "TXT files (*.txt)|*.txt");
    add<PolyDataNormals>(r, NodeKind::Filter, "Compute normals", info({"poly_data"}, {"normals"}),
                         info({"poly_data"}));
    add<IsoSurface>(r, NodeKind::Module, "IsoSurface", info({"poly_data"}), info({"image_data"}, {"scalars"}));
    add<Outline>(r, NodeKind::Module, "Outline", info({"poly_data"}), PipelineInfo::any());
    add<Surface>(r, NodeKind::Module, "Surface", info({"poly_data"}), info({"poly_data"}));
}

const Registry& builtin_registry() {
    static const Registry registry = [] {
        Registry r;
        register_builtins(r);
        return r;
    }();
    return registry;
}

} // namespace vizpipe
