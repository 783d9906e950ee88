#include "vizpipe/mlab.hpp"

#include "vizpipe/errors.hpp"

#include <algorithm>
#include <fstream>

namespace vizpipe {

namespace {

const std::vector<std::pair<std::string, std::string>>& aliases() {
    static const std::vector<std::pair<std::string, std::string>> table{{"scalar_field", "array_source"}};
    return table;
}

void apply_properties(Node& node, const PropertyList& properties) {
    for (const auto& [name, value] : properties) node.set_property(name, value);
}

void require_vector(const NumericArray& a, const char* name) {
    if (a.rank() != 1) throw ShapeError(std::string(name) + " must be 1-D");
}

} // namespace

std::string resolve_pipeline_name(std::string_view name) {
    for (const auto& [alias, id] : aliases())
        if (alias == name) return id;
    return std::string(name);
}

const NumericArray& MlabSource::get(const std::string& slot) const {
    auto it = source_->data().find(slot);
    if (it == source_->data().end()) throw UnknownSlotError("no data in slot '" + slot + "'");
    return it->second;
}

void MlabSource::set(DataSlots arrays) {
    const auto known = source_->data_slots();
    for (const auto& [name, array] : arrays) {
        if (std::find(known.begin(), known.end(), name) == known.end())
            throw UnknownSlotError("'" + source_->name() + "' has no data slot '" + name + "'");
        auto it = source_->data().find(name);
        if (it != source_->data().end() && it->second.shape() != array.shape())
            throw ShapeError("slot '" + name + "' cannot change shape");
    }
    source_->load_data(std::move(arrays));
}

Engine& Mlab::engine() {
    if (!engine_) {
        owned_ = std::make_unique<Engine>();
        engine_ = owned_.get();
    }
    return *engine_;
}

Scene& Mlab::figure() {
    Engine& e = engine();
    if (Scene* s = e.current_scene()) return *s;
    return e.new_scene();
}

Node& Mlab::pipeline(std::string_view name, PipelineArgs args) {
    Engine& e = engine();
    auto node = e.create(resolve_pipeline_name(name));
    apply_properties(*node, args.properties);
    if (!args.data.empty()) node->load_data(std::move(args.data));
    if (node->kind() == NodeKind::Source) {
        figure();
        return e.add_source(std::move(node));
    }
    Node* parent = args.parent ? args.parent : e.current_object();
    if (!parent) throw EngineStateError("'" + std::string(name) + "' needs a parent; nothing is selected");
    const bool is_filter = node->kind() == NodeKind::Filter;
    Node& attached = e.add_child(*parent, std::move(node));
    if (is_filter) e.set_current_object(&attached);
    return attached;
}

Node& Mlab::pipeline(std::string_view name, const NumericArray& scalars) {
    PipelineArgs args;
    args.data.emplace("scalars", scalars);
    return pipeline(name, std::move(args));
}

Node& Mlab::pipeline(std::string_view name, Node& parent) {
    PipelineArgs args;
    args.parent = &parent;
    return pipeline(name, std::move(args));
}

std::vector<std::string> Mlab::pipeline_names() {
    std::vector<std::string> names;
    for (const auto& entry : engine().registry().entries()) names.push_back(entry.metadata.factory_id);
    for (const auto& [alias, id] : aliases())
        if (engine().registry().find(id)) names.push_back(alias);
    return names;
}

Node& Mlab::contour3d(const NumericArray& scalars, const Contour3dOptions& options) {
    if (scalars.rank() != 3) throw ShapeError("contour3d needs a 3-D array, got rank " + std::to_string(scalars.rank()));
    for (auto n : scalars.shape())
        if (n < 2) throw ShapeError("contour3d needs at least 2 points along every axis");

    PipelineArgs src_args;
    src_args.data.emplace("scalars", scalars);
    if (options.origin) src_args.properties.emplace_back("origin", *options.origin);
    if (options.spacing) src_args.properties.emplace_back("spacing", *options.spacing);
    Node& src = pipeline("scalar_field", std::move(src_args));

    PipelineArgs iso_args;
    iso_args.parent = &src;
    if (options.contours) iso_args.properties.emplace_back("contours", *options.contours);
    if (options.representation) iso_args.properties.emplace_back("representation", *options.representation);
    Node& iso = pipeline("iso_surface", std::move(iso_args));
    if (options.colormap) iso.parent()->set_property("colormap", *options.colormap);
    return iso;
}

Node& Mlab::plot3d(const NumericArray& x, const NumericArray& y, const NumericArray& z, const Plot3dOptions& options) {
    require_vector(x, "x");
    require_vector(y, "y");
    require_vector(z, "z");
    if (x.size() != y.size() || x.size() != z.size())
        throw ShapeError("plot3d needs equal lengths, got " + std::to_string(x.size()) + ", " +
                         std::to_string(y.size()) + ", " + std::to_string(z.size()));
    if (x.size() < 2) throw ShapeError("plot3d needs at least two points");

    PipelineArgs src_args;
    src_args.data = {{"x", x}, {"y", y}, {"z", z}};
    Node& src = pipeline("line_source", std::move(src_args));

    PipelineArgs surf_args;
    surf_args.parent = &src;
    surf_args.properties.emplace_back("representation", std::string("wireframe"));
    Node& surf = pipeline("surface", std::move(surf_args));
    if (options.colormap) surf.parent()->set_property("colormap", *options.colormap);
    return surf;
}

MlabSource Mlab::mlab_source(Node& handle) {
    for (Node* n = &handle; n; n = n->parent())
        if (n->kind() == NodeKind::Source) return MlabSource(*n);
    throw PipelineStructureError("'" + handle.name() + "' is not fed by a source");
}

Image Mlab::render(int width, int height) { return render_snapshot(snapshot_scene(figure()), width, height); }

void Mlab::save_png(const std::filesystem::path& path, int width, int height) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << encode_png(render(width, height));
}

} // namespace vizpipe
