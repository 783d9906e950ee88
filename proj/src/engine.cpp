#include "vizpipe/engine.hpp"

#include "vizpipe/errors.hpp"

#include <algorithm>

namespace vizpipe {

namespace {

bool in_subtree(const Node& root, const Node* n) { return n && (n == &root || root.is_ancestor_of(*n)); }

bool is_camera_property(const Node& node, const std::string& name) {
    if (node.kind() != NodeKind::Scene) return false;
    const auto& names = Scene::camera_property_names();
    return std::find(names.begin(), names.end(), name) != names.end();
}

void apply_properties(Node& node, const Json& props, std::string_view section) {
    if (!props.is_object()) throw StateLoadError("'" + std::string(section) + "' must be an object");
    for (const auto& [name, value] : props.items()) {
        if (!node.has_property(name))
            throw StateLoadError("'" + node.factory_id() + "' has no property '" + name + "'");
        try {
            node.set_property(name, value_from_json(value, node.descriptor(name).kind));
        } catch (const Error& e) {
            throw StateLoadError("property '" + name + "' of '" + node.factory_id() + "': " + e.what());
        }
    }
}

std::unique_ptr<Node> instantiate(const Registry& registry, const std::string& factory_id) {
    if (factory_id == Scene::kFactoryId) return std::make_unique<Scene>();
    if (factory_id == ModuleManager::kFactoryId) return std::make_unique<ModuleManager>();
    if (!registry.find(factory_id)) throw StateLoadError(factory_id);
    return registry.create_by_name(factory_id);
}

} // namespace

Engine::Engine(const Registry& registry) : registry_(&registry) {}

Engine::~Engine() = default;

template <typename F>
void Engine::notify(F&& f) {
    const auto snapshot = observers_;
    for (auto* o : snapshot)
        if (std::find(observers_.begin(), observers_.end(), o) != observers_.end()) f(*o);
}

void Engine::add_observer(EngineObserver* observer) {
    if (observer && std::find(observers_.begin(), observers_.end(), observer) == observers_.end())
        observers_.push_back(observer);
}

void Engine::remove_observer(EngineObserver* observer) { std::erase(observers_, observer); }

void Engine::index_subtree(Node& root) {
    root.visit_preorder([this](Node& n) { index_[n.object_id()] = &n; });
}

void Engine::unindex_subtree(Node& root) {
    root.visit_preorder([this](Node& n) { index_.erase(n.object_id()); });
}

Node* Engine::find(ObjectId id) const noexcept {
    auto it = index_.find(id);
    return it == index_.end() ? nullptr : it->second;
}

Node& Engine::node(ObjectId id) const {
    if (Node* n = find(id)) return *n;
    throw EngineStateError("no node with id " + std::to_string(id));
}

bool Engine::owns(const Node& node) const noexcept { return find(node.object_id()) == &node; }

Scene& Engine::new_scene() {
    auto scene = std::make_unique<Scene>();
    Scene& s = *scene;
    s.adopt_context(this);
    index_subtree(s);
    scenes_.push_back(std::move(scene));
    current_scene_ = &s;
    current_object_ = nullptr;
    ++revision_;
    notify([&](EngineObserver& o) { o.scene_added(s); });
    return s;
}

void Engine::set_current_scene(Scene& scene) {
    if (!owns(scene)) throw EngineStateError("scene does not belong to this engine");
    current_scene_ = &scene;
    if (current_object_ && current_object_->scene() != &scene) current_object_ = nullptr;
}

void Engine::set_current_object(Node* node) {
    if (!node) {
        current_object_ = nullptr;
        return;
    }
    if (!owns(*node)) throw EngineStateError("node does not belong to this engine");
    current_object_ = node;
    current_scene_ = node->scene();
}

std::unique_ptr<Node> Engine::create(std::string_view factory_id) const { return registry_->create_by_name(factory_id); }

void Engine::check_accepts(const Node& parent, const Node& child) const {
    if (child.kind() != NodeKind::Filter && child.kind() != NodeKind::Module) return;
    const NodeMetadata* meta = registry_->find(child.factory_id());
    if (!meta || !meta->input_info) return;
    const auto& outputs = parent.outputs();
    if (outputs.empty() || !outputs.front()) return;
    const DatasetInfo produced = dataset_info(*outputs.front());
    if (!info_matches(*meta->input_info, produced))
        throw PipelineStructureError("'" + child.factory_id() + "' does not accept " + to_string(produced.dataset_kind) +
                                     " from '" + parent.name() + "'");
}

Node& Engine::add_source(std::unique_ptr<Node> source) {
    if (!current_scene_) throw EngineStateError("add_source needs a scene; call new_scene first");
    if (!source || source->kind() != NodeKind::Source) throw PipelineStructureError("add_source expects a source");
    Node& n = current_scene_->add_child(std::move(source));
    current_object_ = &n;
    return n;
}

Node& Engine::add_filter(std::unique_ptr<Node> filter) {
    if (!current_object_) throw EngineStateError("add_filter needs a current object");
    if (!filter || filter->kind() != NodeKind::Filter) throw PipelineStructureError("add_filter expects a filter");
    check_accepts(*current_object_, *filter);
    Node& n = current_object_->add_child(std::move(filter));
    current_object_ = &n;
    return n;
}

Node& Engine::add_module(std::unique_ptr<Node> module) {
    if (!current_object_) throw EngineStateError("add_module needs a current object");
    if (!module || module->kind() != NodeKind::Module) throw PipelineStructureError("add_module expects a module");
    check_accepts(*current_object_, *module);
    return current_object_->add_child(std::move(module));
}

Node& Engine::add_child(Node& parent, std::unique_ptr<Node> child, bool check_inputs) {
    if (!owns(parent)) throw EngineStateError("parent does not belong to this engine");
    if (!child) throw PipelineStructureError("cannot add a null node");
    if (check_inputs) check_accepts(parent, *child);
    return parent.add_child(std::move(child));
}

void Engine::remove_node(Node& node) {
    if (!owns(node)) throw EngineStateError("node does not belong to this engine");
    if (node.kind() != NodeKind::Scene) {
        node.parent()->remove_child(node);
        return;
    }
    notify([&](EngineObserver& o) { o.node_removing(nullptr, node); });
    if (in_subtree(node, current_object_)) current_object_ = nullptr;
    unindex_subtree(node);
    auto it = std::find_if(scenes_.begin(), scenes_.end(), [&](const auto& s) { return s.get() == &node; });
    const bool was_current = current_scene_ == &node;
    scenes_.erase(it);
    if (was_current) current_scene_ = scenes_.empty() ? nullptr : scenes_.back().get();
    ++revision_;
}

void Engine::reparent(Node& node, Node& new_parent) {
    if (!owns(node) || !owns(new_parent)) throw EngineStateError("node does not belong to this engine");
    node.reparent(new_parent);
}

void Engine::node_attached(Node& parent, Node& child) {
    index_subtree(child);
    ++revision_;
    notify([&](EngineObserver& o) { o.node_added(parent, child); });
}

void Engine::node_removing(Node& parent, Node& child) {
    notify([&](EngineObserver& o) { o.node_removing(&parent, child); });
    if (in_subtree(child, current_object_)) current_object_ = &parent;
    unindex_subtree(child);
    ++revision_;
}

void Engine::node_reparented(Node& node, Node& old_parent) {
    ++revision_;
    if (in_subtree(node, current_object_)) current_scene_ = current_object_->scene();
    notify([&](EngineObserver& o) { o.node_reparented(node, old_parent); });
}

void Engine::node_property_changed(Node& node, const ChangeEvent& event) {
    ++revision_;
    notify([&](EngineObserver& o) { o.property_changed(node, event); });
}

void Engine::node_data_loaded(Node& node, const std::vector<std::string>& slots) {
    ++revision_;
    notify([&](EngineObserver& o) { o.data_loaded(node, slots); });
}

void Engine::scene_dirty(Scene& scene) {
    notify([&](EngineObserver& o) { o.scene_dirty(scene); });
}

StateDocument Engine::save_state() const {
    Json scenes = Json::array();
    for (const auto& s : scenes_) scenes.push_back(node_record(*s));
    return {{"format_version", kStateFormatVersion}, {"scenes", std::move(scenes)}};
}

void Engine::load_state(const StateDocument& doc) {
    notify([](EngineObserver& o) { o.before_load_state(); });
    if (!doc.is_object()) throw StateLoadError("state document must be an object");
    if (!doc.contains("format_version") || !doc["format_version"].is_number_integer() ||
        doc["format_version"].get<std::int64_t>() != kStateFormatVersion)
        throw StateLoadError("unsupported format_version (expected " + std::to_string(kStateFormatVersion) + ")");
    if (!doc.contains("scenes") || !doc["scenes"].is_array()) throw StateLoadError("'scenes' must be a list");

    std::vector<std::unique_ptr<Scene>> loaded;
    for (const auto& record : doc["scenes"]) {
        if (!record.is_object() || record.value("factory_id", "") != Scene::kFactoryId)
            throw StateLoadError("top-level records must be scenes");
        auto node = node_from_record(*registry_, record);
        loaded.emplace_back(static_cast<Scene*>(node.release()));
    }

    for (const auto& s : scenes_) unindex_subtree(*s);
    scenes_.clear();
    current_scene_ = nullptr;
    current_object_ = nullptr;
    for (auto& s : loaded) {
        s->adopt_context(this);
        index_subtree(*s);
        scenes_.push_back(std::move(s));
    }
    current_scene_ = scenes_.empty() ? nullptr : scenes_.back().get();
    ++revision_;
    notify([](EngineObserver& o) { o.state_loaded(); });
}

// ---------------------------------------------------------------------------

Json node_record(const Node& node) {
    Json r;
    r["factory_id"] = node.factory_id();
    r["name"] = node.name();
    Json props = Json::object();
    Json camera = Json::object();
    for (const auto& d : node.descriptors())
        (is_camera_property(node, d.name) ? camera : props)[d.name] = value_to_json(node.get(d.name));
    r["properties"] = std::move(props);
    if (node.kind() == NodeKind::Scene) r["camera"] = std::move(camera);
    if (!node.data().empty()) r["data"] = slots_to_json(node.data());
    Json children = Json::array();
    for (const auto& c : node.children()) children.push_back(node_record(*c));
    r["children"] = std::move(children);
    return r;
}

std::unique_ptr<Node> node_from_record(const Registry& registry, const Json& record) {
    if (!record.is_object() || !record.contains("factory_id") || !record["factory_id"].is_string())
        throw StateLoadError("node record needs a string 'factory_id'");
    const std::string factory_id = record["factory_id"].get<std::string>();
    auto node = instantiate(registry, factory_id);
    try {
        if (record.contains("name")) {
            if (!record["name"].is_string()) throw StateLoadError("'name' must be a string");
            node->set_name(record["name"].get<std::string>());
        }
        if (record.contains("properties")) apply_properties(*node, record["properties"], "properties");
        if (record.contains("camera")) {
            if (node->kind() != NodeKind::Scene) throw StateLoadError("only scenes carry a camera");
            apply_properties(*node, record["camera"], "camera");
        }
        if (record.contains("data")) node->load_data(slots_from_json(record["data"]));
        if (record.contains("children")) {
            if (!record["children"].is_array()) throw StateLoadError("'children' must be a list");
            // Children are complete before they are attached, so a scene-rooted
            // branch is computed once when it joins the scene.
            for (const auto& c : record["children"]) {
                auto child = node_from_record(registry, c);
                if (child->kind() == NodeKind::Scene) throw StateLoadError("a scene cannot be nested");
                node->add_child(std::move(child));
            }
        }
    } catch (const StateLoadError&) {
        throw;
    } catch (const Error& e) {
        throw StateLoadError("'" + factory_id + "': " + e.what());
    }
    return node;
}

std::string state_to_text(const StateDocument& doc) { return doc.dump(); }

StateDocument state_from_text(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const Json::exception& e) {
        throw StateLoadError(std::string("malformed state document: ") + e.what());
    }
}

} // namespace vizpipe
