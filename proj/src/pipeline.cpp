#include "vizpipe/pipeline.hpp"

#include "vizpipe/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace vizpipe {

std::string_view to_string(NodeKind kind) {
    switch (kind) {
    case NodeKind::Scene: return "scene";
    case NodeKind::Source: return "source";
    case NodeKind::Filter: return "filter";
    case NodeKind::ModuleManager: return "module_manager";
    case NodeKind::Module: return "module";
    }
    return "scene";
}

NodeKind node_kind_from_string(std::string_view text) {
    for (auto k : {NodeKind::Scene, NodeKind::Source, NodeKind::Filter, NodeKind::ModuleManager, NodeKind::Module})
        if (to_string(k) == text) return k;
    throw PipelineStructureError("unknown node kind '" + std::string(text) + "'");
}

std::string_view to_string(NodeStatus status) { return status == NodeStatus::Ok ? "ok" : "error"; }

bool legal_child(NodeKind parent, NodeKind child) {
    switch (parent) {
    case NodeKind::Scene: return child == NodeKind::Source;
    case NodeKind::Source:
    case NodeKind::Filter: return child == NodeKind::Filter || child == NodeKind::ModuleManager;
    case NodeKind::ModuleManager: return child == NodeKind::Module;
    case NodeKind::Module: return false;
    }
    return false;
}

namespace {

bool routes_via_manager(NodeKind parent, NodeKind child) {
    return child == NodeKind::Module && (parent == NodeKind::Source || parent == NodeKind::Filter);
}

std::string describe_pair(const Node& parent, const Node& child) {
    return std::string(to_string(child.kind())) + " '" + child.name() + "' cannot be a child of " +
           std::string(to_string(parent.kind())) + " '" + parent.name() + "'";
}

} // namespace

Node::Node(NodeKind kind, std::string factory_id, std::string name)
    : kind_(kind), factory_id_(std::move(factory_id)), name_(std::move(name)) {}

Node::~Node() = default;

void Node::set_name(std::string name) {
    if (parent_ || context_) throw PipelineStructureError("a node can only be renamed while detached");
    name_ = std::move(name);
}

Scene* Node::scene() noexcept {
    Node* n = this;
    while (n->parent_) n = n->parent_;
    return n->kind_ == NodeKind::Scene ? static_cast<Scene*>(n) : nullptr;
}

const Scene* Node::scene() const noexcept { return const_cast<Node*>(this)->scene(); }

bool Node::is_ancestor_of(const Node& other) const noexcept {
    for (const Node* n = other.parent_; n; n = n->parent_)
        if (n == this) return true;
    return false;
}

void Node::visit_preorder(const std::function<void(Node&)>& fn) {
    fn(*this);
    for (auto& c : children_) c->visit_preorder(fn);
}

void Node::visit_preorder(const std::function<void(const Node&)>& fn) const {
    fn(*this);
    for (const auto& c : children_) static_cast<const Node&>(*c).visit_preorder(fn);
}

void Node::adopt_context(PipelineContext* context) {
    visit_preorder([context](Node& n) {
        if (n.context_ == context) return;
        n.context_ = context;
        n.bind_identity(context ? context->allocate_id() : 0, context ? &context->sequence() : nullptr);
    });
}

void Node::attach(std::unique_ptr<Node> child) {
    Node& c = *child;
    c.parent_ = this;
    children_.push_back(std::move(child));
    if (context_) {
        c.adopt_context(context_);
        context_->node_attached(*this, c);
    }
}

std::unique_ptr<Node> Node::detach(Node& child) {
    auto it = std::find_if(children_.begin(), children_.end(), [&](const auto& p) { return p.get() == &child; });
    if (it == children_.end())
        throw PipelineStructureError("'" + child.name() + "' is not a child of '" + name_ + "'");
    auto owned = std::move(*it);
    children_.erase(it);
    owned->parent_ = nullptr;
    return owned;
}

Node& Node::add_child(std::unique_ptr<Node> child) {
    if (!child) throw PipelineStructureError("cannot add a null node");
    if (child->parent_) throw PipelineStructureError("'" + child->name() + "' already has a parent");
    if (child->kind_ == NodeKind::Scene) throw PipelineStructureError("a scene cannot be a child");
    if (child->context_ && child->context_ != context_)
        throw PipelineStructureError("'" + child->name() + "' belongs to another engine");

    if (routes_via_manager(kind_, child->kind_)) {
        Node* target = last_child();
        if (!target || target->kind_ != NodeKind::ModuleManager) target = &add_child(std::make_unique<ModuleManager>());
        return target->add_child(std::move(child));
    }
    if (!legal_child(kind_, child->kind_)) throw PipelineStructureError(describe_pair(*this, *child));

    Node& c = *child;
    attach(std::move(child));
    if (scene()) propagate(c, PipelineEventKind::PipelineChanged);
    return c;
}

void Node::remove_child(Node& child) {
    if (child.parent_ != this)
        throw PipelineStructureError("'" + child.name() + "' is not a child of '" + name_ + "'");
    if (context_) context_->node_removing(*this, child);
    auto disposed = detach(child);
    disposed.reset();
    if (scene()) propagate(*this, PipelineEventKind::PipelineChanged);
}

void Node::reparent(Node& new_parent) {
    if (!parent_) throw PipelineStructureError("'" + name_ + "' has no parent; use add_child");
    if (&new_parent == parent_) return;
    if (&new_parent == this || is_ancestor_of(new_parent))
        throw PipelineStructureError("moving '" + name_ + "' under its own subtree would create a cycle");
    if (new_parent.context_ != context_) throw PipelineStructureError("cannot move a node between engines");

    Node* target = &new_parent;
    const bool via_manager = routes_via_manager(new_parent.kind_, kind_);
    if (via_manager) {
        Node* last = new_parent.last_child();
        if (last && last->kind_ == NodeKind::ModuleManager) {
            if (last == parent_) return;
            target = last;
        } else {
            target = nullptr;
        }
    } else if (!legal_child(new_parent.kind_, kind_)) {
        throw PipelineStructureError(describe_pair(new_parent, *this));
    }
    if (!target) target = &new_parent.add_child(std::make_unique<ModuleManager>());

    Node& old_parent = *parent_;
    auto owned = old_parent.detach(*this);
    parent_ = target;
    target->children_.push_back(std::move(owned));
    if (context_) context_->node_reparented(*this, old_parent);
    if (scene()) propagate(*this, PipelineEventKind::PipelineChanged);
    if (Scene* old_scene = old_parent.scene(); old_scene && old_scene != scene()) old_scene->mark_render_dirty();
}

void Node::load_data(DataSlots slots) {
    const auto allowed = data_slots();
    DataSlots merged = data_;
    std::vector<std::string> names;
    for (auto& [name, array] : slots) {
        if (std::find(allowed.begin(), allowed.end(), name) == allowed.end())
            throw UnknownSlotError("'" + name_ + "' has no data slot '" + name + "'");
        names.push_back(name);
        merged.insert_or_assign(name, std::move(array));
    }
    validate_data(merged);
    data_ = std::move(merged);
    if (context_) context_->node_data_loaded(*this, names);
    if (scene()) propagate(*this, PipelineEventKind::DataChanged);
}

void Node::on_property_changed(const ChangeEvent& event) {
    if (context_) context_->node_property_changed(*this, event);
    if (!properties_affect_data()) {
        if (Scene* s = scene()) s->mark_render_dirty();
        return;
    }
    if (scene()) propagate(*this, PipelineEventKind::DataChanged);
}

bool Node::recompute(PipelineEventKind kind) {
    if (kind == PipelineEventKind::PipelineChanged || !input_binding_) input_binding_ = parent_;
    ++recompute_count_;
    try {
        static const std::vector<DatasetPtr> none;
        const auto& in = input_binding_ && input_binding_->kind_ != NodeKind::Scene ? input_binding_->outputs_ : none;
        auto out = compute(in);
        inputs_ = in;
        outputs_ = std::move(out);
        status_ = NodeStatus::Ok;
        status_message_.clear();
        return true;
    } catch (const std::exception& e) {
        status_ = NodeStatus::Error;
        status_message_ = e.what();
        return false;
    }
}

void propagate(Node& origin, PipelineEventKind kind) {
    Scene* s = origin.scene();
    if (!s) throw PipelineStructureError("'" + origin.name() + "' is not attached to a scene");
    std::function<void(Node&)> walk = [&](Node& n) {
        if (!n.recompute(kind)) return;
        for (auto& c : n.children_) walk(*c);
    };
    walk(origin);
    s->mark_render_dirty();
}

// ---------------------------------------------------------------------------

Scene::Scene() : Node(NodeKind::Scene, std::string(kFactoryId), "Scene") {
    declare({"background", PropertyKind::ColorRgba, Rgba{0, 0, 0, 1}, std::nullopt, {}});
    declare({"azimuth", PropertyKind::Float, 45.0, std::pair{-360.0, 360.0}, {}});
    declare({"elevation", PropertyKind::Float, 30.0, std::pair{-89.9, 89.9}, {}});
    declare({"distance", PropertyKind::Float, 10.0, std::pair{1e-6, 1e9}, {}});
    declare({"focal_point", PropertyKind::FloatTriplet, Triplet{0, 0, 0}, std::nullopt, {}});
    declare({"view_angle", PropertyKind::Float, 30.0, std::pair{1.0, 170.0}, {}});
    declare({"auto_fit", PropertyKind::Bool, true, std::nullopt, {}});
}

void Scene::mark_render_dirty() {
    ++revision_;
    if (context()) context()->scene_dirty(*this);
}

const std::vector<std::string>& Scene::camera_property_names() {
    static const std::vector<std::string> names{"azimuth", "elevation", "distance", "focal_point", "view_angle",
                                                "auto_fit"};
    return names;
}

// ---------------------------------------------------------------------------

ModuleManager::ModuleManager() : Node(NodeKind::ModuleManager, std::string(kFactoryId), "Colors and legends") {
    declare({"colormap", PropertyKind::Enum, std::string("blue_red"), std::nullopt, {"blue_red", "gray"}});
    declare({"auto_range", PropertyKind::Bool, true, std::nullopt, {}});
    declare({"range_min", PropertyKind::Float, 0.0, std::nullopt, {}});
    declare({"range_max", PropertyKind::Float, 1.0, std::nullopt, {}});
    rebuild_lut({});
}

std::vector<DatasetPtr> ModuleManager::compute(const std::vector<DatasetPtr>& inputs) {
    // Pass-through; the table range follows the incoming data.
    rebuild_lut(inputs);
    return inputs;
}

void ModuleManager::on_property_changed(const ChangeEvent& event) {
    rebuild_lut(inputs());
    Node::on_property_changed(event);
}

void ModuleManager::rebuild_lut(const std::vector<DatasetPtr>& inputs) {
    const auto map = colormap_from_string(get_as<std::string>("colormap"));
    double lo = get_as<double>("range_min");
    double hi = get_as<double>("range_max");
    if (get_as<bool>("auto_range")) {
        double mn = std::numeric_limits<double>::infinity();
        double mx = -mn;
        auto scan = [&](auto&& values) {
            for (double v : values)
                if (!std::isnan(v)) {
                    mn = std::min(mn, v);
                    mx = std::max(mx, v);
                }
        };
        if (!inputs.empty() && inputs.front()) {
            const Dataset& d = *inputs.front();
            if (auto* img = std::get_if<ImageData>(&d); img && img->point_scalars())
                scan(img->point_scalars()->to_doubles());
            else if (auto* poly = std::get_if<PolyData>(&d); poly && poly->point_scalars)
                scan(*poly->point_scalars);
        }
        if (mn <= mx) {
            lo = mn;
            hi = mx;
        } else {
            lo = 0;
            hi = 1;
        }
    }
    if (hi < lo) hi = lo;
    lut_ = std::make_shared<const LookupTable>(map, lo, hi);
}

} // namespace vizpipe
