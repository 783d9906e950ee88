#pragma once

#include "vizpipe/dataset.hpp"
#include "vizpipe/kernels.hpp"
#include "vizpipe/observable.hpp"

#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vizpipe {

enum class NodeKind { Scene, Source, Filter, ModuleManager, Module };

std::string_view to_string(NodeKind kind);
NodeKind node_kind_from_string(std::string_view text);

/// Direct parent/child pairs the tree accepts. Modules placed under a source or
/// filter are routed through a module manager by Node::add_child.
bool legal_child(NodeKind parent, NodeKind child);

enum class PipelineEventKind { DataChanged, PipelineChanged };
enum class NodeStatus { Ok, Error };
enum class Representation { Surface, Wireframe, Points };

std::string_view to_string(NodeStatus status);

class Node;
class Scene;

/// Hooks through which an owning engine observes and identifies its tree.
class PipelineContext {
public:
    virtual ~PipelineContext() = default;
    virtual ObjectId allocate_id() = 0;
    virtual EventSequence& sequence() = 0;
    /// `child` is the root of the newly attached subtree.
    virtual void node_attached(Node& parent, Node& child) = 0;
    /// Called before the subtree rooted at `child` is detached and disposed.
    virtual void node_removing(Node& parent, Node& child) = 0;
    virtual void node_reparented(Node& node, Node& old_parent) = 0;
    virtual void node_property_changed(Node& node, const ChangeEvent& event) = 0;
    virtual void node_data_loaded(Node& node, const std::vector<std::string>& slots) = 0;
    virtual void scene_dirty(Scene& scene) = 0;
};

using DataSlots = std::map<std::string, NumericArray>;

/// A tree node. Children are owned; the parent pointer is a back-reference.
class Node : public ObservableObject {
public:
    Node(NodeKind kind, std::string factory_id, std::string name);
    ~Node() override;

    NodeKind kind() const noexcept { return kind_; }
    const std::string& factory_id() const noexcept { return factory_id_; }
    const std::string& name() const noexcept { return name_; }
    /// Only allowed while the node is detached.
    void set_name(std::string name);

    Node* parent() const noexcept { return parent_; }
    std::span<const std::unique_ptr<Node>> children() const noexcept { return children_; }
    Node* last_child() const noexcept { return children_.empty() ? nullptr : children_.back().get(); }

    /// Root scene, or nullptr while the node hangs in a detached subtree.
    Scene* scene() noexcept;
    const Scene* scene() const noexcept;
    PipelineContext* context() const noexcept { return context_; }

    const std::vector<DatasetPtr>& inputs() const noexcept { return inputs_; }
    const std::vector<DatasetPtr>& outputs() const noexcept { return outputs_; }
    NodeStatus status() const noexcept { return status_; }
    const std::string& status_message() const noexcept { return status_message_; }
    std::uint64_t recompute_count() const noexcept { return recompute_count_; }

    /// Attaches `child` and returns it. A module added under a source or
    /// filter lands in the last child if that is a module manager, otherwise
    /// in a newly created one. Throws PipelineStructureError on illegal pairs
    /// or an already-parented child.
    Node& add_child(std::unique_ptr<Node> child);

    /// Detaches and disposes `child` with its subtree.
    void remove_child(Node& child);

    /// Moves this node under `new_parent` without disposing it.
    void reparent(Node& new_parent);

    bool is_ancestor_of(const Node& other) const noexcept;

    void visit_preorder(const std::function<void(Node&)>& fn);
    void visit_preorder(const std::function<void(const Node&)>& fn) const;

    /// Named arrays held by sources that take inline data.
    virtual std::vector<std::string> data_slots() const { return {}; }
    const DataSlots& data() const noexcept { return data_; }
    /// Replaces the given slots together and propagates a single data_changed.
    /// Throws UnknownSlotError or the node's own validation error; on failure
    /// nothing changes.
    void load_data(DataSlots slots);

protected:
    virtual std::vector<DatasetPtr> compute(const std::vector<DatasetPtr>& inputs) = 0;
    virtual void validate_data(const DataSlots&) const {}
    /// False for nodes whose properties only affect rendering.
    virtual bool properties_affect_data() const { return true; }

    void on_property_changed(const ChangeEvent& event) override;

private:
    friend void propagate(Node& origin, PipelineEventKind kind);
    friend class Engine;

    void attach(std::unique_ptr<Node> child);
    std::unique_ptr<Node> detach(Node& child);
    void adopt_context(PipelineContext* context);
    bool recompute(PipelineEventKind kind);

    NodeKind kind_;
    std::string factory_id_;
    std::string name_;
    Node* parent_ = nullptr;
    PipelineContext* context_ = nullptr;
    std::vector<std::unique_ptr<Node>> children_;
    std::vector<DatasetPtr> inputs_;
    std::vector<DatasetPtr> outputs_;
    const Node* input_binding_ = nullptr;
    DataSlots data_;
    NodeStatus status_ = NodeStatus::Ok;
    std::string status_message_;
    std::uint64_t recompute_count_ = 0;
};

/// Pre-order update of `origin`'s subtree. A node that fails is flagged with
/// status error and its children are skipped; siblings still update.
void propagate(Node& origin, PipelineEventKind kind);

/// Root of a tree. Carries the background and camera properties.
class Scene final : public Node {
public:
    static constexpr std::string_view kFactoryId = "scene";

    Scene();

    /// Incremented whenever anything that affects the rendered image changes.
    std::uint64_t revision() const noexcept { return revision_; }
    void mark_render_dirty();

    static const std::vector<std::string>& camera_property_names();

protected:
    std::vector<DatasetPtr> compute(const std::vector<DatasetPtr>&) override { return {}; }
    bool properties_affect_data() const override { return false; }

private:
    std::uint64_t revision_ = 0;
};

/// Interposed between a producer and its modules; owns the lookup table they share.
class ModuleManager final : public Node {
public:
    static constexpr std::string_view kFactoryId = "module_manager";

    ModuleManager();

    std::shared_ptr<const LookupTable> lut() const noexcept { return lut_; }

protected:
    std::vector<DatasetPtr> compute(const std::vector<DatasetPtr>& inputs) override;
    bool properties_affect_data() const override { return false; }
    void on_property_changed(const ChangeEvent& event) override;

private:
    void rebuild_lut(const std::vector<DatasetPtr>& inputs);

    std::shared_ptr<const LookupTable> lut_;
};

/// Leaf node turning a dataset into drawable geometry.
class ModuleNode : public Node {
public:
    ModuleNode(std::string factory_id, std::string name) : Node(NodeKind::Module, std::move(factory_id), std::move(name)) {}

    virtual Representation representation() const { return Representation::Surface; }
};

} // namespace vizpipe
