#pragma once

#include "vizpipe/json_codec.hpp"
#include "vizpipe/nodes.hpp"
#include "vizpipe/pipeline.hpp"
#include "vizpipe/registry.hpp"

#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace vizpipe {

/// StateDocument: {format_version, scenes: [node records]}.
using StateDocument = Json;

inline constexpr int kStateFormatVersion = 1;

/// Mutation hooks. Called synchronously, after the change for additions and
/// before it for removals.
class EngineObserver {
public:
    virtual ~EngineObserver() = default;
    virtual void scene_added(Scene&) {}
    /// `node` is the root of the attached subtree.
    virtual void node_added(Node& /*parent*/, Node& /*node*/) {}
    virtual void node_removing(Node* /*parent*/, Node& /*node*/) {}
    virtual void node_reparented(Node& /*node*/, Node& /*old_parent*/) {}
    virtual void property_changed(Node&, const ChangeEvent&) {}
    virtual void data_loaded(Node&, const std::vector<std::string>& /*slots*/) {}
    virtual void scene_dirty(Scene&) {}
    /// May throw to veto a load.
    virtual void before_load_state() {}
    virtual void state_loaded() {}
};

/// Owner of scenes and node lifetimes. Engines share nothing with each other.
class Engine final : public PipelineContext {
public:
    explicit Engine(const Registry& registry = builtin_registry());
    ~Engine() override;
    Engine(const Engine&) = delete;
    Engine& operator=(const Engine&) = delete;

    const Registry& registry() const noexcept { return *registry_; }

    Scene& new_scene();
    std::span<const std::unique_ptr<Scene>> scenes() const noexcept { return scenes_; }
    Scene* current_scene() const noexcept { return current_scene_; }
    Node* current_object() const noexcept { return current_object_; }
    void set_current_scene(Scene& scene);
    /// nullptr clears the selection.
    void set_current_object(Node* node);

    /// Fresh detached node from the registry.
    std::unique_ptr<Node> create(std::string_view factory_id) const;

    /// Attaches to the current scene; the source becomes current_object.
    Node& add_source(std::unique_ptr<Node> source);
    /// Attaches under current_object and selects the filter.
    Node& add_filter(std::unique_ptr<Node> filter);
    /// Attaches under current_object (through its module manager); selection is kept.
    Node& add_module(std::unique_ptr<Node> module);

    /// Attaches `child` under `parent`, checking registry input constraints
    /// against the parent's current output when `check_inputs` is set.
    Node& add_child(Node& parent, std::unique_ptr<Node> child, bool check_inputs = true);

    /// Disposes `node` and its subtree. Scenes are removed from the engine.
    void remove_node(Node& node);
    void reparent(Node& node, Node& new_parent);

    Node* find(ObjectId id) const noexcept;
    /// Throws EngineStateError for unknown ids.
    Node& node(ObjectId id) const;
    bool owns(const Node& node) const noexcept;

    StateDocument save_state() const;
    /// Replaces all scenes. Validates the whole document first; on failure the
    /// engine is untouched. Afterwards current_object is empty and
    /// current_scene is the last loaded scene.
    void load_state(const StateDocument& doc);

    void add_observer(EngineObserver* observer);
    void remove_observer(EngineObserver* observer);

    /// Incremented on every mutation, including property changes.
    std::uint64_t revision() const noexcept { return revision_; }

    // PipelineContext
    ObjectId allocate_id() override { return next_id_++; }
    EventSequence& sequence() override { return sequence_; }
    void node_attached(Node& parent, Node& child) override;
    void node_removing(Node& parent, Node& child) override;
    void node_reparented(Node& node, Node& old_parent) override;
    void node_property_changed(Node& node, const ChangeEvent& event) override;
    void node_data_loaded(Node& node, const std::vector<std::string>& slots) override;
    void scene_dirty(Scene& scene) override;

private:
    void check_accepts(const Node& parent, const Node& child) const;
    void index_subtree(Node& root);
    void unindex_subtree(Node& root);
    template <typename F>
    void notify(F&& f);

    const Registry* registry_;
    std::vector<std::unique_ptr<Scene>> scenes_;
    Scene* current_scene_ = nullptr;
    Node* current_object_ = nullptr;
    std::unordered_map<ObjectId, Node*> index_;
    std::vector<EngineObserver*> observers_;
    ObjectId next_id_ = 1;
    EventSequence sequence_;
    std::uint64_t revision_ = 0;
};

/// Record of one node and its subtree as stored in a StateDocument.
Json node_record(const Node& node);

/// Builds a detached subtree from a record. Throws StateLoadError.
std::unique_ptr<Node> node_from_record(const Registry& registry, const Json& record);

/// Compact text form; equal documents give equal bytes.
std::string state_to_text(const StateDocument& doc);
StateDocument state_from_text(const std::string& text);

} // namespace vizpipe
