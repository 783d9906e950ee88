#pragma once

#include "vizpipe/engine.hpp"

#include <map>
#include <string>
#include <vector>

namespace vizpipe {

/// One replayable mutation. `target` is a node alias (s0, n1, ...).
struct CommandRecord {
    std::size_t index = 0; // 1-based position in the script
    std::string op;        // new_scene | add_node | remove_node | reparent | set_property | load_data
    std::string target;
    Json args = Json::object();

    friend bool operator==(const CommandRecord&, const CommandRecord&) = default;
};

using Script = std::vector<CommandRecord>;

Json record_to_json(const CommandRecord& r);

/// One JSON object per line.
std::string script_to_text(const Script& script);
/// Throws ReplayError carrying the offending line number.
Script script_from_text(const std::string& text);

/// Record mode for one engine. Watches the engine while active and turns each
/// mutation into a CommandRecord; it never changes engine state itself.
class Recorder final : private EngineObserver {
public:
    explicit Recorder(Engine& engine);
    ~Recorder() override;
    Recorder(const Recorder&) = delete;
    Recorder& operator=(const Recorder&) = delete;

    /// Throws RecorderStateError when any session is already active on the engine.
    void start();
    /// Ends the session and returns its records.
    Script stop();

    bool active() const noexcept { return active_; }
    const Script& records() const noexcept { return records_; }

private:
    void scene_added(Scene& scene) override;
    void node_added(Node& parent, Node& node) override;
    void node_removing(Node* parent, Node& node) override;
    void node_reparented(Node& node, Node& old_parent) override;
    void property_changed(Node& node, const ChangeEvent& event) override;
    void data_loaded(Node& node, const std::vector<std::string>& slots) override;
    void before_load_state() override;

    std::string bind(const Node& node);
    std::string alias(const Node& node) const;
    void append(std::string op, std::string target, Json args);

    Engine& engine_;
    bool active_ = false;
    Script records_;
    std::map<const Node*, std::string> aliases_;
    std::size_t counter_ = 0;
};

/// Rebuilds a recorded session on `engine`. Nodes already present are bound to
/// aliases in the same pre-order the recorder uses. Any failure is reported
/// as ReplayError with the failing record's index.
void replay(Engine& engine, const Script& script);

} // namespace vizpipe
