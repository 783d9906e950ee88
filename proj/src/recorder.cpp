#include "vizpipe/recorder.hpp"

#include "vizpipe/errors.hpp"

#include <mutex>
#include <set>
#include <sstream>

namespace vizpipe {

namespace {

std::mutex g_sessions_mutex;
std::set<const Engine*> g_sessions;

/// Walks the existing tree in the order both recorder and replay use for
/// pre-binding aliases.
template <typename F>
void for_each_existing(const Engine& engine, F&& f) {
    for (const auto& s : engine.scenes())
        static_cast<const Node&>(*s).visit_preorder([&](const Node& n) { f(n); });
}

std::string make_alias(const Node& n, std::size_t counter) {
    return (n.kind() == NodeKind::Scene ? "s" : "n") + std::to_string(counter);
}

Json node_args(const Node& n, const std::string& parent_alias) {
    Json props = Json::object();
    for (const auto& d : n.descriptors()) props[d.name] = value_to_json(n.get(d.name));
    Json args{{"parent", parent_alias}, {"factory_id", n.factory_id()}, {"name", n.name()}, {"properties", props}};
    if (!n.data().empty()) args["data"] = slots_to_json(n.data());
    return args;
}

} // namespace

Json record_to_json(const CommandRecord& r) {
    return {{"index", r.index}, {"op", r.op}, {"target", r.target}, {"args", r.args}};
}

std::string script_to_text(const Script& script) {
    std::string out;
    for (const auto& r : script) {
        out += record_to_json(r).dump();
        out += '\n';
    }
    return out;
}

Script script_from_text(const std::string& text) {
    Script script;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        Json j;
        try {
            j = Json::parse(line);
        } catch (const Json::exception& e) {
            throw ReplayError(line_no, std::string("malformed record: ") + e.what());
        }
        if (!j.is_object() || !j.contains("op") || !j["op"].is_string())
            throw ReplayError(line_no, "record needs a string 'op'");
        CommandRecord r;
        r.index = script.size() + 1;
        r.op = j["op"].get<std::string>();
        if (j.contains("target")) {
            if (!j["target"].is_string()) throw ReplayError(line_no, "'target' must be a string");
            r.target = j["target"].get<std::string>();
        }
        if (j.contains("args")) r.args = j["args"];
        if (!r.args.is_object()) throw ReplayError(line_no, "'args' must be an object");
        script.push_back(std::move(r));
    }
    return script;
}

// ---------------------------------------------------------------------------

Recorder::Recorder(Engine& engine) : engine_(engine) {}

Recorder::~Recorder() {
    if (active_) stop();
}

void Recorder::start() {
    {
        std::lock_guard lock(g_sessions_mutex);
        if (!g_sessions.insert(&engine_).second)
            throw RecorderStateError("a recording session is already active on this engine");
    }
    active_ = true;
    records_.clear();
    aliases_.clear();
    counter_ = 0;
    for_each_existing(engine_, [&](const Node& n) { bind(n); });
    engine_.add_observer(this);
}

Script Recorder::stop() {
    if (!active_) throw RecorderStateError("no active recording session");
    engine_.remove_observer(this);
    {
        std::lock_guard lock(g_sessions_mutex);
        g_sessions.erase(&engine_);
    }
    active_ = false;
    aliases_.clear();
    return records_;
}

std::string Recorder::bind(const Node& node) {
    auto a = make_alias(node, counter_++);
    aliases_[&node] = a;
    return a;
}

std::string Recorder::alias(const Node& node) const {
    auto it = aliases_.find(&node);
    return it == aliases_.end() ? std::string("?") : it->second;
}

void Recorder::append(std::string op, std::string target, Json args) {
    records_.push_back({records_.size() + 1, std::move(op), std::move(target), std::move(args)});
}

void Recorder::scene_added(Scene& scene) { append("new_scene", bind(scene), Json::object()); }

void Recorder::node_added(Node& parent, Node& node) {
    node.visit_preorder([&](Node& n) {
        const Node& p = &n == &node ? parent : *n.parent();
        const std::string parent_alias = alias(p);
        append("add_node", bind(n), node_args(n, parent_alias));
    });
}

void Recorder::node_removing(Node*, Node& node) {
    append("remove_node", alias(node), Json::object());
    node.visit_preorder([&](Node& n) { aliases_.erase(&n); });
}

void Recorder::node_reparented(Node& node, Node&) {
    append("reparent", alias(node), {{"parent", alias(*node.parent())}});
}

void Recorder::property_changed(Node& node, const ChangeEvent& event) {
    append("set_property", alias(node), {{"name", event.property_name}, {"value", value_to_json(event.new_value)}});
}

void Recorder::data_loaded(Node& node, const std::vector<std::string>& slots) {
    DataSlots changed;
    for (const auto& s : slots) changed.emplace(s, node.data().at(s));
    append("load_data", alias(node), {{"slots", slots_to_json(changed)}});
}

void Recorder::before_load_state() { throw EngineStateError("cannot load state while recording"); }

// ---------------------------------------------------------------------------

namespace {

class Replayer {
public:
    explicit Replayer(Engine& engine) : engine_(engine) {
        std::size_t counter = 0;
        for_each_existing(engine, [&](const Node& n) { aliases_[make_alias(n, counter++)] = const_cast<Node*>(&n); });
    }

    void apply(const CommandRecord& r) {
        if (r.op == "new_scene") {
            define(r.target, engine_.new_scene());
        } else if (r.op == "add_node") {
            add_node(r);
        } else if (r.op == "remove_node") {
            Node& n = lookup(r.target);
            n.visit_preorder([&](Node& m) { forget(m); });
            engine_.remove_node(n);
        } else if (r.op == "reparent") {
            engine_.reparent(lookup(r.target), lookup(string_arg(r, "parent")));
        } else if (r.op == "set_property") {
            Node& n = lookup(r.target);
            const std::string name = string_arg(r, "name");
            if (!r.args.contains("value")) throw Error("set_property needs a value");
            n.set_property(name, value_from_json(r.args["value"], n.descriptor(name).kind));
        } else if (r.op == "load_data") {
            if (!r.args.contains("slots")) throw Error("load_data needs slots");
            lookup(r.target).load_data(slots_from_json(r.args["slots"]));
        } else {
            throw Error("unknown op '" + r.op + "'");
        }
    }

private:
    void add_node(const CommandRecord& r) {
        Node& parent = lookup(string_arg(r, "parent"));
        Json record{{"factory_id", string_arg(r, "factory_id")}};
        for (const char* key : {"name", "properties", "data"})
            if (r.args.contains(key)) record[key] = r.args[key];
        auto node = node_from_record(engine_.registry(), record);
        if (node->kind() == NodeKind::Scene) throw Error("scenes are created with new_scene");
        if (aliases_.count(r.target)) throw Error("alias '" + r.target + "' is already bound");
        define(r.target, engine_.add_child(parent, std::move(node), false));
    }

    std::string string_arg(const CommandRecord& r, const char* key) const {
        if (!r.args.contains(key) || !r.args[key].is_string())
            throw Error(std::string("missing string argument '") + key + "'");
        return r.args[key].get<std::string>();
    }

    Node& lookup(const std::string& alias) const {
        auto it = aliases_.find(alias);
        if (it == aliases_.end()) throw Error("unknown alias '" + alias + "'");
        return *it->second;
    }

    void define(const std::string& alias, Node& node) {
        if (alias.empty()) throw Error("missing target alias");
        if (!aliases_.emplace(alias, &node).second) throw Error("alias '" + alias + "' is already bound");
    }

    void forget(Node& node) {
        for (auto it = aliases_.begin(); it != aliases_.end();)
            it = it->second == &node ? aliases_.erase(it) : std::next(it);
    }

    Engine& engine_;
    std::map<std::string, Node*> aliases_;
};

} // namespace

void replay(Engine& engine, const Script& script) {
    Replayer replayer(engine);
    for (std::size_t i = 0; i < script.size(); ++i) {
        const auto& r = script[i];
        const std::size_t index = r.index ? r.index : i + 1;
        try {
            replayer.apply(r);
        } catch (const ReplayError&) {
            throw;
        } catch (const std::exception& e) {
            throw ReplayError(index, e.what());
        }
    }
}

} // namespace vizpipe
