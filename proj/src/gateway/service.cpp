#include "vizpipe/gateway/service.hpp"

#include "vizpipe/errors.hpp"

#include <charconv>
#include <vector>

namespace vizpipe {

namespace {

class NotFound : public Error {
public:
    using Error::Error;
};

class BadRequest : public Error {
public:
    using Error::Error;
};

HttpResponse json_response(int status, const Json& body) { return {status, "application/json", body.dump()}; }

HttpResponse error_response(int status, const std::string& message) {
    return json_response(status, {{"error", message}});
}

std::vector<std::string> split_path(const std::string& path) {
    std::vector<std::string> parts;
    std::size_t i = 0;
    while (i < path.size()) {
        while (i < path.size() && path[i] == '/') ++i;
        const std::size_t j = path.find('/', i);
        const std::size_t end = j == std::string::npos ? path.size() : j;
        if (end > i) parts.push_back(path.substr(i, end - i));
        i = end;
    }
    return parts;
}

std::map<std::string, std::string> parse_query(const std::string& q) {
    std::map<std::string, std::string> out;
    std::size_t i = 0;
    while (i <= q.size() && !q.empty()) {
        const std::size_t amp = q.find('&', i);
        const std::string pair = q.substr(i, amp == std::string::npos ? std::string::npos : amp - i);
        const std::size_t eq = pair.find('=');
        if (!pair.empty()) out[pair.substr(0, eq)] = eq == std::string::npos ? "" : pair.substr(eq + 1);
        if (amp == std::string::npos) break;
        i = amp + 1;
    }
    return out;
}

std::uint64_t parse_u64(const std::string& text, const char* what) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw BadRequest(std::string("invalid ") + what + " '" + text + "'");
    return v;
}

Json parse_body(const std::string& body) {
    try {
        return Json::parse(body);
    } catch (const Json::exception& e) {
        throw BadRequest(std::string("malformed JSON body: ") + e.what());
    }
}

ObjectId id_field(const Json& body, const char* key) {
    if (!body.contains(key) || !body[key].is_number_unsigned())
        throw BadRequest(std::string("'") + key + "' must be a node id");
    return body[key].get<ObjectId>();
}

Node& lookup(const Engine& engine, ObjectId id) {
    if (Node* n = engine.find(id)) return *n;
    throw NotFound("no node with id " + std::to_string(id));
}

Json node_json(const Node& n) {
    Json j;
    j["id"] = n.object_id();
    j["kind"] = std::string(to_string(n.kind()));
    j["factory_id"] = n.factory_id();
    j["name"] = n.name();
    j["status"] = std::string(to_string(n.status()));
    if (n.status() == NodeStatus::Error) j["status_message"] = n.status_message();
    const auto& out = n.outputs();
    j["dataset_info"] = !out.empty() && out.front() ? info_to_json(dataset_info(*out.front())) : Json();
    Json children = Json::array();
    for (const auto& c : n.children()) children.push_back(node_json(*c));
    j["children"] = std::move(children);
    return j;
}

int status_for(const std::exception& e) {
    if (dynamic_cast<const NotFound*>(&e)) return 404;
    if (dynamic_cast<const PipelineStructureError*>(&e) || dynamic_cast<const EngineStateError*>(&e) ||
        dynamic_cast<const RecorderStateError*>(&e) || dynamic_cast<const ReentrancyError*>(&e))
        return 409;
    if (dynamic_cast<const Error*>(&e)) return 400;
    return 500;
}

/// Reads and validates a property map without applying it.
PropertyList checked_properties(const Node& node, const Json& props) {
    if (!props.is_object()) throw BadRequest("properties must be an object");
    PropertyList out;
    for (const auto& [name, value] : props.items()) {
        if (!node.has_property(name))
            throw UnknownPropertyError("'" + node.factory_id() + "' has no property '" + name + "'");
        Value v = value_from_json(value, node.descriptor(name).kind);
        validate_value(node.descriptor(name), v);
        out.emplace_back(name, std::move(v));
    }
    return out;
}

} // namespace

Json pipeline_json(const Engine& engine) {
    Json scenes = Json::array();
    for (const auto& s : engine.scenes()) scenes.push_back(node_json(*s));
    Json j{{"scenes", std::move(scenes)}};
    j["current_scene"] = engine.current_scene() ? Json(engine.current_scene()->object_id()) : Json();
    j["current_object"] = engine.current_object() ? Json(engine.current_object()->object_id()) : Json();
    return j;
}

EngineService::EngineService(std::unique_ptr<Engine> engine)
    : engine_(std::move(engine)), recorder_(std::make_unique<Recorder>(*engine_)) {}

EngineService::~EngineService() {
    executor_.run([this] { recorder_.reset(); });
}

std::uint64_t EngineService::subscribe(EventSink sink) {
    std::lock_guard lock(sinks_mutex_);
    const auto token = next_token_++;
    sinks_.emplace(token, std::move(sink));
    return token;
}

void EngineService::unsubscribe(std::uint64_t token) {
    std::lock_guard lock(sinks_mutex_);
    sinks_.erase(token);
}

void EngineService::broadcast(const Json& event) {
    std::vector<EventSink> sinks;
    {
        std::lock_guard lock(sinks_mutex_);
        for (const auto& [token, sink] : sinks_) sinks.push_back(sink);
    }
    const std::string text = event.dump();
    for (const auto& sink : sinks) sink(text);
}

HttpResponse EngineService::handle(const HttpRequest& request) {
    try {
        return dispatch(request);
    } catch (const std::exception& e) {
        return error_response(status_for(e), e.what());
    }
}

HttpResponse EngineService::dispatch(const HttpRequest& request) {
    const std::size_t qpos = request.target.find('?');
    const std::string path = request.target.substr(0, qpos);
    const auto query = parse_query(qpos == std::string::npos ? "" : request.target.substr(qpos + 1));
    const auto parts = split_path(path);
    const std::string& m = request.method;
    auto is = [&](std::initializer_list<const char*> want) {
        if (parts.size() != want.size()) return false;
        std::size_t i = 0;
        for (const char* w : want) {
            if (*w != '*' && parts[i] != w) return false;
            ++i;
        }
        return true;
    };
    auto mutation_event = [this](const char* kind, std::optional<ObjectId> id) {
        Json event{{"event", kind}, {"revision", engine_->revision()}};
        event["node_id"] = id ? Json(*id) : Json();
        return event;
    };

    if (m == "OPTIONS") return {204, "text/plain", ""};

    if (is({"pipeline"}) && m == "GET")
        return json_response(200, executor_.run([this] { return pipeline_json(*engine_); }));

    if (is({"registry"}) && m == "GET") {
        return json_response(200, executor_.run([this] {
            Json entries = Json::array();
            for (const auto& e : engine_->registry().entries()) entries.push_back(metadata_to_json(e.metadata));
            return Json{{"entries", std::move(entries)}};
        }));
    }

    if (is({"describe", "*"}) && m == "GET") {
        const ObjectId id = parse_u64(parts[1], "node id");
        return json_response(200, executor_.run([&] {
            const Node& n = lookup(*engine_, id);
            Json props = Json::array();
            for (const auto& s : n.describe()) props.push_back(state_to_json(s));
            return Json{{"id", id}, {"factory_id", n.factory_id()}, {"name", n.name()}, {"properties", props}};
        }));
    }

    if (is({"applicable", "*"}) && m == "GET") {
        const ObjectId id = parse_u64(parts[1], "node id");
        return json_response(200, executor_.run([&] {
            const Node& n = lookup(*engine_, id);
            Json entries = Json::array();
            if (n.kind() != NodeKind::Module && !n.outputs().empty() && n.outputs().front())
                for (const auto& meta : engine_->registry().applicable(dataset_info(*n.outputs().front())))
                    entries.push_back(metadata_to_json(meta));
            return Json{{"id", id}, {"entries", std::move(entries)}};
        }));
    }

    if (is({"nodes"}) && m == "POST") {
        const Json body = parse_body(request.body);
        if (!body.is_object() || !body.contains("factory") || !body["factory"].is_string())
            throw BadRequest("'factory' must be a string");
        const std::string factory = body["factory"].get<std::string>();
        const ObjectId id = executor_.run([&] {
            if (factory == Scene::kFactoryId) {
                const ObjectId sid = engine_->new_scene().object_id();
                broadcast(mutation_event("node_added", sid));
                return sid;
            }
            Node& parent = lookup(*engine_, id_field(body, "parent"));
            auto node = factory == ModuleManager::kFactoryId ? std::unique_ptr<Node>(std::make_unique<ModuleManager>())
                                                             : engine_->create(factory);
            if (body.contains("properties"))
                for (auto& [name, value] : checked_properties(*node, body["properties"])) node->set_property(name, value);
            if (body.contains("data")) node->load_data(slots_from_json(body["data"]));
            const NodeKind kind = node->kind();
            Node& attached = engine_->add_child(parent, std::move(node));
            if (kind == NodeKind::Source || kind == NodeKind::Filter) engine_->set_current_object(&attached);
            broadcast(mutation_event("node_added", attached.object_id()));
            return attached.object_id();
        });
        return json_response(201, {{"id", id}});
    }

    if (is({"nodes", "*"}) && m == "PATCH") {
        const ObjectId id = parse_u64(parts[1], "node id");
        const Json body = parse_body(request.body);
        return json_response(200, executor_.run([&] {
            Node& n = lookup(*engine_, id);
            const PropertyList changes = checked_properties(n, body);
            Json names = Json::array();
            for (const auto& [name, value] : changes) {
                n.set_property(name, value);
                names.push_back(name);
            }
            Json event = mutation_event("property_changed", id);
            event["properties"] = names;
            if (names.size() == 1) event["property"] = names[0];
            broadcast(event);
            Json props = Json::array();
            for (const auto& s : n.describe()) props.push_back(state_to_json(s));
            return Json{{"id", id}, {"properties", props}};
        }));
    }

    if (is({"nodes", "*"}) && m == "DELETE") {
        const ObjectId id = parse_u64(parts[1], "node id");
        executor_.run([&] {
            engine_->remove_node(lookup(*engine_, id));
            broadcast(mutation_event("node_removed", id));
        });
        return json_response(200, {{"removed", id}});
    }

    if (is({"reparent"}) && m == "POST") {
        const Json body = parse_body(request.body);
        if (!body.is_object()) throw BadRequest("body must be an object");
        const ObjectId node_id = id_field(body, "node");
        const ObjectId parent_id = id_field(body, "parent");
        executor_.run([&] {
            engine_->reparent(lookup(*engine_, node_id), lookup(*engine_, parent_id));
            broadcast(mutation_event("node_reparented", node_id));
        });
        return json_response(200, {{"node", node_id}, {"parent", parent_id}});
    }

    if (is({"render"}) && m == "GET") return render(query);

    if (is({"state"}) && m == "GET")
        return {200, "application/json", executor_.run([this] { return state_to_text(engine_->save_state()); })};

    if (is({"state"}) && m == "PUT") {
        const Json doc = parse_body(request.body);
        executor_.run([&] {
            engine_->load_state(doc);
            broadcast(mutation_event("state_loaded", std::nullopt));
        });
        return json_response(200, {{"loaded", true}});
    }

    if (is({"record", "start"}) && m == "POST") {
        executor_.run([this] { recorder_->start(); });
        return json_response(200, {{"recording", true}});
    }

    if (is({"record", "stop"}) && m == "POST") {
        const Script script = executor_.run([this] { return recorder_->stop(); });
        Json records = Json::array();
        for (const auto& r : script) records.push_back(record_to_json(r));
        return json_response(200, {{"recording", false}, {"records", std::move(records)}});
    }

    static const std::vector<std::vector<std::string>> known{{"pipeline"}, {"registry"}, {"describe", "*"},
                                                             {"applicable", "*"}, {"nodes"}, {"nodes", "*"},
                                                             {"reparent"}, {"render"}, {"state"},
                                                             {"record", "start"}, {"record", "stop"}};
    for (const auto& k : known) {
        if (k.size() != parts.size()) continue;
        bool match = true;
        for (std::size_t i = 0; i < k.size(); ++i)
            if (k[i] != "*" && k[i] != parts[i]) match = false;
        if (match) return error_response(405, "method " + m + " not allowed on " + path);
    }
    return error_response(404, "no route for " + path);
}

HttpResponse EngineService::render(const std::map<std::string, std::string>& query) {
    auto dimension = [&](const char* key, int fallback) {
        auto it = query.find(key);
        if (it == query.end() || it->second.empty()) return fallback;
        const auto v = parse_u64(it->second, key);
        if (v < 1 || v > 8192) throw BadRequest(std::string(key) + " must be in [1, 8192]");
        return static_cast<int>(v);
    };
    const int width = dimension("width", 640);
    const int height = dimension("height", 480);
    std::optional<ObjectId> scene_id;
    if (auto it = query.find("scene"); it != query.end() && !it->second.empty()) scene_id = parse_u64(it->second, "scene");

    auto [key, snapshot] = executor_.run([&] {
        const Scene* scene = nullptr;
        if (scene_id) {
            const Node& n = lookup(*engine_, *scene_id);
            if (n.kind() != NodeKind::Scene) throw BadRequest("node " + std::to_string(*scene_id) + " is not a scene");
            scene = static_cast<const Scene*>(&n);
        } else {
            scene = engine_->current_scene();
            if (!scene) throw NotFound("there is no scene to render");
        }
        FrameKey k{scene->object_id(), scene->revision(), width, height};
        std::optional<SceneSnapshot> snap;
        {
            std::lock_guard lock(cache_mutex_);
            if (!frames_.count(k)) snap = snapshot_scene(*scene);
        }
        return std::pair{k, std::move(snap)};
    });

    std::shared_ptr<const std::string> png;
    {
        std::lock_guard lock(cache_mutex_);
        if (auto it = frames_.find(key); it != frames_.end()) png = it->second;
    }
    if (!png) {
        if (!snapshot) {
            // Evicted between the check and now; take a fresh snapshot.
            snapshot = executor_.run([&] { return snapshot_scene(*static_cast<const Scene*>(&lookup(*engine_, std::get<0>(key)))); });
        }
        png = std::make_shared<const std::string>(encode_png(render_snapshot(*snapshot, width, height)));
        std::lock_guard lock(cache_mutex_);
        if (frames_.size() >= 32) frames_.clear();
        frames_[key] = png;
    }
    return {200, "image/png", *png};
}

} // namespace vizpipe
