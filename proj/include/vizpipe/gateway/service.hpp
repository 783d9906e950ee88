#pragma once

#include "vizpipe/engine.hpp"
#include "vizpipe/gateway/serial_executor.hpp"
#include "vizpipe/recorder.hpp"
#include "vizpipe/render.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <tuple>

namespace vizpipe {

struct HttpRequest {
    std::string method;
    std::string target; // path with optional query string
    std::string body;
};

struct HttpResponse {
    int status = 200;
    std::string content_type = "application/json";
    std::string body;
};

/// The remote-control API over one engine, independent of the transport.
/// Every engine access goes through one serial executor, so concurrent
/// requests apply in some sequential order; rendering happens on the caller's
/// thread against a snapshot.
class EngineService {
public:
    using EventSink = std::function<void(const std::string&)>;

    explicit EngineService(std::unique_ptr<Engine> engine = std::make_unique<Engine>());
    ~EngineService();
    EngineService(const EngineService&) = delete;
    EngineService& operator=(const EngineService&) = delete;

    HttpResponse handle(const HttpRequest& request);

    /// Sinks receive one JSON event per successful mutation.
    std::uint64_t subscribe(EventSink sink);
    void unsubscribe(std::uint64_t token);

    /// Runs `f(engine)` on the engine's command path.
    template <typename F>
    auto with_engine(F&& f) {
        return executor_.run([&] { return f(*engine_); });
    }

private:
    struct Route;
    HttpResponse dispatch(const HttpRequest& request);
    HttpResponse render(const std::map<std::string, std::string>& query);
    void broadcast(const Json& event);

    std::unique_ptr<Engine> engine_;
    std::unique_ptr<Recorder> recorder_;

    std::mutex sinks_mutex_;
    std::map<std::uint64_t, EventSink> sinks_;
    std::uint64_t next_token_ = 1;

    using FrameKey = std::tuple<ObjectId, std::uint64_t, int, int>;
    std::mutex cache_mutex_;
    std::map<FrameKey, std::shared_ptr<const std::string>> frames_;

    // Declared last so the worker stops before the engine goes away.
    SerialExecutor executor_;
};

/// JSON tree for GET /pipeline.
Json pipeline_json(const Engine& engine);

} // namespace vizpipe
