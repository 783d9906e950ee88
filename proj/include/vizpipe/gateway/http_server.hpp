#pragma once

#include "vizpipe/gateway/service.hpp"

#include <memory>
#include <string>

namespace vizpipe {

/// HTTP/1.1 + WebSocket front end for an EngineService. Each connection is
/// served on its own thread, so a long render never blocks other clients.
/// WebSocket peers connect to /events and receive every mutation event.
class HttpServer {
public:
    HttpServer(EngineService& service, std::string address = "127.0.0.1", unsigned short port = 8787);
    ~HttpServer();
    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    /// Binds and starts accepting. Throws Error when the port is unavailable.
    void start();
    void stop();
    /// Bound port; useful when constructed with port 0.
    unsigned short port() const noexcept;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace vizpipe
