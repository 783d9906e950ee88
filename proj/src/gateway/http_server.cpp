#include "vizpipe/gateway/http_server.hpp"

#include "vizpipe/errors.hpp"

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include <atomic>
#include <deque>
#include <list>
#include <optional>
#include <thread>

namespace vizpipe {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;

namespace {

constexpr std::uint64_t kBodyLimit = 1ull << 30;

class Connection : public std::enable_shared_from_this<Connection> {
public:
    Connection(asio::io_context& ioc, tcp::socket socket, EngineService& service)
        : ioc_(ioc), stream_(std::move(socket)), service_(service) {}

    ~Connection() {
        if (token_) service_.unsubscribe(*token_);
    }

    void start() { read_request(); }

private:
    void read_request() {
        parser_.emplace();
        parser_->body_limit(kBodyLimit);
        http::async_read(stream_, buffer_, *parser_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
            if (ec) return self->close();
            self->on_request(self->parser_->release());
        });
    }

    void on_request(http::request<http::string_body> req) {
        if (websocket::is_upgrade(req) && req.target() == "/events") return upgrade(std::move(req));
        HttpRequest r{std::string(req.method_string()), std::string(req.target()), std::move(req.body())};
        const HttpResponse out = service_.handle(r);
        auto res = std::make_shared<http::response<http::string_body>>(static_cast<http::status>(out.status),
                                                                       req.version());
        res->set(http::field::server, "vizpipe");
        res->set(http::field::content_type, out.content_type);
        res->set(http::field::access_control_allow_origin, "*");
        res->set(http::field::access_control_allow_methods, "GET, POST, PUT, PATCH, DELETE, OPTIONS");
        res->set(http::field::access_control_allow_headers, "Content-Type");
        res->keep_alive(req.keep_alive());
        res->body() = out.body;
        res->prepare_payload();
        http::async_write(stream_, *res, [self = shared_from_this(), res](beast::error_code ec, std::size_t) {
            if (ec || !res->keep_alive()) return self->close();
            self->read_request();
        });
    }

    void upgrade(http::request<http::string_body> req) {
        ws_.emplace(std::move(stream_));
        ws_->async_accept(req, [self = shared_from_this()](beast::error_code ec) {
            if (ec) return;
            std::weak_ptr<Connection> weak = self;
            asio::io_context& ioc = self->ioc_;
            self->token_ = self->service_.subscribe([weak, &ioc](const std::string& text) {
                if (auto c = weak.lock()) asio::post(ioc, [c, text] { c->enqueue(text); });
            });
            self->read_ws();
        });
    }

    void read_ws() {
        ws_->async_read(ws_buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
            if (ec) {
                if (self->token_) self->service_.unsubscribe(*self->token_);
                self->token_.reset();
                return;
            }
            self->ws_buffer_.consume(self->ws_buffer_.size());
            self->read_ws();
        });
    }

    void enqueue(const std::string& text) {
        outbox_.push_back(text);
        if (outbox_.size() == 1) write_next();
    }

    void write_next() {
        ws_->text(true);
        ws_->async_write(asio::buffer(outbox_.front()), [self = shared_from_this()](beast::error_code ec, std::size_t) {
            if (ec) return;
            self->outbox_.pop_front();
            if (!self->outbox_.empty()) self->write_next();
        });
    }

    void close() {
        beast::error_code ec;
        stream_.socket().shutdown(tcp::socket::shutdown_both, ec);
    }

    asio::io_context& ioc_;
    beast::tcp_stream stream_;
    EngineService& service_;
    beast::flat_buffer buffer_;
    std::optional<http::request_parser<http::string_body>> parser_;
    std::optional<websocket::stream<beast::tcp_stream>> ws_;
    beast::flat_buffer ws_buffer_;
    std::deque<std::string> outbox_;
    std::optional<std::uint64_t> token_;
};

struct Worker {
    asio::io_context ioc;
    std::thread thread;
    std::atomic<bool> done{false};
};

} // namespace

struct HttpServer::Impl {
    EngineService& service;
    std::string address;
    unsigned short requested_port;
    unsigned short bound_port = 0;
    asio::io_context accept_ioc;
    tcp::acceptor acceptor{accept_ioc};
    std::thread accept_thread;
    std::mutex workers_mutex;
    std::list<std::unique_ptr<Worker>> workers;
    bool running = false;

    Impl(EngineService& s, std::string a, unsigned short p) : service(s), address(std::move(a)), requested_port(p) {}

    void reap() {
        std::lock_guard lock(workers_mutex);
        for (auto it = workers.begin(); it != workers.end();) {
            if ((*it)->done) {
                (*it)->thread.join();
                it = workers.erase(it);
            } else {
                ++it;
            }
        }
    }

    void accept() {
        auto worker = std::make_unique<Worker>();
        Worker* w = worker.get();
        {
            std::lock_guard lock(workers_mutex);
            workers.push_back(std::move(worker));
        }
        acceptor.async_accept(w->ioc, [this, w](beast::error_code ec, tcp::socket socket) {
            if (ec) return;
            reap();
            std::make_shared<Connection>(w->ioc, std::move(socket), service)->start();
            w->thread = std::thread([w] {
                w->ioc.run();
                w->done = true;
            });
            accept();
        });
    }
};

HttpServer::HttpServer(EngineService& service, std::string address, unsigned short port)
    : impl_(std::make_unique<Impl>(service, std::move(address), port)) {}

HttpServer::~HttpServer() { stop(); }

void HttpServer::start() {
    Impl& m = *impl_;
    if (m.running) return;
    beast::error_code ec;
    const auto endpoint = tcp::endpoint(asio::ip::make_address(m.address, ec), m.requested_port);
    if (ec) throw Error("invalid address '" + m.address + "': " + ec.message());
    m.acceptor.open(endpoint.protocol(), ec);
    if (!ec) m.acceptor.set_option(asio::socket_base::reuse_address(true), ec);
    if (!ec) m.acceptor.bind(endpoint, ec);
    if (!ec) m.acceptor.listen(asio::socket_base::max_listen_connections, ec);
    if (ec) {
        m.acceptor.close();
        throw Error("cannot listen on " + m.address + ":" + std::to_string(m.requested_port) + ": " + ec.message());
    }
    m.bound_port = m.acceptor.local_endpoint().port();
    m.running = true;
    m.accept();
    m.accept_thread = std::thread([&m] { m.accept_ioc.run(); });
}

void HttpServer::stop() {
    Impl& m = *impl_;
    if (!m.running) return;
    m.running = false;
    asio::post(m.accept_ioc, [&m] {
        beast::error_code ec;
        m.acceptor.close(ec);
    });
    m.accept_ioc.stop();
    if (m.accept_thread.joinable()) m.accept_thread.join();
    std::lock_guard lock(m.workers_mutex);
    for (auto& w : m.workers) w->ioc.stop();
    for (auto& w : m.workers)
        if (w->thread.joinable()) w->thread.join();
    m.workers.clear();
}

unsigned short HttpServer::port() const noexcept { return impl_->bound_port; }

} // namespace vizpipe
