#include "convoscope/service/http_server.hpp"

#include <httplib.h>

#include "convoscope/common/errors.hpp"

namespace convoscope {

struct HttpServer::Impl {
  explicit Impl(ExplorerService& s) : service(s) {}

  void route(const httplib::Request& req, httplib::Response& res) {
    ApiRequest request;
    request.method = req.method;
    request.path = req.path;
    for (const auto& [key, value] : req.params) request.query.insert_or_assign(key, value);
    request.body = req.body;
    ApiResponse response = service.handle(request);
    res.status = response.status;
    if (response.status == 503) res.set_header("Retry-After", "1");
    res.set_content(response.body, response.content_type.c_str());
  }

  ExplorerService& service;
  httplib::Server server;
};

HttpServer::HttpServer(ExplorerService& service) : impl_(std::make_unique<Impl>(service)) {
  auto handler = [this](const httplib::Request& req, httplib::Response& res) { impl_->route(req, res); };
  impl_->server.Get(".*", handler);
  impl_->server.Post(".*", handler);
  impl_->server.Put(".*", handler);
  impl_->server.Delete(".*", handler);
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  int bound = port == 0 ? impl_->server.bind_to_any_port(host) : (impl_->server.bind_to_port(host, port) ? port : -1);
  if (bound < 0) throw Error("cannot bind " + host + ":" + std::to_string(port));
  return bound;
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_) impl_->server.stop();
}

}  // namespace convoscope
