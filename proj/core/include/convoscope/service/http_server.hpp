#pragma once

#include <memory>
#include <string>

#include "convoscope/service/api.hpp"

namespace convoscope {

// HTTP transport over ExplorerService.
class HttpServer {
 public:
  explicit HttpServer(ExplorerService& service);
  ~HttpServer();

  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Port 0 binds an ephemeral port. Returns the bound port; throws Error when
  // binding fails.
  int bind(const std::string& host, int port);
  // Blocks until stop() is called.
  void listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace convoscope
