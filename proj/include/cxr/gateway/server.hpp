#pragma once

#include <memory>
#include <string>

#include "cxr/gateway/gateway.hpp"

namespace cxr::gateway {

/// HTTP/1.1 front end over a Gateway.
class HttpServer {
 public:
  explicit HttpServer(Gateway& gateway);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds an ephemeral port and returns it (-1 on failure).
  int bind_any_port(const std::string& host);
  bool bind(const std::string& host, int port);
  /// Blocks until stop().
  bool listen_after_bind();
  void wait_until_ready() const;
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace cxr::gateway
