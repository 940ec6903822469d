#pragma once

// JSON-over-HTTP front end for Service, versioned under /v1.
//
// Error responses carry {code, message, details}; input, parse and format
// errors are 400, not_found 404, integrity and state 409, validation and
// completeness 422, anything unexpected 500.

#include "dhub/service.hpp"

#include <memory>
#include <string>
#include <vector>

namespace dhub {

struct HttpConfig {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  std::vector<std::string> cors_origins;  // "*" allows any origin
};

int http_status(ErrorCode code);
json error_body(const Error& error);

class HttpServer {
 public:
  HttpServer(Service& service, HttpConfig config);
  ~HttpServer();

  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds the listening socket and returns the port. ErrorCode::Config on failure.
  int bind();
  /// Serves until stop(); binds first if needed.
  void listen();
  /// listen() on a background thread; returns once the server accepts requests.
  void start();
  void stop();
  int port() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace dhub
