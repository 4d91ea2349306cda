#include "cxr/gateway/server.hpp"

#include <httplib.h>

namespace cxr::gateway {

namespace {

void send(httplib::Response& res, const Response& r) {
  res.status = r.status;
  res.set_content(r.body, r.content_type);
}

std::optional<std::string> query(const httplib::Request& req, const char* key) {
  if (!req.has_param(key)) return std::nullopt;
  return req.get_param_value(key);
}

}  // namespace

struct HttpServer::Impl {
  httplib::Server svr;
};

HttpServer::HttpServer(Gateway& gateway) : impl_(std::make_unique<Impl>()) {
  auto& svr = impl_->svr;
  Gateway* gw = &gateway;

  svr.set_payload_max_length(gw->config().max_request_bytes);

  const std::string token = gw->config().auth_token;
  if (!token.empty()) {
    svr.set_pre_routing_handler([token](const httplib::Request& req, httplib::Response& res) {
      if (req.path == "/healthz") return httplib::Server::HandlerResponse::Unhandled;
      if (req.get_header_value("Authorization") == "Bearer " + token) {
        return httplib::Server::HandlerResponse::Unhandled;
      }
      res.status = 401;
      res.set_content(R"({"error":"missing or invalid bearer token"})", "application/json");
      return httplib::Server::HandlerResponse::Handled;
    });
  }

  svr.Post("/studies", [gw](const httplib::Request& req, httplib::Response& res) {
    send(res, gw->stow(req.get_header_value("Content-Type"), req.body));
  });
  svr.Get(R"(/studies/([^/]+)/instances/([^/]+))",
          [gw](const httplib::Request& req, httplib::Response& res) {
            send(res, gw->wado(req.matches[1], req.matches[2]));
          });
  svr.Get("/predictions", [gw](const httplib::Request& req, httplib::Response& res) {
    send(res, gw->list_predictions(query(req, "status"), query(req, "limit"), query(req, "offset")));
  });
  svr.Get(R"(/predictions/([^/]+))", [gw](const httplib::Request& req, httplib::Response& res) {
    send(res, gw->get_prediction(req.matches[1]));
  });
  svr.Post(R"(/predictions/([^/]+)/review)",
           [gw](const httplib::Request& req, httplib::Response& res) {
             send(res, gw->review(req.matches[1], req.body));
           });
  svr.Get("/healthz", [gw](const httplib::Request&, httplib::Response& res) {
    send(res, gw->healthz());
  });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind_any_port(const std::string& host) { return impl_->svr.bind_to_any_port(host); }

bool HttpServer::bind(const std::string& host, int port) {
  return impl_->svr.bind_to_port(host, port);
}

bool HttpServer::listen_after_bind() { return impl_->svr.listen_after_bind(); }

void HttpServer::wait_until_ready() const { impl_->svr.wait_until_ready(); }

void HttpServer::stop() {
  if (impl_->svr.is_running()) impl_->svr.stop();
}

}  // namespace cxr::gateway
