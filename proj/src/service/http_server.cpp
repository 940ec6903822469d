#include "dhub/http_server.hpp"

#include "dhub/geo.hpp"

#include "httplib.h"

#include <algorithm>
#include <cctype>
#include <thread>

namespace dhub {
namespace {

constexpr const char* kJson = "application/json";

void send(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), kJson);
}

json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  try {
    return json::parse(req.body);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::Format, std::string("request body is not valid JSON: ") + e.what());
  }
}

template <class T>
T body_as(const json& j) {
  try {
    return j.get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Format, std::string("malformed request body: ") + e.what());
  }
}

template <class T>
T field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw Error(ErrorCode::Input, std::string("request body needs field '") + key + "'");
  }
  return body_as<T>(j.at(key));
}

Money money_field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) return Money{};
  const auto& v = j.at(key);
  if (v.is_string()) return Money::parse(v.get<std::string>());
  if (v.is_number()) return Money::from_usd(v.get<double>());
  throw Error(ErrorCode::Format, std::string("field '") + key + "' must be an amount");
}

/// Accepts [w1..w6] or {"geographic": .., ...}.
WeightVector weights_from(const json& w) {
  WeightVector out{};
  if (w.is_array()) {
    if (w.size() != kDimensionCount) {
      throw Error(ErrorCode::Input, "weights must list exactly six values");
    }
    for (std::size_t i = 0; i < kDimensionCount; ++i) out[i] = body_as<double>(w[i]);
    return out;
  }
  if (w.is_object()) {
    for (auto d : all_values<Dimension>()) {
      out[index_of(d)] = field<double>(w, std::string(to_string(d)).c_str());
    }
    return out;
  }
  throw Error(ErrorCode::Input, "weights must be an array or an object");
}

int int_param(const httplib::Request& req, const char* name, int fallback) {
  if (!req.has_param(name)) return fallback;
  const auto v = req.get_param_value(name);
  try {
    std::size_t used = 0;
    const int n = std::stoi(v, &used);
    if (used == v.size()) return n;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::Input, std::string("query parameter ") + name + " must be an integer");
}

std::string capitalized(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  return s;
}

/// Fills server-side defaults before a create/replace body is parsed.
void complete_entity(json& j, const Service& service, std::string_view kind) {
  if (!j.is_object()) throw Error(ErrorCode::Format, "request body must be a JSON object");
  if (!j.contains("id")) j["id"] = "";
  if (kind == "organizations") {
    if (!j.contains("region") && j.contains("country") && j["country"].is_string()) {
      j["region"] = geo::region_of(j["country"].get<std::string>());
    }
    if (!j.contains("created_at")) j["created_at"] = format_timestamp(service.now());
  }
}

json trace_body(const TraceChain& t) {
  return json{{"deployment", t.deployment},
              {"match", t.match},
              {"challenge", t.challenge},
              {"solution", t.solution},
              {"deployer", t.deployer},
              {"provider", t.provider},
              {"financier", t.financier ? json(*t.financier) : json(nullptr)},
              {"length", t.size()}};
}

}  // namespace

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::Input:
    case ErrorCode::Parse:
    case ErrorCode::Format:
    case ErrorCode::Config: return 400;
    case ErrorCode::NotFound: return 404;
    case ErrorCode::Integrity:
    case ErrorCode::State: return 409;
    case ErrorCode::Validation:
    case ErrorCode::Completeness: return 422;
  }
  return 500;
}

json error_body(const Error& error) {
  return json{{"code", to_string(error.code())},
              {"message", error.what()},
              {"details", error.details()}};
}

struct HttpServer::Impl {
  Service& service;
  HttpConfig config;
  httplib::Server server;
  std::thread thread;
  int bound_port = -1;

  Impl(Service& s, HttpConfig c) : service(s), config(std::move(c)) {
    // SO_REUSEADDR only: the library default (SO_REUSEPORT) would let a second
    // server share the port and split requests between two stores.
    server.set_socket_options([](socket_t sock) {
      int yes = 1;
      setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
    });
    routes();
  }

  using Handler = std::function<void(const httplib::Request&, httplib::Response&)>;

  static Handler guarded(Handler h) {
    return [h = std::move(h)](const httplib::Request& req, httplib::Response& res) {
      try {
        h(req, res);
      } catch (const Error& e) {
        send(res, http_status(e.code()), error_body(e));
      } catch (const std::exception& e) {
        send(res, 500, json{{"code", "internal_error"},
                            {"message", e.what()},
                            {"details", json::array()}});
      }
    };
  }

  void get(const std::string& p, Handler h) { server.Get(p, guarded(std::move(h))); }
  void post(const std::string& p, Handler h) { server.Post(p, guarded(std::move(h))); }
  void put(const std::string& p, Handler h) { server.Put(p, guarded(std::move(h))); }
  void patch(const std::string& p, Handler h) { server.Patch(p, guarded(std::move(h))); }
  void del(const std::string& p, Handler h) { server.Delete(p, guarded(std::move(h))); }

  bool origin_allowed(const std::string& origin) const {
    const auto& list = config.cors_origins;
    return std::find(list.begin(), list.end(), "*") != list.end() ||
           std::find(list.begin(), list.end(), origin) != list.end();
  }

  template <class T>
  void crud(const std::string& kind, EntityKind entity_kind) {
    Store& store = service.store();
    const std::string base = "/v1/" + kind;
    const std::string item = base + "/([^/]+)";
    get(base, [&store](const auto&, auto& res) { send(res, 200, json(store.template all<T>())); });
    get(item, [&store](const auto& req, auto& res) {
      send(res, 200, json(store.template get<T>(req.matches[1].str())));
    });
    post(base, [this, &store, kind](const auto& req, auto& res) {
      json j = parse_body(req);
      complete_entity(j, service, kind);
      const auto id = store.insert(body_as<T>(j));
      send(res, 201, json(store.template get<T>(id)));
    });
    put(item, [this, &store, kind](const auto& req, auto& res) {
      const std::string id = req.matches[1].str();
      json j = parse_body(req);
      complete_entity(j, service, kind);
      if (j["id"] == "") j["id"] = id;
      if (j["id"] != id) {
        throw Error(ErrorCode::Input, "body id " + j["id"].dump() + " does not match path id " + id);
      }
      store.template get<T>(id);
      store.put(body_as<T>(j));
      send(res, 200, json(store.template get<T>(id)));
    });
    del(item, [&store, entity_kind](const auto& req, auto& res) {
      store.remove(entity_kind, req.matches[1].str());
      res.status = 204;
    });
  }

  void routes() {
    Store& store = service.store();

    server.set_pre_routing_handler([this](const httplib::Request& req, httplib::Response& res) {
      const auto origin = req.get_header_value("Origin");
      if (!origin.empty() && origin_allowed(origin)) {
        res.set_header("Access-Control-Allow-Origin", origin);
        res.set_header("Vary", "Origin");
      }
      if (req.method == "OPTIONS") {
        res.set_header("Access-Control-Allow-Methods", "GET, POST, PUT, PATCH, DELETE, OPTIONS");
        res.set_header("Access-Control-Allow-Headers", "Content-Type");
        res.status = 204;
        return httplib::Server::HandlerResponse::Handled;
      }
      return httplib::Server::HandlerResponse::Unhandled;
    });
    server.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
      if (res.status == 404 && res.body.empty()) {
        send(res, 404, error_body(Error(ErrorCode::NotFound, "no route for " + req.method + " " +
                                                                 req.path)));
      }
    });

    get("/v1/health", [&store](const auto&, auto& res) {
      send(res, 200, json{{"status", "ok"}, {"entities", store.size()}});
    });

    crud<Organization>("organizations", EntityKind::Organization);
    crud<Challenge>("challenges", EntityKind::Challenge);
    crud<Solution>("solutions", EntityKind::Solution);

    post("/v1/challenges/([^/]+)/matches", [this](const auto& req, auto& res) {
      const json j = parse_body(req);
      std::optional<WeightVector> weights;
      if (j.contains("weights") && !j["weights"].is_null()) weights = weights_from(j["weights"]);
      int top_k = int_param(req, "top_k", kDefaultTopK);
      if (j.contains("top_k")) top_k = body_as<int>(j["top_k"]);
      send(res, 200, matches_body(service.compute_matches(req.matches[1].str(), weights, top_k)));
    });
    get("/v1/challenges/([^/]+)/matches", [this](const auto& req, auto& res) {
      std::optional<std::string> profile;
      if (req.has_param("profile_id")) profile = req.get_param_value("profile_id");
      send(res, 200, json(service.stored_matches(req.matches[1].str(), profile)));
    });

    get("/v1/profiles", [&store](const auto&, auto& res) {
      send(res, 200, json(store.all<WeightProfile>()));
    });
    get("/v1/profiles/([^/]+)", [&store](const auto& req, auto& res) {
      send(res, 200, json(store.get<WeightProfile>(req.matches[1].str())));
    });
    post("/v1/profiles", [this, &store](const auto& req, auto& res) {
      const auto profile = service.resolve_profile(weights_from(field<json>(parse_body(req), "weights")));
      if (!store.find<WeightProfile>(profile.id)) store.put(profile);
      send(res, 201, json(profile));
    });

    get("/v1/coverage", [this](const auto&, auto& res) { send(res, 200, json(service.coverage())); });

    get("/v1/deployments", [&store](const auto&, auto& res) {
      send(res, 200, json(store.all<Deployment>()));
    });
    get("/v1/deployments/([^/]+)", [&store](const auto& req, auto& res) {
      send(res, 200, json(store.get<Deployment>(req.matches[1].str())));
    });
    post("/v1/deployments", [this](const auto& req, auto& res) {
      const json j = parse_body(req);
      std::optional<std::string> financier;
      if (j.contains("financier_id") && !j["financier_id"].is_null()) {
        financier = body_as<std::string>(j["financier_id"]);
      }
      std::vector<Milestone> milestones;
      if (j.contains("milestones")) milestones = body_as<std::vector<Milestone>>(j["milestones"]);
      send(res, 201,
           json(service.create_deployment(field<std::string>(j, "match_id"), financier,
                                          money_field(j, "committed_usd"), std::move(milestones))));
    });
    del("/v1/deployments/([^/]+)", [&store](const auto& req, auto& res) {
      store.remove(EntityKind::Deployment, req.matches[1].str());
      res.status = 204;
    });
    post("/v1/deployments/([^/]+)/transition", [this](const auto& req, auto& res) {
      const auto to = enum_from_string<DeploymentStatus>(field<std::string>(parse_body(req), "status"));
      send(res, 200, json(service.transition(req.matches[1].str(), to)));
    });
    get("/v1/deployments/([^/]+)/trace", [&store](const auto& req, auto& res) {
      send(res, 200, trace_body(store.trace(req.matches[1].str())));
    });
    get("/v1/deployments/([^/]+)/milestones", [&store](const auto& req, auto& res) {
      send(res, 200, json(store.get<Deployment>(req.matches[1].str()).milestones));
    });
    post("/v1/deployments/([^/]+)/milestones", [this](const auto& req, auto& res) {
      json j = parse_body(req);
      if (j.is_object() && !j.contains("status")) j["status"] = "Pending";
      send(res, 201, json(service.add_milestone(req.matches[1].str(), body_as<Milestone>(j))));
    });
    patch("/v1/deployments/([^/]+)/milestones", [this](const auto& req, auto& res) {
      const json j = parse_body(req);
      const auto status = enum_from_string<MilestoneStatus>(field<std::string>(j, "status"));
      send(res, 200, json(service.set_milestone_status(req.matches[1].str(),
                                                       field<std::string>(j, "name"), status)));
    });

    get("/v1/intake/questions", [this](const auto& req, auto& res) {
      if (!req.has_param("domain")) {
        throw Error(ErrorCode::Input, "query parameter domain is required");
      }
      const auto domain = enum_from_string<Domain>(capitalized(req.get_param_value("domain")));
      send(res, 200, json(service.templates().questions_for(domain)));
    });
    post("/v1/intake/compile", [this](const auto& req, auto& res) {
      const json j = parse_body(req);
      const auto domain = enum_from_string<Domain>(field<std::string>(j, "domain"));
      std::vector<IntakeAnswer> answers;
      if (j.contains("answers")) answers = body_as<std::vector<IntakeAnswer>>(j["answers"]);
      send(res, 200,
           json(service.compile_intake(field<std::string>(j, "deployer_id"), domain, answers)));
    });

    get("/v1/dashboards/([^/]+)/([^/]+)", [this](const auto& req, auto& res) {
      const auto role = enum_from_string<OrgRole>(capitalized(req.matches[1].str()));
      std::optional<double> threshold;
      if (req.has_param("threshold")) {
        try {
          threshold = std::stod(req.get_param_value("threshold"));
        } catch (const std::exception&) {
          throw Error(ErrorCode::Input, "query parameter threshold must be a number");
        }
      }
      send(res, 200, service.dashboard(role, req.matches[2].str(), threshold));
    });
  }
};

HttpServer::HttpServer(Service& service, HttpConfig config)
    : impl_(std::make_unique<Impl>(service, std::move(config))) {}

HttpServer::~HttpServer() {
  stop();
}

int HttpServer::bind() {
  if (impl_->bound_port >= 0) return impl_->bound_port;
  const auto& c = impl_->config;
  if (c.port == 0) {
    impl_->bound_port = impl_->server.bind_to_any_port(c.host);
  } else if (impl_->server.bind_to_port(c.host, c.port)) {
    impl_->bound_port = c.port;
  }
  if (impl_->bound_port < 0) {
    throw Error(ErrorCode::Config,
                "cannot bind " + c.host + ":" + std::to_string(c.port));
  }
  return impl_->bound_port;
}

void HttpServer::listen() {
  bind();
  impl_->server.listen_after_bind();
}

void HttpServer::start() {
  bind();
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
}

void HttpServer::stop() {
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

int HttpServer::port() const { return impl_->bound_port; }

}  // namespace dhub
