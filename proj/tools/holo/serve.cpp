#include "serve.hpp"

#include <httplib.h>

#include <mutex>

namespace holo::cli {
namespace {

using nlohmann::json;

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& message) {
  send_json(res, status, json{{"error", message}});
}

std::size_t query_number(const httplib::Request& req, const char* key, std::size_t fallback) {
  if (!req.has_param(key)) return fallback;
  const std::string text = req.get_param_value(key);
  std::size_t used = 0;
  unsigned long long value = 0;
  try {
    value = std::stoull(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || text[0] == '-') {
    throw DecisionError(400, std::string("query parameter '") + key + "' must be a non-negative integer");
  }
  return static_cast<std::size_t>(value);
}

}  // namespace

CurationServer::CurationServer(CurationState state, std::optional<std::filesystem::path> log)
    : state_(std::move(state)), server_(std::make_unique<httplib::Server>()) {
  if (log) {
    log_.emplace(*log);
    replayed_ = log_->replay(state_);
  }
  routes();
}

CurationServer::~CurationServer() = default;

void CurationServer::routes() {
  auto& s = *server_;
  s.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                         {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                         {"Access-Control-Allow-Headers", "Content-Type"}});
  s.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

  s.Get("/clusters", [this](const httplib::Request& req, httplib::Response& res) {
    try {
      const std::size_t page = query_number(req, "page", 0);
      const std::size_t size = query_number(req, "size", 50);
      if (size < 1 || size > 10000) throw DecisionError(400, "size must be in [1, 10000]");
      std::shared_lock lock(mutex_);
      const auto entries = state_.entries();
      json items = json::array();
      for (std::size_t i = page * size; i < entries.size() && i < (page + 1) * size; ++i) {
        items.push_back(state_.summary(*entries[i]));
      }
      send_json(res, 200, json{{"page", page}, {"size", size}, {"total", entries.size()}, {"clusters", items}});
    } catch (const DecisionError& e) {
      send_error(res, e.status(), e.what());
    }
  });

  s.Get(R"(/clusters/(\d+))", [this](const httplib::Request& req, httplib::Response& res) {
    ClusterId cid = 0;
    try {
      cid = std::stoull(req.matches[1].str());
    } catch (const std::exception&) {
      return send_error(res, 400, "cluster id out of range");
    }
    std::shared_lock lock(mutex_);
    const auto* entry = state_.find(cid);
    if (!entry) return send_error(res, 404, "no cluster with id " + std::to_string(cid));
    send_json(res, 200, state_.detail(*entry));
  });

  s.Get("/meta", [this](const httplib::Request&, httplib::Response& res) {
    std::shared_lock lock(mutex_);
    send_json(res, 200, state_.meta());
  });

  s.Get("/decisions", [this](const httplib::Request&, httplib::Response& res) {
    std::shared_lock lock(mutex_);
    json items = json::array();
    for (const auto& d : state_.decisions()) items.push_back(d.to_json());
    send_json(res, 200, json{{"decisions", items}});
  });

  s.Post("/decisions", [this](const httplib::Request& req, httplib::Response& res) {
    Decision decision;
    try {
      decision = Decision::from_json(json::parse(req.body));
    } catch (const json::exception& e) {
      return send_error(res, 400, std::string("malformed JSON: ") + e.what());
    } catch (const DecisionError& e) {
      return send_error(res, e.status(), e.what());
    }
    std::unique_lock lock(mutex_);
    std::vector<ClusterId> created;
    try {
      created = state_.apply(decision);
    } catch (const DecisionError& e) {
      return send_error(res, e.status(), e.what());
    }
    try {
      if (log_) log_->append(decision);
    } catch (const std::exception& e) {
      return send_error(res, 500, std::string("decision applied but not logged: ") + e.what());
    }
    send_json(res, 201, json{{"decision", decision.to_json()}, {"clusters", created}, {"sequence", state_.decisions().size()}});
  });

  s.Get("/export", [this](const httplib::Request&, httplib::Response& res) {
    std::shared_lock lock(mutex_);
    res.status = 200;
    res.set_content(state_.export_jsonl(), "application/x-ndjson");
  });
}

int CurationServer::bind(const std::string& host, int port) {
  const int bound = port == 0 ? server_->bind_to_any_port(host) : (server_->bind_to_port(host, port) ? port : -1);
  if (bound < 0) throw Error("cannot listen on " + host + ":" + std::to_string(port) + " (port in use?)");
  return bound;
}

void CurationServer::serve() { server_->listen_after_bind(); }

void CurationServer::stop() { server_->stop(); }

}  // namespace holo::cli
