#include "dris/http.hpp"

#include <httplib.h>

#include <algorithm>
#include <thread>
#include <tuple>

#include "dris/harness.hpp"
#include "dris/json.hpp"
#include "dris/protocol.hpp"

namespace dris {

namespace {

void reply_error(httplib::Response& res, int status, const std::string& what) {
    res.status = status;
    res.set_content(Json{{"error", what}}.dump(), "application/json");
}

std::optional<Timestamp> since_param(const httplib::Request& req) {
    if (!req.has_param("since")) return std::nullopt;
    return static_cast<Timestamp>(std::stoll(req.get_param_value("since")));
}

void handle_metadata(const httplib::Request& req, httplib::Response& res,
                     const std::vector<MetadataRecord>& records) {
    protocol::HarvestResponse resp = protocol::page_harvest(records);
    res.set_content(protocol::encode(resp), "application/json");
}

template <typename SearchFn>
void handle_search(const httplib::Request& req, httplib::Response& res,
                   SearchFn&& search) {
    protocol::QueryRequest query;
    try {
        query = protocol::decode_query_request(req.body);
    } catch (const protocol::DecodeError& e) {
        reply_error(res, 400, e.what());
        return;
    }
    auto t0 = std::chrono::steady_clock::now();
    protocol::QueryResponse resp;
    resp.request_id = query.request_id;
    try {
        search(query, resp);
    } catch (const FederationError& e) {
        resp.child_status = e.child_status;
        Json j{{"error", e.what()}, {"child_status", e.child_status}};
        res.status = 502;
        res.set_content(j.dump(), "application/json");
        return;
    } catch (const std::exception& e) {
        reply_error(res, 500, e.what());
        return;
    }
    resp.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
    res.set_content(protocol::encode(resp), "application/json");
}

}  // namespace

struct NodeServer::Impl {
    httplib::Server server;
    std::thread worker;
    int port = -1;
};

NodeServer::NodeServer() : impl_(std::make_unique<Impl>()) {}
NodeServer::NodeServer(NodeServer&&) noexcept = default;
NodeServer& NodeServer::operator=(NodeServer&&) noexcept = default;

NodeServer::~NodeServer() { stop(); }

void NodeServer::serve_layer3(std::shared_ptr<Layer3Node> node) {
    impl_->server.Post("/search", [node](const httplib::Request& req,
                                         httplib::Response& res) {
        handle_search(req, res,
                      [&](const protocol::QueryRequest& q, protocol::QueryResponse& r) {
                          r.results = node->search(q.query);
                          if (r.results.size() > static_cast<std::size_t>(q.max_results)) {
                              r.results.resize(static_cast<std::size_t>(q.max_results));
                          }
                      });
    });
    impl_->server.Get("/metadata", [node](const httplib::Request& req,
                                          httplib::Response& res) {
        handle_metadata(req, res, node->export_records(since_param(req)));
    });
}

void NodeServer::serve_layer2(std::shared_ptr<Layer2Node> node) {
    impl_->server.Post("/search", [node](const httplib::Request& req,
                                         httplib::Response& res) {
        handle_search(req, res,
                      [&](const protocol::QueryRequest& q, protocol::QueryResponse& r) {
                          r.results = node->search(q.query, q.max_results);
                          // Selection and truncation honor the layer-2 keyword
                          // tie-break; the wire contract only knows (score, url).
                          std::sort(r.results.begin(), r.results.end(),
                                    [](const RankedResult& a, const RankedResult& b) {
                                        if (a.score != b.score) return a.score > b.score;
                                        return a.url < b.url;
                                    });
                      });
    });
    impl_->server.Get("/metadata", [node](const httplib::Request& req,
                                          httplib::Response& res) {
        // retained records with overlap_score attached, for a deeper hierarchy
        auto since = since_param(req);
        std::vector<MetadataRecord> records;
        Json overlaps = Json::object();
        for (const auto& entry : node->store()->export_overlap(since)) {
            overlaps[entry.record.url.str()] = entry.overlap_score;
            records.push_back(entry.record);
        }
        protocol::HarvestResponse resp = protocol::page_harvest(records);
        Json j = Json::parse(protocol::encode(resp));
        j["overlap_scores"] = std::move(overlaps);
        res.set_content(j.dump(), "application/json");
    });
    impl_->server.Post("/harvest/run", [node](const httplib::Request& req,
                                              httplib::Response& res) {
        try {
            auto warnings = node->run_harvest();
            res.set_content(Json{{"warnings", warnings}}.dump(), "application/json");
        } catch (const std::exception& e) {
            reply_error(res, 502, e.what());
        }
    });
}

void NodeServer::serve_top(std::shared_ptr<TopNode> node) {
    impl_->server.Post("/search", [node](const httplib::Request& req,
                                         httplib::Response& res) {
        handle_search(req, res,
                      [&](const protocol::QueryRequest& q, protocol::QueryResponse& r) {
                          DomainName scope = q.scope ? DomainName::parse(*q.scope)
                                                     : node->domain();
                          auto out = node->search(scope, q.query, q.max_results,
                                                  std::chrono::milliseconds(2000));
                          r.results = std::move(out.results);
                          r.child_status = std::move(out.child_status);
                      });
    });
    impl_->server.Get("/registry", [node](const httplib::Request& req,
                                          httplib::Response& res) {
        res.set_content(node->registry().serialize(), "text/tab-separated-values");
    });
    impl_->server.Post("/register", [node](const httplib::Request& req,
                                           httplib::Response& res) {
        try {
            Json j = Json::parse(req.body);
            ServiceDescriptor desc;
            desc.domain = DomainName::parse(j.at("domain").get<std::string>());
            desc.class_name = j.value("class_name", desc.domain.class_name());
            desc.endpoint = j.at("endpoint").get<std::string>();
            desc.kind = node_kind_from(j.at("kind").get<std::string>());
            std::shared_ptr<SearchClient> client;
            if (desc.kind == NodeKind::layer2 && desc.endpoint.rfind("http", 0) == 0) {
                client = std::make_shared<HttpSearchClient>(desc.domain.str(),
                                                            desc.endpoint);
            }
            node->register_service(desc, std::move(client));
            res.set_content(Json{{"registered", desc.class_name}}.dump(),
                            "application/json");
        } catch (const std::exception& e) {
            reply_error(res, 400, e.what());
        }
    });
}

void NodeServer::start(int port) {
    if (port > 0) {
        if (!impl_->server.bind_to_port("127.0.0.1", port)) {
            throw TransportError("cannot bind 127.0.0.1:" + std::to_string(port));
        }
        impl_->port = port;
    } else {
        impl_->port = impl_->server.bind_to_any_port("127.0.0.1");
    }
    if (impl_->port <= 0) throw TransportError("cannot bind loopback port");
    impl_->worker = std::thread([this] { impl_->server.listen_after_bind(); });
    impl_->server.wait_until_ready();
}

void NodeServer::stop() {
    if (!impl_) return;
    if (impl_->worker.joinable()) {
        impl_->server.stop();
        impl_->worker.join();
    }
}

int NodeServer::port() const { return impl_->port; }

std::string NodeServer::base_url() const {
    return "http://127.0.0.1:" + std::to_string(impl_->port);
}

namespace {

httplib::Client make_client(const std::string& base_url, int timeout_ms) {
    httplib::Client client(base_url);
    client.set_connection_timeout(0, timeout_ms * 1000);
    client.set_read_timeout(timeout_ms / 1000, (timeout_ms % 1000) * 1000);
    return client;
}

}  // namespace

HttpSearchClient::HttpSearchClient(std::string id, std::string base_url, int timeout_ms)
    : id_(std::move(id)), base_url_(std::move(base_url)), timeout_ms_(timeout_ms) {}

std::vector<RankedResult> HttpSearchClient::search(
    const std::vector<std::string>& query, int max_results) {
    protocol::QueryRequest req;
    req.request_id = "fanout-" + id_;
    req.query = query;
    req.max_results = max_results;
    auto client = make_client(base_url_, timeout_ms_);
    auto res = client.Post("/search", protocol::encode(req), "application/json");
    if (!res) {
        throw TransportError(id_ + ": " + httplib::to_string(res.error()));
    }
    if (res->status != 200) {
        throw TransportError(id_ + ": HTTP " + std::to_string(res->status));
    }
    return protocol::decode_query_response(res->body).results;
}

HttpHarvestEndpoint::HttpHarvestEndpoint(std::string id, std::string base_url,
                                         int timeout_ms)
    : id_(std::move(id)), base_url_(std::move(base_url)), timeout_ms_(timeout_ms) {}

std::vector<MetadataRecord> HttpHarvestEndpoint::export_metadata(
    std::optional<Timestamp> since) {
    std::vector<MetadataRecord> out;
    auto client = make_client(base_url_, timeout_ms_);
    std::optional<Timestamp> cursor = since;
    for (;;) {
        std::string path = "/metadata";
        if (cursor) path += "?since=" + std::to_string(*cursor);
        auto res = client.Get(path);
        if (!res) throw TransportError(id_ + ": " + httplib::to_string(res.error()));
        if (res->status != 200) {
            throw TransportError(id_ + ": HTTP " + std::to_string(res->status));
        }
        protocol::HarvestResponse page = protocol::decode_harvest_response(res->body);
        out.insert(out.end(), page.records.begin(), page.records.end());
        if (!page.truncated) break;
        cursor = page.max_timestamp;
    }
    // Pages arrive in timestamp order; restore the export contract's order.
    std::sort(out.begin(), out.end(),
              [](const MetadataRecord& a, const MetadataRecord& b) {
                  return std::tie(a.url, a.origin_site) < std::tie(b.url, b.origin_site);
              });
    return out;
}

LoopbackCluster::~LoopbackCluster() { stop_all(); }

std::shared_ptr<TopNode> LoopbackCluster::mirror_top(const System& sys,
                                                     const std::string& top_domain,
                                                     int timeout_ms) {
    auto top = std::make_shared<TopNode>(DomainName::parse(top_domain));
    top->register_service(ServiceDescriptor::make(DomainName::parse(top_domain),
                                                  "inproc://" + top_domain,
                                                  NodeKind::top));
    for (const auto& [zone, node] : sys.layer2) {
        auto server = std::make_unique<NodeServer>();
        server->serve_layer2(node);
        server->start();
        std::string url = server->base_url();
        servers_.emplace(zone, std::move(server));
        top->register_service(
            ServiceDescriptor::make(node->domain(), url, NodeKind::layer2),
            std::make_shared<HttpSearchClient>(zone, url, timeout_ms));
    }
    for (const auto& [leaf, node] : sys.layer3) {
        top->register_service(ServiceDescriptor::make(node->domain(),
                                                      "inproc://" + leaf,
                                                      NodeKind::layer3));
    }
    return top;
}

std::string LoopbackCluster::zone_url(const std::string& zone) const {
    return servers_.at(zone)->base_url();
}

void LoopbackCluster::stop_zone(const std::string& zone) {
    if (auto it = servers_.find(zone); it != servers_.end()) {
        it->second->stop();
        servers_.erase(it);
    }
}

void LoopbackCluster::stop_all() { servers_.clear(); }

}  // namespace dris
