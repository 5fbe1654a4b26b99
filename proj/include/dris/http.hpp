#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "dris/nodes.hpp"

namespace dris {

struct TransportError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct System;  // harness.hpp

/// Serves one node over loopback HTTP on an ephemeral port. Endpoints match
/// docs/protocol.md: POST /search, GET /metadata?since=, POST /harvest/run,
/// GET /registry, POST /register, depending on the node kind.
class NodeServer {
public:
    NodeServer();
    ~NodeServer();
    NodeServer(NodeServer&&) noexcept;
    NodeServer& operator=(NodeServer&&) noexcept;

    void serve_layer3(std::shared_ptr<Layer3Node> node);
    void serve_layer2(std::shared_ptr<Layer2Node> node);
    void serve_top(std::shared_ptr<TopNode> node);

    /// Binds 127.0.0.1 (any free port, or a fixed one) and starts the
    /// worker thread. Throws TransportError when the port is taken.
    void start(int port = 0);
    void stop();
    int port() const;
    std::string base_url() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// SearchClient over POST /search.
class HttpSearchClient : public SearchClient {
public:
    HttpSearchClient(std::string id, std::string base_url, int timeout_ms = 1000);
    std::string id() const override { return id_; }
    std::vector<RankedResult> search(const std::vector<std::string>& query,
                                     int max_results) override;

private:
    std::string id_;
    std::string base_url_;
    int timeout_ms_;
};

/// HarvestEndpoint over GET /metadata, following truncated pages.
class HttpHarvestEndpoint : public HarvestEndpoint {
public:
    HttpHarvestEndpoint(std::string id, std::string base_url, int timeout_ms = 1000);
    std::string id() const override { return id_; }
    std::vector<MetadataRecord> export_metadata(std::optional<Timestamp> since) override;

private:
    std::string id_;
    std::string base_url_;
    int timeout_ms_;
};

/// Owns loopback servers for a System's layer-2 nodes and a mirror top node
/// whose children talk HTTP instead of calling in-process.
class LoopbackCluster {
public:
    LoopbackCluster() = default;
    ~LoopbackCluster();

    std::shared_ptr<TopNode> mirror_top(const System& sys, const std::string& top_domain,
                                        int timeout_ms = 1000);
    /// Base URL of the server for one layer-2 zone.
    std::string zone_url(const std::string& zone) const;
    void stop_zone(const std::string& zone);
    void stop_all();

private:
    std::map<std::string, std::unique_ptr<NodeServer>> servers_;
};

}  // namespace dris
