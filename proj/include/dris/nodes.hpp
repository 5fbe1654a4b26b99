#pragma once

#include <chrono>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "dris/federation.hpp"
#include "dris/harvest2.hpp"
#include "dris/index3.hpp"
#include "dris/spider.hpp"

namespace dris {

/// A third-level domain's search engine: spider + index + export surface.
/// Re-indexing builds a fresh snapshot and swaps it in; readers never see a
/// partial index.
class Layer3Node {
public:
    explicit Layer3Node(DomainName domain, IndexConfig cfg = {})
        : domain_(std::move(domain)), config_(cfg),
          state_(std::make_shared<const State>()) {}

    struct State {
        Layer3Index index;
        std::vector<std::pair<std::string, Page>> external;  // (origin site, page)
        std::size_t crawl_bytes = 0;
        std::size_t dead_links = 0;
    };

    /// Crawls every host the scan finds (or DNS-registered hosts only),
    /// rebuilds the index, swaps the snapshot.
    void crawl_and_index(const Corpus& corpus, bool scan = true,
                         Timestamp built_at = 0);

    const DomainName& domain() const { return domain_; }
    std::shared_ptr<const State> state() const;
    std::size_t crawl_bytes() const { return state()->crawl_bytes; }
    std::size_t dead_links() const { return state()->dead_links; }

    std::vector<RankedResult> search(const std::vector<std::string>& query) const;
    std::vector<MetadataRecord> export_records(std::optional<Timestamp> since) const;

private:
    DomainName domain_;
    IndexConfig config_;
    mutable std::mutex mutex_;  // guards the snapshot pointer swap only
    std::shared_ptr<const State> state_;
};

/// A second-level aggregator: harvests children, serves overlap-ranked
/// search over a consistent store snapshot.
class Layer2Node {
public:
    explicit Layer2Node(DomainName domain, OverlapMode mode = OverlapMode::distinct_sites)
        : domain_(std::move(domain)),
          store_(std::make_shared<const Layer2Store>(domain_, mode)) {}

    void add_child(std::shared_ptr<HarvestEndpoint> child);

    /// One harvest cycle from the current cursors; returns per-child warnings.
    std::vector<std::string> run_harvest();

    const DomainName& domain() const { return domain_; }
    std::shared_ptr<const Layer2Store> store() const;
    std::size_t harvest_bytes() const { return harvest_bytes_; }
    std::vector<std::string> child_ids() const;

    std::vector<RankedResult> search(const std::vector<std::string>& query,
                                     int max_results = 100) const;

private:
    DomainName domain_;
    mutable std::mutex mutex_;
    std::shared_ptr<const Layer2Store> store_;
    std::vector<std::shared_ptr<HarvestEndpoint>> children_;
    std::size_t harvest_bytes_ = 0;
};

/// Live harvest surface of a layer-3 node: always exports the current index,
/// so re-indexing is visible to the next harvest.
class Layer3HarvestEndpoint : public HarvestEndpoint {
public:
    explicit Layer3HarvestEndpoint(std::shared_ptr<const Layer3Node> node)
        : node_(std::move(node)) {}
    std::string id() const override { return node_->domain().str(); }
    std::vector<MetadataRecord> export_metadata(std::optional<Timestamp> since) override {
        return node_->export_records(since);
    }

private:
    std::shared_ptr<const Layer3Node> node_;
};

class Layer2SearchClient : public SearchClient {
public:
    explicit Layer2SearchClient(std::shared_ptr<Layer2Node> node)
        : node_(std::move(node)) {}
    std::string id() const override { return node_->domain().str(); }
    std::vector<RankedResult> search(const std::vector<std::string>& query,
                                     int max_results) override {
        return node_->search(query, max_results);
    }

private:
    std::shared_ptr<Layer2Node> node_;
};

/// The top layer: class-tree registry plus fan-out over layer-2 children.
class TopNode {
public:
    explicit TopNode(DomainName domain) : domain_(std::move(domain)) {}

    void register_service(const ServiceDescriptor& desc,
                          std::shared_ptr<SearchClient> client = nullptr);

    const Registry& registry() const { return registry_; }
    const DomainName& domain() const { return domain_; }

    /// Fan-out to the layer-2 services under scope.
    FanoutResult search(const DomainName& scope, const std::vector<std::string>& query,
                        int max_results, std::chrono::milliseconds timeout) const;

private:
    DomainName domain_;
    Registry registry_;
    std::map<std::string, std::shared_ptr<SearchClient>> clients_;  // class_name ->
    mutable std::mutex mutex_;  // exclusive registration, concurrent search
};

}  // namespace dris
