#include "dris/nodes.hpp"

#include <algorithm>

namespace dris {

void Layer3Node::crawl_and_index(const Corpus& corpus, bool scan, Timestamp built_at) {
    auto results = scan ? crawl_scanned(domain_, corpus) : crawl_domain(domain_, corpus);
    auto next = std::make_shared<State>();
    std::vector<Page> own;
    for (auto& r : results) {
        next->crawl_bytes += r.bytes_fetched;
        next->dead_links += r.dead_links;
        for (auto& p : r.own_pages) own.push_back(std::move(p));
        for (auto& p : r.external_pages) {
            next->external.emplace_back(r.origin_site, std::move(p));
        }
    }
    next->index = build_index(own, domain_, config_, built_at);
    std::lock_guard lock(mutex_);
    state_ = std::move(next);
}

std::shared_ptr<const Layer3Node::State> Layer3Node::state() const {
    std::lock_guard lock(mutex_);
    return state_;
}

std::vector<RankedResult> Layer3Node::search(
    const std::vector<std::string>& query) const {
    return search_l3(state()->index, query);
}

std::vector<MetadataRecord> Layer3Node::export_records(
    std::optional<Timestamp> since) const {
    auto snap = state();
    return export_metadata(snap->index, snap->external, since);
}

void Layer2Node::add_child(std::shared_ptr<HarvestEndpoint> child) {
    children_.push_back(std::move(child));
}

std::vector<std::string> Layer2Node::run_harvest() {
    Layer2Store next = *store();
    HarvestBatch batch = harvest(children_, next.cursors());
    next.apply(batch);
    std::lock_guard lock(mutex_);
    harvest_bytes_ += batch.bytes;
    store_ = std::make_shared<const Layer2Store>(std::move(next));
    return batch.warnings;
}

std::shared_ptr<const Layer2Store> Layer2Node::store() const {
    std::lock_guard lock(mutex_);
    return store_;
}

std::vector<std::string> Layer2Node::child_ids() const {
    std::vector<std::string> ids;
    for (const auto& c : children_) ids.push_back(c->id());
    return ids;
}

std::vector<RankedResult> Layer2Node::search(const std::vector<std::string>& query,
                                             int max_results) const {
    return search_l2(*store(), query, max_results);
}

void TopNode::register_service(const ServiceDescriptor& desc,
                               std::shared_ptr<SearchClient> client) {
    std::lock_guard lock(mutex_);
    registry_.register_child(desc);
    if (client) clients_.emplace(desc.class_name, std::move(client));
}

FanoutResult TopNode::search(const DomainName& scope,
                             const std::vector<std::string>& query, int max_results,
                             std::chrono::milliseconds timeout) const {
    std::vector<std::shared_ptr<SearchClient>> targets;
    {
        std::lock_guard lock(mutex_);
        auto add_if_layer2 = [&](const ServiceDescriptor& desc) {
            if (desc.kind != NodeKind::layer2) return;
            auto it = clients_.find(desc.class_name);
            if (it != clients_.end()) targets.push_back(it->second);
        };
        // The scope node itself may be a layer-2 service.
        if (registry_.contains(scope.str())) {
            add_if_layer2(registry_.resolve(scope.str()));
        }
        for (const auto& desc : registry_.descendants(scope)) add_if_layer2(desc);
    }
    if (targets.empty()) {
        throw FederationError("no searchable layer-2 service under " + scope.str(), {});
    }
    return fanout_search(targets, query, max_results, timeout);
}

}  // namespace dris
