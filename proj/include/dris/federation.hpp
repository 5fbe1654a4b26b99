#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "dris/types.hpp"

namespace dris {

struct RegistryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FederationError : std::runtime_error {
    FederationError(const std::string& what, std::vector<ChildStatus> status)
        : std::runtime_error(what), child_status(std::move(status)) {}
    std::vector<ChildStatus> child_status;
};

enum class NodeKind { layer3, layer2, top };

const char* to_string(NodeKind k);
NodeKind node_kind_from(const std::string& s);

struct ServiceDescriptor {
    DomainName domain;
    std::string class_name;  // = domain.class_name()
    std::string endpoint;
    NodeKind kind = NodeKind::layer3;

    static ServiceDescriptor make(const DomainName& d, std::string endpoint,
                                  NodeKind kind);

    bool operator==(const ServiceDescriptor&) const = default;
};

/// The DRIS class tree: every registered node is addressable by its domain
/// spelling or its reversed class name, and any ancestor can enumerate it.
class Registry {
public:
    /// Throws RegistryError on a duplicate domain or class-name mismatch.
    void register_child(const ServiceDescriptor& desc);

    /// Accepts "hust.edu.cn", "DRIS.hust.edu.cn" or "DRIS.cn.edu.hust".
    const ServiceDescriptor& resolve(const std::string& name) const;
    bool contains(const std::string& name) const;

    /// Registered descriptors strictly under scope, class-name order.
    std::vector<ServiceDescriptor> descendants(const DomainName& scope) const;
    /// Descendants one domain level below the given node.
    std::vector<ServiceDescriptor> children_of(const DomainName& node) const;
    std::vector<ServiceDescriptor> all() const;
    std::size_t size() const { return nodes_.size(); }

    /// Text table: class_name, endpoint, kind. One row per node.
    std::string serialize() const;
    static Registry parse(const std::string& text);
    void save(const std::filesystem::path& file) const;
    static Registry load(const std::filesystem::path& file);

private:
    std::map<std::string, ServiceDescriptor> nodes_;  // class_name -> descriptor
};

/// Groups by URL across databases; page scores are summed, sources unioned,
/// title/abstract taken from the highest-scoring source. Throws
/// std::invalid_argument when one database lists a URL twice.
std::vector<RankedResult> merge_results(
    const std::vector<std::pair<std::string, std::vector<RankedResult>>>& lists);

/// One layer-2 node's search surface, as seen by the top layer.
class SearchClient {
public:
    virtual ~SearchClient() = default;
    virtual std::string id() const = 0;
    /// Throws on transport failure.
    virtual std::vector<RankedResult> search(const std::vector<std::string>& query,
                                             int max_results) = 0;
};

struct FanoutResult {
    std::vector<RankedResult> results;
    std::vector<ChildStatus> child_status;
};

/// Dispatches the query concurrently to every client, joins with a deadline,
/// and merges what arrived. Zero responses is a FederationError carrying the
/// per-child failures.
FanoutResult fanout_search(const std::vector<std::shared_ptr<SearchClient>>& clients,
                           const std::vector<std::string>& query, int max_results,
                           std::chrono::milliseconds timeout);

}  // namespace dris
