#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dris/index3.hpp"
#include "dris/types.hpp"

namespace dris {

struct HarvestError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A child layer-3 node's metadata-export surface.
class HarvestEndpoint {
public:
    virtual ~HarvestEndpoint() = default;
    virtual std::string id() const = 0;
    /// Records with last_modified > since. Throws on transport failure.
    virtual std::vector<MetadataRecord> export_metadata(
        std::optional<Timestamp> since) = 0;
};

struct HarvestBatch {
    std::vector<MetadataRecord> records;      // concatenated child exports
    std::map<std::string, Timestamp> cursors; // advanced per-child cursors
    std::vector<std::string> warnings;        // one per failed child
    std::size_t bytes = 0;                    // serialized size of the transfer
};

/// Pulls export_metadata(since=cursor) from every child. Failed children are
/// skipped with a warning; all children failing is a HarvestError.
HarvestBatch harvest(const std::vector<std::shared_ptr<HarvestEndpoint>>& children,
                     const std::map<std::string, Timestamp>& cursors);

struct OverlapRecord {
    MetadataRecord record;             // retained authoritative copy
    int overlap_score = 0;             // distinct other sites pointing here
    std::set<std::string> seen_from;   // origin sites delivering a copy
    int occurrences = 0;               // raw copy count, diagnostics only

    bool operator==(const OverlapRecord&) const = default;
};

enum class OverlapMode { distinct_sites, occurrences };

/// Groups records by URL and counts distinct other origin sites. Retains the
/// page's own-site copy when present, else the copy from the smallest origin.
std::vector<OverlapRecord> dedupe_overlap(const std::vector<MetadataRecord>& records,
                                          OverlapMode mode = OverlapMode::distinct_sites);

class Layer2Store {
public:
    Layer2Store() = default;
    explicit Layer2Store(DomainName domain, OverlapMode mode = OverlapMode::distinct_sites)
        : domain_(std::move(domain)), mode_(mode) {}

    /// Merges one harvest batch: copies are remembered per (url, origin) so
    /// incremental harvests refine rather than reset overlap counts.
    void apply(const HarvestBatch& batch);

    const DomainName& domain() const { return domain_; }
    const std::map<std::string, Timestamp>& cursors() const { return cursors_; }
    std::optional<Timestamp> cursor_for(const std::string& child) const;

    /// Current entries, url ascending.
    std::vector<OverlapRecord> entries() const;
    std::optional<OverlapRecord> entry(const Url& url) const;
    std::size_t size() const;

    /// Re-export for a deeper hierarchy: retained records with their overlap
    /// scores, filtered to last_modified > since.
    std::vector<OverlapRecord> export_overlap(std::optional<Timestamp> since) const;

    std::string serialize() const;
    static Layer2Store parse(const std::string& text);
    void save(const std::filesystem::path& file) const;
    static Layer2Store load(const std::filesystem::path& file);

    bool operator==(const Layer2Store&) const = default;

private:
    DomainName domain_;
    OverlapMode mode_ = OverlapMode::distinct_sites;
    // url -> origin site -> latest record from that origin (+ copy count)
    std::map<std::string, std::map<std::string, std::pair<MetadataRecord, int>>> copies_;
    std::map<std::string, Timestamp> cursors_;

    OverlapRecord collapse(const std::string& key) const;
};

/// Candidates hold every query term in their retained keywords; ordered by
/// (overlap desc, keyword-score sum desc, url asc); score = overlap.
std::vector<RankedResult> search_l2(const Layer2Store& store,
                                    const std::vector<std::string>& query,
                                    int max_results = 100);

/// In-process endpoint over a layer-3 index plus its crawl's external pages.
class IndexEndpoint : public HarvestEndpoint {
public:
    IndexEndpoint(std::string id, Layer3Index index,
                  std::vector<std::pair<std::string, Page>> external)
        : id_(std::move(id)), index_(std::move(index)), external_(std::move(external)) {}

    std::string id() const override { return id_; }
    std::vector<MetadataRecord> export_metadata(std::optional<Timestamp> since) override;

private:
    std::string id_;
    Layer3Index index_;
    std::vector<std::pair<std::string, Page>> external_;
};

}  // namespace dris
