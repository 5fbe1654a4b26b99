#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dris/corpus.hpp"
#include "dris/types.hpp"

namespace dris {

struct IndexConfig {
    int abstract_token_limit = 30;
    int keywords_per_page = 50;
    int max_results = 100;

    bool operator==(const IndexConfig&) const = default;
};

struct Posting {
    Url url;
    int score = 0;

    bool operator==(const Posting&) const = default;
};

/// Immutable once built; serves concurrent searches.
struct Layer3Index {
    DomainName domain;
    IndexConfig config;
    Timestamp built_at = 0;
    std::map<std::string, std::vector<Posting>> postings;  // term -> (score desc, url asc)
    std::map<std::string, MetadataRecord> records;         // url string -> record

    bool operator==(const Layer3Index&) const = default;
};

/// Lowercase, split on non-alphanumeric runs, empties dropped.
std::vector<std::string> tokenize(const std::string& text);

/// 5*tf_title + 2*tf_front + 1*tf_back; front half is body index < ceil(L/2).
int keyword_score(const Page& page, const std::string& term);

MetadataRecord extract_metadata(const Page& page, const IndexConfig& cfg = {});

/// Throws std::invalid_argument on duplicate normalized URLs.
Layer3Index build_index(const std::vector<Page>& own_pages, const DomainName& d,
                        const IndexConfig& cfg = {}, Timestamp built_at = 0);

/// AND semantics, score = sum of per-term keyword scores, (score desc, url asc),
/// truncated to max_results. Throws std::invalid_argument on an empty query.
std::vector<RankedResult> search_l3(const Layer3Index& index,
                                    const std::vector<std::string>& query);

/// One record per own page plus one per external occurrence (origin_site =
/// the crawling site); filtered to last_modified > since; (url asc, origin asc).
std::vector<MetadataRecord> export_metadata(
    const Layer3Index& index,
    const std::vector<std::pair<std::string, Page>>& external,  // (origin site, page)
    std::optional<Timestamp> since = std::nullopt);

std::string serialize_index(const Layer3Index& index);
Layer3Index parse_index(const std::string& text);
void save_index(const Layer3Index& index, const std::filesystem::path& file);
Layer3Index load_index(const std::filesystem::path& file);

}  // namespace dris
