#pragma once

#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "dris/corpus.hpp"

namespace dris {

/// Resolves a normalized URL to a page, or nullptr when the target is gone.
using Fetcher = std::function<const Page*(const Url&)>;

struct CrawlError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CrawlResult {
    std::string origin_site;
    std::vector<Page> own_pages;       // BFS order from the site root
    std::vector<Page> external_pages;  // one entry per off-site link occurrence
    std::size_t fetch_count = 0;
    std::size_t bytes_fetched = 0;
    std::size_t dead_links = 0;

    bool operator==(const CrawlResult&) const = default;
};

/// Site-scoped crawl: breadth-first from the root, following only same-host
/// links. Each off-site link fetches its target once per occurrence but the
/// target's own links are never followed. Throws CrawlError when the root
/// is unreachable; dangling links are tallied, not fatal.
CrawlResult crawl_site(const std::string& site_host, const Fetcher& fetcher);

/// One crawl_site per registered host of d, sorted host order.
std::vector<CrawlResult> crawl_domain(const DomainName& d, const Corpus& corpus);

/// DNS hosts of d plus the unregistered hosts in d's address space.
std::set<std::string> scan_addresses(const Corpus& corpus, const DomainName& d);

/// crawl_domain over scan_addresses: every host the scan finds gets crawled.
std::vector<CrawlResult> crawl_scanned(const DomainName& d, const Corpus& corpus);

Fetcher corpus_fetcher(const Corpus& corpus);

}  // namespace dris
