#include "dris/spider.hpp"

#include <algorithm>
#include <deque>

namespace dris {

Fetcher corpus_fetcher(const Corpus& corpus) {
    return [&corpus](const Url& url) { return corpus.find_page(url); };
}

CrawlResult crawl_site(const std::string& site_host, const Fetcher& fetcher) {
    CrawlResult result;
    result.origin_site = site_host;
    Url root{site_host, "/"};
    const Page* root_page = fetcher(root);
    if (!root_page) {
        throw CrawlError("site root unreachable: " + root.str());
    }

    std::set<std::string> visited;  // same-host URLs already queued
    std::deque<const Page*> frontier;
    visited.insert(root.str());
    frontier.push_back(root_page);

    while (!frontier.empty()) {
        const Page* page = frontier.front();
        frontier.pop_front();
        result.own_pages.push_back(*page);
        result.bytes_fetched += serialize_page(*page).size();
        ++result.fetch_count;

        for (const Url& link : page->links) {
            if (link.host == site_host) {
                if (visited.insert(link.str()).second) {
                    if (const Page* target = fetcher(link)) {
                        frontier.push_back(target);
                    } else {
                        ++result.dead_links;
                    }
                }
            } else {
                // One-hop external fetch: download the target, follow nothing.
                if (const Page* target = fetcher(link)) {
                    result.external_pages.push_back(*target);
                    result.bytes_fetched += serialize_page(*target).size();
                    ++result.fetch_count;
                } else {
                    ++result.dead_links;
                }
            }
        }
    }
    return result;
}

namespace {

std::vector<CrawlResult> crawl_hosts(const std::set<std::string>& hosts,
                                     const Corpus& corpus) {
    std::vector<CrawlResult> results;
    Fetcher fetch = corpus_fetcher(corpus);
    for (const auto& host : hosts) {  // std::set iterates sorted
        results.push_back(crawl_site(host, fetch));
    }
    return results;
}

}  // namespace

std::vector<CrawlResult> crawl_domain(const DomainName& d, const Corpus& corpus) {
    return crawl_hosts(corpus.dns_hosts(d), corpus);
}

std::set<std::string> scan_addresses(const Corpus& corpus, const DomainName& d) {
    std::set<std::string> hosts = corpus.dns_hosts(d);
    for (const auto& [host, domain] : corpus.unregistered) {
        if (DomainName::parse(domain).is_under(d)) hosts.insert(host);
    }
    return hosts;
}

std::vector<CrawlResult> crawl_scanned(const DomainName& d, const Corpus& corpus) {
    return crawl_hosts(scan_addresses(corpus, d), corpus);
}

}  // namespace dris
