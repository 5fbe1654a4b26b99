#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dris/domain.hpp"
#include "dris/types.hpp"

namespace dris {

struct Page {
    Url url;
    std::string title;
    std::vector<std::string> body;  // lowercase tokens
    std::vector<Url> links;         // normalized, document order
    std::string encoding = "utf-8";
    Timestamp last_modified = 0;

    bool operator==(const Page&) const = default;
};

/// One web server: a host id plus its pages keyed by normalized URL.
struct Site {
    std::string host;
    std::map<std::string, Page> pages;  // normalized url string -> page

    const Page* root() const;

    bool operator==(const Site&) const = default;
};

struct CorpusConfig {
    std::vector<std::string> parent_zones = {"edu.cn"};  // second-level domains
    int domains = 2;          // third-level domains, split round-robin over zones
    int sites_per_domain = 2;
    int pages_per_site = 5;
    int vocab_size = 200;
    int title_tokens = 3;
    int body_tokens = 40;
    double cross_link_prob = 0.3;     // per page, chance of one off-site link
    double unregistered_fraction = 0.0;
    Timestamp base_timestamp = 1'000'000;

    bool operator==(const CorpusConfig&) const = default;
};

/// Immutable after generation; safe to share across concurrent readers.
struct Corpus {
    std::map<std::string, Site> sites;                      // host -> site
    std::map<std::string, std::set<std::string>> dns;       // domain str -> hosts
    std::map<std::string, std::string> unregistered;        // host -> owning domain str

    const Page* find_page(const Url& url) const;
    std::size_t page_count() const;

    /// Registered hosts under d, per DNS.
    std::set<std::string> dns_hosts(const DomainName& d) const;

    /// Third-level (and deeper) domains present in dns, sorted.
    std::vector<std::string> leaf_domains() const;

    bool operator==(const Corpus&) const = default;
};

/// Deterministic function of (config, seed).
Corpus generate_corpus(const CorpusConfig& config, std::uint64_t seed);

/// One page per file plus dns.tsv and unregistered.txt; see docs/formats.md.
std::string serialize_page(const Page& page);
Page parse_page(const std::string& text);
void save_corpus(const Corpus& corpus, const std::filesystem::path& dir);
Corpus load_corpus(const std::filesystem::path& dir);

/// Deterministic pseudo-random source shared by the generator and the
/// harness query workload. splitmix64 core, stable across platforms.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next();
    /// Uniform in [0, n). n > 0.
    std::uint64_t uniform(std::uint64_t n);
    /// Uniform in [0, 1).
    double unit();
    /// Zipf-like rank over [0, n): weight of rank r is 1/(r+1).
    std::uint64_t zipf(std::uint64_t n);

private:
    std::uint64_t state_;
};

}  // namespace dris
