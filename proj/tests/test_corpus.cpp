#include <doctest.h>

#include <deque>
#include <filesystem>
#include <set>

#include "dris/corpus.hpp"

using namespace dris;

namespace {

std::uint64_t fnv1a(const std::string& data) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string corpus_bytes(const Corpus& corpus) {
    std::string out;
    for (const auto& [host, site] : corpus.sites) {
        for (const auto& [url, page] : site.pages) out += serialize_page(page);
    }
    for (const auto& [domain, hosts] : corpus.dns) {
        out += domain + "=";
        for (const auto& h : hosts) out += h + ",";
        out += "\n";
    }
    for (const auto& [host, domain] : corpus.unregistered) {
        out += host + ">" + domain + "\n";
    }
    return out;
}

CorpusConfig small_config() {
    CorpusConfig cfg;
    cfg.domains = 2;
    cfg.sites_per_domain = 2;
    cfg.pages_per_site = 3;
    cfg.vocab_size = 50;
    return cfg;
}

}  // namespace

TEST_CASE("generation is deterministic and counts match") {
    CorpusConfig cfg = small_config();
    Corpus a = generate_corpus(cfg, 7);
    Corpus b = generate_corpus(cfg, 7);
    CHECK(a == b);
    CHECK(corpus_bytes(a) == corpus_bytes(b));
    CHECK(a.page_count() == 12);
    CHECK(a.sites.size() == 4);
    Corpus c = generate_corpus(cfg, 8);
    CHECK(corpus_bytes(a) != corpus_bytes(c));
}

TEST_CASE("generated corpus bytes stay frozen") {
    // golden hash: regenerating this corpus must stay byte-identical
    Corpus a = generate_corpus(small_config(), 7);
    INFO("hash=", fnv1a(corpus_bytes(a)));
    CHECK(fnv1a(corpus_bytes(a)) == 11409865847117700725ULL);
}

TEST_CASE("zero counts are rejected") {
    CorpusConfig cfg = small_config();
    cfg.pages_per_site = 0;
    CHECK_THROWS_AS(generate_corpus(cfg, 1), std::invalid_argument);
}

TEST_CASE("cross link probability zero keeps every link on-site") {
    CorpusConfig cfg = small_config();
    cfg.cross_link_prob = 0.0;
    Corpus corpus = generate_corpus(cfg, 3);
    for (const auto& [host, site] : corpus.sites) {
        for (const auto& [url, page] : site.pages) {
            for (const auto& link : page.links) CHECK(link.host == host);
        }
    }
}

TEST_CASE("unregistered fraction 0.5 over 4 sites hides exactly 2 hosts") {
    CorpusConfig cfg = small_config();
    cfg.unregistered_fraction = 0.5;
    Corpus corpus = generate_corpus(cfg, 9);
    CHECK(corpus.unregistered.size() == 2);
    std::set<std::string> registered;
    for (const auto& [domain, hosts] : corpus.dns) {
        registered.insert(hosts.begin(), hosts.end());
    }
    CHECK(registered.size() == 2);
    for (const auto& [host, domain] : corpus.unregistered) {
        CHECK_FALSE(registered.count(host));
    }
}

TEST_CASE("every page is reachable from its site root") {
    CorpusConfig cfg = small_config();
    cfg.pages_per_site = 12;
    Corpus corpus = generate_corpus(cfg, 21);
    for (const auto& [host, site] : corpus.sites) {
        REQUIRE(site.root() != nullptr);
        std::set<std::string> seen{site.root()->url.str()};
        std::deque<const Page*> frontier{site.root()};
        while (!frontier.empty()) {
            const Page* p = frontier.front();
            frontier.pop_front();
            for (const auto& link : p->links) {
                if (link.host != host) continue;
                if (seen.insert(link.str()).second) {
                    auto it = site.pages.find(link.str());
                    REQUIRE(it != site.pages.end());
                    frontier.push_back(&it->second);
                }
            }
        }
        CHECK(seen.size() == site.pages.size());
    }
}

TEST_CASE("dns covers registered hosts under a domain") {
    Corpus corpus = generate_corpus(small_config(), 7);
    DomainName zone = DomainName::parse("edu.cn");
    auto hosts = corpus.dns_hosts(zone);
    CHECK(hosts.size() == 4);
    for (const auto& h : hosts) {
        CHECK(DomainName::parse(h).is_under(zone));
    }
    CHECK(corpus.dns_hosts(DomainName::parse("u0.edu.cn")).size() == 2);
}

TEST_CASE("corpus directory round-trips") {
    CorpusConfig cfg = small_config();
    cfg.unregistered_fraction = 0.25;
    Corpus corpus = generate_corpus(cfg, 5);
    auto dir = std::filesystem::temp_directory_path() / "dris_corpus_test";
    std::filesystem::remove_all(dir);
    save_corpus(corpus, dir);
    Corpus loaded = load_corpus(dir);
    CHECK(loaded == corpus);
    std::filesystem::remove_all(dir);
}

TEST_CASE("page file round-trips") {
    Page p;
    p.url = Url::parse("a.b/p1");
    p.title = "red fox";
    p.body = {"red", "dog"};
    p.links = {Url::parse("a.b/"), Url::parse("c.d/x")};
    p.encoding = "gb2312";
    p.last_modified = 42;
    CHECK(parse_page(serialize_page(p)) == p);
    Page empty;
    empty.url = Url::parse("a.b/");
    CHECK(parse_page(serialize_page(empty)) == empty);
}
