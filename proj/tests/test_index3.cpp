#include <doctest.h>

#include <algorithm>

#include "dris/index3.hpp"
#include "dris/spider.hpp"

using namespace dris;

namespace {

Page make_page(const std::string& url, const std::string& title,
               std::vector<std::string> body, Timestamp ts = 1) {
    Page p;
    p.url = Url::parse(url);
    p.title = title;
    p.body = std::move(body);
    p.last_modified = ts;
    return p;
}

// independent scorer used as the search oracle: recomputes term scores from
// the raw page, with no postings involved
int oracle_score(const Page& p, const std::string& term) {
    int title = 0;
    for (const auto& t : tokenize(p.title)) {
        if (t == term) ++title;
    }
    int front = 0, back = 0;
    std::size_t half = (p.body.size() + 1) / 2;
    for (std::size_t i = 0; i < p.body.size(); ++i) {
        if (p.body[i] == term) (i < half ? front : back)++;
    }
    return 5 * title + 2 * front + back;
}

std::vector<RankedResult> brute_force_search(const std::vector<Page>& pages,
                                             const std::vector<std::string>& query,
                                             const IndexConfig& cfg) {
    std::vector<RankedResult> out;
    for (const auto& p : pages) {
        int sum = 0;
        bool all = true;
        for (const auto& term : query) {
            int s = oracle_score(p, term);
            if (s == 0) {
                all = false;
                break;
            }
            sum += s;
        }
        if (!all) continue;
        RankedResult r;
        r.url = p.url;
        r.score = sum;
        out.push_back(std::move(r));
    }
    std::sort(out.begin(), out.end(), [](const RankedResult& a, const RankedResult& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.url < b.url;
    });
    if (out.size() > static_cast<std::size_t>(cfg.max_results)) {
        out.resize(static_cast<std::size_t>(cfg.max_results));
    }
    return out;
}

}  // namespace

TEST_CASE("tokenize folds case and splits on non-alphanumerics") {
    CHECK(tokenize("Red Fox, red.") == std::vector<std::string>{"red", "fox", "red"});
    CHECK(tokenize("") == std::vector<std::string>{});
    CHECK(tokenize("a1-b2") == std::vector<std::string>{"a1", "b2"});
}

TEST_CASE("keyword_score weighs title, front and back") {
    Page p = make_page("a.x/", "red fox", {"red", "dog", "fox", "red"});
    // title 1, front half (indices 0,1) 1, back half 1
    CHECK(keyword_score(p, "red") == 5 + 2 + 1);
    CHECK(keyword_score(p, "absent") == 0);
    CHECK(keyword_score(p, "dog") == 2);
    CHECK(keyword_score(p, "fox") == 5 + 1);
}

TEST_CASE("moving occurrences to the back half strictly lowers the score") {
    Page front = make_page("a.x/", "", {"hit", "hit", "pad", "pad"});
    Page back = make_page("a.x/", "", {"pad", "pad", "hit", "hit"});
    CHECK(keyword_score(front, "hit") > keyword_score(back, "hit"));
}

TEST_CASE("keyword_score zero iff absent everywhere") {
    Page p = make_page("a.x/", "alpha", {"beta", "gamma"});
    for (const std::string& t : {"alpha", "beta", "gamma"}) {
        CHECK(keyword_score(p, t) > 0);
    }
    CHECK(keyword_score(p, "delta") == 0);
}

TEST_CASE("extract_metadata orders keywords and truncates the abstract") {
    IndexConfig cfg;
    cfg.abstract_token_limit = 2;
    Page p = make_page("a.x/", "red", {"red", "dog", "fox"});
    MetadataRecord rec = extract_metadata(p, cfg);
    CHECK(rec.abstract == "red dog");
    REQUIRE(rec.keywords.size() == 3);
    CHECK(rec.keywords[0].term == "red");    // 5 + 2
    CHECK(rec.keywords[1].term == "dog");    // 2 (front: ceil(3/2)=2)
    CHECK(rec.keywords[2].term == "fox");    // 1
    // equal scores order alphabetically
    Page q = make_page("a.x/p", "", {"bb", "aa", "aa", "bb"});
    MetadataRecord rq = extract_metadata(q, cfg);
    REQUIRE(rq.keywords.size() == 2);
    CHECK(rq.keywords[0].score == rq.keywords[1].score);
    CHECK(rq.keywords[0].term == "aa");
    CHECK(rq.keywords[1].term == "bb");
}

TEST_CASE("empty body still scores title terms") {
    Page p = make_page("a.x/", "red red", {});
    MetadataRecord rec = extract_metadata(p);
    CHECK(rec.abstract == "");
    REQUIRE(rec.keywords.size() == 1);
    CHECK(rec.keywords[0] == KeywordScore{"red", 10});
}

TEST_CASE("keywords cap keeps the highest scoring terms") {
    IndexConfig cfg;
    cfg.keywords_per_page = 2;
    Page p = make_page("a.x/", "top", {"mid", "mid", "low"});
    MetadataRecord rec = extract_metadata(p, cfg);
    REQUIRE(rec.keywords.size() == 2);
    CHECK(rec.keywords[0].term == "top");
    CHECK(rec.keywords[1].term == "mid");
}

TEST_CASE("build_index populates postings deterministically") {
    Page p = make_page("a.x/", "red fox", {"red", "dog", "fox", "red"});
    DomainName d = DomainName::parse("a.x");
    Layer3Index ix = build_index({p}, d);
    REQUIRE(ix.postings.count("red"));
    CHECK(ix.postings.at("red") == std::vector<Posting>{{p.url, 8}});
    CHECK(ix.records.size() == 1);
    CHECK(build_index({}, d).records.empty());
    CHECK(serialize_index(build_index({p}, d)) == serialize_index(ix));
    CHECK_THROWS_AS(build_index({p, p}, d), std::invalid_argument);
}

TEST_CASE("index file round-trips and stays stable") {
    Page p = make_page("a.x/", "red fox", {"red", "dog"});
    Page q = make_page("a.x/p1", "dog", {"fox"});
    Layer3Index ix = build_index({p, q}, DomainName::parse("a.x"), {}, 99);
    std::string bytes = serialize_index(ix);
    CHECK(parse_index(bytes) == ix);
    CHECK(serialize_index(parse_index(bytes)) == bytes);
}

TEST_CASE("single term search equals the postings list") {
    Page a = make_page("a.x/", "red", {"red"});
    Page b = make_page("a.x/p1", "", {"red", "red"});
    Layer3Index ix = build_index({a, b}, DomainName::parse("a.x"));
    auto results = search_l3(ix, {"red"});
    REQUIRE(results.size() == ix.postings.at("red").size());
    for (std::size_t i = 0; i < results.size(); ++i) {
        CHECK(results[i].url == ix.postings.at("red")[i].url);
        CHECK(results[i].score == ix.postings.at("red")[i].score);
    }
}

TEST_CASE("multi-term AND sums scores; absent terms empty the result") {
    Page p = make_page("a.x/", "", {"aa", "bb", "aa", "bb"});
    Layer3Index ix = build_index({p}, DomainName::parse("a.x"));
    auto results = search_l3(ix, {"aa", "bb"});
    REQUIRE(results.size() == 1);
    CHECK(results[0].score == keyword_score(p, "aa") + keyword_score(p, "bb"));
    CHECK(search_l3(ix, {"aa", "zz"}).empty());
    CHECK(search_l3(ix, {"zz"}).empty());
    CHECK_THROWS_AS(search_l3(ix, {}), std::invalid_argument);
}

TEST_CASE("search matches the brute-force oracle on a generated corpus") {
    CorpusConfig cfg;
    cfg.domains = 2;
    cfg.sites_per_domain = 3;
    cfg.pages_per_site = 8;
    cfg.vocab_size = 60;
    Corpus corpus = generate_corpus(cfg, 31);
    DomainName d = DomainName::parse("u0.edu.cn");
    std::vector<Page> own;
    for (const auto& r : crawl_domain(d, corpus)) {
        own.insert(own.end(), r.own_pages.begin(), r.own_pages.end());
    }
    Layer3Index ix = build_index(own, d);
    Rng rng(77);
    for (int q = 0; q < 60; ++q) {
        std::vector<std::string> query;
        int terms = 1 + static_cast<int>(rng.uniform(2));
        for (int t = 0; t < terms; ++t) {
            query.push_back("w" + std::to_string(rng.zipf(60)));
        }
        auto got = search_l3(ix, query);
        auto want = brute_force_search(own, query, ix.config);
        REQUIRE(got.size() == want.size());
        for (std::size_t i = 0; i < got.size(); ++i) {
            CHECK(got[i].url == want[i].url);
            CHECK(got[i].score == want[i].score);
        }
    }
}

TEST_CASE("export_metadata covers own pages plus external occurrences") {
    Page own = make_page("a.x/", "red", {"red"}, 10);
    Page ext = make_page("b.x/p", "blue", {"blue"}, 20);
    Layer3Index ix = build_index({own}, DomainName::parse("a.x"));
    std::vector<std::pair<std::string, Page>> external = {{"a.x", ext}, {"a.x", ext}};

    auto full = export_metadata(ix, external);
    REQUIRE(full.size() == 3);
    CHECK(full[0].url.str() == "a.x/");
    CHECK(full[0].origin_site == "a.x");
    CHECK(full[1].url.str() == "b.x/p");
    CHECK(full[1].origin_site == "a.x");
    CHECK(full[2] == full[1]);

    CHECK(export_metadata(ix, {}).size() == 1);
    CHECK(export_metadata(ix, external, 20).empty());  // cursor exhausts
    auto inc = export_metadata(ix, external, 10);
    CHECK(inc.size() == 2);  // only the newer external occurrences
}

TEST_CASE("incremental export plus the older rest is the full export") {
    CorpusConfig cfg;
    cfg.domains = 1;
    cfg.sites_per_domain = 2;
    cfg.pages_per_site = 5;
    Corpus corpus = generate_corpus(cfg, 41);
    DomainName d = DomainName::parse("u0.edu.cn");
    std::vector<Page> own;
    std::vector<std::pair<std::string, Page>> external;
    for (const auto& r : crawl_domain(d, corpus)) {
        own.insert(own.end(), r.own_pages.begin(), r.own_pages.end());
        for (const auto& p : r.external_pages) external.emplace_back(r.origin_site, p);
    }
    Layer3Index ix = build_index(own, d);
    auto full = export_metadata(ix, external);
    Timestamp cut = full[full.size() / 2].last_modified;
    auto newer = export_metadata(ix, external, cut);
    std::size_t older = 0;
    for (const auto& r : full) {
        if (r.last_modified <= cut) ++older;
    }
    CHECK(newer.size() + older == full.size());
}
