#include "dris/index3.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "dris/json.hpp"

namespace dris {

std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> tokens;
    std::string cur;
    for (unsigned char c : text) {
        if (std::isalnum(c)) {
            cur.push_back(static_cast<char>(std::tolower(c)));
        } else if (!cur.empty()) {
            tokens.push_back(cur);
            cur.clear();
        }
    }
    if (!cur.empty()) tokens.push_back(cur);
    return tokens;
}

int keyword_score(const Page& page, const std::string& term) {
    int tf_title = 0;
    for (const auto& t : tokenize(page.title)) {
        if (t == term) ++tf_title;
    }
    const std::size_t len = page.body.size();
    const std::size_t front_end = (len + 1) / 2;  // ceil(L/2)
    int tf_front = 0, tf_back = 0;
    for (std::size_t i = 0; i < len; ++i) {
        if (page.body[i] == term) {
            (i < front_end ? tf_front : tf_back)++;
        }
    }
    return 5 * tf_title + 2 * tf_front + 1 * tf_back;
}

MetadataRecord extract_metadata(const Page& page, const IndexConfig& cfg) {
    MetadataRecord rec;
    rec.url = page.url;
    rec.origin_site = page.url.host;
    rec.title = page.title;
    rec.encoding = page.encoding;
    rec.last_modified = page.last_modified;

    std::string abstract;
    const std::size_t limit =
        std::min<std::size_t>(page.body.size(), static_cast<std::size_t>(cfg.abstract_token_limit));
    for (std::size_t i = 0; i < limit; ++i) {
        if (i) abstract.push_back(' ');
        abstract += page.body[i];
    }
    rec.abstract = std::move(abstract);

    std::set<std::string> terms(page.body.begin(), page.body.end());
    for (const auto& t : tokenize(page.title)) terms.insert(t);
    for (const auto& term : terms) {
        int score = keyword_score(page, term);
        if (score > 0) rec.keywords.push_back({term, score});
    }
    std::sort(rec.keywords.begin(), rec.keywords.end(),
              [](const KeywordScore& a, const KeywordScore& b) {
                  if (a.score != b.score) return a.score > b.score;
                  return a.term < b.term;
              });
    if (rec.keywords.size() > static_cast<std::size_t>(cfg.keywords_per_page)) {
        rec.keywords.resize(static_cast<std::size_t>(cfg.keywords_per_page));
    }
    return rec;
}

Layer3Index build_index(const std::vector<Page>& own_pages, const DomainName& d,
                        const IndexConfig& cfg, Timestamp built_at) {
    Layer3Index index;
    index.domain = d;
    index.config = cfg;
    index.built_at = built_at;
    for (const Page& page : own_pages) {
        MetadataRecord rec = extract_metadata(page, cfg);
        std::string key = page.url.str();
        if (!index.records.emplace(key, rec).second) {
            throw std::invalid_argument("duplicate normalized URL: " + key);
        }
        for (const auto& kw : rec.keywords) {
            index.postings[kw.term].push_back({page.url, kw.score});
        }
    }
    for (auto& [term, list] : index.postings) {
        std::sort(list.begin(), list.end(), [](const Posting& a, const Posting& b) {
            if (a.score != b.score) return a.score > b.score;
            return a.url < b.url;
        });
    }
    return index;
}

std::vector<RankedResult> search_l3(const Layer3Index& index,
                                    const std::vector<std::string>& query) {
    if (query.empty()) {
        throw std::invalid_argument("empty query");
    }
    // AND across terms, scores summed per page.
    std::map<std::string, std::pair<Url, int>> acc;  // url -> (url, score)
    bool first = true;
    for (const auto& term : query) {
        auto it = index.postings.find(term);
        std::map<std::string, int> here;
        if (it != index.postings.end()) {
            for (const Posting& p : it->second) here[p.url.str()] = p.score;
        }
        if (first) {
            for (const auto& [u, s] : here) {
                acc.emplace(u, std::make_pair(Url::parse(u), s));
            }
            first = false;
        } else {
            for (auto it2 = acc.begin(); it2 != acc.end();) {
                auto hit = here.find(it2->first);
                if (hit == here.end()) {
                    it2 = acc.erase(it2);
                } else {
                    it2->second.second += hit->second;
                    ++it2;
                }
            }
        }
        if (acc.empty() && !first) break;
    }
    std::vector<RankedResult> results;
    for (const auto& [key, entry] : acc) {
        const MetadataRecord& rec = index.records.at(key);
        RankedResult r;
        r.url = entry.first;
        r.score = entry.second;
        r.sources = {index.domain.str()};
        r.title = rec.title;
        r.abstract = rec.abstract;
        results.push_back(std::move(r));
    }
    std::sort(results.begin(), results.end(),
              [](const RankedResult& a, const RankedResult& b) {
                  if (a.score != b.score) return a.score > b.score;
                  return a.url < b.url;
              });
    if (results.size() > static_cast<std::size_t>(index.config.max_results)) {
        results.resize(static_cast<std::size_t>(index.config.max_results));
    }
    return results;
}

std::vector<MetadataRecord> export_metadata(
    const Layer3Index& index,
    const std::vector<std::pair<std::string, Page>>& external,
    std::optional<Timestamp> since) {
    std::vector<MetadataRecord> out;
    for (const auto& [key, rec] : index.records) out.push_back(rec);
    for (const auto& [origin, page] : external) {
        MetadataRecord rec = extract_metadata(page, index.config);
        rec.origin_site = origin;
        out.push_back(std::move(rec));
    }
    if (since) {
        std::erase_if(out, [&](const MetadataRecord& r) {
            return r.last_modified <= *since;
        });
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const MetadataRecord& a, const MetadataRecord& b) {
                         if (a.url != b.url) return a.url < b.url;
                         return a.origin_site < b.origin_site;
                     });
    return out;
}

std::string serialize_index(const Layer3Index& index) {
    Json j;
    j["format"] = "dris-index/1";
    j["domain"] = index.domain.str();
    j["built_at"] = index.built_at;
    j["config"] = Json{{"abstract_token_limit", index.config.abstract_token_limit},
                       {"keywords_per_page", index.config.keywords_per_page},
                       {"max_results", index.config.max_results}};
    Json records = Json::object();
    for (const auto& [key, rec] : index.records) records[key] = rec;
    j["records"] = std::move(records);
    Json postings = Json::object();
    for (const auto& [term, list] : index.postings) {
        Json arr = Json::array();
        for (const Posting& p : list) {
            arr.push_back(Json{{"url", p.url.str()}, {"score", p.score}});
        }
        postings[term] = std::move(arr);
    }
    j["postings"] = std::move(postings);
    return j.dump(2) + "\n";
}

Layer3Index parse_index(const std::string& text) {
    Json j = Json::parse(text);
    if (j.value("format", "") != "dris-index/1") {
        throw ParseError("index file: unknown format");
    }
    Layer3Index index;
    index.domain = DomainName::parse(j.at("domain").get<std::string>());
    index.built_at = j.at("built_at").get<Timestamp>();
    const Json& cfg = j.at("config");
    index.config.abstract_token_limit = cfg.at("abstract_token_limit").get<int>();
    index.config.keywords_per_page = cfg.at("keywords_per_page").get<int>();
    index.config.max_results = cfg.at("max_results").get<int>();
    for (const auto& [key, val] : j.at("records").items()) {
        index.records.emplace(key, val.get<MetadataRecord>());
    }
    for (const auto& [term, arr] : j.at("postings").items()) {
        std::vector<Posting> list;
        for (const auto& p : arr) {
            list.push_back({Url::parse(p.at("url").get<std::string>()),
                            p.at("score").get<int>()});
        }
        index.postings.emplace(term, std::move(list));
    }
    return index;
}

void save_index(const Layer3Index& index, const std::filesystem::path& file) {
    std::ofstream out(file, std::ios::binary);
    out << serialize_index(index);
}

Layer3Index load_index(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw ParseError("cannot open index file " + file.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_index(buf.str());
}

}  // namespace dris
