#include "dris/json.hpp"

namespace dris {

void to_json(Json& j, const KeywordScore& k) {
    j = Json{{"term", k.term}, {"score", k.score}};
}

void from_json(const Json& j, KeywordScore& k) {
    j.at("term").get_to(k.term);
    j.at("score").get_to(k.score);
}

void to_json(Json& j, const MetadataRecord& r) {
    j = Json{{"url", r.url.str()},
             {"origin_site", r.origin_site},
             {"title", r.title},
             {"encoding", r.encoding},
             {"abstract", r.abstract},
             {"keywords", r.keywords},
             {"last_modified", r.last_modified}};
}

void from_json(const Json& j, MetadataRecord& r) {
    r.url = Url::parse(j.at("url").get<std::string>());
    j.at("origin_site").get_to(r.origin_site);
    j.at("title").get_to(r.title);
    j.at("encoding").get_to(r.encoding);
    j.at("abstract").get_to(r.abstract);
    j.at("keywords").get_to(r.keywords);
    j.at("last_modified").get_to(r.last_modified);
}

void to_json(Json& j, const RankedResult& r) {
    j = Json{{"url", r.url.str()},
             {"score", r.score},
             {"sources", r.sources},
             {"title", r.title},
             {"abstract", r.abstract}};
}

void from_json(const Json& j, RankedResult& r) {
    r.url = Url::parse(j.at("url").get<std::string>());
    j.at("score").get_to(r.score);
    j.at("sources").get_to(r.sources);
    j.at("title").get_to(r.title);
    j.at("abstract").get_to(r.abstract);
}

void to_json(Json& j, const ChildStatus& s) {
    j = Json{{"node", s.node}, {"status", to_string(s.state)}, {"detail", s.detail}};
}

void from_json(const Json& j, ChildStatus& s) {
    j.at("node").get_to(s.node);
    j.at("detail").get_to(s.detail);
    std::string state = j.at("status").get<std::string>();
    if (state == "ok") s.state = ChildState::ok;
    else if (state == "failed") s.state = ChildState::failed;
    else if (state == "timeout") s.state = ChildState::timeout;
    else throw ParseError("unknown child status \"" + state + "\"");
}

}  // namespace dris
