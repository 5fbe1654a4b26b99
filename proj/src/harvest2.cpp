#include "dris/harvest2.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "dris/json.hpp"

namespace dris {

HarvestBatch harvest(const std::vector<std::shared_ptr<HarvestEndpoint>>& children,
                     const std::map<std::string, Timestamp>& cursors) {
    HarvestBatch batch;
    batch.cursors = cursors;
    std::size_t reachable = 0;
    for (const auto& child : children) {
        std::optional<Timestamp> since;
        if (auto it = cursors.find(child->id()); it != cursors.end()) {
            since = it->second;
        }
        std::vector<MetadataRecord> records;
        try {
            records = child->export_metadata(since);
        } catch (const std::exception& e) {
            batch.warnings.push_back(child->id() + ": " + e.what());
            continue;
        }
        ++reachable;
        Timestamp max_ts = since.value_or(0);
        for (auto& rec : records) {
            max_ts = std::max(max_ts, rec.last_modified);
            batch.bytes += Json(rec).dump().size();
            batch.records.push_back(std::move(rec));
        }
        if (max_ts > 0) batch.cursors[child->id()] = max_ts;
    }
    if (reachable == 0 && !children.empty()) {
        std::string detail;
        for (const auto& w : batch.warnings) detail += " [" + w + "]";
        throw HarvestError("all children unreachable:" + detail);
    }
    return batch;
}

namespace {

// overlap per the chosen mode; own-site copies never count
int overlap_of(const std::string& page_host,
               const std::map<std::string, std::pair<MetadataRecord, int>>& by_origin,
               OverlapMode mode) {
    int n = 0;
    for (const auto& [origin, entry] : by_origin) {
        if (origin == page_host) continue;
        n += (mode == OverlapMode::distinct_sites) ? 1 : entry.second;
    }
    return n;
}

MetadataRecord pick_retained(
    const std::string& page_host,
    const std::map<std::string, std::pair<MetadataRecord, int>>& by_origin) {
    if (auto it = by_origin.find(page_host); it != by_origin.end()) {
        return it->second.first;
    }
    return by_origin.begin()->second.first;  // smallest origin, map order
}

}  // namespace

std::vector<OverlapRecord> dedupe_overlap(const std::vector<MetadataRecord>& records,
                                          OverlapMode mode) {
    std::map<std::string, std::map<std::string, std::pair<MetadataRecord, int>>> groups;
    for (const auto& rec : records) {
        auto& slot = groups[rec.url.str()][rec.origin_site];
        if (slot.second == 0 || rec.last_modified >= slot.first.last_modified) {
            slot.first = rec;
        }
        slot.second += 1;
    }
    std::vector<OverlapRecord> out;
    for (const auto& [key, by_origin] : groups) {
        OverlapRecord entry;
        const std::string page_host = Url::parse(key).host;
        entry.record = pick_retained(page_host, by_origin);
        entry.overlap_score = overlap_of(page_host, by_origin, mode);
        for (const auto& [origin, slot] : by_origin) {
            entry.seen_from.insert(origin);
            entry.occurrences += slot.second;
        }
        out.push_back(std::move(entry));
    }
    return out;
}

void Layer2Store::apply(const HarvestBatch& batch) {
    for (const auto& rec : batch.records) {
        auto& slot = copies_[rec.url.str()][rec.origin_site];
        if (slot.second == 0 || rec.last_modified >= slot.first.last_modified) {
            slot.first = rec;
        }
        slot.second += 1;
    }
    for (const auto& [child, ts] : batch.cursors) {
        auto it = cursors_.find(child);
        if (it == cursors_.end() || ts > it->second) cursors_[child] = ts;
    }
}

std::optional<Timestamp> Layer2Store::cursor_for(const std::string& child) const {
    auto it = cursors_.find(child);
    if (it == cursors_.end()) return std::nullopt;
    return it->second;
}

OverlapRecord Layer2Store::collapse(const std::string& key) const {
    const auto& by_origin = copies_.at(key);
    OverlapRecord entry;
    const std::string page_host = Url::parse(key).host;
    entry.record = pick_retained(page_host, by_origin);
    entry.overlap_score = overlap_of(page_host, by_origin, mode_);
    for (const auto& [origin, slot] : by_origin) {
        entry.seen_from.insert(origin);
        entry.occurrences += slot.second;
    }
    return entry;
}

std::vector<OverlapRecord> Layer2Store::entries() const {
    std::vector<OverlapRecord> out;
    for (const auto& [key, by_origin] : copies_) out.push_back(collapse(key));
    return out;
}

std::optional<OverlapRecord> Layer2Store::entry(const Url& url) const {
    if (!copies_.count(url.str())) return std::nullopt;
    return collapse(url.str());
}

std::size_t Layer2Store::size() const { return copies_.size(); }

std::vector<OverlapRecord> Layer2Store::export_overlap(
    std::optional<Timestamp> since) const {
    std::vector<OverlapRecord> out;
    for (const auto& [key, by_origin] : copies_) {
        OverlapRecord entry = collapse(key);
        if (since && entry.record.last_modified <= *since) continue;
        out.push_back(std::move(entry));
    }
    return out;
}

std::vector<RankedResult> search_l2(const Layer2Store& store,
                                    const std::vector<std::string>& query,
                                    int max_results) {
    if (query.empty()) {
        throw std::invalid_argument("empty query");
    }
    struct Candidate {
        OverlapRecord entry;
        int keyword_sum = 0;
    };
    std::vector<Candidate> candidates;
    for (auto& entry : store.entries()) {
        int sum = 0;
        bool all = true;
        for (const auto& term : query) {
            auto it = std::find_if(entry.record.keywords.begin(),
                                   entry.record.keywords.end(),
                                   [&](const KeywordScore& k) { return k.term == term; });
            if (it == entry.record.keywords.end()) {
                all = false;
                break;
            }
            sum += it->score;
        }
        if (all) candidates.push_back({std::move(entry), sum});
    }
    std::sort(candidates.begin(), candidates.end(),
              [](const Candidate& a, const Candidate& b) {
                  if (a.entry.overlap_score != b.entry.overlap_score)
                      return a.entry.overlap_score > b.entry.overlap_score;
                  if (a.keyword_sum != b.keyword_sum) return a.keyword_sum > b.keyword_sum;
                  return a.entry.record.url < b.entry.record.url;
              });
    std::vector<RankedResult> results;
    for (const auto& c : candidates) {
        if (results.size() >= static_cast<std::size_t>(max_results)) break;
        RankedResult r;
        r.url = c.entry.record.url;
        r.score = c.entry.overlap_score;
        r.sources = {c.entry.record.origin_site};
        r.title = c.entry.record.title;
        r.abstract = c.entry.record.abstract;
        results.push_back(std::move(r));
    }
    return results;
}

std::vector<MetadataRecord> IndexEndpoint::export_metadata(
    std::optional<Timestamp> since) {
    return dris::export_metadata(index_, external_, since);
}

std::string Layer2Store::serialize() const {
    Json j;
    j["format"] = "dris-store/1";
    j["domain"] = domain_.str();
    j["overlap_mode"] = mode_ == OverlapMode::distinct_sites ? "distinct_sites"
                                                             : "occurrences";
    j["cursors"] = cursors_;
    Json copies = Json::object();
    for (const auto& [key, by_origin] : copies_) {
        Json origins = Json::object();
        for (const auto& [origin, slot] : by_origin) {
            origins[origin] = Json{{"record", slot.first}, {"count", slot.second}};
        }
        copies[key] = std::move(origins);
    }
    j["copies"] = std::move(copies);
    return j.dump(2) + "\n";
}

Layer2Store Layer2Store::parse(const std::string& text) {
    Json j = Json::parse(text);
    if (j.value("format", "") != "dris-store/1") {
        throw ParseError("store file: unknown format");
    }
    Layer2Store store;
    store.domain_ = DomainName::parse(j.at("domain").get<std::string>());
    store.mode_ = j.at("overlap_mode").get<std::string>() == "occurrences"
                      ? OverlapMode::occurrences
                      : OverlapMode::distinct_sites;
    store.cursors_ = j.at("cursors").get<std::map<std::string, Timestamp>>();
    for (const auto& [key, origins] : j.at("copies").items()) {
        for (const auto& [origin, slot] : origins.items()) {
            store.copies_[key][origin] = {slot.at("record").get<MetadataRecord>(),
                                          slot.at("count").get<int>()};
        }
    }
    return store;
}

void Layer2Store::save(const std::filesystem::path& file) const {
    std::ofstream out(file, std::ios::binary);
    out << serialize();
}

Layer2Store Layer2Store::load(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw ParseError("cannot open store file " + file.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

}  // namespace dris
