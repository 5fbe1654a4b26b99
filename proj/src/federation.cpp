#include "dris/federation.hpp"

#include <algorithm>
#include <fstream>
#include <future>
#include <sstream>
#include <thread>

namespace dris {

const char* to_string(NodeKind k) {
    switch (k) {
        case NodeKind::layer3: return "layer3";
        case NodeKind::layer2: return "layer2";
        case NodeKind::top: return "top";
    }
    return "layer3";
}

NodeKind node_kind_from(const std::string& s) {
    if (s == "layer3") return NodeKind::layer3;
    if (s == "layer2") return NodeKind::layer2;
    if (s == "top") return NodeKind::top;
    throw RegistryError("unknown node kind \"" + s + "\"");
}

ServiceDescriptor ServiceDescriptor::make(const DomainName& d, std::string endpoint,
                                          NodeKind kind) {
    return ServiceDescriptor{d, d.class_name(), std::move(endpoint), kind};
}

void Registry::register_child(const ServiceDescriptor& desc) {
    if (desc.class_name != desc.domain.class_name()) {
        throw RegistryError("class name \"" + desc.class_name +
                            "\" does not match domain \"" + desc.domain.str() + "\"");
    }
    if (nodes_.count(desc.class_name)) {
        throw RegistryError("domain already registered: " + desc.domain.str());
    }
    nodes_.emplace(desc.class_name, desc);
}

const ServiceDescriptor& Registry::resolve(const std::string& name) const {
    DomainName d;
    if (name.rfind("DRIS.", 0) == 0) {
        // Both spellings start with DRIS.: the class name reverses labels,
        // the endpoint form keeps domain order. Try class form first.
        try {
            d = DomainName::from_class_name(name);
            if (auto it = nodes_.find(d.class_name()); it != nodes_.end()) {
                return it->second;
            }
        } catch (const ParseError&) {
        }
        d = DomainName::parse(name.substr(5));
    } else {
        d = DomainName::parse(name);
    }
    auto it = nodes_.find(d.class_name());
    if (it == nodes_.end()) {
        throw RegistryError("not found: " + name);
    }
    return it->second;
}

bool Registry::contains(const std::string& name) const {
    try {
        resolve(name);
        return true;
    } catch (const RegistryError&) {
        return false;
    } catch (const ParseError&) {
        return false;
    }
}

std::vector<ServiceDescriptor> Registry::descendants(const DomainName& scope) const {
    std::vector<ServiceDescriptor> out;
    for (const auto& [name, desc] : nodes_) {
        if (desc.domain != scope && desc.domain.is_under(scope)) {
            out.push_back(desc);
        }
    }
    return out;
}

std::vector<ServiceDescriptor> Registry::children_of(const DomainName& node) const {
    std::vector<ServiceDescriptor> out;
    for (const auto& desc : descendants(node)) {
        if (desc.domain.level() == node.level() + 1) out.push_back(desc);
    }
    return out;
}

std::vector<ServiceDescriptor> Registry::all() const {
    std::vector<ServiceDescriptor> out;
    for (const auto& [name, desc] : nodes_) out.push_back(desc);
    return out;
}

std::string Registry::serialize() const {
    std::ostringstream out;
    for (const auto& [name, desc] : nodes_) {
        out << name << "\t" << desc.endpoint << "\t" << to_string(desc.kind) << "\n";
    }
    return out.str();
}

Registry Registry::parse(const std::string& text) {
    Registry reg;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto t1 = line.find('\t');
        auto t2 = line.find('\t', t1 + 1);
        if (t1 == std::string::npos || t2 == std::string::npos) {
            throw RegistryError("registry table: bad row \"" + line + "\"");
        }
        std::string class_name = line.substr(0, t1);
        ServiceDescriptor desc;
        desc.domain = DomainName::from_class_name(class_name);
        desc.class_name = class_name;
        desc.endpoint = line.substr(t1 + 1, t2 - t1 - 1);
        desc.kind = node_kind_from(line.substr(t2 + 1));
        reg.register_child(desc);
    }
    return reg;
}

void Registry::save(const std::filesystem::path& file) const {
    std::ofstream out(file, std::ios::binary);
    out << serialize();
}

Registry Registry::load(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw RegistryError("cannot open registry file " + file.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

std::vector<RankedResult> merge_results(
    const std::vector<std::pair<std::string, std::vector<RankedResult>>>& lists) {
    struct Best {
        RankedResult merged;
        int best_score = -1;
        std::string best_db;
    };
    std::map<std::string, Best> by_url;
    for (const auto& [db, results] : lists) {
        std::set<std::string> seen;
        for (const auto& r : results) {
            std::string key = r.url.str();
            if (!seen.insert(key).second) {
                throw std::invalid_argument("database " + db +
                                            " lists url twice: " + key);
            }
            auto& slot = by_url[key];
            if (slot.best_score < 0) {
                slot.merged.url = r.url;
            }
            slot.merged.score += r.score;
            slot.merged.sources.insert(db);
            // title/abstract travel with the strongest copy; ties favor the
            // smallest database id
            bool better = r.score > slot.best_score ||
                          (r.score == slot.best_score && db < slot.best_db);
            if (better) {
                slot.best_score = r.score;
                slot.best_db = db;
                slot.merged.title = r.title;
                slot.merged.abstract = r.abstract;
            }
        }
    }
    std::vector<RankedResult> merged;
    for (auto& [key, slot] : by_url) merged.push_back(std::move(slot.merged));
    std::sort(merged.begin(), merged.end(),
              [](const RankedResult& a, const RankedResult& b) {
                  if (a.score != b.score) return a.score > b.score;
                  return a.url < b.url;
              });
    return merged;
}

FanoutResult fanout_search(const std::vector<std::shared_ptr<SearchClient>>& clients,
                           const std::vector<std::string>& query, int max_results,
                           std::chrono::milliseconds timeout) {
    struct Pending {
        std::string id;
        std::future<std::vector<RankedResult>> future;
    };
    std::vector<Pending> pending;
    for (const auto& client : clients) {
        // promise + detached worker: abandoning a laggard's future must not
        // block past the deadline (std::async futures join on destruction)
        auto promise = std::make_shared<std::promise<std::vector<RankedResult>>>();
        pending.push_back({client->id(), promise->get_future()});
        std::thread([client, query, max_results, promise] {
            try {
                promise->set_value(client->search(query, max_results));
            } catch (...) {
                promise->set_exception(std::current_exception());
            }
        }).detach();
    }
    const auto deadline = std::chrono::steady_clock::now() + timeout;
    std::vector<std::pair<std::string, std::vector<RankedResult>>> gathered;
    std::vector<ChildStatus> status;
    for (auto& p : pending) {
        if (p.future.wait_until(deadline) != std::future_status::ready) {
            status.push_back({p.id, ChildState::timeout, "no reply within deadline"});
            continue;
        }
        try {
            gathered.emplace_back(p.id, p.future.get());
            status.push_back({p.id, ChildState::ok, ""});
        } catch (const std::exception& e) {
            status.push_back({p.id, ChildState::failed, e.what()});
        }
    }
    if (gathered.empty()) {
        throw FederationError("no layer-2 child responded", status);
    }
    FanoutResult out;
    out.results = merge_results(gathered);
    if (out.results.size() > static_cast<std::size_t>(max_results)) {
        out.results.resize(static_cast<std::size_t>(max_results));
    }
    out.child_status = std::move(status);
    return out;
}

}  // namespace dris
