#include "dris/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace dris {

const Page* Site::root() const {
    auto it = pages.find(host + "/");
    return it == pages.end() ? nullptr : &it->second;
}

const Page* Corpus::find_page(const Url& url) const {
    auto site = sites.find(url.host);
    if (site == sites.end()) return nullptr;
    auto page = site->second.pages.find(url.str());
    return page == site->second.pages.end() ? nullptr : &page->second;
}

std::size_t Corpus::page_count() const {
    std::size_t n = 0;
    for (const auto& [host, site] : sites) n += site.pages.size();
    return n;
}

std::set<std::string> Corpus::dns_hosts(const DomainName& d) const {
    std::set<std::string> out;
    for (const auto& [name, hosts] : dns) {
        if (DomainName::parse(name).is_under(d)) {
            out.insert(hosts.begin(), hosts.end());
        }
    }
    return out;
}

std::vector<std::string> Corpus::leaf_domains() const {
    std::vector<std::string> out;
    for (const auto& [name, hosts] : dns) out.push_back(name);
    return out;
}

std::uint64_t Rng::next() {
    // splitmix64
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t Rng::uniform(std::uint64_t n) {
    return next() % n;
}

double Rng::unit() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::zipf(std::uint64_t n) {
    static thread_local std::unordered_map<std::uint64_t, std::vector<double>> cache;
    auto& cum = cache[n];
    if (cum.empty()) {
        cum.resize(n);
        double h = 0.0;
        for (std::uint64_t r = 0; r < n; ++r) {
            h += 1.0 / static_cast<double>(r + 1);
            cum[r] = h;
        }
    }
    double u = unit() * cum.back();
    auto it = std::lower_bound(cum.begin(), cum.end(), u);
    return static_cast<std::uint64_t>(it - cum.begin());
}

namespace {

std::string token(Rng& rng, int vocab) {
    return "w" + std::to_string(rng.zipf(static_cast<std::uint64_t>(vocab)));
}

struct SitePlan {
    std::string host;
    std::string domain;   // owning third-level domain
    bool registered = true;
    std::vector<Url> page_urls;
};

}  // namespace

Corpus generate_corpus(const CorpusConfig& cfg, std::uint64_t seed) {
    if (cfg.domains <= 0 || cfg.sites_per_domain <= 0 || cfg.pages_per_site <= 0 ||
        cfg.vocab_size <= 0 || cfg.parent_zones.empty()) {
        throw std::invalid_argument("corpus config: all counts must be positive");
    }
    if (cfg.cross_link_prob < 0.0 || cfg.cross_link_prob > 1.0 ||
        cfg.unregistered_fraction < 0.0 || cfg.unregistered_fraction > 1.0) {
        throw std::invalid_argument("corpus config: probabilities must lie in [0,1]");
    }
    Rng rng(seed);

    const int total_sites = cfg.domains * cfg.sites_per_domain;
    const int unreg_count = static_cast<int>(
        std::llround(cfg.unregistered_fraction * total_sites));
    std::vector<int> slots(total_sites);
    for (int i = 0; i < total_sites; ++i) slots[i] = i;
    for (int i = 0; i < unreg_count; ++i) {
        int j = i + static_cast<int>(rng.uniform(static_cast<std::uint64_t>(total_sites - i)));
        std::swap(slots[i], slots[j]);
    }
    std::set<int> unreg_slots(slots.begin(), slots.begin() + unreg_count);

    // Pass 1: plan hosts and page URLs so cross links can target any site.
    std::vector<SitePlan> plans;
    int unreg_serial = 0;
    for (int d = 0; d < cfg.domains; ++d) {
        const std::string& zone = cfg.parent_zones[d % cfg.parent_zones.size()];
        std::string domain = "u" + std::to_string(d) + "." + zone;
        for (int s = 0; s < cfg.sites_per_domain; ++s) {
            SitePlan plan;
            plan.domain = domain;
            int slot = d * cfg.sites_per_domain + s;
            if (unreg_slots.count(slot)) {
                // Servers outside the domain's naming scheme, found only by scan.
                plan.host = "host" + std::to_string(unreg_serial++) + ".net";
                plan.registered = false;
            } else {
                plan.host = (s == 0 ? "www." : "s" + std::to_string(s) + ".") + domain;
            }
            for (int p = 0; p < cfg.pages_per_site; ++p) {
                plan.page_urls.push_back(
                    Url{plan.host, p == 0 ? "/" : "/p" + std::to_string(p)});
            }
            plans.push_back(std::move(plan));
        }
    }

    // Pass 2: fill pages. Internal links form a random tree rooted at "/",
    // so every page is reachable from the site root.
    Corpus corpus;
    Timestamp clock = cfg.base_timestamp;
    for (std::size_t si = 0; si < plans.size(); ++si) {
        const SitePlan& plan = plans[si];
        const int n = cfg.pages_per_site;
        std::vector<std::vector<int>> children(n);
        for (int p = 1; p < n; ++p) {
            children[static_cast<int>(rng.uniform(p))].push_back(p);
        }
        Site site;
        site.host = plan.host;
        for (int p = 0; p < n; ++p) {
            Page page;
            page.url = plan.page_urls[p];
            for (int t = 0; t < cfg.title_tokens; ++t) {
                if (t) page.title.push_back(' ');
                page.title += token(rng, cfg.vocab_size);
            }
            for (int t = 0; t < cfg.body_tokens; ++t) {
                page.body.push_back(token(rng, cfg.vocab_size));
            }
            for (int c : children[p]) page.links.push_back(plan.page_urls[c]);
            int extra = static_cast<int>(rng.uniform(3));
            for (int e = 0; e < extra && n > 1; ++e) {
                int t = static_cast<int>(rng.uniform(n));
                if (t != p) page.links.push_back(plan.page_urls[t]);
            }
            if (plans.size() > 1 && rng.unit() < cfg.cross_link_prob) {
                std::size_t other = rng.uniform(plans.size() - 1);
                if (other >= si) ++other;
                const auto& target = plans[other];
                page.links.push_back(
                    target.page_urls[rng.uniform(target.page_urls.size())]);
            }
            page.encoding = rng.uniform(2) ? "gb2312" : "utf-8";
            page.last_modified = clock++;
            site.pages.emplace(page.url.str(), std::move(page));
        }
        corpus.sites.emplace(site.host, std::move(site));
        if (plan.registered) {
            corpus.dns[plan.domain].insert(plan.host);
        } else {
            corpus.dns[plan.domain];  // the domain exists even if all hosts hide
            corpus.unregistered.emplace(plan.host, plan.domain);
        }
    }
    return corpus;
}

std::string serialize_page(const Page& page) {
    std::ostringstream out;
    out << "url " << page.url.str() << "\n";
    out << "title " << page.title << "\n";
    out << "encoding " << page.encoding << "\n";
    out << "last_modified " << page.last_modified << "\n";
    out << "links " << page.links.size() << "\n";
    for (const auto& link : page.links) out << link.str() << "\n";
    out << "body\n";
    for (std::size_t i = 0; i < page.body.size(); ++i) {
        if (i) out << ' ';
        out << page.body[i];
    }
    out << "\n";
    return out.str();
}

Page parse_page(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    Page page;
    auto expect = [&](const std::string& key) {
        if (!std::getline(in, line) || line.rfind(key + " ", 0) != 0) {
            throw ParseError("page file: expected \"" + key + "\" line");
        }
        return line.substr(key.size() + 1);
    };
    page.url = Url::parse(expect("url"));
    page.title = expect("title");
    page.encoding = expect("encoding");
    page.last_modified = std::stoll(expect("last_modified"));
    std::size_t nlinks = std::stoul(expect("links"));
    for (std::size_t i = 0; i < nlinks; ++i) {
        if (!std::getline(in, line)) throw ParseError("page file: truncated links");
        page.links.push_back(Url::parse(line));
    }
    if (!std::getline(in, line) || line != "body") {
        throw ParseError("page file: expected \"body\" line");
    }
    if (std::getline(in, line)) {
        std::istringstream body(line);
        std::string tok;
        while (body >> tok) page.body.push_back(tok);
    }
    return page;
}

namespace {

std::string page_filename(const Url& url) {
    if (url.path == "/") return "_root.page";
    std::string name = url.path.substr(1);
    std::replace(name.begin(), name.end(), '/', '_');
    return name + ".page";
}

}  // namespace

void save_corpus(const Corpus& corpus, const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir / "pages");
    for (const auto& [host, site] : corpus.sites) {
        fs::create_directories(dir / "pages" / host);
        for (const auto& [key, page] : site.pages) {
            std::ofstream out(dir / "pages" / host / page_filename(page.url),
                              std::ios::binary);
            out << serialize_page(page);
        }
    }
    std::ofstream dns(dir / "dns.tsv", std::ios::binary);
    for (const auto& [domain, hosts] : corpus.dns) {
        if (hosts.empty()) dns << domain << "\t\n";
        for (const auto& host : hosts) dns << domain << "\t" << host << "\n";
    }
    std::ofstream unreg(dir / "unregistered.txt", std::ios::binary);
    for (const auto& [host, domain] : corpus.unregistered) {
        unreg << host << "\t" << domain << "\n";
    }
}

Corpus load_corpus(const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    Corpus corpus;
    std::ifstream dns(dir / "dns.tsv");
    if (!dns) throw ParseError("corpus dir: missing dns.tsv");
    std::string line;
    while (std::getline(dns, line)) {
        auto tab = line.find('\t');
        if (tab == std::string::npos) throw ParseError("dns.tsv: missing tab");
        std::string domain = line.substr(0, tab);
        std::string host = line.substr(tab + 1);
        auto& hosts = corpus.dns[domain];
        if (!host.empty()) hosts.insert(host);
    }
    std::ifstream unreg(dir / "unregistered.txt");
    while (unreg && std::getline(unreg, line)) {
        auto tab = line.find('\t');
        if (tab == std::string::npos) throw ParseError("unregistered.txt: missing tab");
        corpus.unregistered.emplace(line.substr(0, tab), line.substr(tab + 1));
    }
    if (!fs::exists(dir / "pages")) throw ParseError("corpus dir: missing pages/");
    for (const auto& host_dir : fs::directory_iterator(dir / "pages")) {
        Site site;
        site.host = host_dir.path().filename().string();
        for (const auto& file : fs::directory_iterator(host_dir.path())) {
            std::ifstream in(file.path(), std::ios::binary);
            std::stringstream buf;
            buf << in.rdbuf();
            Page page = parse_page(buf.str());
            site.pages.emplace(page.url.str(), std::move(page));
        }
        corpus.sites.emplace(site.host, std::move(site));
    }
    return corpus;
}

}  // namespace dris
