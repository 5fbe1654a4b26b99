#include "dris/domain.hpp"

#include <algorithm>
#include <cctype>

namespace dris {
namespace {

bool label_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-';
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

void check_label(const std::string& label, const std::string& whole) {
    if (label.empty()) {
        throw ParseError("empty label in domain name \"" + whole + "\"");
    }
    for (char c : label) {
        if (!label_char(c)) {
            throw ParseError("illegal label \"" + label + "\" in domain name \"" +
                             whole + "\"");
        }
    }
}

}  // namespace

DomainName::DomainName(std::vector<std::string> labels) : labels_(std::move(labels)) {
    if (labels_.empty()) {
        throw ParseError("domain name needs at least one label");
    }
    for (auto& l : labels_) {
        l = lower(l);
        check_label(l, str());
    }
}

DomainName DomainName::parse(const std::string& name) {
    if (name.empty()) {
        throw ParseError("empty domain name");
    }
    std::vector<std::string> labels;
    std::string cur;
    for (char c : lower(name)) {
        if (c == '.') {
            check_label(cur, name);
            labels.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    check_label(cur, name);
    labels.push_back(cur);
    DomainName d;
    d.labels_ = std::move(labels);
    return d;
}

std::string DomainName::str() const {
    std::string out;
    for (const auto& l : labels_) {
        if (!out.empty()) out.push_back('.');
        out += l;
    }
    return out;
}

std::string DomainName::class_name() const {
    std::string out = "DRIS";
    for (auto it = labels_.rbegin(); it != labels_.rend(); ++it) {
        out.push_back('.');
        out += *it;
    }
    return out;
}

DomainName DomainName::from_class_name(const std::string& name) {
    const std::string prefix = "DRIS.";
    if (name.rfind(prefix, 0) != 0) {
        throw ParseError("class name \"" + name + "\" lacks the DRIS. prefix");
    }
    DomainName reversed = parse(name.substr(prefix.size()));
    std::vector<std::string> labels(reversed.labels_.rbegin(), reversed.labels_.rend());
    DomainName d;
    d.labels_ = std::move(labels);
    return d;
}

bool DomainName::is_under(const DomainName& parent) const {
    if (parent.labels_.size() > labels_.size()) return false;
    return std::equal(parent.labels_.rbegin(), parent.labels_.rend(), labels_.rbegin());
}

Url Url::parse(const std::string& raw) {
    std::string s = raw;
    if (auto pos = s.find("://"); pos != std::string::npos) {
        s = s.substr(pos + 3);
    }
    if (auto pos = s.find('#'); pos != std::string::npos) {
        s = s.substr(0, pos);
    }
    if (s.empty()) {
        throw ParseError("empty URL");
    }
    Url u;
    auto slash = s.find('/');
    if (slash == std::string::npos) {
        u.host = lower(s);
        u.path = "/";
    } else {
        u.host = lower(s.substr(0, slash));
        u.path = s.substr(slash);
        while (u.path.size() > 1 && u.path.back() == '/') {
            u.path.pop_back();
        }
    }
    if (u.host.empty()) {
        throw ParseError("URL \"" + raw + "\" has no host");
    }
    return u;
}

}  // namespace dris
