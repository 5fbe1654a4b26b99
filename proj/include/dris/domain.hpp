#pragma once

#include <compare>
#include <stdexcept>
#include <string>
#include <vector>

namespace dris {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Hierarchical dotted name, most-specific label first.
/// "cs.hust.edu.cn" -> labels {"cs","hust","edu","cn"}.
class DomainName {
public:
    DomainName() = default;
    explicit DomainName(std::vector<std::string> labels);

    /// Splits a dotted string, lowercasing labels. Throws ParseError on an
    /// empty or illegal label.
    static DomainName parse(const std::string& name);

    const std::vector<std::string>& labels() const { return labels_; }
    std::size_t level() const { return labels_.size(); }

    /// Dotted spelling, most-specific first ("hust.edu.cn").
    std::string str() const;

    /// "DRIS." + labels least-specific first ("DRIS.cn.edu.hust").
    std::string class_name() const;

    /// Inverse of class_name. Throws ParseError if the prefix is missing.
    static DomainName from_class_name(const std::string& name);

    /// True iff parent's labels are a suffix of this name's labels.
    bool is_under(const DomainName& parent) const;

    auto operator<=>(const DomainName&) const = default;

private:
    std::vector<std::string> labels_;
};

/// Normalized URL: lowercase host, absolute path, no fragment, no trailing
/// slash except the root. A page's identity everywhere in the system is its
/// normalized URL string.
struct Url {
    std::string host;
    std::string path = "/";

    /// Parses "host/path", "host" or "http://host/path"; normalizes.
    static Url parse(const std::string& raw);

    std::string str() const { return host + path; }

    auto operator<=>(const Url&) const = default;
};

}  // namespace dris
