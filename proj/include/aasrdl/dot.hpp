#pragma once

#include <string>
#include <utility>
#include <vector>

namespace aasrdl {

using DotAttrs = std::vector<std::pair<std::string, std::string>>;

struct DotNode {
    std::string id;
    DotAttrs attrs;
};

struct DotEdge {
    std::string from;
    std::string to;
    DotAttrs attrs;
};

struct DotCluster {
    std::string id; // emitted as subgraph "cluster_<id>"
    DotAttrs attrs;
    std::vector<DotNode> nodes;
};

/// Directed graph in emission order. Nothing is sorted on output, so the
/// caller's insertion order is the file order.
struct DotGraph {
    std::string name;
    DotAttrs graph_attrs;
    DotAttrs node_defaults;
    std::vector<DotNode> nodes;
    std::vector<DotCluster> clusters;
    std::vector<DotEdge> edges;

    [[nodiscard]] std::string to_dot() const;
    [[nodiscard]] const DotNode* find_node(const std::string& id) const;
    [[nodiscard]] std::size_t node_count() const;
};

/// Maps arbitrary names to DOT identifiers ([A-Za-z_][A-Za-z0-9_]*),
/// appending _2, _3 ... when two names sanitize to the same id.
class IdAllocator {
public:
    std::string get(const std::string& name);

private:
    std::vector<std::pair<std::string, std::string>> assigned_;
};

[[nodiscard]] std::string sanitize_id(const std::string& name);
[[nodiscard]] std::string dot_quote(const std::string& s);

/// Labels over `limit` characters are cut and suffixed with U+2026; the full
/// text goes into a tooltip attribute.
void set_label(DotAttrs& attrs, const std::string& text, const char* key = "label", std::size_t limit = 60);

} // namespace aasrdl
