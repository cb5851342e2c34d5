#include "aasrdl/dot.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace aasrdl {

std::string dot_quote(const std::string& s)
{
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        if (c == '\n') {
            out += "\\n";
            continue;
        }
        out += c;
    }
    return out + "\"";
}

std::string sanitize_id(const std::string& name)
{
    std::string out;
    for (unsigned char c : name) out += (std::isalnum(c) || c == '_') && c < 0x80 ? static_cast<char>(c) : '_';
    if (out.empty() || std::isdigit(static_cast<unsigned char>(out[0]))) out = "n" + out;
    return out;
}

std::string IdAllocator::get(const std::string& name)
{
    for (const auto& [n, id] : assigned_)
        if (n == name) return id;
    std::string base = sanitize_id(name), id = base;
    for (int k = 2; std::any_of(assigned_.begin(), assigned_.end(), [&](const auto& p) { return p.second == id; }); ++k)
        id = base + "_" + std::to_string(k);
    assigned_.emplace_back(name, id);
    return id;
}

void set_label(DotAttrs& attrs, const std::string& text, const char* key, std::size_t limit)
{
    // count code points, not bytes
    std::size_t chars = 0, cut = text.size();
    for (std::size_t i = 0; i < text.size(); ++i) {
        if ((static_cast<unsigned char>(text[i]) & 0xC0) == 0x80) continue;
        if (chars == limit) {
            cut = i;
            break;
        }
        ++chars;
    }
    if (cut == text.size()) {
        attrs.emplace_back(key, text);
        return;
    }
    attrs.emplace_back(key, text.substr(0, cut) + "\xE2\x80\xA6");
    attrs.emplace_back("tooltip", text);
}

namespace {

void put_attrs(std::ostream& os, const DotAttrs& attrs)
{
    if (attrs.empty()) return;
    os << " [";
    for (std::size_t i = 0; i < attrs.size(); ++i)
        os << (i ? ", " : "") << attrs[i].first << '=' << dot_quote(attrs[i].second);
    os << ']';
}

void put_node(std::ostream& os, const DotNode& n, const char* indent)
{
    os << indent << n.id;
    put_attrs(os, n.attrs);
    os << ";\n";
}

} // namespace

std::string DotGraph::to_dot() const
{
    std::ostringstream os;
    os << "digraph " << sanitize_id(name) << " {\n";
    for (const auto& [k, v] : graph_attrs) os << "  " << k << '=' << dot_quote(v) << ";\n";
    if (!node_defaults.empty()) {
        os << "  node";
        put_attrs(os, node_defaults);
        os << ";\n";
    }
    for (const auto& n : nodes) put_node(os, n, "  ");
    for (const auto& c : clusters) {
        os << "  subgraph cluster_" << c.id << " {\n";
        for (const auto& [k, v] : c.attrs) os << "    " << k << '=' << dot_quote(v) << ";\n";
        for (const auto& n : c.nodes) put_node(os, n, "    ");
        os << "  }\n";
    }
    for (const auto& e : edges) {
        os << "  " << e.from << " -> " << e.to;
        put_attrs(os, e.attrs);
        os << ";\n";
    }
    os << "}\n";
    return os.str();
}

const DotNode* DotGraph::find_node(const std::string& id) const
{
    for (const auto& n : nodes)
        if (n.id == id) return &n;
    for (const auto& c : clusters)
        for (const auto& n : c.nodes)
            if (n.id == id) return &n;
    return nullptr;
}

std::size_t DotGraph::node_count() const
{
    std::size_t n = nodes.size();
    for (const auto& c : clusters) n += c.nodes.size();
    return n;
}

} // namespace aasrdl
