#include "uniwalk/edge_list.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "uniwalk/errors.hpp"

namespace uniwalk {

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct RawEdge {
    std::string_view source;
    std::string_view target;
    double weight = 1.0;
    bool has_weight = false;
};

// Splits a line into 2 or 3 tab-separated fields. Returns false for
// comment/blank lines.
bool parse_line(std::string_view line, std::size_t line_no, const std::string& origin,
                RawEdge& out) {
    if (!line.empty() && line.back() == '\r') {
        line.remove_suffix(1);
    }
    if (line.empty() || line.front() == '#') {
        return false;
    }
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t tab = line.find('\t', start);
        if (tab == std::string_view::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
    if (fields.size() < 2 || fields.size() > 3 || fields[0].empty() || fields[1].empty()) {
        throw ParseError(origin + ":" + std::to_string(line_no) +
                         ": expected 2 or 3 tab-separated fields");
    }
    out.source = fields[0];
    out.target = fields[1];
    out.has_weight = fields.size() == 3;
    if (out.has_weight) {
        const std::string_view w = fields[2];
        double value = 0.0;
        const auto res = std::from_chars(w.data(), w.data() + w.size(), value);
        if (res.ec != std::errc{} || res.ptr != w.data() + w.size()) {
            throw ParseError(origin + ":" + std::to_string(line_no) + ": bad weight '" +
                             std::string(w) + "'");
        }
        if (value < 0.0) {
            throw ParseError(origin + ":" + std::to_string(line_no) + ": negative weight");
        }
        out.weight = value;
    } else {
        out.weight = 1.0;
    }
    return true;
}

template <typename OnEdge>
void for_each_edge(const std::string& text, const std::string& origin, OnEdge&& on_edge) {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        const std::string_view line = nl == std::string::npos
                                          ? std::string_view(text).substr(pos)
                                          : std::string_view(text).substr(pos, nl - pos);
        ++line_no;
        RawEdge raw;
        if (parse_line(line, line_no, origin, raw)) {
            on_edge(raw, line_no);
        }
        if (nl == std::string::npos) {
            break;
        }
        pos = nl + 1;
    }
}

} // namespace

Layer parse_edge_list(const std::string& text, bool directed, bool weighted, NodeTable& table,
                      SelfLoopPolicy self_loops, const std::string& origin) {
    Layer layer;
    layer.directed = directed;
    layer.weighted = weighted;
    layer.self_loops = self_loops;

    std::vector<Edge> edges;
    for_each_edge(text, origin, [&](const RawEdge& raw, std::size_t line_no) {
        if (raw.has_weight && !weighted) {
            throw ParseError(origin + ":" + std::to_string(line_no) +
                             ": weight column in unweighted layer");
        }
        const NodeId u = table.intern(raw.source);
        const NodeId v = table.intern(raw.target);
        if (u == v && self_loops == SelfLoopPolicy::Drop) {
            return;
        }
        edges.push_back({u, v, raw.weight});
        if (!directed && u != v) {
            edges.push_back({v, u, raw.weight});
        }
    });
    layer.edges = canonical_edges(std::move(edges), weighted);
    return layer;
}

Layer load_edge_list(const std::filesystem::path& path, bool directed, bool weighted,
                     NodeTable& table, SelfLoopPolicy self_loops) {
    return parse_edge_list(read_file(path), directed, weighted, table, self_loops, path.string());
}

BipartiteNetwork parse_bipartite_list(const std::string& text, bool directed,
                                      std::uint32_t source_type, std::uint32_t target_type,
                                      const NodeTable& source_table, const NodeTable& target_table,
                                      const std::string& origin) {
    BipartiteNetwork bp;
    bp.source_type = source_type;
    bp.target_type = target_type;
    bp.directed = directed;

    std::vector<Edge> edges;
    for_each_edge(text, origin, [&](const RawEdge& raw, std::size_t line_no) {
        const auto u = source_table.find(raw.source);
        const auto v = target_table.find(raw.target);
        if (!u) {
            throw ParseError(origin + ":" + std::to_string(line_no) + ": node '" +
                             std::string(raw.source) + "' is not present in any layer of multiplex " +
                             std::to_string(source_type));
        }
        if (!v) {
            throw ParseError(origin + ":" + std::to_string(line_no) + ": node '" +
                             std::string(raw.target) + "' is not present in any layer of multiplex " +
                             std::to_string(target_type));
        }
        edges.push_back({*u, *v, raw.weight});
    });
    bp.edges = canonical_edges(std::move(edges), /*weighted=*/true);
    return bp;
}

BipartiteNetwork load_bipartite_list(const std::filesystem::path& path, bool directed,
                                     std::uint32_t source_type, std::uint32_t target_type,
                                     const NodeTable& source_table, const NodeTable& target_table) {
    return parse_bipartite_list(read_file(path), directed, source_type, target_type, source_table,
                                target_table, path.string());
}

std::string format_score(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

void serialize_edge_list(std::ostream& out, const Layer& layer, const NodeTable& table) {
    for (const Edge& e : layer.edges) {
        if (!layer.directed && e.source > e.target) {
            continue;  // emit each unordered pair once
        }
        out << table.name(e.source) << '\t' << table.name(e.target);
        if (layer.weighted) {
            out << '\t' << format_score(e.weight);
        }
        out << '\n';
    }
}

void serialize_bipartite_list(std::ostream& out, const BipartiteNetwork& bipartite,
                              const NodeTable& source_table, const NodeTable& target_table) {
    for (const Edge& e : bipartite.edges) {
        out << source_table.name(e.source) << '\t' << target_table.name(e.target) << '\t'
            << format_score(e.weight) << '\n';
    }
}

} // namespace uniwalk
