#include "nvp/osm_router.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <unordered_map>

namespace nvp {

namespace {

struct XmlAttr {
    std::string name;
    std::string value;
};

struct XmlTag {
    std::string name;
    std::vector<XmlAttr> attrs;
    bool closing = false;
    bool self_closing = false;
};

bool is_name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == ':' || c == '.' || c == '-';
}

void skip_ws(const std::string& s, std::size_t& i) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
}

// Parses one tag starting at s[i] == '<'. Comments, declarations, and
// DOCTYPE blocks return a tag with an empty name.
XmlTag parse_tag(const std::string& s, std::size_t& i) {
    XmlTag tag;
    ++i;  // consume '<'
    if (i >= s.size()) throw ParseError("truncated tag at end of input");

    if (s.compare(i, 3, "!--") == 0) {
        auto end = s.find("-->", i + 3);
        if (end == std::string::npos) throw ParseError("unterminated XML comment");
        i = end + 3;
        return tag;
    }
    if (s[i] == '?') {
        auto end = s.find("?>", i);
        if (end == std::string::npos) throw ParseError("unterminated XML declaration");
        i = end + 2;
        return tag;
    }
    if (s[i] == '!') {
        auto end = s.find('>', i);
        if (end == std::string::npos) throw ParseError("unterminated <! block");
        i = end + 1;
        return tag;
    }

    if (s[i] == '/') {
        tag.closing = true;
        ++i;
    }
    skip_ws(s, i);
    std::size_t name_start = i;
    while (i < s.size() && is_name_char(s[i])) ++i;
    if (i == name_start) throw ParseError("malformed tag name");
    tag.name = s.substr(name_start, i - name_start);

    while (true) {
        skip_ws(s, i);
        if (i >= s.size()) throw ParseError("unterminated tag <" + tag.name + ">");
        if (s[i] == '>') {
            ++i;
            return tag;
        }
        if (s[i] == '/') {
            ++i;
            skip_ws(s, i);
            if (i >= s.size() || s[i] != '>') throw ParseError("malformed self-closing tag");
            ++i;
            tag.self_closing = true;
            return tag;
        }
        if (tag.closing) throw ParseError("attributes on closing tag </" + tag.name + ">");

        std::size_t attr_start = i;
        while (i < s.size() && is_name_char(s[i])) ++i;
        if (i == attr_start) throw ParseError("malformed attribute in <" + tag.name + ">");
        XmlAttr attr;
        attr.name = s.substr(attr_start, i - attr_start);
        skip_ws(s, i);
        if (i >= s.size() || s[i] != '=') throw ParseError("attribute without value in <" + tag.name + ">");
        ++i;
        skip_ws(s, i);
        if (i >= s.size() || (s[i] != '"' && s[i] != '\'')) {
            throw ParseError("unquoted attribute value in <" + tag.name + ">");
        }
        const char quote = s[i++];
        auto end = s.find(quote, i);
        if (end == std::string::npos) throw ParseError("unterminated attribute value in <" + tag.name + ">");
        attr.value = s.substr(i, end - i);
        i = end + 1;
        tag.attrs.push_back(std::move(attr));
    }
}

const std::string* find_attr(const XmlTag& tag, const std::string& name) {
    for (const auto& a : tag.attrs) {
        if (a.name == name) return &a.value;
    }
    return nullptr;
}

NodeId parse_id(const std::string& text, const char* what) {
    std::size_t pos = 0;
    NodeId id = 0;
    try {
        id = std::stoll(text, &pos);
    } catch (const std::exception&) {
        throw ParseError(std::string("bad ") + what + " '" + text + "'");
    }
    if (pos != text.size()) throw ParseError(std::string("bad ") + what + " '" + text + "'");
    return id;
}

double parse_real(const std::string& text, const char* what) {
    std::size_t pos = 0;
    double v = 0;
    try {
        v = std::stod(text, &pos);
    } catch (const std::exception&) {
        throw ParseError(std::string("bad ") + what + " '" + text + "'");
    }
    if (pos != text.size()) throw ParseError(std::string("bad ") + what + " '" + text + "'");
    return v;
}

}  // namespace

RoadGraph RoadGraph::from_osm_xml(const std::string& xml_text) {
    std::map<NodeId, GeoPoint> all_nodes;
    std::vector<std::pair<NodeId, NodeId>> links;
    std::set<NodeId> referenced;

    bool in_way = false;
    std::vector<NodeId> way_refs;

    std::size_t i = 0;
    while (i < xml_text.size()) {
        if (xml_text[i] != '<') {
            ++i;
            continue;
        }
        XmlTag tag = parse_tag(xml_text, i);
        if (tag.name.empty()) continue;

        if (tag.name == "node" && !tag.closing) {
            const std::string* id = find_attr(tag, "id");
            const std::string* lat = find_attr(tag, "lat");
            const std::string* lon = find_attr(tag, "lon");
            if (!id || !lat || !lon) throw ParseError("<node> missing id/lat/lon");
            all_nodes.emplace(parse_id(*id, "node id"),
                              GeoPoint(parse_real(*lat, "lat"), parse_real(*lon, "lon")));
        } else if (tag.name == "way" && !tag.closing) {
            if (in_way) throw ParseError("nested <way>");
            if (!tag.self_closing) {
                in_way = true;
                way_refs.clear();
            }
        } else if (tag.name == "way" && tag.closing) {
            if (!in_way) throw ParseError("</way> without <way>");
            for (std::size_t k = 1; k < way_refs.size(); ++k) {
                links.emplace_back(way_refs[k - 1], way_refs[k]);
            }
            for (NodeId id : way_refs) referenced.insert(id);
            in_way = false;
        } else if (tag.name == "nd" && in_way && !tag.closing) {
            const std::string* ref = find_attr(tag, "ref");
            if (!ref) throw ParseError("<nd> missing ref");
            way_refs.push_back(parse_id(*ref, "nd ref"));
        }
        // everything else (tag, relation, osm, bounds, ...) is ignored
    }
    if (in_way) throw ParseError("unterminated <way>");

    RoadGraph g;
    for (NodeId id : referenced) {
        auto it = all_nodes.find(id);
        if (it == all_nodes.end()) {
            throw DanglingReference("way references unknown node " + std::to_string(id));
        }
        g.add_node(id, it->second);
    }
    for (const auto& [a, b] : links) g.add_link(a, b);
    if (!g.empty()) g.set_local_origin(g.nodes_.begin()->second.geo);
    return g;
}

RoadGraph RoadGraph::from_text(const std::string& text) {
    RoadGraph g;
    std::vector<std::pair<NodeId, NodeId>> links;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string record;
        if (!(ls >> record)) continue;
        const std::string where = " (line " + std::to_string(line_no) + ")";
        if (record == "N") {
            std::string id, lat, lon, extra;
            if (!(ls >> id >> lat >> lon)) throw ParseError("malformed N record" + where);
            if (ls >> extra) throw ParseError("trailing tokens after N record" + where);
            g.add_node(parse_id(id, "node id"), GeoPoint(parse_real(lat, "lat"), parse_real(lon, "lon")));
        } else if (record == "L") {
            std::string a, b, extra;
            if (!(ls >> a >> b)) throw ParseError("malformed L record" + where);
            if (ls >> extra) throw ParseError("trailing tokens after L record" + where);
            links.emplace_back(parse_id(a, "node id"), parse_id(b, "node id"));
        } else {
            throw ParseError("unknown record '" + record + "'" + where);
        }
    }
    for (const auto& [a, b] : links) {
        if (!g.has_node(a)) throw DanglingReference("link references unknown node " + std::to_string(a));
        if (!g.has_node(b)) throw DanglingReference("link references unknown node " + std::to_string(b));
        g.add_link(a, b);
    }
    if (!g.empty()) g.set_local_origin(g.nodes_.begin()->second.geo);
    return g;
}

void RoadGraph::set_local_origin(const GeoPoint& origin) {
    origin_ = origin;
    origin_set_ = true;
    for (auto& [id, node] : nodes_) {
        node.local = geo_to_local(origin_, node.geo);
    }
}

void RoadGraph::add_node(NodeId id, const GeoPoint& geo) {
    Node n;
    n.geo = geo;
    n.local = origin_set_ ? geo_to_local(origin_, geo) : Point2{};
    nodes_[id] = n;
}

void RoadGraph::add_link(NodeId a, NodeId b) {
    if (a == b) return;
    if (!has_node(a)) throw DanglingReference("link references unknown node " + std::to_string(a));
    if (!has_node(b)) throw DanglingReference("link references unknown node " + std::to_string(b));
    links_.insert({std::min(a, b), std::max(a, b)});
}

std::vector<NodeId> RoadGraph::neighbors(NodeId id) const {
    std::vector<NodeId> out;
    for (const auto& [a, b] : links_) {
        if (a == id) out.push_back(b);
        else if (b == id) out.push_back(a);
    }
    return out;
}

std::size_t RoadGraph::degree(NodeId id) const { return neighbors(id).size(); }

bool RoadGraph::linked(NodeId a, NodeId b) const {
    return links_.count({std::min(a, b), std::max(a, b)}) > 0;
}

NodeId RoadGraph::nearest_node(const Point2& p) const {
    if (nodes_.empty()) throw std::invalid_argument("nearest_node on empty graph");
    NodeId best = nodes_.begin()->first;
    double best_d = std::numeric_limits<double>::infinity();
    for (const auto& [id, node] : nodes_) {
        const double d = distance(node.local, p);
        if (d < best_d) {  // map iteration is id-ascending, so ties keep the smaller id
            best_d = d;
            best = id;
        }
    }
    return best;
}

std::size_t RoadGraph::connected_components() const {
    std::set<NodeId> seen;
    std::size_t components = 0;
    for (const auto& [id, node] : nodes_) {
        if (seen.count(id)) continue;
        ++components;
        std::vector<NodeId> stack{id};
        seen.insert(id);
        while (!stack.empty()) {
            NodeId cur = stack.back();
            stack.pop_back();
            for (NodeId nb : neighbors(cur)) {
                if (seen.insert(nb).second) stack.push_back(nb);
            }
        }
    }
    return components;
}

RoadGraph subsample_graph(const RoadGraph& g, double min_spacing) {
    if (min_spacing <= 0.0) return g;

    // Anchors: junctions and endpoints (degree != 2). Components that are pure
    // cycles get their smallest node id as an artificial anchor.
    std::set<NodeId> anchors;
    for (const auto& [id, node] : g.nodes()) {
        if (g.degree(id) != 2) anchors.insert(id);
    }
    {
        std::set<NodeId> seen;
        for (const auto& [id, node] : g.nodes()) {
            if (seen.count(id)) continue;
            std::vector<NodeId> stack{id};
            std::vector<NodeId> comp;
            seen.insert(id);
            while (!stack.empty()) {
                NodeId cur = stack.back();
                stack.pop_back();
                comp.push_back(cur);
                for (NodeId nb : g.neighbors(cur)) {
                    if (seen.insert(nb).second) stack.push_back(nb);
                }
            }
            bool has_anchor = std::any_of(comp.begin(), comp.end(),
                                          [&](NodeId n) { return anchors.count(n) > 0; });
            if (!has_anchor) anchors.insert(*std::min_element(comp.begin(), comp.end()));
        }
    }

    RoadGraph out;
    for (NodeId id : anchors) out.add_node(id, g.node(id).geo);

    std::set<std::pair<NodeId, NodeId>> walked;  // first chain edge per direction
    auto edge_key = [](NodeId a, NodeId b) {
        return std::make_pair(std::min(a, b), std::max(a, b));
    };

    for (NodeId anchor : anchors) {
        for (NodeId first : g.neighbors(anchor)) {
            if (walked.count(edge_key(anchor, first))) continue;

            NodeId prev = anchor;
            NodeId cur = first;
            NodeId last_kept = anchor;
            walked.insert(edge_key(prev, cur));
            while (!anchors.count(cur)) {
                // cur is an interior degree-2 chain node
                if (distance(g.node(cur).local, g.node(last_kept).local) >= min_spacing) {
                    out.add_node(cur, g.node(cur).geo);
                    out.add_link(last_kept, cur);
                    last_kept = cur;
                }
                const auto nbs = g.neighbors(cur);
                NodeId next = (nbs[0] == prev) ? nbs[1] : nbs[0];
                walked.insert(edge_key(cur, next));
                prev = cur;
                cur = next;
            }
            if (cur != last_kept) out.add_link(last_kept, cur);
        }
    }
    if (!g.empty()) out.set_local_origin(g.local_origin());
    return out;
}

GlobalPath plan_global(const RoadGraph& g, const Point2& vehicle, const Point2& goal) {
    if (g.empty()) throw std::invalid_argument("plan_global on empty graph");
    const NodeId start = g.nearest_node(vehicle);
    const NodeId end = g.nearest_node(goal);

    // Adjacency once, instead of scanning the link set per expansion.
    std::unordered_map<NodeId, std::vector<NodeId>> adj;
    for (const auto& [a, b] : g.links()) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    for (auto& [id, nbs] : adj) std::sort(nbs.begin(), nbs.end());

    const auto pos = [&](NodeId id) { return g.node(id).local; };
    const auto h = [&](NodeId id) { return distance(pos(id), pos(end)); };

    std::map<NodeId, double> cost;
    std::map<NodeId, NodeId> came_from;
    using QItem = std::pair<double, NodeId>;  // (f, node); ties expand smaller id first
    std::priority_queue<QItem, std::vector<QItem>, std::greater<>> open;
    cost[start] = 0.0;
    open.push({h(start), start});

    while (!open.empty()) {
        const auto [f, cur] = open.top();
        open.pop();
        if (f > cost.at(cur) + h(cur) + 1e-12) continue;  // stale entry
        if (cur == end) break;
        auto it = adj.find(cur);
        if (it == adj.end()) continue;
        for (NodeId nb : it->second) {
            const double candidate = cost.at(cur) + distance(pos(cur), pos(nb));
            auto found = cost.find(nb);
            if (found == cost.end() || candidate < found->second - 1e-15) {
                cost[nb] = candidate;
                came_from[nb] = cur;
                open.push({candidate + h(nb), nb});
            }
        }
    }

    if (!cost.count(end)) {
        throw NoPathError("no path between node " + std::to_string(start) + " and node " +
                          std::to_string(end));
    }

    GlobalPath path;
    std::vector<NodeId> rev{end};
    while (rev.back() != start) rev.push_back(came_from.at(rev.back()));
    for (auto it = rev.rbegin(); it != rev.rend(); ++it) {
        path.node_ids.push_back(*it);
        path.positions.push_back(pos(*it));
    }
    return path;
}

GoalSequencer::GoalSequencer(const GlobalPath& path, double md_threshold)
    : path_(path), md_threshold_(md_threshold) {
    if (path.empty()) throw std::invalid_argument("GoalSequencer needs a nonempty path");
    if (!(md_threshold > 0.0)) throw std::invalid_argument("md_threshold must be > 0");
}

std::optional<Point2> GoalSequencer::current_goal(const PoseEstimate& est) {
    while (next_ < path_.size() &&
           mahalanobis_distance(path_.positions[next_], est) < md_threshold_) {
        ++next_;
    }
    if (next_ >= path_.size()) return std::nullopt;
    return path_.positions[next_];
}

}  // namespace nvp
