#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "nvp/geometry.hpp"

namespace nvp {

using NodeId = std::int64_t;

/// Undirected road network extracted from OSM data.
///
/// Node positions are stored both georeferenced and projected into the local
/// planar frame (see set_local_origin). Links carry no attributes beyond
/// connectivity.
class RoadGraph {
  public:
    struct Node {
        GeoPoint geo;
        Point2 local;
    };

    /// Parse the OSM XML subset: <node id lat lon/> elements and <way> elements
    /// with ordered <nd ref/> children. Consecutive nd pairs become links;
    /// nodes never referenced by a way are dropped.
    static RoadGraph from_osm_xml(const std::string& xml_text);

    /// Parse the plain-text format: "N <id> <lat> <lon>" and "L <id_a> <id_b>"
    /// records, one per line, with '#' comments.
    static RoadGraph from_text(const std::string& text);

    /// Recompute every node's cached local position against a new origin.
    void set_local_origin(const GeoPoint& origin);
    const GeoPoint& local_origin() const { return origin_; }

    void add_node(NodeId id, const GeoPoint& geo);
    void add_link(NodeId a, NodeId b);

    bool empty() const { return nodes_.empty(); }
    std::size_t node_count() const { return nodes_.size(); }
    std::size_t link_count() const { return links_.size(); }
    bool has_node(NodeId id) const { return nodes_.count(id) > 0; }
    const Node& node(NodeId id) const { return nodes_.at(id); }
    const std::map<NodeId, Node>& nodes() const { return nodes_; }
    const std::set<std::pair<NodeId, NodeId>>& links() const { return links_; }

    std::vector<NodeId> neighbors(NodeId id) const;
    std::size_t degree(NodeId id) const;
    bool linked(NodeId a, NodeId b) const;

    /// Nearest node to a local-frame point; ties broken by smallest id.
    NodeId nearest_node(const Point2& p) const;

    std::size_t connected_components() const;

  private:
    GeoPoint origin_;
    bool origin_set_ = false;
    std::map<NodeId, Node> nodes_;
    std::set<std::pair<NodeId, NodeId>> links_;

    friend RoadGraph inject_osm_bias(const RoadGraph& g, double lateral_offset, double bearing);
};

/// Global waypoint path: node ids with their local positions.
struct GlobalPath {
    std::vector<NodeId> node_ids;
    std::vector<Point2> positions;

    std::size_t size() const { return node_ids.size(); }
    bool empty() const { return node_ids.empty(); }
};

/// Remove degree-2 chain nodes closer than min_spacing to the previous kept
/// node, fusing their links. Junctions (degree != 2) and chain endpoints are
/// always kept; connectivity between kept nodes is preserved.
RoadGraph subsample_graph(const RoadGraph& g, double min_spacing);

/// A* over the road graph between the nodes nearest to vehicle and goal.
/// Edge weight and heuristic are Euclidean distance in the local frame.
/// Throws NoPathError when start and goal lie in different components.
GlobalPath plan_global(const RoadGraph& g, const Point2& vehicle, const Point2& goal);

/// Feeds global waypoints one at a time, popping the front while its
/// Mahalanobis distance to the estimate drops below the threshold.
class GoalSequencer {
  public:
    GoalSequencer(const GlobalPath& path, double md_threshold);

    /// Pop every leading waypoint already reached, then return the new front
    /// waypoint, or nullopt once the buffer is empty. Popping is permanent.
    std::optional<Point2> current_goal(const PoseEstimate& est);

    std::size_t remaining() const { return path_.size() - next_; }
    double md_threshold() const { return md_threshold_; }

  private:
    GlobalPath path_;
    std::size_t next_ = 0;
    double md_threshold_;
};

}  // namespace nvp
