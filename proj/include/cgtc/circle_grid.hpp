#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "cgtc/geometry.hpp"
#include "cgtc/ship_dynamics.hpp"
#include "cgtc/trajectory_cell.hpp"

namespace cgtc {

/// A node of the circle-grid tree. Nodes live in a caller-owned arena; `parent`
/// is the arena index of the node this one was expanded from.
struct GridNode {
    Vec2 position;
    CompassAngle heading;
    std::optional<std::size_t> parent;
    /// Index into the CellSet that produced this node, if any.
    std::optional<std::size_t> cell_used;
    int depth = 0;
};

/// Children of `node` (stored at `node_index` in the arena), one per cell:
/// each lies on the circle about node.position at the cell's end offset
/// rotated into the node's heading.
std::vector<GridNode> expand_node(const GridNode& node, std::size_t node_index, const CellSet& cells);

/// Child reached from `node` through an arbitrary cell.
GridNode child_through(const GridNode& node, std::size_t node_index, const TrajectoryCell& cell,
                       std::optional<std::size_t> cell_index = std::nullopt);

/// Circle-grid radius from the ship domain: factor * ship length, factor in [4, 8].
double ship_domain_radius(const ShipParams& params, double factor);

}  // namespace cgtc
