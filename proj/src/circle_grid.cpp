#include "cgtc/circle_grid.hpp"

#include <string>

#include "cgtc/error.hpp"

namespace cgtc {

GridNode child_through(const GridNode& node, std::size_t node_index, const TrajectoryCell& cell,
                       std::optional<std::size_t> cell_index) {
    GridNode child;
    child.position = node.position + rotate_by_heading(cell.end_offset, node.heading);
    child.heading = node.heading + cell.heading_change_deg;
    child.parent = node_index;
    child.cell_used = cell_index;
    child.depth = node.depth + 1;
    return child;
}

std::vector<GridNode> expand_node(const GridNode& node, std::size_t node_index, const CellSet& cells) {
    std::vector<GridNode> children;
    children.reserve(cells.cells.size());
    for (std::size_t i = 0; i < cells.cells.size(); ++i) {
        children.push_back(child_through(node, node_index, cells.cells[i], i));
    }
    return children;
}

double ship_domain_radius(const ShipParams& params, double factor) {
    if (factor < 4.0 || factor > 8.0) {
        throw Error(ErrorCode::FactorOutOfRange,
                    "ship domain factor " + std::to_string(factor) + " outside [4, 8]");
    }
    return factor * params.length_m;
}

}  // namespace cgtc
