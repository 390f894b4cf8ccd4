#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

namespace chronicle {

// Exact maximum-weight bipartite matching result over index pairs.
struct Matching {
    std::vector<std::pair<int, int>> edges;  // (left, right), sorted by left
    double total_weight = 0.0;
};

// Successive-shortest-path min-cost flow with node potentials. Small
// graphs only; every augmentation moves one unit.
class MinCostFlow {
public:
    explicit MinCostFlow(int num_nodes);

    // Returns the edge id; a paired residual edge is created internally.
    int add_edge(int from, int to, int capacity, double cost);

    // Pushes up to max_units (-1 for unlimited) from source to sink along
    // successive shortest paths. When stop_at_nonnegative is set, stops
    // before the first augmenting path whose cost is >= 0.
    std::pair<int, double> run(int source, int sink, int max_units, bool stop_at_nonnegative);

    int flow_on(int edge_id) const;

private:
    struct Edge {
        int to;
        int capacity;
        double cost;
    };
    std::vector<Edge> edges_;
    std::vector<std::vector<int>> adjacency_;
};

// weights(i, j) >= 0 is the value of matching left i to right j; pairs
// with non-positive weight never enter the matching.
Matching best_matching(const Eigen::MatrixXd& weights);

// Chooses exactly target_size right-side... see timeline::select_comments
// for the semantics; selects comment subset maximizing
// sum(importance) + delta * best-matching-weight against the fixed
// sentence set. Returns selected comment indices in ascending order.
std::vector<int> select_by_flow(const Eigen::VectorXd& importance,
                                const Eigen::MatrixXd& delta_conn,  // |C| x |S|
                                int target_size);

}  // namespace chronicle
