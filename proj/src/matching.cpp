#include "chronicle/matching.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <stdexcept>

namespace chronicle {

MinCostFlow::MinCostFlow(int num_nodes) : adjacency_(num_nodes) {}

int MinCostFlow::add_edge(int from, int to, int capacity, double cost) {
    const int id = static_cast<int>(edges_.size());
    edges_.push_back({to, capacity, cost});
    edges_.push_back({from, 0, -cost});
    adjacency_[from].push_back(id);
    adjacency_[to].push_back(id + 1);
    return id;
}

std::pair<int, double> MinCostFlow::run(int source, int sink, int max_units,
                                        bool stop_at_nonnegative) {
    const int n = static_cast<int>(adjacency_.size());
    constexpr double kInf = std::numeric_limits<double>::infinity();

    // Bellman-Ford seeds the potentials so Dijkstra sees non-negative
    // reduced costs even with negative-cost edges in the input.
    std::vector<double> potential(n, kInf);
    potential[source] = 0.0;
    for (int round = 0; round < n; ++round) {
        bool changed = false;
        for (int u = 0; u < n; ++u) {
            if (potential[u] == kInf) continue;
            for (int id : adjacency_[u]) {
                const Edge& e = edges_[id];
                if (e.capacity > 0 && potential[u] + e.cost < potential[e.to] - 1e-15) {
                    potential[e.to] = potential[u] + e.cost;
                    changed = true;
                }
            }
        }
        if (!changed) break;
    }
    for (double& p : potential)
        if (p == kInf) p = 0.0;

    int pushed = 0;
    double total_cost = 0.0;
    std::vector<double> dist(n);
    std::vector<int> incoming(n);
    while (max_units < 0 || pushed < max_units) {
        std::fill(dist.begin(), dist.end(), kInf);
        std::fill(incoming.begin(), incoming.end(), -1);
        dist[source] = 0.0;
        using Item = std::pair<double, int>;  // ties resolve by node index
        std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
        queue.emplace(0.0, source);
        while (!queue.empty()) {
            const auto [d, u] = queue.top();
            queue.pop();
            if (d > dist[u]) continue;
            for (int id : adjacency_[u]) {
                const Edge& e = edges_[id];
                if (e.capacity <= 0) continue;
                const double nd = d + e.cost + potential[u] - potential[e.to];
                if (nd < dist[e.to] - 1e-15) {
                    dist[e.to] = nd;
                    incoming[e.to] = id;
                    queue.emplace(nd, e.to);
                }
            }
        }
        if (dist[sink] == kInf) break;
        const double path_cost = dist[sink] + potential[sink] - potential[source];
        if (stop_at_nonnegative && path_cost >= -1e-12) break;

        for (int u = 0; u < n; ++u)
            if (dist[u] < kInf) potential[u] += dist[u];
        for (int u = sink; u != source;) {
            const int id = incoming[u];
            edges_[id].capacity -= 1;
            edges_[id ^ 1].capacity += 1;
            u = edges_[id ^ 1].to;
        }
        total_cost += path_cost;
        ++pushed;
    }
    return {pushed, total_cost};
}

int MinCostFlow::flow_on(int edge_id) const { return edges_[edge_id ^ 1].capacity; }

Matching best_matching(const Eigen::MatrixXd& weights) {
    const int n = static_cast<int>(weights.rows());
    const int m = static_cast<int>(weights.cols());
    Matching result;
    if (n == 0 || m == 0) return result;

    const int source = 0;
    const int sink = n + m + 1;
    MinCostFlow flow(n + m + 2);
    for (int i = 0; i < n; ++i) flow.add_edge(source, 1 + i, 1, 0.0);
    std::vector<std::tuple<int, int, int>> pair_edges;  // (edge id, i, j)
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j)
            if (weights(i, j) > 0.0)
                pair_edges.emplace_back(flow.add_edge(1 + i, 1 + n + j, 1, -weights(i, j)), i, j);
    for (int j = 0; j < m; ++j) flow.add_edge(1 + n + j, sink, 1, 0.0);

    flow.run(source, sink, -1, /*stop_at_nonnegative=*/true);
    for (const auto& [id, i, j] : pair_edges) {
        if (flow.flow_on(id) > 0) {
            result.edges.emplace_back(i, j);
            result.total_weight += weights(i, j);
        }
    }
    std::sort(result.edges.begin(), result.edges.end());
    return result;
}

std::vector<int> select_by_flow(const Eigen::VectorXd& importance,
                                const Eigen::MatrixXd& delta_conn, int target_size) {
    const int num_comments = static_cast<int>(importance.size());
    const int num_sentences = static_cast<int>(delta_conn.cols());
    if (delta_conn.rows() != num_comments)
        throw std::invalid_argument("select_by_flow: dimension mismatch");
    const int target = std::min(target_size, num_comments);
    if (target <= 0) return {};

    // source -> comment (gain importance), comment -> sentence (gain
    // delta*conn) or comment -> bypass (gain 0), everything -> sink.
    const int source = 0;
    const int bypass = 1 + num_comments + num_sentences;
    const int sink = bypass + 1;
    MinCostFlow flow(sink + 1);
    std::vector<int> comment_edges(num_comments);
    for (int j = 0; j < num_comments; ++j)
        comment_edges[j] = flow.add_edge(source, 1 + j, 1, -importance[j]);
    for (int j = 0; j < num_comments; ++j) {
        for (int i = 0; i < num_sentences; ++i)
            if (delta_conn(j, i) > 0.0)
                flow.add_edge(1 + j, 1 + num_comments + i, 1, -delta_conn(j, i));
        flow.add_edge(1 + j, bypass, 1, 0.0);
    }
    for (int i = 0; i < num_sentences; ++i)
        flow.add_edge(1 + num_comments + i, sink, 1, 0.0);
    flow.add_edge(bypass, sink, target, 0.0);

    const auto [pushed, cost] = flow.run(source, sink, target, /*stop_at_nonnegative=*/false);
    (void)cost;
    if (pushed < target) throw std::logic_error("select_by_flow: infeasible flow");

    std::vector<int> selected;
    for (int j = 0; j < num_comments; ++j)
        if (flow.flow_on(comment_edges[j]) > 0) selected.push_back(j);
    return selected;
}

}  // namespace chronicle
