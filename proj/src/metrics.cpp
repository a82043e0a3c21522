#include "dagp/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <deque>
#include <ostream>
#include <vector>

#include "dagp/rng.hpp"

namespace dagp {

namespace {

using Adjacency = std::vector<std::vector<int>>;

Adjacency adjacency_of(const Lon& lon) {
    Adjacency adj(lon.nodes.size());
    for (const auto& [a, b] : lon.edges) {
        adj[static_cast<std::size_t>(a)].push_back(b);
        adj[static_cast<std::size_t>(b)].push_back(a);
    }
    for (auto& row : adj) std::sort(row.begin(), row.end());
    return adj;
}

double clustering_of(const Adjacency& adj) {
    const std::size_t n = adj.size();
    if (n <= 1) return 0.0;
    double total = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
        const auto& nbrs = adj[v];
        const std::size_t deg = nbrs.size();
        if (deg < 2) continue;  // contributes 0
        long long triangles = 0;
        for (std::size_t i = 0; i < deg; ++i) {
            for (std::size_t j = i + 1; j < deg; ++j) {
                if (std::binary_search(adj[static_cast<std::size_t>(nbrs[i])].begin(),
                                       adj[static_cast<std::size_t>(nbrs[i])].end(),
                                       nbrs[j])) {
                    ++triangles;
                }
            }
        }
        total += 2.0 * static_cast<double>(triangles) /
                 (static_cast<double>(deg) * static_cast<double>(deg - 1));
    }
    return total / static_cast<double>(n);
}

}  // namespace

double clustering(const Lon& lon) { return clustering_of(adjacency_of(lon)); }

double random_clustering(long long n_v, double mean_degree, int samples,
                         std::uint64_t seed) {
    if (n_v <= 1 || samples <= 0) return 0.0;
    double p = mean_degree / static_cast<double>(n_v - 1);
    p = std::clamp(p, 0.0, 1.0);
    Rng rng(seed);
    const std::size_t n = static_cast<std::size_t>(n_v);
    double total = 0.0;
    for (int s = 0; s < samples; ++s) {
        Adjacency adj(n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                if (rng.next_double() < p) {
                    adj[i].push_back(static_cast<int>(j));
                    adj[j].push_back(static_cast<int>(i));
                }
            }
        }
        total += clustering_of(adj);
    }
    return total / static_cast<double>(samples);
}

double avg_shortest_path(const Lon& lon) {
    const std::size_t n = lon.nodes.size();
    if (n <= 1) return 0.0;
    const Adjacency adj = adjacency_of(lon);

    long long total_length = 0;  // integer sum keeps the mean exact
    std::vector<int> dist(n);
    std::deque<int> queue;
    for (std::size_t src = 0; src < n; ++src) {
        std::fill(dist.begin(), dist.end(), -1);
        dist[src] = 0;
        queue.clear();
        queue.push_back(static_cast<int>(src));
        while (!queue.empty()) {
            const int v = queue.front();
            queue.pop_front();
            for (int w : adj[static_cast<std::size_t>(v)]) {
                if (dist[static_cast<std::size_t>(w)] < 0) {
                    dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(v)] + 1;
                    queue.push_back(w);
                }
            }
        }
        for (std::size_t other = src + 1; other < n; ++other) {
            if (dist[other] < 0) return -1.0;  // disconnected
            total_length += dist[other];
        }
    }
    const double pairs = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
    return static_cast<double>(total_length) / pairs;
}

std::pair<int, long long> connectivity_and_components(const Lon& lon) {
    const std::size_t n = lon.nodes.size();
    if (n == 0) return {1, 0};
    const Adjacency adj = adjacency_of(lon);
    std::vector<char> seen(n, 0);
    long long components = 0;
    std::vector<int> stack;
    for (std::size_t v = 0; v < n; ++v) {
        if (seen[v]) continue;
        ++components;
        stack.push_back(static_cast<int>(v));
        seen[v] = 1;
        while (!stack.empty()) {
            const int u = stack.back();
            stack.pop_back();
            for (int w : adj[static_cast<std::size_t>(u)]) {
                if (!seen[static_cast<std::size_t>(w)]) {
                    seen[static_cast<std::size_t>(w)] = 1;
                    stack.push_back(w);
                }
            }
        }
    }
    return {components == 1 ? 1 : 0, components};
}

MetricsRow metrics_row(const Lon& lon, int cr_samples, std::uint64_t seed) {
    MetricsRow row;
    row.equation_id = lon.equation_id;
    row.n_v = lon.n_v();
    row.n_e = lon.n_e();
    row.clustering = clustering(lon);
    const double mean_degree =
        row.n_v > 0 ? 2.0 * static_cast<double>(row.n_e) / static_cast<double>(row.n_v)
                    : 0.0;
    row.clustering_random = random_clustering(row.n_v, mean_degree, cr_samples, seed);
    row.avg_path = avg_shortest_path(lon);
    const auto [pi, components] = connectivity_and_components(lon);
    row.connected = pi;
    row.components = components;
    row.n_hits = count_hits(lon);
    return row;
}

std::string metrics_csv_header() {
    return "equation,n_v,n_e,C_mean,C_rand,l_mean,pi,S,n_hits";
}

void append_metrics_csv(std::ostream& out, const MetricsRow& row) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%s,%lld,%lld,%.2f,%.2f,%.2f,%d,%lld,%lld",
                  row.equation_id.c_str(), row.n_v, row.n_e, row.clustering,
                  row.clustering_random, row.avg_path, row.connected,
                  row.components, row.n_hits);
    out << buf << '\n';
}

}  // namespace dagp
