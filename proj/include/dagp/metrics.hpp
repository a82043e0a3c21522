#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>

#include "dagp/lon.hpp"

namespace dagp {

// One row of the graph-metrics table, in column order
// equation, n_v, n_e, C, C_r, l, pi, S, n_hits.
struct MetricsRow {
    std::string equation_id;
    long long n_v = 0;
    long long n_e = 0;
    double clustering = 0.0;
    double clustering_random = 0.0;
    double avg_path = 0.0;  // -1 disconnected (n_v >= 2), 0 single node
    int connected = 0;      // pi
    long long components = 0;
    long long n_hits = 0;
};

// Mean local clustering; nodes of degree < 2 contribute 0, a single-node
// graph scores 0.
double clustering(const Lon& lon);

// Mean clustering over Erdos-Renyi draws G(n, p) with p = mean_degree/(n-1)
// clamped to [0, 1]; 0 for a single node.
double random_clustering(long long n_v, double mean_degree, int samples,
                         std::uint64_t seed);

// Mean shortest-path length over unordered distinct pairs when connected,
// -1 when disconnected with n_v >= 2, 0 for a single node.
double avg_shortest_path(const Lon& lon);

// (pi, S): pi = 1 iff the graph is one component.
std::pair<int, long long> connectivity_and_components(const Lon& lon);

MetricsRow metrics_row(const Lon& lon, int cr_samples, std::uint64_t seed);

// Two decimal places for the real columns, mirroring the reporting format.
std::string metrics_csv_header();
void append_metrics_csv(std::ostream& out, const MetricsRow& row);

}  // namespace dagp
