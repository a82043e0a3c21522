#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "dagp/localsearch.hpp"

namespace dagp {

class UnknownFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct LonConfig {
    SearchConfig search{};
    // When set, neighbours of recorded solutions that were never visited are
    // themselves descended to resolve their basin, adding the corresponding
    // edges.  Expensive; off by default.
    bool expand_edges = false;
};

struct LonNode {
    std::string key;        // canonical key of the optimum
    ExprPtr representative; // null after a CSV import
    std::string expr_text;  // prefix form, kept for exports and round-trips
    FitnessValue fitness;
    long long basin_size = 0;
    bool hit = false;
};

// Local optima network: one node per distinct optimum (canonical-key
// identity), basins approximated by the union of visited trajectory
// solutions, undirected edges where a solution in one basin has a one-step
// neighbour recorded in another.  Nodes are sorted by key and edges are
// sorted (i < j) pairs, so equal inputs export byte-identical files.
struct Lon {
    std::string equation_id;
    std::string config_digest;
    std::vector<LonNode> nodes;
    std::vector<std::pair<int, int>> edges;

    long long n_v() const { return static_cast<long long>(nodes.size()); }
    long long n_e() const { return static_cast<long long>(edges.size()); }
};

Lon build_lon(const EquationSpec& spec, const Dataset& d, const LonConfig& cfg);

// Assembly step split out so the node/edge sets can be shown independent of
// start order.
Lon assemble_lon(const EquationSpec& spec, const Dataset& d, const LonConfig& cfg,
                 const std::vector<SearchResult>& starts);

int count_hits(const Lon& lon);

std::string lon_config_digest(const LonConfig& cfg);

enum class GraphFormat { Dot, GraphMl, Csv };
GraphFormat parse_graph_format(const std::string& name);  // throws UnknownFormatError

void export_dot(const Lon& lon, std::ostream& out);
void export_graphml(const Lon& lon, std::ostream& out);
void export_csv(const Lon& lon, std::ostream& nodes_out, std::ostream& edges_out);

// Writes "<stem>.dot", "<stem>.graphml" or "<stem>_nodes.csv" plus
// "<stem>_edges.csv" under dir; returns the file names written.
std::vector<std::string> export_graph(const Lon& lon, GraphFormat format,
                                      const std::filesystem::path& dir,
                                      const std::string& stem);

Lon import_csv(std::istream& nodes_in, std::istream& edges_in);

}  // namespace dagp
