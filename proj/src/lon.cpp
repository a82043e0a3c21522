#include "dagp/lon.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "dagp/rng.hpp"

namespace dagp {

namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct Recorded {
    ExprPtr expr;
    int node = -1;  // basin index
};

}  // namespace

std::string lon_config_digest(const LonConfig& cfg) {
    std::string blob = "scaling=";
    blob += (cfg.search.scaling == ScalingMode::Linear) ? "linear" : "none";
    blob += ";init=[" + std::to_string(cfg.search.init_range.lo) + "," +
            std::to_string(cfg.search.init_range.hi) + "]";
    blob += ";widen=" + std::to_string(cfg.search.max_widenings);
    const auto& nb = cfg.search.neighbourhood;
    blob += ";exp=[" + std::to_string(nb.exponent_range.lo) + "," +
            std::to_string(nb.exponent_range.hi) + "]";
    blob += ";cap=" + std::to_string(nb.size_cap);
    blob += ";consts=";
    for (int k : nb.constant_set) blob += std::to_string(k) + ",";
    blob += ";ops=";
    for (NeighbourOp op : nb.operator_order) {
        blob += to_string(op);
        blob += ',';
    }
    blob += ";expand=" + std::to_string(cfg.expand_edges ? 1 : 0);
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(blob.data(), blob.size())));
    return hex;
}

Lon assemble_lon(const EquationSpec& spec, const Dataset& d, const LonConfig& cfg,
                 const std::vector<SearchResult>& starts) {
    // Distinct optima become nodes, ordered by canonical key.
    std::map<std::string, int> node_index;
    std::vector<const SearchResult*> node_source;
    for (const SearchResult& r : starts) {
        const std::string key = canonical_key(*r.optimum());
        if (node_index.emplace(key, 0).second) node_source.push_back(&r);
    }
    // std::map iterates in key order; fix indices accordingly.
    {
        int next = 0;
        for (auto& [key, idx] : node_index) idx = next++;
        std::sort(node_source.begin(), node_source.end(),
                  [](const SearchResult* a, const SearchResult* b) {
                      return canonical_key(*a->optimum()) < canonical_key(*b->optimum());
                  });
    }

    Lon lon;
    lon.equation_id = spec.id;
    lon.config_digest = lon_config_digest(cfg);
    lon.nodes.resize(node_index.size());
    for (std::size_t i = 0; i < node_source.size(); ++i) {
        const SearchResult& r = *node_source[i];
        LonNode& node = lon.nodes[i];
        node.key = canonical_key(*r.optimum());
        node.representative = r.optimum();
        node.expr_text = to_prefix(*r.optimum(), spec.variables);
        node.fitness = r.optimum_fitness();
        node.hit = is_hit(node.fitness);
    }

    // Every trajectory member belongs to the basin of its optimum; greedy
    // descent is memoryless, so a solution shared by two trajectories maps to
    // the same optimum.
    std::map<std::string, Recorded> recorded;
    for (const SearchResult& r : starts) {
        const int basin = node_index.at(canonical_key(*r.optimum()));
        for (const TrajectoryStep& step : r.trajectory) {
            auto [it, inserted] =
                recorded.emplace(canonical_key(*step.expr), Recorded{step.expr, basin});
            if (!inserted && it->second.node != basin) {
                throw std::logic_error("trajectory member reached two optima");
            }
        }
    }
    for (const auto& [key, rec] : recorded) {
        lon.nodes[static_cast<std::size_t>(rec.node)].basin_size += 1;
    }

    // Basin adjacency: a recorded solution with a one-step neighbour recorded
    // in a different basin connects the two basins.
    MonomialCache monomials(spec, cfg.search.neighbourhood.exponent_range);
    std::map<std::string, int> resolved;  // memo for expand_edges descents
    EvalWorkspace ws;
    std::vector<std::pair<int, int>> edges;
    for (const auto& [key, rec] : recorded) {
        for (const ExprPtr& n :
             neighbours(rec.expr, spec, cfg.search.neighbourhood, monomials)) {
            const std::string nkey = canonical_key(*n);
            int other = -1;
            if (auto it = recorded.find(nkey); it != recorded.end()) {
                other = it->second.node;
            } else if (cfg.expand_edges) {
                if (auto rit = resolved.find(nkey); rit != resolved.end()) {
                    other = rit->second;
                } else {
                    const SearchResult descent =
                        greedy_search(n, d, spec, cfg.search, monomials, ws);
                    const auto oit = node_index.find(canonical_key(*descent.optimum()));
                    // Unvisited neighbours can descend to optima outside the
                    // multi-start node set; those stay out of the network.
                    other = (oit == node_index.end()) ? -1 : oit->second;
                    resolved.emplace(nkey, other);
                }
            }
            if (other >= 0 && other != rec.node) {
                edges.emplace_back(std::min(rec.node, other), std::max(rec.node, other));
            }
        }
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    lon.edges = std::move(edges);
    return lon;
}

Lon build_lon(const EquationSpec& spec, const Dataset& d, const LonConfig& cfg) {
    const MultiStartResult result = search_all(spec, d, cfg.search);
    return assemble_lon(spec, d, cfg, result.starts);
}

int count_hits(const Lon& lon) {
    int hits = 0;
    for (const LonNode& node : lon.nodes) hits += node.hit ? 1 : 0;
    return hits;
}

GraphFormat parse_graph_format(const std::string& name) {
    if (name == "dot") return GraphFormat::Dot;
    if (name == "graphml") return GraphFormat::GraphMl;
    if (name == "csv") return GraphFormat::Csv;
    throw UnknownFormatError("unknown graph format: " + name +
                             " (expected dot, graphml or csv)");
}

void export_dot(const Lon& lon, std::ostream& out) {
    out << "graph lon {\n";
    out << "  // equation " << lon.equation_id << ", config " << lon.config_digest
        << "\n";
    for (std::size_t i = 0; i < lon.nodes.size(); ++i) {
        const LonNode& n = lon.nodes[i];
        out << "  n" << i << " [label=\"" << n.expr_text << "\", mse=\""
            << format_double(n.fitness.mse) << "\", basin=\"" << n.basin_size
            << "\", hit=\"" << (n.hit ? 1 : 0) << "\"];\n";
    }
    for (const auto& [a, b] : lon.edges) {
        out << "  n" << a << " -- n" << b << ";\n";
    }
    out << "}\n";
}

void export_graphml(const Lon& lon, std::ostream& out) {
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<!-- equation " << lon.equation_id << ", config " << lon.config_digest
        << " -->\n"
        << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
        << "  <key id=\"d0\" for=\"node\" attr.name=\"expr\" attr.type=\"string\"/>\n"
        << "  <key id=\"d1\" for=\"node\" attr.name=\"mse\" attr.type=\"double\"/>\n"
        << "  <key id=\"d2\" for=\"node\" attr.name=\"basin\" attr.type=\"long\"/>\n"
        << "  <key id=\"d3\" for=\"node\" attr.name=\"hit\" attr.type=\"boolean\"/>\n"
        << "  <graph id=\"" << lon.equation_id << "\" edgedefault=\"undirected\">\n";
    for (std::size_t i = 0; i < lon.nodes.size(); ++i) {
        const LonNode& n = lon.nodes[i];
        std::string expr = n.expr_text;
        // escape the few XML-significant characters that can appear
        std::string escaped;
        for (char c : expr) {
            switch (c) {
                case '&': escaped += "&amp;"; break;
                case '<': escaped += "&lt;"; break;
                case '>': escaped += "&gt;"; break;
                case '"': escaped += "&quot;"; break;
                default: escaped += c;
            }
        }
        out << "    <node id=\"n" << i << "\">\n"
            << "      <data key=\"d0\">" << escaped << "</data>\n"
            << "      <data key=\"d1\">" << format_double(n.fitness.mse) << "</data>\n"
            << "      <data key=\"d2\">" << n.basin_size << "</data>\n"
            << "      <data key=\"d3\">" << (n.hit ? "true" : "false") << "</data>\n"
            << "    </node>\n";
    }
    for (std::size_t i = 0; i < lon.edges.size(); ++i) {
        out << "    <edge id=\"e" << i << "\" source=\"n" << lon.edges[i].first
            << "\" target=\"n" << lon.edges[i].second << "\"/>\n";
    }
    out << "  </graph>\n</graphml>\n";
}

void export_csv(const Lon& lon, std::ostream& nodes_out, std::ostream& edges_out) {
    // the degree column feeds external degree-distribution and
    // degree-vs-basin plots
    std::vector<long long> degree(lon.nodes.size(), 0);
    for (const auto& [a, b] : lon.edges) {
        ++degree[static_cast<std::size_t>(a)];
        ++degree[static_cast<std::size_t>(b)];
    }
    nodes_out << "id,expr,mse,scale_a,scale_b,scaled,basin_size,hit,degree\n";
    for (std::size_t i = 0; i < lon.nodes.size(); ++i) {
        const LonNode& n = lon.nodes[i];
        nodes_out << i << ',' << n.expr_text << ',' << format_double(n.fitness.mse)
                  << ',' << format_double(n.fitness.scale_a) << ','
                  << format_double(n.fitness.scale_b) << ','
                  << (n.fitness.scaled ? 1 : 0) << ',' << n.basin_size << ','
                  << (n.hit ? 1 : 0) << ',' << degree[i] << '\n';
    }
    edges_out << "source,target\n";
    for (const auto& [a, b] : lon.edges) {
        edges_out << a << ',' << b << '\n';
    }
}

std::vector<std::string> export_graph(const Lon& lon, GraphFormat format,
                                      const std::filesystem::path& dir,
                                      const std::string& stem) {
    std::filesystem::create_directories(dir);
    std::vector<std::string> written;
    auto open = [&](const std::string& name) {
        std::ofstream out(dir / name, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
        written.push_back(name);
        return out;
    };
    switch (format) {
        case GraphFormat::Dot: {
            auto out = open(stem + ".dot");
            export_dot(lon, out);
            break;
        }
        case GraphFormat::GraphMl: {
            auto out = open(stem + ".graphml");
            export_graphml(lon, out);
            break;
        }
        case GraphFormat::Csv: {
            auto nodes = open(stem + "_nodes.csv");
            auto edges = open(stem + "_edges.csv");
            export_csv(lon, nodes, edges);
            break;
        }
    }
    return written;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string current;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(current);
            current.clear();
        } else if (c != '\r') {
            current += c;
        }
    }
    fields.push_back(current);
    return fields;
}

}  // namespace

Lon import_csv(std::istream& nodes_in, std::istream& edges_in) {
    Lon lon;
    std::string line;
    bool header = true;
    while (std::getline(nodes_in, line)) {
        if (header) {
            header = false;
            continue;
        }
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 9) throw DatasetError("bad LON node row: " + line);
        LonNode node;
        node.expr_text = fields[1];
        node.key = fields[1];  // text form identifies the node after import
        node.fitness.mse = std::stod(fields[2]);
        node.fitness.scale_a = std::stod(fields[3]);
        node.fitness.scale_b = std::stod(fields[4]);
        node.fitness.scaled = fields[5] == "1";
        node.basin_size = std::stoll(fields[6]);
        node.hit = fields[7] == "1";
        // fields[8] (degree) is derivable from the edge list
        lon.nodes.push_back(std::move(node));
    }
    header = true;
    while (std::getline(edges_in, line)) {
        if (header) {
            header = false;
            continue;
        }
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 2) throw DatasetError("bad LON edge row: " + line);
        lon.edges.emplace_back(std::stoi(fields[0]), std::stoi(fields[1]));
    }
    return lon;
}

}  // namespace dagp
