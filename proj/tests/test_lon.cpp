#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "doctest.h"

#include "dagp/lon.hpp"
#include "dagp/metrics.hpp"

using namespace dagp;

TEST_SUITE("lon") {

TEST_CASE("single-candidate equations become single-node networks") {
    for (const char* id : {"I.12.5", "I.34.8", "III.15.14"}) {
        const EquationSpec& spec = *find_equation(id);
        Dataset d = generate_synthetic(spec, 100, 1);
        LonConfig cfg;
        cfg.search.scaling = ScalingMode::Linear;
        const Lon lon = build_lon(spec, d, cfg);
        CHECK(lon.n_v() == 1);
        CHECK(lon.n_e() == 0);
        CHECK(lon.nodes[0].basin_size >= 1);
        CHECK(lon.nodes[0].hit);
        CHECK(count_hits(lon) == 1);
        CHECK(lon.equation_id == id);
    }
}

TEST_CASE("node keys are unique, basins cover the starts, no self loops") {
    const EquationSpec& spec = *find_equation("II.11.3");
    Dataset d = generate_synthetic(spec, 100, 1);
    LonConfig cfg;
    cfg.search.scaling = ScalingMode::None;
    const MultiStartResult result = search_all(spec, d, cfg.search);
    const Lon lon = assemble_lon(spec, d, cfg, result.starts);

    std::set<std::string> keys;
    long long basin_total = 0;
    for (const LonNode& node : lon.nodes) {
        CHECK(keys.insert(node.key).second);
        CHECK(node.basin_size >= 1);
        basin_total += node.basin_size;
    }
    CHECK(basin_total >= static_cast<long long>(result.starts.size()));
    for (const auto& [a, b] : lon.edges) {
        CHECK(a < b);
        CHECK(b < lon.n_v());
    }
    CHECK(std::is_sorted(lon.nodes.begin(), lon.nodes.end(),
                         [](const LonNode& x, const LonNode& y) { return x.key < y.key; }));
}

TEST_CASE("merging starts share one node with a bigger basin") {
    // I.39.22 with scaling funnels its seven starts into fewer optima
    const EquationSpec& spec = *find_equation("I.39.22");
    Dataset d = generate_synthetic(spec, 100, 1);
    LonConfig cfg;
    cfg.search.scaling = ScalingMode::Linear;
    const MultiStartResult result = search_all(spec, d, cfg.search);
    const Lon lon = assemble_lon(spec, d, cfg, result.starts);
    REQUIRE(result.starts.size() == 7);
    REQUIRE(lon.n_v() < 7);
    bool some_basin_spans_two = false;
    long long basin_total = 0;
    for (const LonNode& node : lon.nodes) {
        if (node.basin_size >= 2) some_basin_spans_two = true;
        basin_total += node.basin_size;
    }
    CHECK(some_basin_spans_two);
    CHECK(basin_total >= 7);  // every start is a recorded basin member
}

TEST_CASE("assembly does not depend on start order") {
    const EquationSpec& spec = *find_equation("I.24.6");
    Dataset d = generate_synthetic(spec, 100, 1);
    LonConfig cfg;
    cfg.search.scaling = ScalingMode::Linear;
    const MultiStartResult result = search_all(spec, d, cfg.search);

    std::vector<SearchResult> shuffled = result.starts;
    std::reverse(shuffled.begin(), shuffled.end());
    const Lon a = assemble_lon(spec, d, cfg, result.starts);
    const Lon b = assemble_lon(spec, d, cfg, shuffled);
    REQUIRE(a.n_v() == b.n_v());
    CHECK(a.edges == b.edges);
    for (std::size_t i = 0; i < a.nodes.size(); ++i) {
        CHECK(a.nodes[i].key == b.nodes[i].key);
        CHECK(a.nodes[i].basin_size == b.nodes[i].basin_size);
    }
}

TEST_CASE("edge endpoints are one-step neighbours across basins") {
    const EquationSpec& spec = *find_equation("I.24.6");
    Dataset d = generate_synthetic(spec, 100, 1);
    LonConfig cfg;
    cfg.search.scaling = ScalingMode::Linear;
    const MultiStartResult result = search_all(spec, d, cfg.search);
    const Lon lon = assemble_lon(spec, d, cfg, result.starts);

    // replay: recorded solutions per basin
    std::map<std::string, int> node_of;
    for (std::size_t i = 0; i < lon.nodes.size(); ++i) node_of[lon.nodes[i].key] = (int)i;
    std::map<std::string, std::pair<ExprPtr, int>> recorded;
    for (const SearchResult& r : result.starts) {
        const int basin = node_of.at(canonical_key(*r.optimum()));
        for (const TrajectoryStep& step : r.trajectory) {
            recorded.emplace(canonical_key(*step.expr), std::pair{step.expr, basin});
        }
    }
    MonomialCache cache(spec, cfg.search.neighbourhood.exponent_range);
    std::set<std::pair<int, int>> replayed;
    for (const auto& [key, rec] : recorded) {
        for (const ExprPtr& n : neighbours(rec.first, spec, cfg.search.neighbourhood, cache)) {
            auto it = recorded.find(canonical_key(*n));
            if (it != recorded.end() && it->second.second != rec.second) {
                replayed.emplace(std::min(rec.second, it->second.second),
                                 std::max(rec.second, it->second.second));
            }
        }
    }
    CHECK(std::set<std::pair<int, int>>(lon.edges.begin(), lon.edges.end()) == replayed);
}

TEST_CASE("expanded edge scope only adds edges") {
    const EquationSpec& spec = *find_equation("I.24.6");
    Dataset d = generate_synthetic(spec, 100, 1);
    LonConfig plain;
    plain.search.scaling = ScalingMode::Linear;
    LonConfig expanded = plain;
    expanded.expand_edges = true;
    const Lon a = build_lon(spec, d, plain);
    const Lon b = build_lon(spec, d, expanded);
    CHECK(a.n_v() == b.n_v());
    CHECK(b.n_e() >= a.n_e());
    std::set<std::pair<int, int>> be(b.edges.begin(), b.edges.end());
    for (const auto& edge : a.edges) CHECK(be.count(edge));
}

TEST_CASE("exports are deterministic and carry the attributes") {
    const EquationSpec& spec = *find_equation("I.12.5");
    Dataset d = generate_synthetic(spec, 100, 1);
    LonConfig cfg;
    cfg.search.scaling = ScalingMode::Linear;
    const Lon lon = build_lon(spec, d, cfg);

    std::ostringstream dot1, dot2;
    export_dot(lon, dot1);
    export_dot(lon, dot2);
    CHECK(dot1.str() == dot2.str());
    CHECK(dot1.str().find("n0") != std::string::npos);
    CHECK(dot1.str().find("hit=\"1\"") != std::string::npos);
    CHECK(dot1.str().find("--") == std::string::npos);  // no edges

    std::ostringstream gml;
    export_graphml(lon, gml);
    CHECK(gml.str().find("<node id=\"n0\">") != std::string::npos);
    CHECK(gml.str().find("<edge") == std::string::npos);

    CHECK_THROWS_AS(parse_graph_format("svg"), UnknownFormatError);
    CHECK(parse_graph_format("dot") == GraphFormat::Dot);
}

TEST_CASE("edge CSV round-trip preserves the metric row") {
    const EquationSpec& spec = *find_equation("II.11.3");
    Dataset d = generate_synthetic(spec, 100, 1);
    LonConfig cfg;
    cfg.search.scaling = ScalingMode::Linear;
    const Lon lon = build_lon(spec, d, cfg);

    std::ostringstream nodes, edges;
    export_csv(lon, nodes, edges);
    const std::string edge_text = edges.str();
    CHECK(static_cast<long long>(std::count(edge_text.begin(), edge_text.end(), '\n')) ==
          lon.n_e() + 1);  // header plus one line per edge

    std::istringstream nodes_in(nodes.str()), edges_in(edge_text);
    Lon back = import_csv(nodes_in, edges_in);
    back.equation_id = lon.equation_id;

    const MetricsRow original = metrics_row(lon, 50, 99);
    const MetricsRow replayed = metrics_row(back, 50, 99);
    CHECK(original.n_v == replayed.n_v);
    CHECK(original.n_e == replayed.n_e);
    CHECK(original.clustering == replayed.clustering);
    CHECK(original.clustering_random == replayed.clustering_random);
    CHECK(original.avg_path == replayed.avg_path);
    CHECK(original.connected == replayed.connected);
    CHECK(original.components == replayed.components);
    CHECK(original.n_hits == replayed.n_hits);
}

}  // TEST_SUITE
