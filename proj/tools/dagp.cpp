// dagp — dimensionally-aware symbolic regression over the bundled Feynman
// equations: initial-set enumeration, deterministic multi-start local search,
// local-optima-network extraction with graph metrics, and a steady-state GP
// baseline.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "dagp/gp.hpp"
#include "dagp/initializer.hpp"
#include "dagp/localsearch.hpp"
#include "dagp/lon.hpp"
#include "dagp/metrics.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace dagp;

namespace {

constexpr const char* kVersion = "0.1.0";

struct RunConfig {
    std::vector<std::string> equations{"all"};
    std::string mode = "linear-scaling";  // or "no-scaling"
    int exp_lo = -3, exp_hi = 3;
    std::vector<int> const_set{-3, -2, -1, 1, 2, 3};
    std::vector<std::string> op_order;  // empty selects the default order
    std::string data;                   // dataset file; empty means synthetic
    std::uint64_t seed = 1;
    std::size_t n = 100;
    std::string out;
    int jobs = 0;  // 0 = all hardware threads
    int max_widenings = 3;
    int size_cap = 42;
    bool trajectories = false;

    std::vector<std::string> formats{"dot", "graphml", "csv"};
    int cr_samples = 100;
    std::uint64_t cr_seed = 12345;
    bool expand_edges = false;

    int gp_runs = 10;
    long long gp_budget = 100000;
    int gp_population = 500;
    double gp_mutation = 0.5;
    int gp_depth = 6;
};

json to_json(const RunConfig& c) {
    return json{{"equations", c.equations},
                {"mode", c.mode},
                {"exp_range", {c.exp_lo, c.exp_hi}},
                {"const_set", c.const_set},
                {"op_order", c.op_order},
                {"data", c.data},
                {"seed", c.seed},
                {"n", c.n},
                {"out", c.out},
                {"jobs", c.jobs},
                {"max_widenings", c.max_widenings},
                {"size_cap", c.size_cap},
                {"trajectories", c.trajectories},
                {"formats", c.formats},
                {"cr_samples", c.cr_samples},
                {"cr_seed", c.cr_seed},
                {"expand_edges", c.expand_edges},
                {"gp_runs", c.gp_runs},
                {"gp_budget", c.gp_budget},
                {"gp_population", c.gp_population},
                {"gp_mutation", c.gp_mutation},
                {"gp_depth", c.gp_depth}};
}

void from_json_into(const json& j, RunConfig& c) {
    auto get = [&](const char* key, auto& value) {
        if (j.contains(key)) j.at(key).get_to(value);
    };
    get("equations", c.equations);
    get("mode", c.mode);
    if (j.contains("exp_range")) {
        c.exp_lo = j["exp_range"].at(0).get<int>();
        c.exp_hi = j["exp_range"].at(1).get<int>();
    }
    get("const_set", c.const_set);
    get("op_order", c.op_order);
    get("data", c.data);
    get("seed", c.seed);
    get("n", c.n);
    get("out", c.out);
    get("jobs", c.jobs);
    get("max_widenings", c.max_widenings);
    get("size_cap", c.size_cap);
    get("trajectories", c.trajectories);
    get("formats", c.formats);
    get("cr_samples", c.cr_samples);
    get("cr_seed", c.cr_seed);
    get("expand_edges", c.expand_edges);
    get("gp_runs", c.gp_runs);
    get("gp_budget", c.gp_budget);
    get("gp_population", c.gp_population);
    get("gp_mutation", c.gp_mutation);
    get("gp_depth", c.gp_depth);
}

ScalingMode scaling_of(const RunConfig& c) {
    if (c.mode == "linear-scaling") return ScalingMode::Linear;
    if (c.mode == "no-scaling") return ScalingMode::None;
    throw std::invalid_argument("invalid mode '" + c.mode +
                                "' (expected no-scaling or linear-scaling)");
}

std::vector<const EquationSpec*> resolve_equations(const RunConfig& c) {
    std::vector<const EquationSpec*> specs;
    for (const std::string& id : c.equations) {
        if (id == "all") {
            for (const auto& spec : registry()) specs.push_back(&spec);
            continue;
        }
        const EquationSpec* spec = find_equation(id);
        if (!spec) throw std::invalid_argument("unknown equation id: " + id);
        specs.push_back(spec);
    }
    if (specs.empty()) throw std::invalid_argument("no equations selected");
    return specs;
}

SearchConfig search_config_of(const RunConfig& c) {
    SearchConfig cfg;
    cfg.scaling = scaling_of(c);
    cfg.init_range = {c.exp_lo, c.exp_hi};
    cfg.max_widenings = c.max_widenings;
    cfg.jobs = c.jobs > 0 ? c.jobs
                          : static_cast<int>(std::thread::hardware_concurrency());
    cfg.neighbourhood.exponent_range = {c.exp_lo, c.exp_hi};
    cfg.neighbourhood.constant_set = c.const_set;
    cfg.neighbourhood.size_cap = c.size_cap;
    if (!c.op_order.empty()) {
        cfg.neighbourhood.operator_order.clear();
        for (const std::string& name : c.op_order) {
            cfg.neighbourhood.operator_order.push_back(parse_neighbour_op(name));
        }
    }
    cfg.neighbourhood.validate();
    return cfg;
}

Dataset dataset_for(const EquationSpec& spec, const RunConfig& c) {
    if (!c.data.empty()) {
        Dataset full = load_table(c.data, spec);
        if (c.n < full.rows()) return sample_uniform(full, c.n, c.seed);
        return full;
    }
    return generate_synthetic(spec, c.n, c.seed);
}

// A dataset file carries the rows of exactly one equation.
void check_data_selection(const RunConfig& c,
                          const std::vector<const EquationSpec*>& specs) {
    if (!c.data.empty() && specs.size() != 1) {
        throw std::invalid_argument(
            "--data provides rows for a single equation; select exactly one --eq");
    }
}

std::string config_digest(const json& config) {
    const std::string dump = config.dump();
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(dump.data(), dump.size())));
    return hex;
}

void write_manifest(const RunConfig& c, const std::string& command) {
    if (c.out.empty()) return;
    fs::create_directories(c.out);
    json config = to_json(c);
    json manifest{{"tool", "dagp"},
                  {"version", kVersion},
                  {"command", command},
                  {"digest", config_digest(config)},
                  {"config", config}};
    std::ofstream out(fs::path(c.out) / ("manifest_" + command + ".json"),
                      std::ios::binary);
    out << manifest.dump(2) << '\n';
}

std::ofstream open_out(const fs::path& path) {
    if (!path.parent_path().empty()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

// ---------------------------------------------------------------- enum ----

int cmd_enum(const RunConfig& c) {
    const SearchConfig cfg = search_config_of(c);
    std::ostringstream buffer;
    for (const EquationSpec* spec : resolve_equations(c)) {
        const auto initial =
            enumerate_with_restart(*spec, cfg.init_range, cfg.max_widenings);
        buffer << "# " << spec->id << ": " << initial.size() << " candidates, target "
               << to_string(spec->target_signature) << '\n';
        for (const ExprPtr& e : initial) {
            buffer << to_prefix(*e, spec->variables) << ' ' << to_string(e->signature)
                   << '\n';
        }
    }
    if (c.out.empty()) {
        std::cout << buffer.str();
    } else {
        auto out = open_out(fs::path(c.out) / "enum.txt");
        out << buffer.str();
        write_manifest(c, "enum");
    }
    return 0;
}

// -------------------------------------------------------------- search ----

int cmd_search(const RunConfig& c) {
    const SearchConfig cfg = search_config_of(c);
    const auto specs = resolve_equations(c);
    check_data_selection(c, specs);
    std::ostringstream csv;
    csv << "equation,mode,initial_candidates,total_evaluations,first_hit_evaluation,"
           "solved\n";
    for (const EquationSpec* spec : specs) {
        const Dataset d = dataset_for(*spec, c);
        const MultiStartResult result = search_all(*spec, d, cfg);
        csv << spec->id << ',' << c.mode << ',' << result.starts.size() << ','
            << result.total_evaluations << ',';
        if (result.first_hit_evaluation) {
            csv << *result.first_hit_evaluation;
        } else {
            csv << '-';
        }
        csv << ',' << (result.solved ? 1 : 0) << '\n';

        if (c.trajectories && !c.out.empty()) {
            auto out = open_out(fs::path(c.out) /
                                ("traj_" + spec->id + "_" + c.mode + ".jsonl"));
            for (std::size_t s = 0; s < result.starts.size(); ++s) {
                const SearchResult& r = result.starts[s];
                for (std::size_t step = 0; step < r.trajectory.size(); ++step) {
                    const TrajectoryStep& ts = r.trajectory[step];
                    json rec{{"start", s},
                             {"step", step},
                             {"expr", to_prefix(*ts.expr, spec->variables)},
                             {"mse", ts.fitness.mse},
                             {"a", ts.fitness.scale_a},
                             {"b", ts.fitness.scale_b}};
                    out << rec.dump() << '\n';
                }
            }
        }
    }
    if (c.out.empty()) {
        std::cout << csv.str();
    } else {
        auto out = open_out(fs::path(c.out) / ("search_" + c.mode + ".csv"));
        out << csv.str();
        write_manifest(c, "search");
    }
    return 0;
}

// ----------------------------------------------------------------- lon ----

int cmd_lon(const RunConfig& c) {
    if (c.out.empty()) throw std::invalid_argument("lon requires --out");
    LonConfig lc;
    lc.search = search_config_of(c);
    lc.expand_edges = c.expand_edges;

    const auto specs = resolve_equations(c);
    check_data_selection(c, specs);
    std::ostringstream csv;
    csv << metrics_csv_header() << '\n';
    json rows = json::array();
    for (const EquationSpec* spec : specs) {
        const Dataset d = dataset_for(*spec, c);
        const Lon lon = build_lon(*spec, d, lc);
        for (const std::string& format : c.formats) {
            export_graph(lon, parse_graph_format(format), c.out,
                         "lon_" + spec->id + "_" + c.mode);
        }
        const MetricsRow row = metrics_row(lon, c.cr_samples, c.cr_seed);
        append_metrics_csv(csv, row);
        rows.push_back(json{{"equation", row.equation_id},
                            {"n_v", row.n_v},
                            {"n_e", row.n_e},
                            {"C_mean", row.clustering},
                            {"C_rand", row.clustering_random},
                            {"l_mean", row.avg_path},
                            {"pi", row.connected},
                            {"S", row.components},
                            {"n_hits", row.n_hits},
                            {"config_digest", lon.config_digest}});
    }
    {
        auto out = open_out(fs::path(c.out) / ("metrics_" + c.mode + ".csv"));
        out << csv.str();
    }
    {
        auto out = open_out(fs::path(c.out) / ("metrics_" + c.mode + ".json"));
        out << rows.dump(2) << '\n';
    }
    write_manifest(c, "lon");
    return 0;
}

// ------------------------------------------------------------------ gp ----

int cmd_gp(const RunConfig& c) {
    if (c.out.empty()) throw std::invalid_argument("gp requires --out");
    gp::GpConfig gcfg;
    gcfg.population_size = c.gp_population;
    gcfg.mutation_rate = c.gp_mutation;
    gcfg.max_depth = c.gp_depth;
    gcfg.budget = c.gp_budget;
    gcfg.scaling = scaling_of(c);

    const auto specs = resolve_equations(c);
    check_data_selection(c, specs);
    std::ostringstream csv;
    csv << "equation,mode,runs,successes,evaluations_estimate\n";
    for (const EquationSpec* spec : specs) {
        const Dataset d = dataset_for(*spec, c);
        std::vector<gp::GpRunOutcome> outcomes;
        auto out = open_out(fs::path(c.out) /
                            ("gp_runs_" + spec->id + "_" + c.mode + ".jsonl"));
        for (int run = 0; run < c.gp_runs; ++run) {
            const std::uint64_t run_seed = c.seed + static_cast<std::uint64_t>(run);
            outcomes.push_back(gp::run_gp(*spec, d, gcfg, run_seed));
            const gp::GpRunOutcome& o = outcomes.back();
            json rec{{"run", run},
                     {"seed", run_seed},
                     {"success", o.success},
                     {"evaluations", o.evaluations},
                     {"best_mse", o.best_mse},
                     {"best_expression", o.best_expression},
                     // initialization evaluations count toward the budget
                     {"budget_includes_init", true}};
            out << rec.dump() << '\n';
        }
        const auto estimate = gp::estimate_evaluations(outcomes);
        long long successes = 0;
        for (const auto& o : outcomes) successes += o.success ? 1 : 0;
        csv << spec->id << ',' << c.mode << ',' << c.gp_runs << ',' << successes
            << ',';
        if (estimate) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.1f", *estimate);
            csv << buf;
        } else {
            csv << '-';
        }
        csv << '\n';
    }
    auto out = open_out(fs::path(c.out) / ("gp_" + c.mode + ".csv"));
    out << csv.str();
    write_manifest(c, "gp");
    return 0;
}

// -------------------------------------------------------------- report ----

std::vector<std::vector<std::string>> read_csv(const fs::path& path) {
    std::vector<std::vector<std::string>> rows;
    std::ifstream in(path);
    if (!in) return rows;
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (header) {
            header = false;
            continue;
        }
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::string field;
        for (char ch : line) {
            if (ch == ',') {
                fields.push_back(field);
                field.clear();
            } else if (ch != '\r') {
                field += ch;
            }
        }
        fields.push_back(field);
        rows.push_back(std::move(fields));
    }
    return rows;
}

int cmd_report(const RunConfig& c) {
    if (c.out.empty()) throw std::invalid_argument("report requires --out");
    const fs::path dir(c.out);
    std::map<std::string, std::map<std::string, std::string>> search;  // eq -> mode -> hit
    std::map<std::string, std::map<std::string, std::string>> gp_cells;
    for (const char* mode : {"no-scaling", "linear-scaling"}) {
        for (const auto& row : read_csv(dir / (std::string("search_") + mode + ".csv"))) {
            if (row.size() >= 6) search[row[0]][mode] = row[4];
        }
        for (const auto& row : read_csv(dir / (std::string("gp_") + mode + ".csv"))) {
            if (row.size() >= 5) {
                gp_cells[row[0]][mode] =
                    (row[4] == "-") ? "-" : row[4] + " (" + row[3] + ")";
            }
        }
    }
    auto cell = [](const auto& table, const std::string& eq, const char* mode) {
        auto it = table.find(eq);
        if (it == table.end()) return std::string("-");
        auto jt = it->second.find(mode);
        return jt == it->second.end() ? std::string("-") : jt->second;
    };
    std::ostringstream csv;
    csv << "equation,dagp_no-scaling,dagp_linear-scaling,gp_no-scaling,"
           "gp_linear-scaling\n";
    for (const auto& spec : registry()) {
        csv << spec.id << ',' << cell(search, spec.id, "no-scaling") << ','
            << cell(search, spec.id, "linear-scaling") << ','
            << cell(gp_cells, spec.id, "no-scaling") << ','
            << cell(gp_cells, spec.id, "linear-scaling") << '\n';
    }
    auto out = open_out(dir / "report.csv");
    out << csv.str();
    return 0;
}

// --------------------------------------------------------------- units ----

int cmd_units(const RunConfig& c) {
    for (const EquationSpec* spec : resolve_equations(c)) {
        if (c.out.empty()) {
            std::cout << "# " << spec->id << '\n' << format_unit_table(*spec);
        } else {
            auto out = open_out(fs::path(c.out) / (spec->id + ".units"));
            out << format_unit_table(*spec);
        }
    }
    return 0;
}

void add_common_options(CLI::App* cmd, RunConfig& c, std::string& config_path) {
    cmd->add_option("--config", config_path, "JSON config or manifest to load first");
    cmd->add_option("--eq", c.equations, "equation ids, or 'all'")->delimiter(',');
    cmd->add_option("--mode", c.mode, "no-scaling | linear-scaling");
    cmd->add_option("--exp-lo", c.exp_lo, "exponent range lower bound");
    cmd->add_option("--exp-hi", c.exp_hi, "exponent range upper bound");
    cmd->add_option("--const-set", c.const_set, "integer constant set")->delimiter(',');
    cmd->add_option("--op-order", c.op_order,
                    "operator order (replace, add-comm, sub-comm, mul-int, div-int)")
        ->delimiter(',');
    cmd->add_option("--data", c.data, "dataset file (whitespace rows, target last)");
    cmd->add_option("--seed", c.seed, "dataset / run seed");
    cmd->add_option("--n", c.n, "number of data points");
    cmd->add_option("--out", c.out, "output directory");
    cmd->add_option("--jobs", c.jobs, "worker threads (0 = hardware)");
    cmd->add_option("--max-widenings", c.max_widenings,
                    "initializer range widenings before giving up");
    cmd->add_option("--size-cap", c.size_cap, "maximum tree size");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dimensionally-aware symbolic regression and LON analysis"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    RunConfig c;
    std::string config_path;

    CLI::App* c_enum = app.add_subcommand("enum", "list the initial candidate set");
    CLI::App* c_search =
        app.add_subcommand("search", "multi-start local search, evaluations-to-hit CSV");
    CLI::App* c_lon =
        app.add_subcommand("lon", "build local optima networks and graph metrics");
    CLI::App* c_gp = app.add_subcommand("gp", "steady-state GP baseline");
    CLI::App* c_report =
        app.add_subcommand("report", "merge search and GP CSVs into a comparison table");
    CLI::App* c_units = app.add_subcommand("units", "print or dump unit tables");

    for (CLI::App* cmd : {c_enum, c_search, c_lon, c_gp, c_report, c_units}) {
        add_common_options(cmd, c, config_path);
    }
    c_search->add_flag("--trajectories", c.trajectories,
                       "write per-start trajectory JSONL logs");
    c_lon->add_option("--formats", c.formats, "graph export formats")->delimiter(',');
    c_lon->add_option("--cr-samples", c.cr_samples, "random-clustering sample count");
    c_lon->add_option("--cr-seed", c.cr_seed, "random-clustering seed");
    c_lon->add_flag("--expand-edges", c.expand_edges,
                    "descend unvisited neighbours to resolve their basins");
    c_gp->add_option("--runs", c.gp_runs, "independent GP runs");
    c_gp->add_option("--budget", c.gp_budget, "evaluation budget per run");
    c_gp->add_option("--population", c.gp_population, "population size");
    c_gp->add_option("--mutation-rate", c.gp_mutation, "per-offspring mutation rate");
    c_gp->add_option("--max-depth", c.gp_depth, "maximum tree depth");

    // Load --config before the regular parse so flags override file values.
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string_view(argv[i]) == "--config") {
            std::ifstream in(argv[i + 1]);
            if (!in) {
                std::cerr << "error: cannot read config " << argv[i + 1] << '\n';
                return 1;
            }
            try {
                json j = json::parse(in);
                from_json_into(j.contains("config") ? j["config"] : j, c);
            } catch (const std::exception& e) {
                std::cerr << "error: bad config: " << e.what() << '\n';
                return 1;
            }
        }
    }

    CLI11_PARSE(app, argc, argv);

    try {
        if (c_enum->parsed()) return cmd_enum(c);
        if (c_search->parsed()) return cmd_search(c);
        if (c_lon->parsed()) return cmd_lon(c);
        if (c_gp->parsed()) return cmd_gp(c);
        if (c_report->parsed()) return cmd_report(c);
        if (c_units->parsed()) return cmd_units(c);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
