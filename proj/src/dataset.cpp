#include "dagp/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "dagp/rng.hpp"

namespace dagp {

Dataset::Dataset(const EquationSpec& spec, std::vector<std::vector<double>> columns,
                 std::vector<double> targets)
    : spec_(&spec), columns_(std::move(columns)), targets_(std::move(targets)) {
    if (columns_.size() != spec.variables.size()) {
        throw DatasetError("dataset column count does not match equation arity");
    }
    for (const auto& col : columns_) {
        if (col.size() != targets_.size()) {
            throw DatasetError("ragged dataset columns");
        }
    }
    if (targets_.empty()) throw DatasetError("empty dataset");
}

namespace {

UnitSignature U(int m, int s, int kg, int K, int V) {
    return UnitSignature{{m, s, kg, K, V}};
}

// Signatures that appear repeatedly across the registry.
const UnitSignature kNone = U(0, 0, 0, 0, 0);
const UnitSignature kLength = U(1, 0, 0, 0, 0);
const UnitSignature kTime = U(0, 1, 0, 0, 0);
const UnitSignature kMass = U(0, 0, 1, 0, 0);
const UnitSignature kTemp = U(0, 0, 0, 1, 0);
const UnitSignature kVolt = U(0, 0, 0, 0, 1);
const UnitSignature kVelocity = U(1, -1, 0, 0, 0);
const UnitSignature kAccel = U(1, -2, 0, 0, 0);
const UnitSignature kForce = U(1, -2, 1, 0, 0);
const UnitSignature kEnergy = U(2, -2, 1, 0, 0);
const UnitSignature kPower = U(2, -3, 1, 0, 0);
const UnitSignature kPressure = U(-1, -2, 1, 0, 0);
const UnitSignature kCharge = U(2, -2, 1, 0, -1);
const UnitSignature kEField = U(-1, 0, 0, 0, 1);
const UnitSignature kPermittivity = U(1, -2, 1, 0, -2);
const UnitSignature kFrequency = U(0, -1, 0, 0, 0);
const UnitSignature kBField = U(-2, 1, 0, 0, 1);
const UnitSignature kBoltzmann = U(2, -2, 1, -1, 0);
const UnitSignature kMobility = U(0, 1, -1, 0, 0);
const UnitSignature kMagneticMoment = U(4, -3, 1, 0, -1);
const UnitSignature kAngularMomentum = U(2, -1, 1, 0, 0);

constexpr double kPi = std::numbers::pi;

double gt_I_8_14(std::span<const double> x) {
    const double dx = x[1] - x[0];
    const double dy = x[3] - x[2];
    return std::sqrt(dx * dx + dy * dy);
}
double gt_I_12_1(std::span<const double> x) { return x[0] * x[1]; }
double gt_I_12_2(std::span<const double> x) {
    return x[0] * x[1] / (4.0 * kPi * x[2] * x[3] * x[3]);
}
double gt_I_12_5(std::span<const double> x) { return x[0] * x[1]; }
double gt_I_13_4(std::span<const double> x) {
    return 0.5 * x[0] * (x[1] * x[1] + x[2] * x[2] + x[3] * x[3]);
}
double gt_I_14_3(std::span<const double> x) { return x[0] * x[1] * x[2]; }
double gt_I_14_4(std::span<const double> x) { return 0.5 * x[0] * x[1] * x[1]; }
double gt_I_18_4(std::span<const double> x) {
    return (x[0] * x[2] + x[1] * x[3]) / (x[0] + x[1]);
}
double gt_I_24_6(std::span<const double> x) {
    return 0.25 * x[0] * (x[1] * x[1] + x[2] * x[2]) * x[3] * x[3];
}
double gt_I_25_13(std::span<const double> x) { return x[0] / x[1]; }
double gt_I_27_6(std::span<const double> x) {
    return 1.0 / (1.0 / x[0] + x[2] / x[1]);
}
double gt_I_29_4(std::span<const double> x) { return x[0] / x[1]; }
double gt_I_32_5(std::span<const double> x) {
    return x[0] * x[0] * x[1] * x[1] / (6.0 * kPi * x[2] * x[3] * x[3] * x[3]);
}
double gt_I_34_8(std::span<const double> x) { return x[0] * x[1] * x[2] / x[3]; }
double gt_I_39_1(std::span<const double> x) { return 1.5 * x[0] * x[1]; }
double gt_I_39_22(std::span<const double> x) { return x[0] * x[1] * x[2] / x[3]; }
double gt_I_43_16(std::span<const double> x) { return x[0] * x[1] * x[2] / x[3]; }
double gt_I_43_31(std::span<const double> x) { return x[0] * x[1] * x[2]; }
double gt_II_2_42(std::span<const double> x) {
    return x[0] * (x[2] - x[1]) * x[3] / x[4];
}
double gt_II_8_31(std::span<const double> x) { return 0.5 * x[0] * x[1] * x[1]; }
double gt_II_11_3(std::span<const double> x) {
    return x[0] * x[1] / (x[2] * (x[3] * x[3] - x[4] * x[4]));
}
double gt_II_15_4(std::span<const double> x) {
    return -x[0] * x[1] * std::cos(x[2]);
}
double gt_II_34_2(std::span<const double> x) { return 0.5 * x[0] * x[1] * x[2]; }
double gt_II_34_29b(std::span<const double> x) {
    return x[0] * x[1] * x[2] * x[3] / x[4];
}
double gt_II_38_3(std::span<const double> x) { return x[0] * x[1] * x[2] / x[3]; }
double gt_III_13_18(std::span<const double> x) {
    return 2.0 * x[0] * x[1] * x[1] * x[2] / x[3];
}
double gt_III_15_14(std::span<const double> x) {
    return x[0] * x[0] / (2.0 * x[1] * x[2] * x[2]);
}

using Range = std::pair<double, double>;

EquationSpec make_spec(std::string id, std::vector<std::string> names,
                       std::vector<UnitSignature> sigs, UnitSignature target,
                       double (*gt)(std::span<const double>),
                       std::vector<Range> ranges = {}) {
    EquationSpec spec;
    spec.id = std::move(id);
    spec.variables = std::move(names);
    spec.var_signatures = std::move(sigs);
    spec.target_signature = target;
    spec.ground_truth = gt;
    if (ranges.empty()) {
        spec.sampling_ranges.assign(spec.variables.size(), Range{1.0, 5.0});
    } else {
        spec.sampling_ranges = std::move(ranges);
    }
    return spec;
}

std::vector<EquationSpec> build_registry() {
    std::vector<EquationSpec> specs;
    specs.reserve(27);
    specs.push_back(make_spec("I.8.14", {"x1", "x2", "y1", "y2"},
                              {kLength, kLength, kLength, kLength}, kLength,
                              &gt_I_8_14));
    specs.push_back(make_spec("I.12.1", {"mu", "Nn"}, {kNone, kForce}, kForce,
                              &gt_I_12_1));
    specs.push_back(make_spec("I.12.2", {"q1", "q2", "epsilon", "r"},
                              {kCharge, kCharge, kPermittivity, kLength}, kForce,
                              &gt_I_12_2));
    specs.push_back(make_spec("I.12.5", {"q2", "Ef"}, {kCharge, kEField}, kForce,
                              &gt_I_12_5));
    specs.push_back(make_spec("I.13.4", {"m", "v", "u", "w"},
                              {kMass, kVelocity, kVelocity, kVelocity}, kEnergy,
                              &gt_I_13_4));
    specs.push_back(make_spec("I.14.3", {"m", "g", "z"}, {kMass, kAccel, kLength},
                              kEnergy, &gt_I_14_3));
    specs.push_back(make_spec("I.14.4", {"k_spring", "x"},
                              {U(0, -2, 1, 0, 0), kLength}, kEnergy, &gt_I_14_4));
    specs.push_back(make_spec("I.18.4", {"m1", "m2", "r1", "r2"},
                              {kMass, kMass, kLength, kLength}, kLength,
                              &gt_I_18_4));
    specs.push_back(make_spec("I.24.6", {"m", "omega", "omega_0", "x"},
                              {kMass, kFrequency, kFrequency, kLength}, kEnergy,
                              &gt_I_24_6));
    specs.push_back(make_spec("I.25.13", {"q", "C"},
                              {kCharge, U(2, -2, 1, 0, -2)}, kVolt, &gt_I_25_13));
    specs.push_back(make_spec("I.27.6", {"d1", "d2", "n"},
                              {kLength, kLength, kNone}, kLength, &gt_I_27_6));
    specs.push_back(make_spec("I.29.4", {"omega", "c"}, {kFrequency, kVelocity},
                              U(-1, 0, 0, 0, 0), &gt_I_29_4));
    specs.push_back(make_spec("I.32.5", {"q", "a", "epsilon", "c"},
                              {kCharge, kAccel, kPermittivity, kVelocity}, kPower,
                              &gt_I_32_5));
    specs.push_back(make_spec("I.34.8", {"q", "v", "B", "p"},
                              {kCharge, kVelocity, kBField, U(1, -1, 1, 0, 0)},
                              kFrequency, &gt_I_34_8));
    specs.push_back(make_spec("I.39.1", {"pr", "V"},
                              {kPressure, U(3, 0, 0, 0, 0)}, kEnergy, &gt_I_39_1));
    specs.push_back(make_spec("I.39.22", {"n", "kb", "T", "V"},
                              {kNone, kBoltzmann, kTemp, U(3, 0, 0, 0, 0)},
                              kPressure, &gt_I_39_22));
    specs.push_back(make_spec("I.43.16", {"mu_drift", "q", "Volt", "d"},
                              {kMobility, kCharge, kVolt, kLength}, kVelocity,
                              &gt_I_43_16));
    specs.push_back(make_spec("I.43.31", {"mob", "kb", "T"},
                              {kMobility, kBoltzmann, kTemp}, U(2, -1, 0, 0, 0),
                              &gt_I_43_31));
    specs.push_back(make_spec("II.2.42", {"kappa", "T1", "T2", "A", "d"},
                              {U(1, -3, 1, -1, 0), kTemp, kTemp, U(2, 0, 0, 0, 0),
                               kLength},
                              kPower, &gt_II_2_42));
    specs.push_back(make_spec("II.8.31", {"epsilon", "Ef"},
                              {kPermittivity, kEField}, kPressure, &gt_II_8_31));
    specs.push_back(make_spec(
        "II.11.3", {"q", "Ef", "m", "omega_0", "omega"},
        {kCharge, kEField, kMass, kFrequency, kFrequency}, kLength, &gt_II_11_3,
        // Keep the resonance denominator away from zero.
        {{1.0, 5.0}, {1.0, 5.0}, {1.0, 5.0}, {3.0, 5.0}, {1.0, 2.0}}));
    specs.push_back(make_spec("II.15.4", {"mom", "B", "theta"},
                              {kMagneticMoment, kBField, kNone}, kEnergy,
                              &gt_II_15_4));
    specs.push_back(make_spec("II.34.2", {"q", "v", "r"},
                              {kCharge, kVelocity, kLength}, kMagneticMoment,
                              &gt_II_34_2));
    specs.push_back(make_spec(
        "II.34.29b", {"g_", "mom", "B", "Jz", "h"},
        {kNone, kMagneticMoment, kBField, kAngularMomentum, kAngularMomentum},
        kEnergy, &gt_II_34_29b));
    specs.push_back(make_spec("II.38.3", {"Y", "A", "x", "d"},
                              {kPressure, U(2, 0, 0, 0, 0), kLength, kLength},
                              kForce, &gt_II_38_3));
    specs.push_back(make_spec("III.13.18", {"En", "d", "k", "h"},
                              {kEnergy, kLength, U(-1, 0, 0, 0, 0),
                               kAngularMomentum},
                              kVelocity, &gt_III_13_18));
    specs.push_back(make_spec("III.15.14", {"h", "En", "d"},
                              {kAngularMomentum, kEnergy, kLength}, kMass,
                              &gt_III_15_14));
    return specs;
}

}  // namespace

const std::vector<EquationSpec>& registry() {
    static const std::vector<EquationSpec> specs = build_registry();
    return specs;
}

const EquationSpec* find_equation(std::string_view id) {
    for (const auto& spec : registry()) {
        if (spec.id == id) return &spec;
    }
    return nullptr;
}

Dataset load_table(const std::filesystem::path& path, const EquationSpec& spec) {
    std::ifstream in(path);
    if (!in) throw DatasetError("cannot open dataset file: " + path.string());

    const std::size_t arity = spec.variables.size();
    std::vector<std::vector<double>> columns(arity);
    std::vector<double> targets;

    std::string line;
    int line_number = 0;
    std::vector<double> fields;
    while (std::getline(in, line)) {
        ++line_number;
        fields.clear();
        const char* p = line.data();
        const char* end = p + line.size();
        while (p < end) {
            while (p < end && (*p == ' ' || *p == '\t' || *p == '\r')) ++p;
            if (p >= end) break;
            double value = 0.0;
            auto [next, ec] = std::from_chars(p, end, value);
            if (ec != std::errc() ||
                (next < end && *next != ' ' && *next != '\t' && *next != '\r')) {
                throw MalformedRowError("malformed field in dataset row at line " +
                                            std::to_string(line_number),
                                        line_number);
            }
            if (!std::isfinite(value)) {
                throw MalformedRowError("non-finite value at line " +
                                            std::to_string(line_number),
                                        line_number);
            }
            fields.push_back(value);
            p = next;
        }
        if (fields.empty()) continue;  // blank line
        if (fields.size() != arity + 1) {
            throw ArityMismatchError(
                "row at line " + std::to_string(line_number) + " has " +
                    std::to_string(fields.size()) + " fields, expected " +
                    std::to_string(arity + 1),
                line_number);
        }
        for (std::size_t c = 0; c < arity; ++c) columns[c].push_back(fields[c]);
        targets.push_back(fields.back());
    }
    if (targets.empty()) throw DatasetError("dataset file has no rows: " + path.string());
    return Dataset(spec, std::move(columns), std::move(targets));
}

void write_table(const Dataset& d, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw DatasetError("cannot write dataset file: " + path.string());
    char buf[32];
    for (std::size_t row = 0; row < d.rows(); ++row) {
        std::string line;
        for (int c = 0; c < d.arity(); ++c) {
            std::snprintf(buf, sizeof buf, "%.17g", d.point(row, c));
            line += buf;
            line += ' ';
        }
        std::snprintf(buf, sizeof buf, "%.17g", d.targets()[row]);
        line += buf;
        line += '\n';
        out << line;
    }
}

Dataset sample_uniform(const Dataset& d, std::size_t n, std::uint64_t seed) {
    if (n == 0) throw InsufficientRowsError("cannot sample zero rows");
    if (n > d.rows()) {
        throw InsufficientRowsError("requested " + std::to_string(n) +
                                    " rows from a dataset of " +
                                    std::to_string(d.rows()));
    }
    std::vector<std::size_t> indices(d.rows());
    for (std::size_t i = 0; i < indices.size(); ++i) indices[i] = i;
    Rng rng(seed);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j =
            i + static_cast<std::size_t>(rng.next_below(indices.size() - i));
        std::swap(indices[i], indices[j]);
    }
    indices.resize(n);
    std::sort(indices.begin(), indices.end());

    std::vector<std::vector<double>> columns(static_cast<std::size_t>(d.arity()));
    std::vector<double> targets;
    targets.reserve(n);
    for (auto& col : columns) col.reserve(n);
    for (std::size_t idx : indices) {
        for (int c = 0; c < d.arity(); ++c) {
            columns[static_cast<std::size_t>(c)].push_back(d.point(idx, c));
        }
        targets.push_back(d.targets()[idx]);
    }
    return Dataset(d.spec(), std::move(columns), std::move(targets));
}

Dataset generate_synthetic(const EquationSpec& spec, std::size_t n,
                           std::uint64_t seed) {
    if (n == 0) throw DatasetError("synthetic dataset needs at least one row");
    if (!spec.ground_truth) {
        throw DatasetError("equation " + spec.id + " has no ground-truth evaluator");
    }
    const std::size_t arity = spec.variables.size();
    std::vector<std::vector<double>> columns(arity);
    for (auto& col : columns) col.reserve(n);
    std::vector<double> targets;
    targets.reserve(n);

    Rng rng(seed);
    std::vector<double> point(arity);
    constexpr int kMaxRetries = 100;
    for (std::size_t row = 0; row < n; ++row) {
        bool ok = false;
        for (int attempt = 0; attempt < kMaxRetries && !ok; ++attempt) {
            for (std::size_t c = 0; c < arity; ++c) {
                point[c] = rng.next_range(spec.sampling_ranges[c].first,
                                          spec.sampling_ranges[c].second);
            }
            const double y = spec.ground_truth(point);
            if (std::isfinite(y)) {
                for (std::size_t c = 0; c < arity; ++c) columns[c].push_back(point[c]);
                targets.push_back(y);
                ok = true;
            }
        }
        if (!ok) {
            throw RangeMisconfigurationError(
                "sampling ranges for " + spec.id +
                " keep producing singular rows; adjust the ranges");
        }
    }
    return Dataset(spec, std::move(columns), std::move(targets));
}

std::string format_unit_table(const EquationSpec& spec) {
    std::string out;
    for (std::size_t i = 0; i < spec.variables.size(); ++i) {
        out += spec.variables[i];
        out += ' ';
        out += to_string(spec.var_signatures[i]);
        out += '\n';
    }
    out += "target ";
    out += to_string(spec.target_signature);
    out += '\n';
    return out;
}

UnitTable parse_unit_table(std::string_view text) {
    UnitTable table;
    bool saw_target = false;
    std::size_t start = 0;
    int line_number = 0;
    while (start <= text.size()) {
        std::size_t nl = text.find('\n', start);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view line = text.substr(start, nl - start);
        start = nl + 1;
        ++line_number;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;
        const std::size_t space = line.find(' ');
        if (space == std::string_view::npos) {
            throw DatasetError("unit-table line " + std::to_string(line_number) +
                               " is missing a signature");
        }
        const std::string name(line.substr(0, space));
        const UnitSignature sig = parse_signature(line.substr(space + 1));
        if (name == "target") {
            if (saw_target) throw DatasetError("duplicate target line in unit table");
            table.target = sig;
            saw_target = true;
        } else {
            if (saw_target) {
                throw DatasetError("variable line after target in unit table");
            }
            table.variables.emplace_back(name, sig);
        }
    }
    if (!saw_target) throw DatasetError("unit table has no target line");
    if (table.variables.empty()) throw DatasetError("unit table has no variables");
    return table;
}

}  // namespace dagp
