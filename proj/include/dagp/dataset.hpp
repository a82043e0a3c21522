#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dagp/units.hpp"

namespace dagp {

// One benchmark equation: variable names and signatures, the target
// signature, per-variable sampling ranges and the closed-form evaluator used
// to produce synthetic targets.
struct EquationSpec {
    std::string id;
    std::vector<std::string> variables;
    std::vector<UnitSignature> var_signatures;
    UnitSignature target_signature;
    std::vector<std::pair<double, double>> sampling_ranges;
    double (*ground_truth)(std::span<const double> point) = nullptr;

    int arity() const { return static_cast<int>(variables.size()); }
};

class DatasetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
class MalformedRowError : public DatasetError {
public:
    MalformedRowError(const std::string& what, int line)
        : DatasetError(what), line_number(line) {}
    int line_number;
};
class ArityMismatchError : public DatasetError {
public:
    ArityMismatchError(const std::string& what, int line)
        : DatasetError(what), line_number(line) {}
    int line_number;
};
class InsufficientRowsError : public DatasetError {
public:
    using DatasetError::DatasetError;
};
class RangeMisconfigurationError : public DatasetError {
public:
    using DatasetError::DatasetError;
};

// Sampled points bound to one equation.  Values are stored per column so
// that batch evaluation reads variables as contiguous arrays.
class Dataset {
public:
    Dataset(const EquationSpec& spec, std::vector<std::vector<double>> columns,
            std::vector<double> targets);

    const EquationSpec& spec() const { return *spec_; }
    std::size_t rows() const { return targets_.size(); }
    int arity() const { return static_cast<int>(columns_.size()); }
    std::span<const double> column(int i) const { return columns_[static_cast<std::size_t>(i)]; }
    std::span<const double> targets() const { return targets_; }
    double point(std::size_t row, int col) const {
        return columns_[static_cast<std::size_t>(col)][row];
    }

private:
    const EquationSpec* spec_;
    std::vector<std::vector<double>> columns_;
    std::vector<double> targets_;
};

// The 27 bundled equations, in benchmark order.
const std::vector<EquationSpec>& registry();
const EquationSpec* find_equation(std::string_view id);

// Whitespace-separated numeric rows "x1 x2 ... y", no header.
Dataset load_table(const std::filesystem::path& path, const EquationSpec& spec);
void write_table(const Dataset& d, const std::filesystem::path& path);

// n rows without replacement, source order preserved, deterministic per seed.
Dataset sample_uniform(const Dataset& d, std::size_t n, std::uint64_t seed);

// Uniform draws from the sampling ranges; rows whose target comes out
// non-finite are redrawn, and a range that keeps producing singular rows is
// reported as a configuration error.
Dataset generate_synthetic(const EquationSpec& spec, std::size_t n,
                           std::uint64_t seed);

// Unit-table text form: one "name [v,w,x,y,z]" line per variable followed by
// a "target [..]" line.
std::string format_unit_table(const EquationSpec& spec);
struct UnitTable {
    std::vector<std::pair<std::string, UnitSignature>> variables;
    UnitSignature target;
};
UnitTable parse_unit_table(std::string_view text);

}  // namespace dagp
