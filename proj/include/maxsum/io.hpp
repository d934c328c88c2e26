#pragma once

#include <string>
#include <vector>

#include "maxsum/mc.hpp"
#include "maxsum/model.hpp"

namespace maxsum::io {

// Comma- or tab-delimited numeric table, one observation per row. The
// delimiter is detected from the first line; a header row is optional.
struct DelimitedTable {
    std::vector<std::string> column_names;  // empty when no header
    Matrix values;
};

DelimitedTable read_delimited(const std::string& path, bool header);

// Single-column response file (same format).
Vector read_response_file(const std::string& path, bool header);

// Pulls the response out of a design table by column name or 0-based index.
struct DesignResponse {
    Matrix X;
    Vector y;
    std::vector<std::string> covariate_names;
};

DesignResponse split_response(const DelimitedTable& table,
                              const std::string& column_spec);

enum class ExperimentKind { Size, Power, IndependenceDiag };

struct SimulationSpec {
    ExperimentKind kind = ExperimentKind::Size;
    ExperimentConfig config;
    std::vector<int> grid;                       // power campaigns
    MaxVariant diag_variant = MaxVariant::RM1;   // diag campaigns
};

// Flat key=value config with dotted section names; '#' starts a comment.
// Unknown keys are errors. The seed is supplied by the caller, not the file.
SimulationSpec parse_simulation_config(const std::string& path);

// Serialization: line-delimited JSON records plus aligned text tables.
std::string reports_jsonl(const std::vector<TestReport>& reports);
std::string reports_text(const std::vector<TestReport>& reports, double alpha);

std::string size_table_jsonl(const SizeTable& table);
std::string size_table_text(const SizeTable& table);

std::string power_curve_jsonl(const PowerCurve& curve);
std::string power_curve_text(const PowerCurve& curve);

std::string diag_jsonl(const IndependenceDiag& diag);
std::string diag_text(const IndependenceDiag& diag);

struct RunManifest {
    std::string command;
    std::vector<std::pair<std::string, std::string>> config_snapshot;
    std::uint64_t seed = 0;
    int workers = 0;
    std::string version;
    std::string started_at;       // timestamp; exempt from reproducibility
    double duration_seconds = 0;  // likewise
    std::vector<std::string> outputs;
};

std::string manifest_json(const RunManifest& manifest);

void write_file(const std::string& path, const std::string& content);

}  // namespace maxsum::io
