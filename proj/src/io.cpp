#include "maxsum/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "maxsum/version.hpp"

namespace maxsum::io {

namespace {

using nlohmann::json;

std::string trim(const std::string& text) {
    const auto begin = text.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = text.find_last_not_of(" \t\r\n");
    return text.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string& line, char delim) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream stream(line);
    while (std::getline(stream, field, delim)) fields.push_back(field);
    if (!line.empty() && line.back() == delim) fields.push_back("");
    return fields;
}

double parse_cell(const std::string& raw, const std::string& path, std::size_t row,
                  std::size_t col) {
    const std::string cell = trim(raw);
    double value = 0.0;
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    const auto result = std::from_chars(begin, end, value);
    if (result.ec != std::errc() || result.ptr != end || cell.empty()) {
        throw ParseError(path + ": malformed numeric cell at row " +
                         std::to_string(row) + ", column " + std::to_string(col) +
                         ": '" + cell + "'");
    }
    return value;
}

char detect_delimiter(const std::string& line) {
    return line.find('\t') != std::string::npos ? '\t' : ',';
}

}  // namespace

DelimitedTable read_delimited(const std::string& path, bool header) {
    std::ifstream input(path);
    if (!input) throw ParseError("cannot open '" + path + "'");

    std::vector<std::string> lines;
    std::string line;
    while (std::getline(input, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        lines.push_back(line);
    }
    if (lines.empty()) throw ParseError(path + ": file holds no data rows");

    const char delim = detect_delimiter(lines.front());
    DelimitedTable table;
    std::size_t first_row = 0;
    if (header) {
        for (const std::string& name : split(lines.front(), delim)) {
            table.column_names.push_back(trim(name));
        }
        first_row = 1;
        if (lines.size() == 1) throw ParseError(path + ": header but no data rows");
    }

    const std::size_t rows = lines.size() - first_row;
    const std::size_t cols = split(lines[first_row], delim).size();
    if (header && table.column_names.size() != cols) {
        throw ParseError(path + ": header has " +
                         std::to_string(table.column_names.size()) +
                         " fields but data rows have " + std::to_string(cols));
    }
    table.values.resize(static_cast<Index>(rows), static_cast<Index>(cols));
    for (std::size_t r = 0; r < rows; ++r) {
        const std::vector<std::string> fields = split(lines[first_row + r], delim);
        if (fields.size() != cols) {
            throw ParseError(path + ": row " + std::to_string(r + 1) + " has " +
                             std::to_string(fields.size()) + " fields, expected " +
                             std::to_string(cols));
        }
        for (std::size_t c = 0; c < cols; ++c) {
            table.values(static_cast<Index>(r), static_cast<Index>(c)) =
                parse_cell(fields[c], path, r + 1, c + 1);
        }
    }
    return table;
}

Vector read_response_file(const std::string& path, bool header) {
    const DelimitedTable table = read_delimited(path, header);
    if (table.values.cols() != 1) {
        throw ParseError(path + ": response file must have exactly one column");
    }
    return table.values.col(0);
}

DesignResponse split_response(const DelimitedTable& table,
                              const std::string& column_spec) {
    const Index cols = table.values.cols();
    Index target = -1;
    for (std::size_t j = 0; j < table.column_names.size(); ++j) {
        if (table.column_names[j] == column_spec) {
            target = static_cast<Index>(j);
            break;
        }
    }
    if (target < 0) {
        int index = 0;
        const auto result = std::from_chars(
            column_spec.data(), column_spec.data() + column_spec.size(), index);
        if (result.ec == std::errc() &&
            result.ptr == column_spec.data() + column_spec.size() && index >= 0 &&
            index < cols) {
            target = index;
        }
    }
    if (target < 0) {
        throw ParseError("response column '" + column_spec +
                         "' matches no header name or column index");
    }

    DesignResponse out;
    out.y = table.values.col(target);
    out.X.resize(table.values.rows(), cols - 1);
    Index write = 0;
    for (Index j = 0; j < cols; ++j) {
        if (j == target) continue;
        out.X.col(write) = table.values.col(j);
        if (!table.column_names.empty()) {
            out.covariate_names.push_back(table.column_names[static_cast<std::size_t>(j)]);
        }
        ++write;
    }
    return out;
}

namespace {

class ConfigReader {
public:
    explicit ConfigReader(const std::string& path) : path_(path) {
        std::ifstream input(path);
        if (!input) throw ConfigError("cannot open config '" + path + "'");
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(input, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            const std::string content = trim(line);
            if (content.empty()) continue;
            const auto eq = content.find('=');
            if (eq == std::string::npos) {
                throw ConfigError(path + ":" + std::to_string(lineno) +
                                  ": expected 'key = value'");
            }
            const std::string key = trim(content.substr(0, eq));
            const std::string value = trim(content.substr(eq + 1));
            if (key.empty()) {
                throw ConfigError(path + ":" + std::to_string(lineno) + ": empty key");
            }
            if (!values_.emplace(key, value).second) {
                throw ConfigError(path + ": duplicate key '" + key + "'");
            }
        }
    }

    bool has(const std::string& key) const { return values_.count(key) > 0; }

    std::string require(const std::string& key) {
        const auto found = values_.find(key);
        if (found == values_.end()) {
            throw ConfigError(path_ + ": missing required key '" + key + "'");
        }
        consumed_.insert(key);
        return found->second;
    }

    std::string get_or(const std::string& key, const std::string& fallback) {
        const auto found = values_.find(key);
        if (found == values_.end()) return fallback;
        consumed_.insert(key);
        return found->second;
    }

    long get_long(const std::string& key, long fallback) {
        return has(key) ? to_long(key, get_or(key, "")) : fallback;
    }

    long require_long(const std::string& key) { return to_long(key, require(key)); }

    double get_double(const std::string& key, double fallback) {
        return has(key) ? to_double(key, get_or(key, "")) : fallback;
    }

    void finish() const {
        for (const auto& [key, value] : values_) {
            if (consumed_.count(key) == 0) {
                throw ConfigError(path_ + ": unknown key '" + key + "'");
            }
        }
    }

    const std::string& path() const { return path_; }

private:
    long to_long(const std::string& key, const std::string& text) const {
        long value = 0;
        const auto result =
            std::from_chars(text.data(), text.data() + text.size(), value);
        if (result.ec != std::errc() || result.ptr != text.data() + text.size()) {
            throw ConfigError(path_ + ": key '" + key + "' needs an integer, got '" +
                              text + "'");
        }
        return value;
    }

    double to_double(const std::string& key, const std::string& text) const {
        double value = 0.0;
        const auto result =
            std::from_chars(text.data(), text.data() + text.size(), value);
        if (result.ec != std::errc() || result.ptr != text.data() + text.size()) {
            throw ConfigError(path_ + ": key '" + key + "' needs a number, got '" +
                              text + "'");
        }
        return value;
    }

    std::string path_;
    std::map<std::string, std::string> values_;
    std::set<std::string> consumed_;
};

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> items;
    for (const std::string& piece : split(text, ',')) {
        const std::string item = trim(piece);
        if (!item.empty()) items.push_back(item);
    }
    return items;
}

}  // namespace

SimulationSpec parse_simulation_config(const std::string& path) {
    ConfigReader reader(path);
    SimulationSpec spec;

    const std::string kind = reader.require("experiment");
    if (kind == "size") {
        spec.kind = ExperimentKind::Size;
    } else if (kind == "power") {
        spec.kind = ExperimentKind::Power;
    } else if (kind == "diag") {
        spec.kind = ExperimentKind::IndependenceDiag;
    } else {
        throw ConfigError(path + ": experiment must be size, power, or diag, got '" +
                          kind + "'");
    }

    ExperimentConfig& config = spec.config;
    config.n = reader.require_long("n");
    config.p = reader.require_long("p");
    const std::string cov_kind = reader.get_or("cov.kind", "ar1");
    if (cov_kind != "ar1") {
        throw ConfigError(path + ": cov.kind supports only 'ar1', got '" + cov_kind +
                          "'");
    }
    config.cov.kind = CovarianceSpec::Kind::AR1;
    config.cov.rho = reader.get_double("cov.rho", 0.7);
    config.cov.p = config.p;
    config.error.kind = error_kind_from_string(reader.get_or("error", "E1"));

    for (const std::string& name : split_list(reader.require("methods"))) {
        config.methods.push_back(method_from_string(name));
    }
    config.replications = reader.require_long("replications");
    config.alpha = reader.get_double("alpha", 0.05);
    config.bootstrap_B = static_cast<int>(reader.get_long("bootstrap.B", 2000));
    config.perm_B = static_cast<int>(reader.get_long("perm.B", 500));
    config.precision.splits =
        static_cast<int>(reader.get_long("precision.splits", 50));
    config.precision.kmax = static_cast<int>(reader.get_long("precision.kmax", 20));

    const std::string design = reader.get_or("signal.design", "null");
    if (design == "null") {
        config.signal.design = SignalDesign::Null;
    } else if (design == "dense_random") {
        config.signal.design = SignalDesign::DenseRandom;
    } else if (design == "theta_pattern") {
        config.signal.design = SignalDesign::ThetaPattern;
    } else {
        throw ConfigError(path +
                          ": signal.design must be null, dense_random, or "
                          "theta_pattern, got '" +
                          design + "'");
    }

    if (spec.kind == ExperimentKind::Power) {
        if (config.signal.design == SignalDesign::Null) {
            throw ConfigError(path + ": power campaigns need a non-null signal.design");
        }
        for (const std::string& item : split_list(reader.require("signal.grid"))) {
            int value = 0;
            const auto result =
                std::from_chars(item.data(), item.data() + item.size(), value);
            if (result.ec != std::errc() || result.ptr != item.data() + item.size()) {
                throw ConfigError(path + ": signal.grid entry '" + item +
                                  "' is not an integer");
            }
            spec.grid.push_back(value);
        }
        config.signal.norm_target = reader.get_double("signal.norm", 0.8);
        config.signal.offset = static_cast<int>(reader.get_long("signal.q", 0));
    } else if (config.signal.design != SignalDesign::Null) {
        throw ConfigError(path + ": only power campaigns take a signal design");
    }

    if (spec.kind == ExperimentKind::IndependenceDiag) {
        const std::string variant = reader.get_or("diag.variant", "RM1");
        if (variant == "RM1") {
            spec.diag_variant = MaxVariant::RM1;
        } else if (variant == "RM2") {
            spec.diag_variant = MaxVariant::RM2;
        } else {
            throw ConfigError(path + ": diag.variant must be RM1 or RM2");
        }
    }

    reader.finish();
    return spec;
}

namespace {

json report_record(const TestReport& report) {
    json record;
    record["method"] = to_string(report.method);
    record["statistic"] = report.statistic;
    record["pvalue"] = report.pvalue;
    record["calibration"] = to_string(report.calibration);
    record["aux"] = json::object();
    for (const auto& [key, value] : report.aux) record["aux"][key] = value;
    return record;
}

json cell_record(const ExperimentConfig& config, const MethodCell& cell) {
    json record;
    record["n"] = config.n;
    record["p"] = config.p;
    record["rho"] = config.cov.rho;
    record["error"] = to_string(config.error.kind);
    record["alpha"] = config.alpha;
    record["method"] = to_string(cell.method);
    record["rejections"] = cell.rejections;
    record["replications"] = cell.replications;
    record["frequency"] = cell.frequency();
    record["std_error"] = cell.std_error();
    return record;
}

std::string format_row(const std::vector<std::string>& fields,
                       const std::vector<int>& widths) {
    std::string row;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        const int pad = widths[i] - static_cast<int>(fields[i].size());
        row += std::string(static_cast<std::size_t>(std::max(0, pad)), ' ');
        row += fields[i];
        if (i + 1 < fields.size()) row += "  ";
    }
    return row;
}

std::string table_text(const std::vector<std::vector<std::string>>& rows) {
    std::vector<int> widths;
    for (const auto& row : rows) {
        if (widths.size() < row.size()) widths.resize(row.size(), 0);
        for (std::size_t i = 0; i < row.size(); ++i) {
            widths[i] = std::max(widths[i], static_cast<int>(row[i].size()));
        }
    }
    std::string text;
    for (const auto& row : rows) {
        text += format_row(row, widths);
        text += '\n';
    }
    return text;
}

std::string fixed(double value, int digits) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.*f", digits, value);
    return buffer;
}

}  // namespace

std::string reports_jsonl(const std::vector<TestReport>& reports) {
    std::string out;
    for (const TestReport& report : reports) {
        out += report_record(report).dump();
        out += '\n';
    }
    return out;
}

std::string reports_text(const std::vector<TestReport>& reports, double alpha) {
    std::vector<std::vector<std::string>> rows;
    rows.push_back({"method", "statistic", "p-value", "calibration",
                    "reject@" + fixed(alpha, 2)});
    for (const TestReport& report : reports) {
        rows.push_back({to_string(report.method), fixed(report.statistic, 6),
                        fixed(report.pvalue, 6), to_string(report.calibration),
                        report.pvalue < alpha ? "yes" : "no"});
    }
    return table_text(rows);
}

std::string size_table_jsonl(const SizeTable& table) {
    std::string out;
    for (const MethodCell& cell : table.cells) {
        json record = cell_record(table.config, cell);
        record["experiment"] = "size";
        out += record.dump();
        out += '\n';
    }
    return out;
}

std::string size_table_text(const SizeTable& table) {
    std::vector<std::vector<std::string>> rows;
    rows.push_back({"method", "size%", "se%", "rejections", "replications"});
    for (const MethodCell& cell : table.cells) {
        rows.push_back({to_string(cell.method), fixed(100.0 * cell.frequency(), 2),
                        fixed(100.0 * cell.std_error(), 2),
                        std::to_string(cell.rejections),
                        std::to_string(cell.replications)});
    }
    std::string header = "empirical size: n=" + std::to_string(table.config.n) +
                         " p=" + std::to_string(table.config.p) + " error=" +
                         to_string(table.config.error.kind) +
                         " alpha=" + fixed(table.config.alpha, 3) + "\n";
    return header + table_text(rows);
}

std::string power_curve_jsonl(const PowerCurve& curve) {
    std::string out;
    for (const PowerPoint& point : curve.points) {
        for (const MethodCell& cell : point.cells) {
            json record = cell_record(curve.config, cell);
            record["experiment"] = "power";
            record["signal_count"] = point.signal_count;
            record["signal_design"] =
                curve.config.signal.design == SignalDesign::DenseRandom
                    ? "dense_random"
                    : "theta_pattern";
            out += record.dump();
            out += '\n';
        }
    }
    return out;
}

std::string power_curve_text(const PowerCurve& curve) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> header{"signal"};
    for (const MethodCell& cell : curve.points.front().cells) {
        header.push_back(to_string(cell.method));
    }
    rows.push_back(header);
    for (const PowerPoint& point : curve.points) {
        std::vector<std::string> row{std::to_string(point.signal_count)};
        for (const MethodCell& cell : point.cells) {
            row.push_back(fixed(100.0 * cell.frequency(), 1));
        }
        rows.push_back(row);
    }
    std::string title = "empirical power (%): n=" + std::to_string(curve.config.n) +
                        " p=" + std::to_string(curve.config.p) + " error=" +
                        to_string(curve.config.error.kind) + "\n";
    return title + table_text(rows);
}

std::string diag_jsonl(const IndependenceDiag& diag) {
    json record;
    record["experiment"] = "independence_diag";
    record["variant"] = diag.variant == MaxVariant::RM1 ? "RM1" : "RM2";
    record["n"] = diag.config.n;
    record["p"] = diag.config.p;
    record["error"] = to_string(diag.config.error.kind);
    record["replications"] = diag.replications;
    record["correlation"] = diag.correlation;
    record["joint_upper_upper"] = diag.joint_upper_upper;
    record["joint_upper_lower"] = diag.joint_upper_lower;
    record["joint_lower_upper"] = diag.joint_lower_upper;
    record["joint_lower_lower"] = diag.joint_lower_lower;
    record["marginal_fraction"] = diag.marginal_fraction;
    record["sum_rejection_rate"] = diag.sum_rejection_rate;
    return record.dump() + "\n";
}

std::string diag_text(const IndependenceDiag& diag) {
    std::string text = "joint-tail diagnostic (";
    text += diag.variant == MaxVariant::RM1 ? "RM1" : "RM2";
    text += " vs RS), n=" + std::to_string(diag.config.n) +
            " p=" + std::to_string(diag.config.p) +
            " reps=" + std::to_string(diag.replications) + "\n";
    text += "correlation            " + fixed(diag.correlation, 4) + "\n";
    text += "joint 10% x 10% freq   " + fixed(diag.joint_upper_upper, 4) +
            " (independent limit 0.01)\n";
    text += "RS upper 5% rejection  " + fixed(diag.sum_rejection_rate, 4) + "\n";
    return text;
}

std::string manifest_json(const RunManifest& manifest) {
    json record;
    record["command"] = manifest.command;
    record["seed"] = manifest.seed;
    record["workers"] = manifest.workers;
    record["version"] = manifest.version;
    record["started_at"] = manifest.started_at;
    record["duration_seconds"] = manifest.duration_seconds;
    record["outputs"] = manifest.outputs;
    json snapshot = json::object();
    for (const auto& [key, value] : manifest.config_snapshot) snapshot[key] = value;
    record["config"] = snapshot;
    return record.dump(2) + "\n";
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream output(path, std::ios::binary);
    if (!output) throw Error("cannot write '" + path + "'");
    output << content;
    if (!output) throw Error("failed writing '" + path + "'");
}

}  // namespace maxsum::io
