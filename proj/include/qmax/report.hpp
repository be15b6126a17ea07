#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qmax/graph.hpp"
#include "qmax/params.hpp"

namespace qmax {

using Json = nlohmann::ordered_json;

inline constexpr int kReportSchemaVersion = 1;

struct GraphSummary {
    int vertices = 0;
    std::int64_t edges = 0;
    double total_weight = 0.0;

    static GraphSummary of(const WeightedGraph& g);
};

struct CycleSummary {
    std::int64_t cycles_total = 0;
    std::int64_t setup_cycles = 0;
    std::vector<std::int64_t> cycles_per_op;
    std::int64_t mults = 0;
    std::int64_t adds = 0;
    double derived_time_us = 0.0;  // at the 100 MHz accelerator clock, not measured
};

/// Machine-readable result of one CLI command.
struct RunReport {
    int schema_version = kReportSchemaVersion;
    std::string command;
    GraphSummary graph;
    std::string engine;
    std::string fixed_point;
    std::optional<QaoaParams> params;
    std::optional<double> f_p;
    std::optional<std::string> best_bitstring;
    std::optional<double> best_cut;
    std::optional<double> brute_force_max;
    std::optional<double> approximation_ratio;
    std::optional<CycleSummary> cycles;
    std::optional<double> wall_clock_ms;
    bool overflow = false;
    std::optional<std::uint64_t> seed;
    Json details = Json::object();  // command-specific extras, kept verbatim
};

Json to_json(const RunReport& r);
RunReport report_from_json(const Json& j);

/// Throws std::domain_error if any number in `j` is not finite.
void require_finite(const Json& j);

/// One row of the bench stream.
struct BenchRow {
    int qubits = 0;
    int layers = 0;
    std::string engine;
    std::optional<std::int64_t> cycles_total;
    std::optional<std::int64_t> cycles_per_op;
    std::int64_t mults = 0;
    std::int64_t adds = 0;
    std::int64_t flops = 0;  // floating-point engines only
    std::optional<double> derived_time_us;
    double wall_clock_ms = 0.0;
    double f_p = 0.0;
    bool overflow = false;
};

Json to_json(const BenchRow& row);
std::string bench_csv_header();
std::string to_csv(const BenchRow& row);

}  // namespace qmax
