#include "qmax/report.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qmax {

GraphSummary GraphSummary::of(const WeightedGraph& g) {
    return {g.num_vertices(), static_cast<std::int64_t>(g.num_edges()), g.total_weight()};
}

namespace {

template <typename T>
void put_optional(Json& j, const char* key, const std::optional<T>& v) {
    if (v) j[key] = *v;
}

template <typename T>
std::optional<T> get_optional(const Json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<T>();
}

}  // namespace

Json to_json(const RunReport& r) {
    Json j;
    j["schema_version"] = r.schema_version;
    j["command"] = r.command;
    j["graph"] = {{"vertices", r.graph.vertices}, {"edges", r.graph.edges}, {"total_weight", r.graph.total_weight}};
    j["engine"] = r.engine;
    j["fixed_point"] = r.fixed_point;
    if (r.params) j["params"] = {{"layers", r.params->layers()}, {"gamma", r.params->gamma}, {"beta", r.params->beta}};
    put_optional(j, "f_p", r.f_p);
    put_optional(j, "best_bitstring", r.best_bitstring);
    put_optional(j, "best_cut", r.best_cut);
    put_optional(j, "brute_force_max", r.brute_force_max);
    put_optional(j, "approximation_ratio", r.approximation_ratio);
    if (r.cycles) {
        j["cycles"] = {{"cycles_total", r.cycles->cycles_total},
                       {"setup_cycles", r.cycles->setup_cycles},
                       {"cycles_per_op", r.cycles->cycles_per_op},
                       {"mults", r.cycles->mults},
                       {"adds", r.cycles->adds},
                       {"derived_time_us", r.cycles->derived_time_us}};
    }
    put_optional(j, "wall_clock_ms", r.wall_clock_ms);
    j["overflow"] = r.overflow;
    put_optional(j, "seed", r.seed);
    if (!r.details.empty()) j["details"] = r.details;
    return j;
}

RunReport report_from_json(const Json& j) {
    RunReport r;
    r.schema_version = j.at("schema_version").get<int>();
    if (r.schema_version != kReportSchemaVersion) throw std::invalid_argument("unsupported report schema version");
    r.command = j.at("command").get<std::string>();
    const Json& g = j.at("graph");
    r.graph = {g.at("vertices").get<int>(), g.at("edges").get<std::int64_t>(), g.at("total_weight").get<double>()};
    r.engine = j.at("engine").get<std::string>();
    r.fixed_point = j.at("fixed_point").get<std::string>();
    if (j.contains("params")) {
        r.params = QaoaParams{j.at("params").at("gamma").get<std::vector<double>>(),
                              j.at("params").at("beta").get<std::vector<double>>()};
    }
    r.f_p = get_optional<double>(j, "f_p");
    r.best_bitstring = get_optional<std::string>(j, "best_bitstring");
    r.best_cut = get_optional<double>(j, "best_cut");
    r.brute_force_max = get_optional<double>(j, "brute_force_max");
    r.approximation_ratio = get_optional<double>(j, "approximation_ratio");
    if (j.contains("cycles")) {
        const Json& c = j.at("cycles");
        r.cycles = CycleSummary{c.at("cycles_total").get<std::int64_t>(),
                                c.at("setup_cycles").get<std::int64_t>(),
                                c.at("cycles_per_op").get<std::vector<std::int64_t>>(),
                                c.at("mults").get<std::int64_t>(),
                                c.at("adds").get<std::int64_t>(),
                                c.at("derived_time_us").get<double>()};
    }
    r.wall_clock_ms = get_optional<double>(j, "wall_clock_ms");
    r.overflow = j.at("overflow").get<bool>();
    r.seed = get_optional<std::uint64_t>(j, "seed");
    if (j.contains("details")) r.details = j.at("details");
    return r;
}

void require_finite(const Json& j) {
    if (j.is_number_float() && !std::isfinite(j.get<double>())) throw std::domain_error("report contains a non-finite number");
    if (j.is_structured()) {
        for (const auto& v : j) require_finite(v);
    }
}

Json to_json(const BenchRow& row) {
    Json j;
    j["qubits"] = row.qubits;
    j["layers"] = row.layers;
    j["engine"] = row.engine;
    put_optional(j, "cycles_total", row.cycles_total);
    put_optional(j, "cycles_per_op", row.cycles_per_op);
    j["mults"] = row.mults;
    j["adds"] = row.adds;
    j["flops"] = row.flops;
    put_optional(j, "derived_time_us", row.derived_time_us);
    j["wall_clock_ms"] = row.wall_clock_ms;
    j["f_p"] = row.f_p;
    j["overflow"] = row.overflow;
    return j;
}

std::string bench_csv_header() {
    return "qubits,layers,engine,cycles_total,cycles_per_op,mults,adds,flops,derived_time_us,wall_clock_ms,f_p,overflow";
}

std::string to_csv(const BenchRow& row) {
    std::ostringstream os;
    os.precision(17);
    os << row.qubits << ',' << row.layers << ',' << row.engine << ',';
    if (row.cycles_total) os << *row.cycles_total;
    os << ',';
    if (row.cycles_per_op) os << *row.cycles_per_op;
    os << ',' << row.mults << ',' << row.adds << ',' << row.flops << ',';
    if (row.derived_time_us) os << *row.derived_time_us;
    os << ',' << row.wall_clock_ms << ',' << row.f_p << ',' << (row.overflow ? 1 : 0);
    return os.str();
}

}  // namespace qmax
