// Copyright (c) 2026, the carbonledger authors
// SPDX-License-Identifier: Apache-2.0
//
// carbonledger — energy and carbon accounting for large ML training runs.
//
// Exit codes: 0 success, 1 domain/validation error, 2 usage error,
// 3 reproduction-suite failure.

#include <fstream>
#include <iostream>
#include <string>
#include <tuple>
#include <vector>

#include <CLI11.hpp>

#include "carbonledger/accounting.hpp"
#include "carbonledger/cfe.hpp"
#include "carbonledger/domain.hpp"
#include "carbonledger/errors.hpp"
#include "carbonledger/nas.hpp"
#include "carbonledger/reference.hpp"
#include "carbonledger/report.hpp"
#include "carbonledger/scheduler.hpp"
#include "carbonledger/table.hpp"
#include "carbonledger/units.hpp"

namespace {

using namespace carbonledger;

struct GlobalOptions {
    std::vector<std::string> registry_files;
    std::string format = "table";
    std::string out_path;
};

Registry load_registry(const GlobalOptions& options) {
    Registry registry = reference_registry_copy();
    for (const std::string& path : options.registry_files) {
        std::ifstream in(path);
        if (!in) throw LoadError(detail::cat("cannot open registry file '", path, "'"));
        nlohmann::json doc = nlohmann::json::parse(in, nullptr, false);
        if (doc.is_discarded()) {
            throw LoadError(detail::cat("registry file '", path, "' is not valid JSON"));
        }
        registry.merge_json(doc);
    }
    const std::vector<Violation> violations = registry.validate();
    if (!violations.empty()) {
        std::string message = "registry validation failed:";
        for (const Violation& v : violations) {
            message += detail::cat("\n  ", v.record_id, ".", v.field, ": ", v.rule);
        }
        throw DomainError(message);
    }
    return registry;
}

void emit(const GlobalOptions& options, const std::string& text) {
    if (options.out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(options.out_path);
    if (!out) throw LoadError(detail::cat("cannot open output file '", options.out_path, "'"));
    out << text;
}

void emit_table(const GlobalOptions& options, const Table& table) {
    emit(options, render(table, parse_render_format(options.format)));
}

Table key_value_table(std::string title,
                      std::vector<std::tuple<std::string, Cell, std::string>> rows) {
    Table t;
    t.title = std::move(title);
    t.columns = {{"quantity", CellFormat::text},
                 {"value", CellFormat::number},
                 {"unit", CellFormat::text}};
    for (auto& [name, value, unit] : rows) {
        t.rows.push_back({std::move(name), std::move(value), std::move(unit)});
    }
    return t;
}

struct EstimateOptions {
    std::string run_id;
    double days = 0.0;
    std::int64_t chips = 0;
    double power_w = 0.0;
    double pue = 0.0;
    double gross_intensity = -1.0;
    double net_intensity = -1.0;
    double tflops = 0.0;
    double total_flops = 0.0;
};

int run_estimate(const GlobalOptions& global, const EstimateOptions& opt) {
    const Registry registry = load_registry(global);
    if (!opt.run_id.empty()) {
        emit_table(global,
                   emissions_report_table(opt.run_id, run_report(registry, opt.run_id)));
        return 0;
    }
    if (opt.days <= 0 || opt.chips <= 0 || opt.power_w <= 0 || opt.pue <= 0 ||
        opt.gross_intensity < 0) {
        throw UsageError("estimate: pass --run <id>, or all of --days --chips --power-w "
                         "--pue --gross-intensity");
    }
    const double net_intensity =
        opt.net_intensity >= 0 ? opt.net_intensity : opt.gross_intensity;
    if (net_intensity > opt.gross_intensity) {
        throw DomainError("estimate: --net-intensity must not exceed --gross-intensity");
    }
    const EquivalenceConstants constants = registry.equivalence_constants();
    EmissionsReport report;
    report.energy_kwh = energy_kwh(opt.days, opt.chips, opt.power_w, opt.pue);
    report.gross_tco2e = tco2e(report.energy_kwh, opt.gross_intensity);
    report.net_tco2e = tco2e(report.energy_kwh, net_intensity);
    if (opt.total_flops > 0) {
        report.total_flops = opt.total_flops;
    } else if (opt.tflops > 0) {
        report.total_flops = total_flops(opt.chips, opt.tflops, opt.days);
    }
    report.equivalents = equivalents(report.net_tco2e, constants);
    report.pct_of_reference_energy = pct_of_reference_energy(report.energy_kwh, constants);
    emit_table(global, emissions_report_table("ad-hoc", report));
    return 0;
}

struct NasOptions {
    std::string scenario_path;
    std::string builtin; // "full" or "proxy"
    double cost_per_step_factor = 0.0;
    double batch_factor = 0.0;
    double chip_count_factor = 0.0;
    bool ratios = false;
};

int run_nas(const GlobalOptions& global, const NasOptions& opt) {
    NasScenario scenario;
    if (!opt.scenario_path.empty()) {
        scenario = scenario_from_json_file(opt.scenario_path);
    } else if (opt.builtin == "full") {
        scenario = strubell_full_scenario();
    } else if (opt.builtin == "proxy") {
        scenario = strubell_proxy_scenario();
    } else {
        throw UsageError("nas: pass --scenario <file> or --builtin full|proxy");
    }

    const NasEstimate estimate = nas_co2e(scenario);
    std::vector<std::tuple<std::string, Cell, std::string>> rows = {
        {"emission_rate", scenario_emission_rate_lbs(scenario), "lbs CO2e/chip-hour"},
        {"estimate_lbs", estimate.lbs, "lbs CO2e"},
        {"estimate_tco2e", estimate.tco2e, "tCO2e"},
    };

    const bool any_factor = opt.cost_per_step_factor > 0 || opt.batch_factor > 0 ||
                            opt.chip_count_factor > 0;
    if (any_factor) {
        const ProxyCorrection correction = proxy_correction(
            estimate.lbs, opt.cost_per_step_factor > 0 ? opt.cost_per_step_factor : 1.0,
            opt.batch_factor > 0 ? opt.batch_factor : 1.0,
            opt.chip_count_factor > 0 ? opt.chip_count_factor : 1.0);
        rows.emplace_back("corrected_lbs", correction.corrected_lbs, "lbs CO2e");
        rows.emplace_back("corrected_tco2e",
                          units::pounds_to_tonnes(correction.corrected_lbs), "tCO2e");
        rows.emplace_back("overall_correction_factor", correction.overall_factor, "x");
    }
    if (opt.ratios) {
        const Registry registry = load_registry(global);
        const CorrectionRatios ratios = correction_ratios(registry);
        rows.emplace_back("actual_tco2e", ratios.actual_tco2e, "tCO2e");
        rows.emplace_back("iowa_what_if_tco2e", ratios.iowa_tco2e, "tCO2e");
        rows.emplace_back("ratio_vs_strubell", ratios.ratio_vs_strubell, "x");
        rows.emplace_back("ratio_iowa", ratios.ratio_iowa, "x");
    }
    emit_table(global, key_value_table("Architecture-search cost estimate", std::move(rows)));
    return 0;
}

struct ScheduleOptions {
    std::string job_path;
    std::vector<std::string> trace_specs; // id=path
    bool what_if = false;
};

TraceMap load_traces(const std::vector<std::string>& specs) {
    TraceMap traces;
    for (const std::string& spec : specs) {
        const auto eq = spec.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size()) {
            throw UsageError(detail::cat("--trace expects <datacenter_id>=<file>, got '",
                                         spec, "'"));
        }
        const std::string id = spec.substr(0, eq);
        if (traces.count(id) != 0) {
            throw UsageError(detail::cat("--trace: duplicate datacenter id '", id, "'"));
        }
        traces.emplace(id, parse_trace_csv_file(spec.substr(eq + 1)));
    }
    return traces;
}

int run_schedule(const GlobalOptions& global, const ScheduleOptions& opt) {
    const Registry registry = load_registry(global);
    const JobSpec job = job_from_json_file(opt.job_path);
    const TraceMap traces = load_traces(opt.trace_specs);
    if (opt.what_if) {
        emit_table(global, what_if_rows_table(what_if_table(job, traces, &registry)));
        return 0;
    }
    emit_table(global, schedule_decision_table(schedule(job, traces, &registry)));
    return 0;
}

int run_reproduce(const GlobalOptions& global) {
    const Registry registry = load_registry(global);
    const ReproReport report = reproduce(registry);
    emit_table(global, repro_report_table(report));
    return report.all_passed ? 0 : 3;
}

int run_compare(const GlobalOptions& global, const std::string& estimates_path) {
    const Registry registry = load_registry(global);
    const auto external = parse_external_estimates_csv_file(estimates_path);
    emit_table(global, comparison_table(compare_external(registry, external)));
    return 0;
}

int run_match(const GlobalOptions& global, const std::string& trace_path, bool per_hour) {
    const HourlyTrace trace = parse_trace_csv_file(trace_path);
    const MatchResult result = match_trace(trace);
    emit_table(global, per_hour ? match_per_hour_table(trace, result)
                                : match_result_table(result));
    return 0;
}

int run_export_registry(const GlobalOptions& global) {
    const Registry registry = load_registry(global);
    emit(global, registry.to_json().dump(2) + "\n");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Energy and carbon accounting for large ML training runs"};
    app.require_subcommand(1);

    GlobalOptions global;
    app.add_option("--registry", global.registry_files,
                   "Extra registry JSON file(s) merged over the built-in data");
    app.add_option("--format", global.format, "Output format: table, json or csv")
        ->default_str("table");
    app.add_option("--out", global.out_path, "Write output to a file instead of stdout");

    auto* estimate = app.add_subcommand("estimate", "Emissions report for a run");
    EstimateOptions estimate_opt;
    estimate->add_option("--run", estimate_opt.run_id, "Registered run id");
    estimate->add_option("--days", estimate_opt.days, "Training duration in days");
    estimate->add_option("--chips", estimate_opt.chips, "Number of chips");
    estimate->add_option("--power-w", estimate_opt.power_w, "Average system Watts per chip");
    estimate->add_option("--pue", estimate_opt.pue, "Datacenter PUE");
    estimate->add_option("--gross-intensity", estimate_opt.gross_intensity,
                         "Gross kg CO2e per kWh");
    estimate->add_option("--net-intensity", estimate_opt.net_intensity,
                         "Net kg CO2e per kWh (defaults to gross)");
    estimate->add_option("--tflops", estimate_opt.tflops, "Measured TFLOPS/s per chip");
    estimate->add_option("--total-flops", estimate_opt.total_flops,
                         "Total FLOPs (overrides --tflops)");

    auto* match = app.add_subcommand("match", "Hourly carbon-free energy matching");
    std::string trace_path;
    bool per_hour = false;
    match->add_option("--trace", trace_path, "Hourly trace CSV file")->required();
    match->add_flag("--per-hour", per_hour, "Print the per-hour table");

    auto* nas = app.add_subcommand("nas", "Architecture-search cost estimates");
    NasOptions nas_opt;
    nas->add_option("--scenario", nas_opt.scenario_path, "Scenario JSON file");
    nas->add_option("--builtin", nas_opt.builtin, "Built-in scenario: full or proxy");
    nas->add_option("--cost-per-step-factor", nas_opt.cost_per_step_factor,
                    "Proxy correction: per-step cost factor");
    nas->add_option("--batch-factor", nas_opt.batch_factor,
                    "Proxy correction: batch-size factor");
    nas->add_option("--chip-count-factor", nas_opt.chip_count_factor,
                    "Proxy correction: chip-count factor");
    nas->add_flag("--ratios", nas_opt.ratios,
                  "Include measured-actual and what-if correction ratios");

    auto* schedule_cmd = app.add_subcommand("schedule", "Pick the lowest-emissions placement");
    ScheduleOptions schedule_opt;
    schedule_cmd->add_option("--job", schedule_opt.job_path, "Job JSON file")->required();
    schedule_cmd->add_option("--trace", schedule_opt.trace_specs,
                             "Datacenter trace as <datacenter_id>=<file> (repeatable)")
        ->required();
    schedule_cmd->add_flag("--what-if", schedule_opt.what_if,
                           "Print every candidate instead of the decision");

    auto* reproduce_cmd =
        app.add_subcommand("reproduce", "Check computed values against published figures");

    auto* compare = app.add_subcommand("compare", "Ratios against external estimates");
    std::string estimates_path;
    compare->add_option("--estimates", estimates_path, "CSV of case_id,external_estimate_t")
        ->required();

    auto* export_cmd = app.add_subcommand("export-registry", "Print the registry as JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (estimate->parsed()) return run_estimate(global, estimate_opt);
        if (match->parsed()) return run_match(global, trace_path, per_hour);
        if (nas->parsed()) return run_nas(global, nas_opt);
        if (schedule_cmd->parsed()) return run_schedule(global, schedule_opt);
        if (reproduce_cmd->parsed()) return run_reproduce(global);
        if (compare->parsed()) return run_compare(global, estimates_path);
        if (export_cmd->parsed()) return run_export_registry(global);
        return 2;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
