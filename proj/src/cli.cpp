#include "vcell/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "vcell/bloom_index.hpp"
#include "vcell/error.hpp"
#include "vcell/geojson.hpp"
#include "vcell/locate.hpp"
#include "vcell/overlap.hpp"
#include "vcell/scan_model.hpp"
#include "vcell/synth.hpp"
#include "vcell/vcell_core.hpp"

namespace vcell::cli {

namespace fs = std::filesystem;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path + "' for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot open '" + path + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw DataError("failed writing '" + path + "'");
}

LogFormat format_for(const std::string& path, const std::string& requested) {
    if (requested == "jsonl") return LogFormat::jsonl;
    if (requested == "csv") return LogFormat::csv;
    return fs::path(path).extension() == ".csv" ? LogFormat::csv : LogFormat::jsonl;
}

struct Sweep {
    double lo, hi, step;
};

Sweep parse_sweep(const std::string& text) {
    double v[3];
    char c1 = 0, c2 = 0;
    std::istringstream in(text);
    if (!(in >> v[0] >> c1 >> v[1] >> c2 >> v[2]) || c1 != ':' || c2 != ':' || !(in >> std::ws).eof())
        throw CLI::ValidationError("--cc-sweep", "expected lo:hi:step, e.g. 0.1:0.9:0.1");
    if (!(v[0] >= 0 && v[1] <= 1 && v[0] <= v[1] && v[2] > 0))
        throw CLI::ValidationError("--cc-sweep", "requires 0 <= lo <= hi <= 1 and step > 0");
    return Sweep{v[0], v[1], v[2]};
}

std::string sweep_path(const std::string& out, double cc) {
    const fs::path p(out);
    std::ostringstream name;
    name << p.stem().string() << ".cc" << std::fixed << std::setprecision(2) << cc << p.extension().string();
    return (p.parent_path() / name.str()).string();
}

std::string format_stats(const VcellList& cells, bool as_json) {
    const CellStats s = vcell_stats(cells);
    if (as_json) {
        nlohmann::ordered_json doc;
        doc["trace_id"] = cells.trace_id;
        doc["cc"] = cells.cc.value();
        doc["cells"] = s.cell_count;
        doc["ap_counts"] = s.ap_counts;
        doc["scan_counts"] = s.scan_counts;
        doc["diameters_m"] = s.diameters_m;
        doc["aps_per_fingerprint"] = s.aps_per_fingerprint;
        doc["mean_aps_per_cell"] = s.mean_aps_per_cell;
        return doc.dump(2) + "\n";
    }
    std::ostringstream out;
    out << "trace: " << cells.trace_id << "  cc: " << cells.cc.value() << "\n"
        << "cells: " << s.cell_count << "\n"
        << "APs per fingerprint: " << std::fixed << std::setprecision(3) << s.aps_per_fingerprint << "\n"
        << "mean APs per cell: " << s.mean_aps_per_cell << "\n"
        << std::setprecision(1) << "id\taps\tscans\tdiameter_m\n";
    for (std::size_t i = 0; i < s.cell_count; ++i)
        out << cells.cells[i].vcell_id << '\t' << s.ap_counts[i] << '\t' << s.scan_counts[i] << '\t' << s.diameters_m[i]
            << '\n';
    return out.str();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Virtual-cell toolkit: cluster Wi-Fi scan traces into vcells, find overlaps, build Bloom indexes "
                 "and locate devices."};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for every subcommand");

    // simulate
    auto* sim = app.add_subcommand("simulate", "Generate a synthetic AP deployment and scan trace");
    std::uint64_t seed = 1;
    std::string path_file, sim_out, dep_out;
    double length_km = 5.0, origin_lat = 8.5897, origin_lon = -71.1561;
    synth::SynthConfig cfg;
    sim->add_option("--seed", seed, "PRNG seed")->capture_default_str();
    sim->add_option("--path-file", path_file, "JSON array of [lat, lon] points (default: straight path east)")
        ->check(CLI::ExistingFile);
    sim->add_option("--length-km", length_km, "Length of the default straight path")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    sim->add_option("--origin-lat", origin_lat, "Start latitude of the default path")
        ->capture_default_str()
        ->check(CLI::Range(-90.0, 90.0));
    sim->add_option("--origin-lon", origin_lon, "Start longitude of the default path")
        ->capture_default_str()
        ->check(CLI::Range(-180.0, 180.0));
    sim->add_option("--density", cfg.ap_density, "APs per km of path")->capture_default_str()->check(CLI::PositiveNumber);
    sim->add_option("--radius", cfg.detect_radius, "Detection radius in meters")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    sim->add_option("--detect-prob", cfg.detect_prob, "Per-scan detection probability of an in-range AP")
        ->capture_default_str()
        ->check(CLI::Range(0.0, 1.0));
    sim->add_option("--speed-kph", cfg.speed_kph, "Collection speed")->capture_default_str()->check(CLI::PositiveNumber);
    sim->add_option("--interval-s", cfg.scan_interval_s, "Seconds between scans")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    sim->add_option("-o,--output", sim_out, "Output scan log (JSONL)")->required();
    sim->add_option("--deployment-out", dep_out, "Deployment sidecar (default: <output>.deployment.json)");

    // validate
    auto* val = app.add_subcommand("validate", "Parse a scan log and report its validation summary");
    std::string val_in, val_format = "auto";
    val->add_option("-i,--input", val_in, "Scan log")->required()->check(CLI::ExistingFile);
    val->add_option("--format", val_format, "Scan log format")
        ->capture_default_str()
        ->check(CLI::IsMember({"auto", "jsonl", "csv"}));

    // build
    auto* build = app.add_subcommand("build", "Form vcells from a scan trace");
    double cc = 0.30;
    std::string build_in, build_out, build_format = "auto", trace_id, sweep_text;
    build->add_option("--cc", cc, "Cell condition")->capture_default_str()->check(CLI::Range(0.0, 1.0));
    build->add_option("--cc-sweep", sweep_text, "Evaluate lo:hi:step cell conditions; writes <stem>.ccX.XX<ext>");
    build->add_option("-i,--input", build_in, "Scan log")->required()->check(CLI::ExistingFile);
    build->add_option("-o,--output", build_out, "Output cells JSON")->required();
    build->add_option("--format", build_format, "Scan log format")
        ->capture_default_str()
        ->check(CLI::IsMember({"auto", "jsonl", "csv"}));
    build->add_option("--trace-id", trace_id, "Trace id (default: input file stem)");

    // overlap
    auto* ovl = app.add_subcommand("overlap", "Find overlap regions between nearby vcells");
    double lo = 0.20, hi = 0.30;
    std::size_t window = 1;
    std::string norm = "min", ovl_in, ovl_out;
    ovl->add_option("--lo", lo, "Lower band bound (inclusive)")->capture_default_str()->check(CLI::NonNegativeNumber);
    ovl->add_option("--hi", hi, "Upper band bound (exclusive)")->capture_default_str()->check(CLI::PositiveNumber);
    ovl->add_option("--window", window, "Compare each vcell with the next N cells")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    ovl->add_option("--overlap-norm", norm, "Fraction denominator")
        ->capture_default_str()
        ->check(CLI::IsMember({"min", "union", "absolute"}));
    ovl->add_option("-i,--input", ovl_in, "Cells JSON")->required()->check(CLI::ExistingFile);
    ovl->add_option("-o,--output", ovl_out, "Output overlaps JSON")->required();

    // index
    auto* idx = app.add_subcommand("index", "Encode vcells into a Bloom-filter index (.vcbf)");
    double target_p = 0.005;
    std::uint64_t fixed_m = 0;
    std::uint32_t fixed_k = 0;
    std::string idx_in, idx_out;
    idx->add_option("--target-p", target_p, "Target false-positive rate for the largest cell")
        ->capture_default_str()
        ->check(CLI::Range(1e-12, 0.999999));
    auto* m_opt = idx->add_option("--m", fixed_m, "Fixed filter size in bits (overrides --target-p)")
                      ->check(CLI::Range(std::uint64_t{8}, std::uint64_t{1} << 40));
    auto* k_opt = idx->add_option("--k", fixed_k, "Fixed number of hash functions")->check(CLI::Range(1, 64));
    m_opt->needs(k_opt);
    k_opt->needs(m_opt);
    idx->add_option("-i,--input", idx_in, "Cells JSON")->required()->check(CLI::ExistingFile);
    idx->add_option("-o,--output", idx_out, "Output index file")->required();

    // locate
    auto* loc = app.add_subcommand("locate", "Resolve query scans to a vcell");
    std::string loc_in, query_file, loc_out;
    std::optional<std::uint32_t> prev;
    LocateOptions loc_opts;
    bool each = false;
    loc->add_option("-i,--input", loc_in, "Index file (.vcbf)")->required()->check(CLI::ExistingFile);
    loc->add_option("--query", query_file, "Query scans (JSONL; union of all lines is one query)")
        ->required()
        ->check(CLI::ExistingFile);
    loc->add_option("--prev", prev, "Previously known vcell id (enables jump correction)");
    loc->add_option("--jump-delta", loc_opts.jump_delta, "Max score gap accepted for a jump correction")
        ->capture_default_str()
        ->check(CLI::Range(0.0, 1.0));
    loc->add_option("--radius", loc_opts.adjacency_radius, "Adjacency radius in vcell ids")
        ->capture_default_str()
        ->check(CLI::Range(1u, 1000000u));
    loc->add_flag("--each", each, "Treat every line as its own query, chaining the previous answer; emits JSONL");
    loc->add_option("-o,--output", loc_out, "Write the result here instead of stdout");

    // stats
    auto* st = app.add_subcommand("stats", "Summarize a cells file");
    std::string st_in;
    bool st_json = false;
    st->add_option("-i,--input", st_in, "Cells JSON")->required()->check(CLI::ExistingFile);
    st->add_flag("--json", st_json, "Emit JSON");

    // export
    auto* ex = app.add_subcommand("export", "Export cells (and overlaps) as GeoJSON");
    std::string ex_format = "geojson", ex_in, ex_overlaps, ex_out;
    ex->add_option("--format", ex_format, "Output format")->capture_default_str()->check(CLI::IsMember({"geojson"}));
    ex->add_option("-i,--input", ex_in, "Cells JSON")->required()->check(CLI::ExistingFile);
    ex->add_option("--overlaps", ex_overlaps, "Overlaps JSON")->check(CLI::ExistingFile);
    ex->add_option("-o,--output", ex_out, "Output GeoJSON")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    // Flag combinations CLI11 cannot express.
    std::optional<OverlapCondition> oc;
    std::optional<Sweep> sweep;
    try {
        if (*ovl) oc.emplace(lo, hi, parse_overlap_norm(norm));
        if (*build && !sweep_text.empty()) sweep = parse_sweep(sweep_text);
    } catch (const CLI::Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const DataError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (*sim) {
            cfg.seed = seed;
            cfg.path = path_file.empty() ? synth::straight_path(GeoPoint{origin_lat, origin_lon}, length_km * 1000.0)
                                         : synth::path_from_json(read_file(path_file));
            const auto dep = synth::gen_deployment(cfg);
            const auto trace = synth::gen_trace(dep, cfg, fs::path(sim_out).stem().string());
            write_file(sim_out, to_jsonl(trace));
            write_file(dep_out.empty() ? sim_out + ".deployment.json" : dep_out, synth::deployment_to_json(dep));
            err << "simulated " << trace.scans.size() << " scans over " << dep.aps.size() << " APs\n";
        } else if (*val) {
            std::ifstream in(val_in, std::ios::binary);
            const auto trace = parse_scan_log(in, format_for(val_in, val_format), {fs::path(val_in).stem().string(), {}});
            const auto report = validate_trace(trace);
            nlohmann::ordered_json doc;
            doc["scans"] = report.scan_count;
            doc["unique_aps"] = report.unique_ap_count;
            doc["empty_scans"] = report.empty_scans;
            doc["violations"] = report.violations;
            doc["invariants_hold"] = report.invariants_hold();
            out << doc.dump(2) << "\n";
            if (!report.invariants_hold()) return 2;
        } else if (*build) {
            std::ifstream in(build_in, std::ios::binary);
            ParseOptions opts;
            opts.trace_id = trace_id.empty() ? fs::path(build_in).stem().string() : trace_id;
            const auto trace = parse_scan_log(in, format_for(build_in, build_format), opts);
            if (!sweep) {
                write_file(build_out, to_json(form_vcells(trace, CellCondition(cc))));
            } else {
                std::vector<double> conditions;
                for (int i = 0;; ++i) {
                    const double c = sweep->lo + i * sweep->step;
                    if (c > sweep->hi + 1e-9) break;
                    conditions.push_back(std::min(1.0, std::round(c * 1e9) / 1e9));
                }
                std::vector<std::future<void>> jobs;
                for (const double c : conditions) {
                    jobs.push_back(std::async(std::launch::async, [&trace, &build_out, c] {
                        write_file(sweep_path(build_out, c), to_json(form_vcells(trace, CellCondition(c))));
                    }));
                }
                for (auto& j : jobs) j.get();
            }
        } else if (*ovl) {
            const auto cells = vcells_from_json(read_file(ovl_in));
            if (cells.cells.size() < 2) err << "note: fewer than two vcells; no overlaps possible\n";
            OverlapSet set{*oc, window, find_overlaps(cells, *oc, window)};
            write_file(ovl_out, to_json(set));
        } else if (*idx) {
            const auto cells = vcells_from_json(read_file(idx_in));
            IndexPolicy policy = TargetFpRate{target_p};
            if (*m_opt) {
                BloomParams params;
                params.m = fixed_m;
                params.k = fixed_k;
                policy = FixedParams{params};
            }
            write_file(idx_out, serialize_index(build_index(cells, policy)));
        } else if (*loc) {
            const auto index = deserialize_index(read_file(loc_in));
            std::ifstream in(query_file, std::ios::binary);
            const auto scans = parse_query_log(in);
            if (scans.empty()) throw DataError("query file '" + query_file + "' has no scans");
            loc_opts.prev = prev;
            std::string result;
            if (each) {
                for (const auto& s : scans) {
                    const auto est = locate(index, Query(s), loc_opts);
                    result += to_json(est, -1);
                    if (est.has_fix()) loc_opts.prev = est.vcell_id;
                }
            } else {
                result = to_json(locate(index, Query::from_scans(scans), loc_opts));
            }
            if (loc_out.empty())
                out << result;
            else
                write_file(loc_out, result);
        } else if (*st) {
            out << format_stats(vcells_from_json(read_file(st_in)), st_json);
        } else if (*ex) {
            const auto cells = vcells_from_json(read_file(ex_in));
            std::optional<OverlapSet> overlaps;
            if (!ex_overlaps.empty()) overlaps = overlaps_from_json(read_file(ex_overlaps));
            write_file(ex_out, to_geojson(cells, overlaps ? &*overlaps : nullptr));
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

}  // namespace vcell::cli
