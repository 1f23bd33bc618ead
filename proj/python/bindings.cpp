#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "vcell/bloom_index.hpp"
#include "vcell/error.hpp"
#include "vcell/geo.hpp"
#include "vcell/geojson.hpp"
#include "vcell/locate.hpp"
#include "vcell/overlap.hpp"
#include "vcell/scan_model.hpp"
#include "vcell/synth.hpp"
#include "vcell/vcell_core.hpp"

namespace py = pybind11;
using namespace vcell;

namespace {

std::vector<std::string> ap_strings(const ApSet& aps) {
    std::vector<std::string> out;
    out.reserve(aps.size());
    for (const auto& ap : aps) out.push_back(ap.str());
    return out;
}

ApSet ap_set(const std::vector<std::string>& ids) {
    ApSet out;
    for (const auto& s : ids) out.push_back(ApId::parse(s));
    normalize(out);
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Virtual-cell clustering, overlap detection and Bloom-filter location of Wi-Fi scan traces.";

    py::register_exception<Error>(m, "VcellError", PyExc_ValueError);

    m.def("canonical_bssid", [](const std::string& s) { return ApId::parse(s).str(); });

    py::class_<GeoPoint>(m, "GeoPoint")
        .def(py::init(&GeoPoint::make), py::arg("lat"), py::arg("lon"))
        .def_readonly("lat", &GeoPoint::lat)
        .def_readonly("lon", &GeoPoint::lon)
        .def("__repr__", [](const GeoPoint& p) {
            return "GeoPoint(" + std::to_string(p.lat) + ", " + std::to_string(p.lon) + ")";
        });

    py::class_<Fingerprint>(m, "Fingerprint")
        .def_readonly("seq", &Fingerprint::seq)
        .def_readonly("timestamp_ms", &Fingerprint::timestamp_ms)
        .def_readonly("pos", &Fingerprint::pos)
        .def_property_readonly("aps", [](const Fingerprint& f) { return ap_strings(f.aps); });

    py::class_<ScanTrace>(m, "ScanTrace")
        .def_readonly("trace_id", &ScanTrace::trace_id)
        .def_readonly("scans", &ScanTrace::scans)
        .def("__len__", [](const ScanTrace& t) { return t.scans.size(); })
        .def("to_jsonl", &to_jsonl);

    m.def(
        "parse_scan_log",
        [](const std::string& text, const std::string& format, const std::string& trace_id) {
            return parse_scan_log(text, format == "csv" ? LogFormat::csv : LogFormat::jsonl, {trace_id, {}});
        },
        py::arg("text"), py::arg("format") = "jsonl", py::arg("trace_id") = "trace");
    m.def("ap_universe", [](const ScanTrace& t) { return ap_strings(ap_universe(t)); });
    m.def("haversine", [](const GeoPoint& a, const GeoPoint& b) { return geo::haversine(a, b).value(); });
    m.def("trace_length", [](const ScanTrace& t) { return geo::trace_length(t).value(); });

    py::class_<Vcell>(m, "Vcell")
        .def_readonly("vcell_id", &Vcell::vcell_id)
        .def_readonly("first_seq", &Vcell::first_seq)
        .def_readonly("last_seq", &Vcell::last_seq)
        .def_readonly("anchor", &Vcell::anchor)
        .def_property_readonly("aps", [](const Vcell& c) { return ap_strings(c.aps); });

    py::class_<VcellList>(m, "VcellList")
        .def_readonly("trace_id", &VcellList::trace_id)
        .def_property_readonly("cc", [](const VcellList& v) { return v.cc.value(); })
        .def_readonly("cells", &VcellList::cells)
        .def("__len__", [](const VcellList& v) { return v.cells.size(); })
        .def("to_json", [](const VcellList& v) { return to_json(v); })
        .def_static("from_json", &vcells_from_json);

    m.def(
        "form_vcells", [](const ScanTrace& t, double cc) { return form_vcells(t, CellCondition(cc)); }, py::arg("trace"),
        py::arg("cc") = 0.3);
    m.def("assign_scan", &assign_scan);
    m.def("vcell_stats", [](const VcellList& v) {
        const auto s = vcell_stats(v);
        py::dict d;
        d["cells"] = s.cell_count;
        d["ap_counts"] = s.ap_counts;
        d["scan_counts"] = s.scan_counts;
        d["diameters_m"] = s.diameters_m;
        d["aps_per_fingerprint"] = s.aps_per_fingerprint;
        d["mean_aps_per_cell"] = s.mean_aps_per_cell;
        return d;
    });

    py::class_<OverlapRecord>(m, "OverlapRecord")
        .def_readonly("a", &OverlapRecord::a)
        .def_readonly("b", &OverlapRecord::b)
        .def_readonly("fraction", &OverlapRecord::fraction)
        .def_property_readonly("shared", [](const OverlapRecord& r) { return ap_strings(r.shared); });
    m.def(
        "find_overlaps",
        [](const VcellList& v, double lo, double hi, std::size_t window, const std::string& norm) {
            return find_overlaps(v, OverlapCondition(lo, hi, parse_overlap_norm(norm)), window);
        },
        py::arg("vcells"), py::arg("lo") = 0.2, py::arg("hi") = 0.3, py::arg("window") = 1, py::arg("norm") = "min");

    m.def("fp_rate", &fp_rate, py::arg("m"), py::arg("n"), py::arg("k"));
    m.def(
        "size_for",
        [](std::uint64_t n, double p) {
            const auto params = size_for(n, p);
            return py::make_tuple(params.m, params.k);
        },
        py::arg("n"), py::arg("target_p"));

    py::class_<VcellIndex>(m, "VcellIndex")
        .def_property_readonly("m", [](const VcellIndex& i) { return i.params.m; })
        .def_property_readonly("k", [](const VcellIndex& i) { return i.params.k; })
        .def("__len__", [](const VcellIndex& i) { return i.entries.size(); })
        .def("to_bytes", [](const VcellIndex& i) { return py::bytes(serialize_index(i)); })
        .def_static("from_bytes", [](const py::bytes& b) { return deserialize_index(std::string(b)); });
    m.def(
        "build_index", [](const VcellList& v, double target_p) { return build_index(v, TargetFpRate{target_p}); },
        py::arg("vcells"), py::arg("target_p") = 0.005);

    py::class_<LocationEstimate>(m, "LocationEstimate")
        .def_readonly("vcell_id", &LocationEstimate::vcell_id)
        .def_readonly("anchor", &LocationEstimate::anchor)
        .def_readonly("score", &LocationEstimate::score)
        .def_readonly("corrected", &LocationEstimate::corrected)
        .def_property_readonly("has_fix", &LocationEstimate::has_fix)
        .def("to_json", [](const LocationEstimate& e) { return to_json(e); });

    auto options = [](std::optional<std::uint32_t> prev, double jump_delta, std::uint32_t radius) {
        LocateOptions o;
        o.prev = prev;
        o.jump_delta = jump_delta;
        o.adjacency_radius = radius;
        return o;
    };
    m.def(
        "locate",
        [options](const VcellIndex& index, const std::vector<std::string>& aps, std::optional<std::uint32_t> prev,
                  double jump_delta, std::uint32_t radius) {
            return locate(index, Query(ap_set(aps)), options(prev, jump_delta, radius));
        },
        py::arg("index"), py::arg("aps"), py::arg("prev") = py::none(), py::arg("jump_delta") = 0.1,
        py::arg("radius") = 2);
    m.def(
        "exact_locate",
        [options](const VcellList& v, const std::vector<std::string>& aps, std::optional<std::uint32_t> prev,
                  double jump_delta, std::uint32_t radius) {
            return exact_locate(v, Query(ap_set(aps)), options(prev, jump_delta, radius));
        },
        py::arg("vcells"), py::arg("aps"), py::arg("prev") = py::none(), py::arg("jump_delta") = 0.1,
        py::arg("radius") = 2);

    m.def(
        "simulate",
        [](std::uint64_t seed, double length_km, double density, double radius, double detect_prob, double speed_kph,
           double interval_s) {
            synth::SynthConfig cfg;
            cfg.seed = seed;
            cfg.path = synth::straight_path(GeoPoint{8.5897, -71.1561}, length_km * 1000.0);
            cfg.ap_density = density;
            cfg.detect_radius = radius;
            cfg.detect_prob = detect_prob;
            cfg.speed_kph = speed_kph;
            cfg.scan_interval_s = interval_s;
            const auto dep = synth::gen_deployment(cfg);
            std::vector<std::string> ids;
            for (const auto& ap : dep.aps) ids.push_back(ap.id.str());
            return py::make_tuple(synth::gen_trace(dep, cfg), ids);
        },
        py::arg("seed") = 1, py::arg("length_km") = 5.0, py::arg("density") = 365.0, py::arg("radius") = 50.0,
        py::arg("detect_prob") = 0.9, py::arg("speed_kph") = 5.0, py::arg("interval_s") = 3.6,
        "Returns (trace, deployed_bssids) for a straight synthetic journey.");

    m.def("to_geojson", [](const VcellList& v) { return to_geojson(v); });

#ifdef VERSION_INFO
    m.attr("__version__") = VERSION_INFO;
#else
    m.attr("__version__") = "0.1.0";
#endif
}
