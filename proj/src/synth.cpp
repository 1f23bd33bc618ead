#include "vcell/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include <nlohmann/json.hpp>

#include "vcell/error.hpp"
#include "vcell/geo.hpp"
#include "vcell/prng.hpp"

namespace vcell::synth {

namespace {

// Stream ids of the counter-based generator.
enum Stream : std::uint64_t { kCount = 1, kAlong = 2, kLateral = 3, kDetect = 4 };

constexpr double kPoissonChunk = 500.0;

}  // namespace

void SynthConfig::validate() const {
    if (path.size() < 2) throw DataError("simulation path needs at least two points");
    for (const auto& p : path) GeoPoint::make(p.lat, p.lon);
    if (!(path_length_m(path) > 0.0)) throw DataError("simulation path has zero length");
    if (!(ap_density > 0.0 && std::isfinite(ap_density))) throw DataError("AP density must be positive");
    if (!(detect_radius > 0.0 && std::isfinite(detect_radius))) throw DataError("detection radius must be positive");
    if (!(detect_prob > 0.0 && detect_prob <= 1.0)) throw DataError("detection probability must lie in (0, 1]");
    if (!(speed_kph > 0.0 && std::isfinite(speed_kph))) throw DataError("speed must be positive");
    if (!(scan_interval_s >= 0.001 && std::isfinite(scan_interval_s)))
        throw DataError("scan interval must be at least 1 ms");
}

std::vector<GeoPoint> straight_path(const GeoPoint& origin, double length_m) {
    return {origin, geo::destination(origin, std::numbers::pi / 2, length_m)};
}

double path_length_m(const std::vector<GeoPoint>& path) {
    double total = 0.0;
    for (std::size_t i = 1; i < path.size(); ++i) total += geo::haversine(path[i - 1], path[i]).value();
    return total;
}

GeoPoint point_along(const std::vector<GeoPoint>& path, double s, double* bearing) {
    double walked = 0.0;
    for (std::size_t i = 1; i < path.size(); ++i) {
        const double leg = geo::haversine(path[i - 1], path[i]).value();
        if (leg <= 0.0) continue;
        if (s <= walked + leg || i + 1 == path.size()) {
            const double f = std::clamp((s - walked) / leg, 0.0, 1.0);
            const GeoPoint p = geo::interpolate(path[i - 1], path[i], f);
            if (bearing) *bearing = f < 1.0 ? geo::initial_bearing(p, path[i]) : geo::initial_bearing(path[i - 1], path[i]);
            return p;
        }
        walked += leg;
    }
    if (bearing) *bearing = 0.0;
    return path.back();
}

ApId synthetic_bssid(std::uint32_t counter) {
    if (counter >= (1U << 24)) throw DataError("synthetic BSSID counter exceeds 24 bits");
    char buf[18];
    std::snprintf(buf, sizeof buf, "02:00:00:%02x:%02x:%02x", (counter >> 16) & 0xFF, (counter >> 8) & 0xFF,
                  counter & 0xFF);
    return ApId::parse(buf);
}

std::uint64_t poisson(std::uint64_t seed, std::uint64_t stream, double mean, std::uint64_t& next_counter) {
    const CounterRng rng(seed, stream);
    std::uint64_t total = 0;
    while (mean > 0.0) {
        const double chunk = std::min(mean, kPoissonChunk);
        mean -= chunk;
        const double limit = std::exp(-chunk);
        double product = 1.0;
        std::uint64_t k = 0;
        while (true) {
            product *= rng.uniform(next_counter++);
            if (product <= limit) break;
            ++k;
        }
        total += k;
    }
    return total;
}

ApDeployment gen_deployment(const SynthConfig& cfg) {
    cfg.validate();
    const double length = path_length_m(cfg.path);
    std::uint64_t counter = 0;
    const std::uint64_t count = poisson(cfg.seed, kCount, cfg.ap_density * length / 1000.0, counter);

    const CounterRng along(cfg.seed, kAlong);
    const CounterRng lateral(cfg.seed, kLateral);
    ApDeployment dep;
    dep.aps.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        const double s = along.uniform(i) * length;
        const double offset = (2.0 * lateral.uniform(i) - 1.0) * cfg.detect_radius;
        double bearing = 0.0;
        const GeoPoint foot = point_along(cfg.path, s, &bearing);
        const GeoPoint pos = geo::destination(foot, bearing + std::numbers::pi / 2, offset);
        dep.aps.push_back(DeployedAp{synthetic_bssid(static_cast<std::uint32_t>(i)), pos, s, offset});
    }
    return dep;
}

ScanTrace gen_trace(const ApDeployment& dep, const SynthConfig& cfg, const std::string& trace_id) {
    cfg.validate();
    const double length = path_length_m(cfg.path);
    const double spacing = cfg.speed_kph / 3.6 * cfg.scan_interval_s;
    const auto n_scans = static_cast<std::uint64_t>(std::floor(length / spacing + 1e-9)) + 1;
    const CounterRng detect(cfg.seed, kDetect);
    const auto n_aps = static_cast<std::uint64_t>(dep.aps.size());
    // Latitude gap beyond which an AP cannot be within range (cheap pre-filter).
    const double lat_window = cfg.detect_radius / geo::kEarthRadiusMeters * 180.0 / std::numbers::pi * 1.01;

    ScanTrace trace;
    trace.trace_id = trace_id;
    trace.speed_hint_kph = cfg.speed_kph;
    trace.scans.reserve(n_scans);
    for (std::uint64_t seq = 0; seq < n_scans; ++seq) {
        Fingerprint scan;
        scan.seq = static_cast<std::uint32_t>(seq);
        scan.timestamp_ms = std::llround(static_cast<double>(seq) * cfg.scan_interval_s * 1000.0);
        scan.pos = point_along(cfg.path, static_cast<double>(seq) * spacing);
        for (std::uint64_t a = 0; a < n_aps; ++a) {
            const auto& ap = dep.aps[a];
            if (std::abs(ap.pos.lat - scan.pos.lat) > lat_window) continue;
            if (geo::haversine(scan.pos, ap.pos).value() > cfg.detect_radius) continue;
            if (cfg.detect_prob < 1.0 && detect.uniform(seq * n_aps + a) >= cfg.detect_prob) continue;
            scan.aps.push_back(ap.id);
        }
        normalize(scan.aps);
        trace.scans.push_back(std::move(scan));
    }
    return trace;
}

std::string deployment_to_json(const ApDeployment& dep, int indent) {
    using ojson = nlohmann::ordered_json;
    ojson doc;
    auto& aps = doc["aps"] = ojson::array();
    for (const auto& ap : dep.aps) aps.push_back(ojson{{"bssid", ap.id.str()}, {"lat", ap.pos.lat}, {"lon", ap.pos.lon}});
    return doc.dump(indent) + "\n";
}

std::vector<GeoPoint> path_from_json(const std::string& text) {
    try {
        const auto doc = nlohmann::json::parse(text);
        std::vector<GeoPoint> out;
        for (const auto& p : doc) {
            if (!p.is_array() || p.size() != 2) throw DataError("path points must be [lat, lon] pairs");
            out.push_back(GeoPoint::make(p[0].get<double>(), p[1].get<double>()));
        }
        return out;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("invalid path file: ") + e.what());
    }
}

}  // namespace vcell::synth
