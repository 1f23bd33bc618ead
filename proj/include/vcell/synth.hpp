#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vcell/scan_model.hpp"

namespace vcell::synth {

struct SynthConfig {
    std::uint64_t seed = 1;
    std::vector<GeoPoint> path;     // polyline, >= 2 distinct points
    double ap_density = 365.0;      // APs per km of path
    double detect_radius = 50.0;    // meters
    double detect_prob = 0.9;       // per AP per scan
    double speed_kph = 5.0;
    double scan_interval_s = 3.6;

    // Throws DataError on an invalid configuration.
    void validate() const;
};

struct DeployedAp {
    ApId id;
    GeoPoint pos;
    double along_m = 0.0;   // distance along the path of the foot point
    double offset_m = 0.0;  // signed lateral offset, in [-radius, radius]

    friend bool operator==(const DeployedAp&, const DeployedAp&) = default;
};

struct ApDeployment {
    std::vector<DeployedAp> aps;

    friend bool operator==(const ApDeployment&, const ApDeployment&) = default;
};

// Straight path of `length_m` meters heading due east from `origin`.
std::vector<GeoPoint> straight_path(const GeoPoint& origin, double length_m);

double path_length_m(const std::vector<GeoPoint>& path);

// Point `s` meters along the path (clamped to its ends) and the path bearing there.
GeoPoint point_along(const std::vector<GeoPoint>& path, double s, double* bearing = nullptr);

// Locally administered BSSID 02:00:00:xx:xx:xx for a 24-bit counter.
ApId synthetic_bssid(std::uint32_t counter);

// Poisson variate from the counter-based stream (Knuth product method, in
// chunks of mean <= 500). `next_counter` is advanced past the draws used.
std::uint64_t poisson(std::uint64_t seed, std::uint64_t stream, double mean, std::uint64_t& next_counter);

// Poisson(density * km) APs, uniform along the path with uniform lateral
// offset in [-radius, radius]. Deterministic in cfg.seed.
ApDeployment gen_deployment(const SynthConfig& cfg);

// Scans every speed * interval meters along the path; each AP within
// detect_radius of the scan point is included with probability detect_prob.
// Timestamps are seq * interval (ms).
ScanTrace gen_trace(const ApDeployment& dep, const SynthConfig& cfg, const std::string& trace_id = "synthetic");

// Sidecar file: {"aps":[{"bssid","lat","lon"}]}.
std::string deployment_to_json(const ApDeployment& dep, int indent = 2);

// Path file: JSON array of [lat, lon] pairs.
std::vector<GeoPoint> path_from_json(const std::string& text);

}  // namespace vcell::synth
