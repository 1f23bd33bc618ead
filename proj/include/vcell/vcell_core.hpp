#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "vcell/ap_id.hpp"
#include "vcell/geo.hpp"
#include "vcell/scan_model.hpp"

namespace vcell {

// Fraction of the current cell's APs a new scan must share to be merged.
class CellCondition {
public:
    explicit CellCondition(double cc);
    double value() const noexcept { return cc_; }
    friend bool operator==(const CellCondition&, const CellCondition&) = default;

private:
    double cc_;
};

// A scan that was merged into a vcell; kept so geometry and density
// statistics can be recomputed from the cell list alone.
struct MemberScan {
    std::uint32_t seq = 0;
    GeoPoint pos;
    std::uint32_t ap_count = 0;

    friend bool operator==(const MemberScan&, const MemberScan&) = default;
};

struct Vcell {
    std::uint32_t vcell_id = 0;
    std::uint32_t first_seq = 0;
    std::uint32_t last_seq = 0;  // inclusive; empty scans inside the range are not members
    ApSet aps;
    GeoPoint anchor;
    std::vector<MemberScan> members;

    friend bool operator==(const Vcell&, const Vcell&) = default;
};

struct VcellList {
    std::string trace_id;
    CellCondition cc{0.0};
    std::vector<Vcell> cells;

    friend bool operator==(const VcellList&, const VcellList&) = default;
};

// Single sequential pass over the non-empty scans. A scan joins the current
// cell when |scan ∩ cell| >= cc * |cell|, otherwise the current cell is
// closed and the scan seeds the next one. The last open cell is flushed.
// Throws DataError when the trace has no non-empty scan.
VcellList form_vcells(const ScanTrace& trace, CellCondition cc);

// Id of the vcell whose member scans include `seq`. Throws DataError when
// `seq` is out of range or names an empty (skipped) scan.
std::uint32_t assign_scan(const VcellList& vcells, std::uint32_t seq);

struct CellStats {
    std::size_t cell_count = 0;
    std::vector<std::size_t> ap_counts;
    std::vector<std::size_t> scan_counts;
    std::vector<double> diameters_m;
    double aps_per_fingerprint = 0.0;  // AP sightings / member scans
    double mean_aps_per_cell = 0.0;
};

CellStats vcell_stats(const VcellList& vcells);

// JSON form: {trace_id, cc, cells:[{vcell_id, first_seq, last_seq, anchor, aps, scans}]}.
std::string to_json(const VcellList& vcells, int indent = 2);
VcellList vcells_from_json(const std::string& text);

}  // namespace vcell
