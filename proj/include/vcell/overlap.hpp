#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "vcell/vcell_core.hpp"

namespace vcell {

// Denominator used to turn a shared-AP count into an overlap fraction.
enum class OverlapNorm {
    min,       // |A ∩ B| / min(|A|, |B|)
    union_,    // |A ∩ B| / |A ∪ B|
    absolute,  // |A ∩ B| as a raw count; band bounds are counts too
};

OverlapNorm parse_overlap_norm(std::string_view name);
std::string_view to_string(OverlapNorm norm);

// Half-open band [lo, hi).
class OverlapCondition {
public:
    // Requires 0 <= lo < hi <= 1 for min/union; 0 <= lo < hi for absolute.
    OverlapCondition(double lo, double hi, OverlapNorm norm = OverlapNorm::min);

    double lo() const noexcept { return lo_; }
    double hi() const noexcept { return hi_; }
    OverlapNorm norm() const noexcept { return norm_; }
    bool contains(double fraction) const noexcept { return fraction >= lo_ && fraction < hi_; }

private:
    double lo_;
    double hi_;
    OverlapNorm norm_;
};

struct OverlapRecord {
    std::uint32_t a = 0;  // a < b
    std::uint32_t b = 0;
    ApSet shared;
    double fraction = 0.0;

    friend bool operator==(const OverlapRecord&, const OverlapRecord&) = default;
};

double overlap_fraction(const Vcell& a, const Vcell& b, OverlapNorm norm = OverlapNorm::min);

inline constexpr std::size_t kUnboundedWindow = std::numeric_limits<std::size_t>::max();

// Pairs (i, j) with 0 < j - i <= window whose fraction falls in the band and
// which share at least one AP. Sorted by (a, b).
std::vector<OverlapRecord> find_overlaps(const VcellList& vcells, const OverlapCondition& oc, std::size_t window = 1);

// Records touching one cell, in (a, b) order.
std::vector<OverlapRecord> overlaps_of(const std::vector<OverlapRecord>& records, std::uint32_t vcell_id);

struct OverlapSet {
    OverlapCondition oc{0.2, 0.3};
    std::size_t window = 1;
    std::vector<OverlapRecord> overlaps;
};

// JSON form: {oc:{lo,hi,norm}, window, overlaps:[{a,b,fraction,shared}]}.
std::string to_json(const OverlapSet& set, int indent = 2);
OverlapSet overlaps_from_json(const std::string& text);

}  // namespace vcell
