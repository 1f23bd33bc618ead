#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vcell/bloom_index.hpp"
#include "vcell/vcell_core.hpp"

namespace vcell {

// The AP union of one or a few scans.
class Query {
public:
    // Throws DataError when empty.
    explicit Query(ApSet aps);
    static Query from_scans(std::span<const ApSet> scans);

    const ApSet& aps() const noexcept { return aps_; }

private:
    ApSet aps_;
};

struct CellScore {
    std::uint32_t vcell_id = 0;
    double score = 0.0;  // matched query APs / |query|
    std::uint32_t n = 0;  // |aps| of the cell

    friend bool operator==(const CellScore&, const CellScore&) = default;
};

struct LocateOptions {
    std::optional<std::uint32_t> prev;
    double jump_delta = 0.1;
    std::uint32_t adjacency_radius = 2;

    void validate() const;
};

struct LocationEstimate {
    std::optional<std::uint32_t> vcell_id;  // empty: no fix (every score was zero)
    GeoPoint anchor;
    double score = 0.0;
    std::optional<CellScore> runner_up;  // best cell ranked below the returned one
    bool corrected = false;
    std::optional<CellScore> displaced;  // the raw winner when a jump was corrected

    bool has_fix() const noexcept { return vcell_id.has_value(); }
};

// Scores every cell, sorted by (score desc, n asc, vcell_id asc).
std::vector<CellScore> score_cells(const VcellIndex& index, const Query& q);
std::vector<CellScore> score_cells_exact(const VcellList& vcells, const Query& q);

// Best cell, with single-step jump correction: when the winner is more than
// adjacency_radius ids away from `prev` and the best cell within the radius
// scores no more than jump_delta below it, the near cell is returned.
LocationEstimate locate(const VcellIndex& index, const Query& q, const LocateOptions& options = {});

// Same contract as locate, on exact AP sets.
LocationEstimate exact_locate(const VcellList& vcells, const Query& q, const LocateOptions& options = {});

// {vcell_id, anchor, score, corrected, runner_up[, displaced]}; vcell_id null for no fix.
std::string to_json(const LocationEstimate& estimate, int indent = 2);

}  // namespace vcell
