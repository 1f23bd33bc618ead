#include "vcell/locate.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "vcell/error.hpp"

namespace vcell {

Query::Query(ApSet aps) : aps_(std::move(aps)) {
    normalize(aps_);
    if (aps_.empty()) throw DataError("query has no access points");
}

Query Query::from_scans(std::span<const ApSet> scans) {
    ApSet all;
    for (const auto& s : scans) all.insert(all.end(), s.begin(), s.end());
    return Query(std::move(all));
}

void LocateOptions::validate() const {
    if (!(jump_delta >= 0.0 && jump_delta <= 1.0)) throw DataError("jump delta must lie in [0, 1]");
    if (adjacency_radius < 1) throw DataError("adjacency radius must be at least 1");
}

namespace {

void rank(std::vector<CellScore>& scores) {
    std::sort(scores.begin(), scores.end(), [](const CellScore& a, const CellScore& b) {
        if (a.score != b.score) return a.score > b.score;
        if (a.n != b.n) return a.n < b.n;
        return a.vcell_id < b.vcell_id;
    });
}

std::uint32_t id_distance(std::uint32_t a, std::uint32_t b) { return a > b ? a - b : b - a; }

template <class AnchorOf>
LocationEstimate resolve(const std::vector<CellScore>& ranked, const LocateOptions& options, AnchorOf anchor_of) {
    options.validate();
    LocationEstimate est;
    if (ranked.empty() || ranked.front().score <= 0.0) return est;

    std::size_t chosen = 0;
    if (options.prev && id_distance(ranked.front().vcell_id, *options.prev) > options.adjacency_radius) {
        const auto near = std::find_if(ranked.begin(), ranked.end(), [&](const CellScore& c) {
            return id_distance(c.vcell_id, *options.prev) <= options.adjacency_radius;
        });
        // Tolerance absorbs rounding in the score difference (scores are k/|q|).
        if (near != ranked.end() && near->score > 0.0 &&
            ranked.front().score - near->score <= options.jump_delta + 1e-12) {
            chosen = static_cast<std::size_t>(near - ranked.begin());
            est.corrected = true;
            est.displaced = ranked.front();
        }
    }

    const CellScore& best = ranked[chosen];
    est.vcell_id = best.vcell_id;
    est.anchor = anchor_of(best.vcell_id);
    est.score = best.score;
    if (chosen + 1 < ranked.size()) est.runner_up = ranked[chosen + 1];
    return est;
}

}  // namespace

std::vector<CellScore> score_cells(const VcellIndex& index, const Query& q) {
    if (index.entries.empty()) throw DataError("cannot locate against an empty index");
    std::vector<HashPair> hashes;
    hashes.reserve(q.aps().size());
    for (const auto& ap : q.aps()) hashes.push_back(hash_ap(ap, index.params.seeds));

    const auto denom = static_cast<double>(q.aps().size());
    std::vector<CellScore> out;
    out.reserve(index.entries.size());
    for (const auto& e : index.entries) {
        std::size_t hits = 0;
        if (e.filter.params().seeds == index.params.seeds) {
            for (const auto& h : hashes) hits += e.filter.contains(h) ? 1 : 0;
        } else {
            for (const auto& ap : q.aps()) hits += e.filter.contains(ap) ? 1 : 0;
        }
        out.push_back(CellScore{e.vcell_id, static_cast<double>(hits) / denom, e.n});
    }
    rank(out);
    return out;
}

std::vector<CellScore> score_cells_exact(const VcellList& vcells, const Query& q) {
    if (vcells.cells.empty()) throw DataError("cannot locate against an empty vcell list");
    const auto denom = static_cast<double>(q.aps().size());
    std::vector<CellScore> out;
    out.reserve(vcells.cells.size());
    for (const auto& cell : vcells.cells) {
        out.push_back(CellScore{cell.vcell_id, static_cast<double>(intersection_size(q.aps(), cell.aps)) / denom,
                                static_cast<std::uint32_t>(cell.aps.size())});
    }
    rank(out);
    return out;
}

LocationEstimate locate(const VcellIndex& index, const Query& q, const LocateOptions& options) {
    std::unordered_map<std::uint32_t, GeoPoint> anchors;
    for (const auto& e : index.entries) anchors.emplace(e.vcell_id, e.anchor);
    return resolve(score_cells(index, q), options, [&](std::uint32_t id) { return anchors.at(id); });
}

LocationEstimate exact_locate(const VcellList& vcells, const Query& q, const LocateOptions& options) {
    std::unordered_map<std::uint32_t, GeoPoint> anchors;
    for (const auto& c : vcells.cells) anchors.emplace(c.vcell_id, c.anchor);
    return resolve(score_cells_exact(vcells, q), options, [&](std::uint32_t id) { return anchors.at(id); });
}

std::string to_json(const LocationEstimate& est, int indent) {
    using ojson = nlohmann::ordered_json;
    auto cell = [](const std::optional<CellScore>& c) -> ojson {
        if (!c) return nullptr;
        return ojson{{"vcell_id", c->vcell_id}, {"score", c->score}};
    };
    ojson doc;
    if (est.vcell_id) {
        doc["vcell_id"] = *est.vcell_id;
        doc["anchor"] = {{"lat", est.anchor.lat}, {"lon", est.anchor.lon}};
    } else {
        doc["vcell_id"] = nullptr;
        doc["anchor"] = nullptr;
    }
    doc["score"] = est.score;
    doc["corrected"] = est.corrected;
    doc["runner_up"] = cell(est.runner_up);
    if (est.corrected) doc["displaced"] = cell(est.displaced);
    return doc.dump(indent) + "\n";
}

}  // namespace vcell
