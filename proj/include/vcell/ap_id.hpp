#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace vcell {

// Access-point identifier: a BSSID in canonical form, six lowercase hex
// octets joined by ':'. Construction always canonicalizes.
class ApId {
public:
    // Accepts ':' or '-' separated octets (any case) or 12 bare hex digits.
    // Throws DataError on anything else.
    static ApId parse(std::string_view text);

    // True when `text` is already canonical.
    static bool is_canonical(std::string_view text) noexcept;

    const std::string& str() const noexcept { return value_; }

    friend bool operator==(const ApId&, const ApId&) = default;
    friend auto operator<=>(const ApId&, const ApId&) = default;

private:
    explicit ApId(std::string canonical) : value_(std::move(canonical)) {}
    std::string value_;
};

// A set of APs kept as a sorted, duplicate-free vector.
using ApSet = std::vector<ApId>;

// Sorts and deduplicates in place.
void normalize(ApSet& aps);

std::size_t intersection_size(const ApSet& a, const ApSet& b);
ApSet set_intersection(const ApSet& a, const ApSet& b);
ApSet set_union(const ApSet& a, const ApSet& b);

}  // namespace vcell

template <>
struct std::hash<vcell::ApId> {
    std::size_t operator()(const vcell::ApId& id) const noexcept { return std::hash<std::string>{}(id.str()); }
};
