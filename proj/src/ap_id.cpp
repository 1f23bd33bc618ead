#include "vcell/ap_id.hpp"

#include <algorithm>
#include <iterator>

#include "vcell/error.hpp"

namespace vcell {

namespace {

int hex_value(char c) noexcept {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

}  // namespace

ApId ApId::parse(std::string_view text) {
    std::string digits;
    digits.reserve(12);
    if (text.size() == 17) {
        const char sep = text[2];
        if (sep != ':' && sep != '-') throw DataError("invalid MAC address '" + std::string(text) + "'");
        for (std::size_t i = 0; i < 17; ++i) {
            if (i % 3 == 2) {
                if (text[i] != sep) throw DataError("invalid MAC address '" + std::string(text) + "'");
            } else {
                digits.push_back(text[i]);
            }
        }
    } else if (text.size() == 12) {
        digits.assign(text);
    } else {
        throw DataError("invalid MAC address '" + std::string(text) + "'");
    }

    std::string canonical;
    canonical.reserve(17);
    for (std::size_t i = 0; i < 12; ++i) {
        const int v = hex_value(digits[i]);
        if (v < 0) throw DataError("invalid MAC address '" + std::string(text) + "'");
        if (i > 0 && i % 2 == 0) canonical.push_back(':');
        canonical.push_back("0123456789abcdef"[v]);
    }
    return ApId(std::move(canonical));
}

bool ApId::is_canonical(std::string_view text) noexcept {
    if (text.size() != 17) return false;
    for (std::size_t i = 0; i < 17; ++i) {
        const char c = text[i];
        if (i % 3 == 2) {
            if (c != ':') return false;
        } else if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) {
            return false;
        }
    }
    return true;
}

void normalize(ApSet& aps) {
    std::sort(aps.begin(), aps.end());
    aps.erase(std::unique(aps.begin(), aps.end()), aps.end());
}

std::size_t intersection_size(const ApSet& a, const ApSet& b) {
    std::size_t n = 0;
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i < *j) {
            ++i;
        } else if (*j < *i) {
            ++j;
        } else {
            ++n;
            ++i;
            ++j;
        }
    }
    return n;
}

ApSet set_intersection(const ApSet& a, const ApSet& b) {
    ApSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

ApSet set_union(const ApSet& a, const ApSet& b) {
    ApSet out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

}  // namespace vcell
