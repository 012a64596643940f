#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>

#include "cogmetric/errors.hpp"
#include "cogmetric/types.hpp"

namespace cogmetric {

// Maps one platform's native interaction names onto canonical (or configured
// custom) interaction types. Resolution order for a native name:
//   excluded            -> dropped, recorded as a warning by the caller
//   in the rename map   -> the mapped type
//   a canonical name    -> itself
//   anything else       -> UnknownNativeInteractionError
class PlatformAdapter {
public:
    PlatformAdapter(std::string platform, std::map<std::string, InteractionType> rename,
                    std::set<std::string> exclude)
        : platform_(std::move(platform)), rename_(std::move(rename)),
          exclude_(std::move(exclude)) {
        for (const auto& [native, target] : rename_) {
            (void)target;
            if (exclude_.contains(native))
                throw ConfigError("adapter '" + platform_ + "': native name '" + native +
                                  "' is both renamed and excluded");
        }
    }

    const std::string& platform() const { return platform_; }
    const std::map<std::string, InteractionType>& rename_map() const { return rename_; }
    const std::set<std::string>& excluded() const { return exclude_; }

    bool is_excluded(const std::string& native) const { return exclude_.contains(native); }

    // Resolved type for a non-excluded native name.
    InteractionType resolve(const std::string& native) const {
        const auto it = rename_.find(native);
        if (it != rename_.end()) return it->second;
        const InteractionType type = InteractionType::from_name(native);
        if (type.is_canonical()) return type;
        throw UnknownNativeInteractionError(native);
    }

private:
    std::string platform_;
    std::map<std::string, InteractionType> rename_;
    std::set<std::string> exclude_;
};

namespace detail {

inline std::map<std::string, InteractionType> plural_renames(
    std::initializer_list<std::pair<const char*, const char*>> pairs) {
    std::map<std::string, InteractionType> out;
    for (const auto& [native, target] : pairs)
        out.emplace(native, InteractionType::from_name(target));
    return out;
}

} // namespace detail

// Adapter lookup by platform tag. Platforms without an adapter of their own
// fall back to "generic".
class AdapterRegistry {
public:
    AdapterRegistry() : fallback_(make_generic()) {}

    // Adapters for the platforms the tool understands out of the box.
    // "plays" and "saves" are dropped everywhere; opt them back in with a
    // custom registry entry plus a weight for the resulting type.
    static AdapterRegistry defaults() {
        AdapterRegistry registry;
        registry.put(PlatformAdapter(
            "instagram",
            detail::plural_renames({{"likes", "like"}, {"comments", "comment"}}),
            {"plays", "saves"}));
        registry.put(PlatformAdapter(
            "youtube",
            detail::plural_renames(
                {{"views", "view"}, {"likes", "like"}, {"comments", "comment"}}),
            {"plays", "saves"}));
        registry.put(PlatformAdapter(
            "facebook",
            detail::plural_renames(
                {{"reactions", "like"}, {"comments", "comment"}, {"shares", "share"}}),
            {"plays", "saves"}));
        registry.put(make_generic());
        return registry;
    }

    void put(PlatformAdapter adapter) {
        const std::string platform = adapter.platform();
        adapters_.insert_or_assign(platform, std::move(adapter));
    }

    const PlatformAdapter& for_platform(const std::string& platform) const {
        const auto it = adapters_.find(platform);
        if (it != adapters_.end()) return it->second;
        const auto generic = adapters_.find("generic");
        return generic != adapters_.end() ? generic->second : fallback_;
    }

    const std::map<std::string, PlatformAdapter>& entries() const { return adapters_; }

private:
    static PlatformAdapter make_generic() {
        return PlatformAdapter("generic",
                               detail::plural_renames({{"views", "view"},
                                                       {"likes", "like"},
                                                       {"comments", "comment"},
                                                       {"shares", "share"}}),
                               {"plays", "saves"});
    }

    std::map<std::string, PlatformAdapter> adapters_;
    PlatformAdapter fallback_;
};

} // namespace cogmetric
