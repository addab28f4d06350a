#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <mutex>
#include <string>
#include <string_view>
#include <unordered_map>

namespace ovs {

/// Interned variable name. Copies are cheap; equality is identity of the name.
///
/// Internal containers order variables by intern id; anything printed orders
/// them by name (see `name_less`) so output never depends on intern order.
class Var {
public:
    Var() = default;

    static Var named(std::string_view name) {
        auto& reg = registry();
        std::lock_guard lock(reg.mutex);
        auto it = reg.ids.find(std::string(name));
        if (it != reg.ids.end()) return Var(it->second);
        auto id = static_cast<std::uint32_t>(reg.names.size());
        reg.names.emplace_back(name);
        reg.ids.emplace(reg.names.back(), id);
        return Var(id);
    }

    /// Coordinate variable `x<i>` (1-based), the naming used by every semilinear set.
    static Var coord(std::size_t i) { return named("x" + std::to_string(i)); }

    const std::string& name() const {
        auto& reg = registry();
        std::lock_guard lock(reg.mutex);
        return reg.names[id_];
    }

    std::uint32_t id() const { return id_; }

    friend bool operator==(Var a, Var b) { return a.id_ == b.id_; }
    friend auto operator<=>(Var a, Var b) { return a.id_ <=> b.id_; }

private:
    explicit Var(std::uint32_t id) : id_(id) {}

    struct Registry {
        std::mutex mutex;
        std::deque<std::string> names;  // deque: references stay valid on growth
        std::unordered_map<std::string, std::uint32_t> ids;
    };
    static Registry& registry() {
        static Registry reg;
        return reg;
    }

    std::uint32_t id_ = 0;
};

/// Natural order on names: alphabetic prefix, then numeric suffix (x2 < x10).
inline bool name_less(std::string_view a, std::string_view b) {
    auto split = [](std::string_view s) {
        std::size_t k = s.size();
        while (k > 0 && s[k - 1] >= '0' && s[k - 1] <= '9') --k;
        return std::pair{s.substr(0, k), s.substr(k)};
    };
    auto [pa, na] = split(a);
    auto [pb, nb] = split(b);
    if (pa != pb) return pa < pb;
    if (na.size() != nb.size()) return na.size() < nb.size();
    return na < nb;
}

inline bool name_less(Var a, Var b) {
    if (a == b) return false;
    return name_less(a.name(), b.name());
}

}  // namespace ovs

template <>
struct std::hash<ovs::Var> {
    std::size_t operator()(ovs::Var v) const noexcept { return std::hash<std::uint32_t>{}(v.id()); }
};
