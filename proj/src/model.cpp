#include "dweb/model.hpp"

#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "dweb/text.hpp"

namespace dweb {

std::string_view to_string(AttributeKind kind) {
    switch (kind) {
        case AttributeKind::PrimaryKey: return "PRIMARY_KEY";
        case AttributeKind::ForeignKey: return "FOREIGN_KEY";
        case AttributeKind::Descriptor: return "DESCRIPTOR";
        case AttributeKind::Measure: return "MEASURE";
    }
    return "?";
}

const Attribute& HierarchyLevel::primary_key() const {
    for (const auto& a : intention) {
        if (a.kind == AttributeKind::PrimaryKey) return a;
    }
    throw std::logic_error("level " + table_name + " has no primary key attribute");
}

const Attribute* HierarchyLevel::foreign_key() const {
    for (const auto& a : intention) {
        if (a.kind == AttributeKind::ForeignKey) return &a;
    }
    return nullptr;
}

const HierarchyLevel& level_at(const Dimension& dim, int depth) {
    if (depth < 1 || depth > dim.nb_levels()) {
        throw std::out_of_range("dimension DIM" + fmt_int(dim.index) + ": requested depth " +
                                fmt_int(depth) + ", nb_levels = " + fmt_int(dim.nb_levels()));
    }
    return dim.levels[static_cast<std::size_t>(depth - 1)];
}

std::vector<const Attribute*> FactTable::measures() const {
    std::vector<const Attribute*> out;
    for (const auto& a : intention) {
        if (a.kind == AttributeKind::Measure) out.push_back(&a);
    }
    return out;
}

const Dimension& Warehouse::dimension(int index) const {
    if (index < 1 || static_cast<std::size_t>(index) > dimensions.size()) {
        throw std::out_of_range("warehouse has no dimension DIM" + fmt_int(index));
    }
    return dimensions[static_cast<std::size_t>(index - 1)];
}

const HierarchyLevel* Warehouse::find_level(std::string_view table_name) const {
    for (const auto& dim : dimensions) {
        for (const auto& level : dim.levels) {
            if (level.table_name == table_name) return &level;
        }
    }
    return nullptr;
}

namespace {

std::size_t column_of(const std::vector<Attribute>& intention, const std::string& name) {
    for (std::size_t i = 0; i < intention.size(); ++i) {
        if (intention[i].name == name) return i;
    }
    throw std::logic_error("intention has no attribute named " + name);
}

std::unordered_set<std::int32_t> primary_key_values(const HierarchyLevel& level) {
    std::size_t pk_col = column_of(level.intention, level.primary_key().name);
    std::unordered_set<std::int32_t> keys;
    keys.reserve(level.extension.size() * 2);
    for (const auto& tuple : level.extension) {
        keys.insert(std::get<std::int32_t>(tuple[pk_col]));
    }
    return keys;
}

}  // namespace

std::vector<IntegrityViolation> check_referential_integrity(const Warehouse& wh) {
    std::vector<IntegrityViolation> out;

    // Primary-key sets per level table, built from the data itself.
    std::unordered_map<std::string, std::unordered_set<std::int32_t>> pk_sets;
    for (const auto& dim : wh.dimensions) {
        for (const auto& level : dim.levels) {
            pk_sets.emplace(level.table_name, primary_key_values(level));
        }
    }

    auto check_table = [&](const std::string& table, const std::vector<Attribute>& intention,
                           const std::vector<Tuple>& extension) {
        for (std::size_t col = 0; col < intention.size(); ++col) {
            const Attribute& attr = intention[col];
            if (attr.kind != AttributeKind::ForeignKey) continue;
            auto it = pk_sets.find(attr.target_table);
            if (it == pk_sets.end()) {
                for (std::size_t row = 0; row < extension.size(); ++row) {
                    out.push_back({table, attr.name, row,
                                   std::get<std::int32_t>(extension[row][col])});
                }
                continue;
            }
            const auto& keys = it->second;
            for (std::size_t row = 0; row < extension.size(); ++row) {
                std::int32_t v = std::get<std::int32_t>(extension[row][col]);
                if (!keys.contains(v)) out.push_back({table, attr.name, row, v});
            }
        }
    };

    for (const auto& dim : wh.dimensions) {
        for (const auto& level : dim.levels) {
            check_table(level.table_name, level.intention, level.extension);
        }
    }
    for (const auto& ft : wh.fact_tables) {
        check_table(ft.table_name, ft.intention, ft.extension);
    }
    return out;
}

}  // namespace dweb
