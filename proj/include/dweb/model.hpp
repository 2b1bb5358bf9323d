#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dweb/params.hpp"

namespace dweb {

enum class AttributeKind { PrimaryKey, ForeignKey, Descriptor, Measure };

std::string_view to_string(AttributeKind kind);

struct Attribute {
    std::string name;
    AttributeKind kind = AttributeKind::Descriptor;
    // ForeignKey only: name of the referenced table (coarser level or entry level).
    std::string target_table;

    bool operator==(const Attribute&) const = default;
};

// Keys are 32-bit integers, descriptors strings, measures single-precision reals.
using Value = std::variant<std::int32_t, std::string, float>;
using Tuple = std::vector<Value>;

struct HierarchyLevel {
    std::string table_name;
    int depth = 1;             // 1 = finest (entry) level
    bool has_coarser = false;  // a coarser level exists above this one
    std::vector<Attribute> intention;
    std::vector<Tuple> extension;

    const Attribute& primary_key() const;
    // The link to the coarser level; nullptr when has_coarser is false.
    const Attribute* foreign_key() const;
};

// Levels are stored finest-first: levels[0] is the entry level (depth 1) and
// levels[nb_levels()-1] the coarsest. The coarser/finer links of the model are
// realized by adjacency in this vector.
struct Dimension {
    int index = 1;  // 1-based; names the DIM{index}_{depth} tables
    std::vector<HierarchyLevel> levels;

    int nb_levels() const { return static_cast<int>(levels.size()); }
    const HierarchyLevel& entry_level() const { return levels.front(); }
};

// Level reached by following coarser links (depth - 1) times from the entry
// level. Throws std::out_of_range naming the dimension for bad depths.
const HierarchyLevel& level_at(const Dimension& dim, int depth);

struct FactTable {
    std::string table_name;
    std::vector<int> dimension_indexes;  // 1-based into the warehouse pool, distinct
    std::vector<Attribute> intention;    // FKs in dimension order, then measures
    std::vector<Tuple> extension;

    std::vector<const Attribute*> measures() const;
};

struct Provenance {
    std::uint64_t seed = 0;
    LowLevelParams params;  // resolved low-level parameters

    bool operator==(const Provenance&) const = default;
};

struct Warehouse {
    std::vector<FactTable> fact_tables;
    std::vector<Dimension> dimensions;  // shared pool; dimensions[d-1].index == d
    Provenance provenance;

    const Dimension& dimension(int index) const;  // 1-based
    const HierarchyLevel* find_level(std::string_view table_name) const;
};

struct IntegrityViolation {
    std::string table;       // table holding the dangling foreign key
    std::string attribute;   // foreign key attribute name
    std::size_t tuple_index; // 0-based row in that table's extension
    std::int32_t value;      // the dangling key value

    bool operator==(const IntegrityViolation&) const = default;
};

// Empty result iff every FOREIGN_KEY value in every fact-table and
// hierarchy-level extension matches a primary-key value of its target level.
std::vector<IntegrityViolation> check_referential_integrity(const Warehouse& wh);

}  // namespace dweb
