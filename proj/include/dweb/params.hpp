#pragma once

#include <string>
#include <vector>

#include "dweb/random.hpp"

namespace dweb {

// Database high-level parameters: averages the derivation expands into
// per-table/per-dimension low-level values via gaussian draws.
struct HighLevelParams {
    double avg_nb_ft = 1.0;         // average number of fact tables
    double avg_nb_dim = 5.0;        // average dimensions per fact table
    double avg_tot_nb_dim = 5.0;    // average total number of dimensions
    double avg_nb_meas = 5.0;       // average measures per fact table
    double avg_density = 0.6;       // average fact density rate
    double avg_nb_levels = 3.0;     // average hierarchy levels per dimension
    double avg_nb_att = 5.0;        // average descriptor attributes per level
    double avg_hhlevel_size = 10.0; // average tuples in the highest level
    double dim_sfactor = 10.0;      // average scale factor between levels
    double spread = 0.1;            // relative std-dev of the derivation draws

    bool operator==(const HighLevelParams&) const = default;
};

// Fully resolved database parameters. Per-fact-table vectors are indexed by
// fact table (0-based for FT1..); per-dimension vectors by dimension.
struct LowLevelParams {
    int nb_ft = 0;
    int tot_nb_dim = 0;
    std::vector<int> nb_dim;                        // per fact table
    std::vector<int> nb_meas;                       // per fact table
    std::vector<double> density;                    // per fact table, in (0,1]
    std::vector<std::vector<int>> dim_assignment;   // per fact table: 1-based dimension indexes
    std::vector<int> nb_levels;                     // per dimension
    std::vector<std::vector<int>> nb_att;           // per dimension, entry h-1 = level depth h
    std::vector<int> hhlevel_size;                  // per dimension
    std::vector<double> dim_sfactor;                // per dimension

    bool operator==(const LowLevelParams&) const = default;
};

struct WorkloadParams {
    int nb_q = 100;             // approximate number of queries
    double avg_nb_att = 5.0;    // average selected attributes per query
    double avg_nb_restr = 3.0;  // average restrictions per query
    double prob_olap = 0.9;
    double avg_nb_aggreg = 3.0; // average aggregates per OLAP query
    double prob_cube = 0.3;
    double prob_having = 0.2;
    double avg_nb_dd = 3.0;     // average drill downs after an OLAP query

    // Derived, never set independently.
    double prob_extract() const { return 1.0 - prob_olap; }
    double prob_rollup() const { return 1.0 - prob_cube; }

    bool operator==(const WorkloadParams&) const = default;
};

struct FieldViolation {
    std::string field;
    std::string message;
    bool operator==(const FieldViolation&) const = default;
};

struct ValidationReport {
    std::vector<FieldViolation> violations;
    bool ok() const { return violations.empty(); }
    std::string to_string() const;
};

ValidationReport validate(const HighLevelParams& high);
ValidationReport validate(const LowLevelParams& low);
ValidationReport validate(const WorkloadParams& wl);

// Expands averages into low-level values: one independent gaussian draw per
// value with mean = the matching AVG_* and std-dev = spread * mean, rounded
// where integral and clamped into its invariant range. TOT_NB_DIM is
// additionally raised to max_f NB_DIM(f). Also resolves the dimension
// assignment per fact table (uniform without replacement, sorted).
// Throws ValidationError when `high` fails validation.
LowLevelParams derive_low_level(const HighLevelParams& high, SeededRng& rng);

}  // namespace dweb
