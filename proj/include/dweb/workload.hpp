#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "dweb/model.hpp"
#include "dweb/params.hpp"
#include "dweb/query.hpp"
#include "dweb/random.hpp"

namespace dweb {

enum class QueryClass { Extraction, OlapInitial, DrillDown };
std::string_view to_string(QueryClass tag);

// Where the attribute walk of the initial query ended; drill downs start here.
struct ChainContext {
    int fact_index = 0;       // 1-based fact table
    int dimension_index = 0;  // 1-based dimension of the last walk
    int depth = 0;            // hierarchy level depth reached by the last walk
};

struct ChainRecord {
    std::size_t initial_index = 0;  // index into Workload::queries of the OLAP initial
    int target = 0;                 // drawn drill-down count
    int realized = 0;               // drill downs actually emitted
    int start_depth = 0;            // context depth after the initial query
};

struct Workload {
    std::vector<Query> queries;
    std::vector<QueryClass> class_tags;  // parallel to queries
    std::vector<ChainRecord> chains;     // one per OLAP initial query
    std::uint64_t seed = 0;
    WorkloadParams params;
    double spread = 0.1;
};

struct DrillDownChain {
    std::vector<Query> queries;
    int target = 0;
};

// Step 1: initial query. Picks a fact table (skewed), walks gaussian_int
// (AVG_NB_ATT) dimension hierarchies to uniformly drawn depths adding every
// visited table plus its PK=FK join, selects one attribute per walk, adds
// gaussian_int(AVG_NB_RESTR) descriptor = literal restrictions, then converts
// to an OLAP query (SUM aggregates, GROUP BY CUBE/ROLLUP, optional HAVING)
// with probability PROB_OLAP.
std::pair<Query, ChainContext> generate_initial_query(const Warehouse& wh,
                                                      const WorkloadParams& wp, SeededRng& rng,
                                                      const StringReferential& referential,
                                                      double spread, double measure_lo = 0.0,
                                                      double measure_hi = 1000.0);

// Step 2: drill downs. Draws the chain target once, then walks toward finer
// levels adding one new attribute to both the attribute clause and the group
// by of the previous query per step. Throws std::logic_error when the initial
// query is not an OLAP query.
DrillDownChain generate_drill_downs(const Query& initial, const ChainContext& ctx,
                                    const Warehouse& wh, const WorkloadParams& wp,
                                    SeededRng& rng, double spread);

// Loops initial-query + chain generation until the query count reaches NB_Q.
Workload generate_workload(const Warehouse& wh, const WorkloadParams& wp, SeededRng& rng,
                           const StringReferential& referential, double spread,
                           double measure_lo = 0.0, double measure_hi = 1000.0);

}  // namespace dweb
