#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "dweb/config.hpp"
#include "dweb/model.hpp"
#include "dweb/schema_generator.hpp"
#include "dweb/workload.hpp"

namespace dweb {

// Vendor type names for the generic SQL-92 core dialect.
struct SqlDialect {
    std::string integer_type = "INTEGER";
    std::string real_type = "REAL";   // single-precision measure columns
    std::string char_prefix = "CHAR(";
    std::string char_suffix = ")";
};

// CREATE TABLE statements in dependency order: coarsest hierarchy levels
// first, fact tables last. Descriptor columns are fixed-length CHAR of
// len(attribute name) + 21.
std::string render_ddl(const Warehouse& wh, const SqlDialect& dialect = {});

// One CSV per table: header of attribute names, comma delimiter, LF newlines,
// fields containing comma/quote double-quoted with quote doubling. Measures
// are written with one fixed decimal.
std::string render_table_csv(const std::vector<Attribute>& intention,
                             const std::vector<Tuple>& extension);

// INSERT statements mirroring the CSV content, in the same dependency order
// as the DDL.
std::string render_insert_sql(const Warehouse& wh);

// One `;`-terminated statement per query, each preceded by `-- Q{n} [{tag}]`.
std::string render_workload_sql(const Workload& workload);

struct EmittedFile {
    std::string relative_path;
    std::string checksum_hex;  // fnv1a64 of the file bytes
};

struct EmitResult {
    std::vector<EmittedFile> files;  // emission order; manifest last
    std::filesystem::path manifest_path;
};

// Writes schema.sql, data/{table}.csv, workload.sql, optional insert.sql and
// manifest.txt under out_dir. The manifest echoes the effective config (seed,
// resolved low-level parameters, workload parameters, artifact knobs), the
// size report and per-file checksums, and can itself be replayed as a config.
EmitResult emit_all(const Warehouse& wh, const Workload& workload, const SizeReport& size,
                    const RunConfig& config, const std::filesystem::path& out_dir);

std::string render_manifest(const Warehouse& wh, const SizeReport& size,
                            const RunConfig& config, const std::vector<EmittedFile>& files);

}  // namespace dweb
