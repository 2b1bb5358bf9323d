#include "dweb/emitters.hpp"

#include <fstream>

#include "dweb/errors.hpp"
#include "dweb/text.hpp"

namespace dweb {

namespace {

// Tables in dependency order: per dimension from the coarsest level down to
// the entry level, then the fact tables.
template <typename Fn>
void for_each_table(const Warehouse& wh, Fn&& fn) {
    for (const auto& dim : wh.dimensions) {
        for (auto it = dim.levels.rbegin(); it != dim.levels.rend(); ++it) {
            fn(it->table_name, it->intention, it->extension);
        }
    }
    for (const auto& ft : wh.fact_tables) {
        fn(ft.table_name, ft.intention, ft.extension);
    }
}

std::string column_type(const Attribute& attr, const SqlDialect& dialect) {
    switch (attr.kind) {
        case AttributeKind::PrimaryKey:
        case AttributeKind::ForeignKey:
            return dialect.integer_type;
        case AttributeKind::Measure:
            return dialect.real_type;
        case AttributeKind::Descriptor:
            return dialect.char_prefix + fmt_uint(attr.name.size() + 21) + dialect.char_suffix;
    }
    return dialect.integer_type;
}

std::string csv_field(const std::string& raw) {
    if (raw.find(',') == std::string::npos && raw.find('"') == std::string::npos) return raw;
    std::string out = "\"";
    for (char c : raw) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string value_text(const Value& value) {
    if (const auto* key = std::get_if<std::int32_t>(&value)) return fmt_int(*key);
    if (const auto* str = std::get_if<std::string>(&value)) return *str;
    return fmt_fixed1(static_cast<double>(std::get<float>(value)));
}

std::string sql_value_text(const Value& value) {
    if (const auto* str = std::get_if<std::string>(&value)) {
        std::string out = "'";
        for (char c : *str) {
            if (c == '\'') out += '\'';
            out += c;
        }
        out += '\'';
        return out;
    }
    return value_text(value);
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace

std::string render_ddl(const Warehouse& wh, const SqlDialect& dialect) {
    std::string sql;
    for_each_table(wh, [&](const std::string& name, const std::vector<Attribute>& intention,
                           const std::vector<Tuple>&) {
        sql += "CREATE TABLE " + name + " (\n";
        for (const auto& attr : intention) {
            sql += "  " + attr.name + " " + column_type(attr, dialect);
            if (attr.kind != AttributeKind::Measure) sql += " NOT NULL";
            sql += ",\n";
        }
        std::vector<const Attribute*> pk_cols;
        for (const auto& attr : intention) {
            if (attr.kind == AttributeKind::PrimaryKey) pk_cols.push_back(&attr);
        }
        if (pk_cols.empty()) {
            // Fact tables: the key is the combination of dimension keys.
            for (const auto& attr : intention) {
                if (attr.kind == AttributeKind::ForeignKey) pk_cols.push_back(&attr);
            }
        }
        sql += "  PRIMARY KEY (";
        for (std::size_t i = 0; i < pk_cols.size(); ++i) {
            if (i) sql += ", ";
            sql += pk_cols[i]->name;
        }
        sql += ")";
        for (const auto& attr : intention) {
            if (attr.kind != AttributeKind::ForeignKey) continue;
            sql += ",\n  FOREIGN KEY (" + attr.name + ") REFERENCES " + attr.target_table +
                   " (" + attr.name + ")";
        }
        sql += "\n);\n";
    });
    return sql;
}

std::string render_table_csv(const std::vector<Attribute>& intention,
                             const std::vector<Tuple>& extension) {
    std::string csv;
    for (std::size_t i = 0; i < intention.size(); ++i) {
        if (i) csv += ',';
        csv += csv_field(intention[i].name);
    }
    csv += '\n';
    for (const auto& tuple : extension) {
        for (std::size_t i = 0; i < tuple.size(); ++i) {
            if (i) csv += ',';
            csv += csv_field(value_text(tuple[i]));
        }
        csv += '\n';
    }
    return csv;
}

std::string render_insert_sql(const Warehouse& wh) {
    std::string sql;
    for_each_table(wh, [&](const std::string& name, const std::vector<Attribute>&,
                           const std::vector<Tuple>& extension) {
        for (const auto& tuple : extension) {
            sql += "INSERT INTO " + name + " VALUES (";
            for (std::size_t i = 0; i < tuple.size(); ++i) {
                if (i) sql += ", ";
                sql += sql_value_text(tuple[i]);
            }
            sql += ");\n";
        }
    });
    return sql;
}

std::string render_workload_sql(const Workload& workload) {
    std::string sql;
    for (std::size_t i = 0; i < workload.queries.size(); ++i) {
        sql += "-- Q" + fmt_uint(i + 1) + " [" +
               std::string(to_string(workload.class_tags[i])) + "]\n";
        sql += render_sql(workload.queries[i]);
        sql += ";\n";
    }
    return sql;
}

std::string render_manifest(const Warehouse& wh, const SizeReport& size,
                            const RunConfig& config, const std::vector<EmittedFile>& files) {
    std::string out;
    out += "# dweb manifest: replayable as `dweb generate --config <this file>`\n";
    out += "TOOL_VERSION = ";
    out += kToolVersion;
    out += '\n';
    out += render_config_lines(config, wh.provenance.params);
    out += "WAREHOUSE_MEGABYTES = " + fmt_real(size.warehouse_megabytes) + '\n';
    out += "# per-file fnv1a64 checksums\n";
    for (const auto& file : files) {
        out += "CHECKSUM " + file.relative_path + " = " + file.checksum_hex + '\n';
    }
    return out;
}

EmitResult emit_all(const Warehouse& wh, const Workload& workload, const SizeReport& size,
                    const RunConfig& config, const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir / "data", ec);
    if (ec) throw IoError("cannot create output directory " + (out_dir / "data").string());

    EmitResult result;
    auto emit = [&](const std::string& relative, const std::string& bytes) {
        write_file(out_dir / relative, bytes);
        result.files.push_back({relative, fnv1a64_hex(bytes)});
    };

    emit("schema.sql", render_ddl(wh));
    for_each_table(wh, [&](const std::string& name, const std::vector<Attribute>& intention,
                           const std::vector<Tuple>& extension) {
        emit("data/" + name + ".csv", render_table_csv(intention, extension));
    });
    if (config.emit_workload) {
        emit("workload.sql", render_workload_sql(workload));
    }
    if (config.emit_insert) {
        emit("insert.sql", render_insert_sql(wh));
    }

    std::string manifest = render_manifest(wh, size, config, result.files);
    result.manifest_path = out_dir / "manifest.txt";
    write_file(result.manifest_path, manifest);
    result.files.push_back({"manifest.txt", fnv1a64_hex(manifest)});
    return result;
}

}  // namespace dweb
